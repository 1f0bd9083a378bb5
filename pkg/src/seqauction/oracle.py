"""Brute-force verification over discretized type spaces.

Optimal play is enumerated pointwise: at every announced prefix a player who
follows *some* optimal strategy may submit exactly the bids allowed by
:func:`constraint_violation`.  Enumerating announcement vectors this way is
exhaustive for a finite grid, whereas enumerating strategy functions is
doubly exponential.

Every suite returns a :class:`VerificationReport`.  Witnesses carry the
announced bid vectors behind each reported number so they can be replayed
through :func:`recheck`.
"""

from __future__ import annotations

import itertools
import multiprocessing
import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .core import (
    EMPTY_PREFIX_MAX,
    Outcome,
    argsmax,
    format_value,
    kth_highest,
    parse_value,
    prefix_max,
)
from .mechanisms import (
    BAILEY_CAVALLO,
    VICKREY,
    Mechanism,
    bailey_cavallo,
    bc_aggregate_redistribution,
    bc_aggregate_tax,
    bc_redistribution,
    check_feasible,
    parse_mechanism,
    run_mechanism,
    utility,
    vickrey,
)
from .strategies import (
    Profile,
    Strategy,
    adversarial_strategy,
    apply_profile,
    bc_opt_strategy,
    constant_strategy,
    continue_profile,
    match_previous_strategy,
    running_max,
    truth_strategy,
    uniform_profile,
    undercut_previous_strategy,
    vickrey_opt_strategy,
)

Vector = tuple[Fraction, ...]


# --------------------------------------------------------------------- grid


@dataclass(frozen=True)
class Grid:
    values: tuple[Fraction, ...]
    step: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("grid must be non-empty")
        if any(v < 0 for v in self.values):
            raise ValueError("grid values must be non-negative")
        if list(self.values) != sorted(set(self.values)):
            raise ValueError("grid values must be sorted and distinct")
        if self.step <= 0:
            raise ValueError("grid step must be positive")

    @classmethod
    def range(cls, lo, hi, step=1) -> "Grid":
        lo, hi, step = parse_value(lo), parse_value(hi), parse_value(step)
        if step <= 0:
            raise ValueError("grid step must be positive")
        if hi < lo:
            raise ValueError(f"empty grid {lo}..{hi}")
        count = int((hi - lo) // step) + 1
        return cls(tuple(lo + k * step for k in range(count)), step)

    @classmethod
    def parse(cls, text: str) -> "Grid":
        """``lo..hi``, ``lo..hi:step`` or an explicit list ``0,1,5``."""
        text = text.strip()
        m = re.fullmatch(r"([^.:]+)\.\.([^:]+)(?::(.+))?", text)
        if m:
            return cls.range(m.group(1), m.group(2), m.group(3) or "1")
        values = tuple(sorted({parse_value(x) for x in text.split(",") if x.strip()}))
        return cls(values)

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __contains__(self, v) -> bool:
        return v in self.values

    @property
    def top(self) -> Fraction:
        return self.values[-1]

    def label(self) -> str:
        return ",".join(format_value(v) for v in self.values)

    def extended(self) -> tuple[Fraction, ...]:
        """Grid plus one point above it, so overbidding is representable."""
        return self.values + (self.top + self.step,)

    def refined(self) -> tuple[Fraction, ...]:
        """Grid plus midpoints and two points above; small separations between values live here."""
        pts = set(self.extended())
        ext = sorted(pts)
        pts.update((a + b) / 2 for a, b in zip(ext, ext[1:]))
        pts.add(self.top + self.step / 2)
        return tuple(sorted(pts))

    def points(self, n: int) -> Iterable[Vector]:
        return itertools.product(self.values, repeat=n)


DEFAULT_GRID = Grid.range(0, 4)


# ---------------------------------------------------------------- witnesses


@dataclass
class Witness:
    """A concrete instance: true types, bid vectors and the value measured on each."""

    mechanism: str
    theta: Vector
    announcements: dict[str, Vector]
    values: dict[str, Fraction]
    quantity: str
    note: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "mechanism": self.mechanism,
            "theta": [format_value(v) for v in self.theta],
            "announcements": {k: [format_value(v) for v in a] for k, a in self.announcements.items()},
            "values": {k: format_value(v) for k, v in self.values.items()},
            "quantity": self.quantity,
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Witness":
        return cls(
            mechanism=data["mechanism"],
            theta=tuple(parse_value(v) for v in data["theta"]),
            announcements={k: tuple(parse_value(v) for v in a) for k, a in data["announcements"].items()},
            values={k: parse_value(v) for k, v in data["values"].items()},
            quantity=data["quantity"],
            note=data.get("note", ""),
        )


_QUANTITY = re.compile(r"(u|t)_(\d+)|sw|aggregate_tax|winner")


def measure(outcome: Outcome, quantity: str) -> Fraction:
    """Read ``u_<i>``, ``t_<i>``, ``sw``, ``aggregate_tax`` or ``winner`` off an outcome."""
    m = _QUANTITY.fullmatch(quantity)
    if not m:
        raise ValueError(f"unknown quantity {quantity!r}")
    if m.group(1) == "u":
        return outcome.utility(int(m.group(2)))
    if m.group(1) == "t":
        return outcome.tax(int(m.group(2)))
    if quantity == "sw":
        return outcome.social_welfare
    if quantity == "aggregate_tax":
        return outcome.aggregate_tax
    return Fraction(outcome.winner)


def recheck(witness: Witness) -> bool:
    """Replay every announced vector and compare with the recorded values."""
    mech = parse_mechanism(witness.mechanism, len(witness.theta))
    for label, bids in witness.announcements.items():
        if label not in witness.values:
            continue
        outcome = run_mechanism(mech, bids, witness.theta)
        if measure(outcome, witness.quantity) != witness.values[label]:
            return False
    return True


def _pair_witness(mech: Mechanism, theta, labelled: dict[str, Vector], quantity: str, note: str) -> Witness:
    values = {
        label: measure(run_mechanism(mech, bids, theta), quantity) for label, bids in labelled.items()
    }
    return Witness(mech.name, tuple(theta), dict(labelled), values, quantity, note)


@dataclass
class VerificationReport:
    suite: str
    instances: int
    passed: bool
    witness: Witness | None = None
    header: str = ""
    details: dict[str, Any] = field(default_factory=dict)
    extra_witnesses: list[Witness] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"suite": self.suite, "instances": self.instances, "passed": self.passed}
        if self.header:
            out["header"] = self.header
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        if self.extra_witnesses:
            out["extra_witnesses"] = [w.to_dict() for w in self.extra_witnesses]
        if self.details:
            out["details"] = _jsonable(self.details)
        return out

    def all_witnesses(self) -> list[Witness]:
        return ([self.witness] if self.witness else []) + list(self.extra_witnesses)


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return format_value(obj)
    if isinstance(obj, Witness):
        return obj.to_dict()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


# ------------------------------------------------------------------- sweeps

_TASK: tuple[Callable, list] | None = None


def _run_chunk(bounds: tuple[int, int]) -> tuple[int, int | None, Any]:
    check, items = _TASK
    count, first_at, first = 0, None, None
    for k in range(*bounds):
        c, w = check(items[k])
        count += c
        if w is not None and first is None:
            first_at, first = k, w
    return count, first_at, first


def sweep(check: Callable[[Any], tuple[int, Any]], items: Iterable, jobs: int = 1) -> tuple[int, Any]:
    """Apply ``check`` to every item and return ``(instances, first witness)``.

    ``check(item)`` returns ``(instances checked, witness or None)``.  The
    returned witness is the one for the earliest item, so the result does not
    depend on ``jobs``.  Workers are forked, so ``check`` may be a closure.
    """
    global _TASK
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        _TASK = (check, items)
        try:
            count, _, witness = _run_chunk((0, len(items)))
        finally:
            _TASK = None
        return count, witness
    chunks = min(len(items), jobs * 4)
    edges = [len(items) * k // chunks for k in range(chunks + 1)]
    _TASK = (check, items)
    try:
        # Pool forks its workers before starting helper threads
        with multiprocessing.get_context("fork").Pool(jobs) as pool:
            results = pool.map(_run_chunk, list(zip(edges, edges[1:])))
    finally:
        _TASK = None
    total = sum(r[0] for r in results)
    found = [(r[1], r[2]) for r in results if r[1] is not None]
    return total, (min(found, key=lambda t: t[0])[1] if found else None)


# ------------------------------------------------- optimal-play constraints


def constraint_violation(prefix: Sequence[Fraction], theta_i: Fraction, i: int, n: int, bid: Fraction) -> str | None:
    """Which part of the optimal-bid characterization ``bid`` breaks, if any.

    ``prefix`` is what players ``1..i-1`` announced.  Returns ``"i"``..``"iv"``
    or ``None`` when the bid is compatible with optimal play.
    """
    top = running_max(prefix)
    last = i == n
    if theta_i > top:
        if not last:
            return None if bid == theta_i else "i"
        return None if bid > top else "ii"
    if not last:
        return None if bid <= top else "iii"
    if theta_i < top:
        return None if bid <= top else "iv"
    return None  # last player tied with the top bid: indifferent


def allowed_bids(prefix: Sequence[Fraction], theta_i: Fraction, i: int, n: int, grid: Iterable[Fraction]) -> tuple[Fraction, ...]:
    return tuple(b for b in grid if constraint_violation(prefix, theta_i, i, n, b) is None)


def consistent_announcements(theta: Sequence[Fraction], grid: Grid | Sequence[Fraction]) -> list[Vector]:
    """All bid vectors reachable when every player follows some optimal strategy.

    Sorted lexicographically.
    """
    values = tuple(grid)
    for v in theta:
        if v not in values:
            raise ValueError(f"type {format_value(v)} is not on the grid")
    n = len(theta)
    out: list[Vector] = []

    def extend(prefix: Vector) -> None:
        i = len(prefix) + 1
        if i > n:
            out.append(prefix)
            return
        for b in allowed_bids(prefix, theta[i - 1], i, n, values):
            extend(prefix + (b,))

    extend(())
    return out


def is_consistent(theta: Sequence[Fraction], bids: Sequence[Fraction]) -> bool:
    """Replay the per-position constraint on an announcement vector."""
    n = len(theta)
    return all(
        constraint_violation(bids[: i - 1], theta[i - 1], i, n, bids[i - 1]) is None for i in range(1, n + 1)
    )


def _require_bc(n: int) -> None:
    if n < 3:
        raise ValueError("BC requires n >= 3")


# ------------------------------------------------------------ groves basics


def check_groves_ic(mechanism: Mechanism, grid: Grid, n: int, jobs: int = 1) -> VerificationReport:
    values = tuple(grid)

    def at(theta):
        count = 0
        for i in range(1, n + 1):
            honest = utility(mechanism, theta, theta, i)
            for lie in values:
                count += 1
                bids = theta[: i - 1] + (lie,) + theta[i:]
                if utility(mechanism, bids, theta, i) > honest:
                    w = _pair_witness(mechanism, theta, {"truth": theta, "deviation": bids}, f"u_{i}", "profitable lie")
                    return count, w
        return count, None

    count, w = sweep(at, grid.points(n), jobs)
    return VerificationReport(f"groves-ic[{mechanism.name}]", count, w is None, w)


def check_feasibility(mechanism: Mechanism, grid: Grid, n: int, jobs: int = 1) -> VerificationReport:
    def at(theta):
        if check_feasible(mechanism, theta):
            return 1, None
        return 1, _pair_witness(mechanism, theta, {"bids": theta}, "aggregate_tax", "aggregate tax is positive")

    count, w = sweep(at, grid.points(n), jobs)
    return VerificationReport(f"feasibility[{mechanism.name}]", count, w is None, w)


def check_bc_identities(grid: Grid, n: int, jobs: int = 1) -> VerificationReport:
    """Closed forms of the summed BC redistribution and tax, plus r_i ignoring bid i."""
    _require_bc(n)
    mech = bailey_cavallo(n)
    values = tuple(grid)

    def at(bids):
        count = 1
        redistributed = sum((bc_redistribution(bids, i) for i in range(1, n + 1)), Fraction(0))
        taxes = mech.taxes(bids)
        total_tax = sum(taxes, Fraction(0))
        note = None
        if redistributed != bc_aggregate_redistribution(bids):
            note = "aggregate redistribution differs from its closed form"
        elif total_tax != bc_aggregate_tax(bids):
            note = "aggregate tax differs from its closed form"
        elif (total_tax == 0) != (kth_highest(bids, 2) == kth_highest(bids, 3)):
            note = "aggregate tax is zero exactly when 2nd and 3rd bids tie"
        if note:
            w = _pair_witness(mech, bids, {"bids": bids}, "aggregate_tax", note)
            w.values["closed-form"] = bc_aggregate_tax(bids)
            return count, w
        for i in range(1, n + 1):
            r = bc_redistribution(bids, i)
            for other in values:
                count += 1
                moved = bids[: i - 1] + (other,) + bids[i:]
                if bc_redistribution(moved, i) != r:
                    w = _pair_witness(mech, bids, {"bids": bids, "moved": moved}, f"t_{i}",
                                      f"redistribution to player {i} depends on its own bid")
                    return count, w
        return count, None

    count, w = sweep(at, grid.points(n), jobs)
    return VerificationReport("bc-identities", count, w is None, w,
                              header="aggregate tax sign: -(2/n)(b*_2 - b*_3)")


def check_lemma1(mechanism: Mechanism, grid: Grid, n: int, jobs: int = 1) -> VerificationReport:
    """Clear winners prefer winning truthfully; clear losers prefer losing truthfully."""
    values = tuple(grid)

    def at(theta):
        count = 0
        for i in range(1, n + 1):
            others_top = max(theta[: i - 1] + theta[i:])
            honest = utility(mechanism, theta, theta, i)
            for lie in values:
                bids = theta[: i - 1] + (lie,) + theta[i:]
                part = None
                if theta[i - 1] > others_top and argsmax(bids) != i:
                    count += 1
                    # winner's truthful utility is theta_i + t_i, loser's lying utility is t_i
                    if not honest > utility(mechanism, bids, theta, i):
                        part = "i"
                elif lie > others_top > theta[i - 1]:
                    count += 1
                    if not honest > utility(mechanism, bids, theta, i):
                        part = "ii"
                if part:
                    w = _pair_witness(mechanism, theta, {"truth": theta, "deviation": bids}, f"u_{i}",
                                      f"part ({part}) fails")
                    return count, w
        return count, None

    count, w = sweep(at, grid.points(n), jobs)
    return VerificationReport(f"lemma1[{mechanism.name}]", count, w is None, w)


# ----------------------------------------------------------------- lemma 4


def _refuting_completion(mechanism: Mechanism, prefix: Vector, theta_i: Fraction, bid: Fraction,
                         completions: Sequence[Fraction]) -> tuple[Vector, Vector, Vector] | None:
    """Later types under which bidding truthfully strictly beats ``bid``.

    Earlier players are taken to be truthful, later ones myopic and truthful.
    Returns ``(theta, truthful bids, bids with the deviation)``.
    """
    n = mechanism.n
    i = len(prefix) + 1
    # the epsilons the optimality argument needs: strictly between bid, type and top
    top = running_max(prefix)
    extra = {(bid + theta_i) / 2, (bid + top) / 2, (theta_i + top) / 2}
    completions = sorted(set(completions) | {x for x in extra if x >= 0})
    for rest in itertools.product(completions, repeat=n - i):
        theta = prefix + (theta_i,) + rest
        lied = prefix + (bid,) + rest
        if utility(mechanism, theta, theta, i) > utility(mechanism, lied, theta, i):
            return theta, theta, lied
    return None


def check_lemma4(strategy: Strategy, mechanism: Mechanism, grid: Grid, n: int | None = None) -> VerificationReport:
    """Flag every announced prefix at which ``strategy`` leaves the optimal-bid sets.

    A flagged bid also gets a completion of the type vector showing that it
    is not optimal, which is what the characterization predicts.
    """
    n = mechanism.n if n is None else n
    i = strategy.player
    completions = grid.refined()
    count = 0
    for prefix in itertools.product(tuple(grid), repeat=i - 1):
        for theta_i in grid:
            count += 1
            bid = strategy(prefix, theta_i)
            part = constraint_violation(prefix, theta_i, i, n, bid)
            if part is None:
                continue
            found = _refuting_completion(mechanism, prefix, theta_i, bid, completions)
            if found is None:
                theta = prefix + (theta_i,) + tuple(grid.values[:1]) * (n - i)
                note = f"part ({part}) violated but no refuting completion found"
                w = Witness(mechanism.name, theta, {}, {}, f"u_{i}", note)
            else:
                theta, honest, lied = found
                w = _pair_witness(mechanism, theta, {"truth": honest, strategy.name or "strategy": lied},
                                  f"u_{i}", f"part ({part}) violated by player {i}")
            return VerificationReport(f"lemma4[{mechanism.name}, {strategy.name}, player {i}]", count, False, w,
                                      details={"part": part})
    return VerificationReport(f"lemma4[{mechanism.name}, {strategy.name}, player {i}]", count, True)


def check_lemma4_sweep(mechanism: Mechanism, grid: Grid, n: int | None = None, jobs: int = 1) -> VerificationReport:
    """A bid satisfies the optimal-bid constraint iff no completion makes truth strictly better.

    Prefixes and types range over the grid, bids over the grid plus one point
    above it, completions over the grid refined with midpoints.
    """
    n = mechanism.n if n is None else n
    bids = grid.extended()
    completions = grid.refined()
    items = [
        (prefix, theta_i)
        for i in range(1, n + 1)
        for prefix in itertools.product(tuple(grid), repeat=i - 1)
        for theta_i in grid
    ]

    def at(item):
        prefix, theta_i = item
        i = len(prefix) + 1
        count = 0
        for bid in bids:
            count += 1
            allowed = constraint_violation(prefix, theta_i, i, n, bid) is None
            found = _refuting_completion(mechanism, prefix, theta_i, bid, completions)
            if allowed != (found is None):
                if found is None:
                    theta = prefix + (theta_i,) + (grid.values[0],) * (n - i)
                    lied = prefix + (bid,) + theta[i:]
                    note = "bid outside the allowed set but never beaten by truth"
                    w = _pair_witness(mechanism, theta, {"truth": theta, "deviation": lied}, f"u_{i}", note)
                else:
                    theta, honest, lied = found
                    w = _pair_witness(mechanism, theta, {"truth": honest, "deviation": lied}, f"u_{i}",
                                      "allowed bid is strictly beaten by truth")
                return count, w
        return count, None

    count, w = sweep(at, items, jobs)
    return VerificationReport(f"lemma4-sweep[{mechanism.name}]", count, w is None, w)


def broken_lemma4_strategies(n: int) -> dict[str, Strategy]:
    """One deliberately non-optimal strategy per part of the characterization."""
    last = n

    def shade(prefix, theta):  # winner before the end bids below its type
        return theta / 2 if theta > running_max(prefix) else theta

    def concede(prefix, theta):  # last player gives the item away
        return Fraction(0) if theta > running_max(prefix) else theta

    def overbid(prefix, theta):  # a loser jumps above the top bid
        top = running_max(prefix)
        return top + 1 if theta <= top else theta

    return {
        "i": Strategy(1, shade, name="shade-when-winning"),
        "ii": Strategy(last, concede, name="concede-when-winning"),
        "iii": Strategy(2, overbid, name="overbid-when-losing") if n >= 3 else None,
        "iv": Strategy(last, overbid, name="overbid-when-losing-last"),
    }


# ------------------------------------------------------------ corollary 1


def check_corollary1(grid: Grid, n: int, jobs: int = 1) -> VerificationReport:
    """Optimal play keeps the running max and leader of the first n-1 bids and the winner."""

    def at(theta):
        family = consistent_announcements(theta, grid)
        count = 0
        for A in family:
            count += 1
            problem = None
            for i in range(1, n):
                if max(A[:i]) != max(theta[:i]):
                    problem = f"(i) running max differs at {i}"
                elif argsmax(A[:i]) != argsmax(theta[:i]):
                    problem = f"(ii) running leader differs at {i}"
                elif theta[i - 1] > prefix_max(A, i):
                    if not theta[i - 1] > prefix_max(theta, i) or any(
                        not theta[i - 1] > prefix_max(B, i) for B in family
                    ):
                        problem = f"(iii) fails at {i}"
                if problem:
                    break
            if problem is None and argsmax(A) != argsmax(theta):
                if not (theta[-1] == max(theta[:-1]) and A[-1] > theta[-1] and argsmax(A) == n):
                    problem = "(iv) winner changed outside the last-player tie"
            if problem:
                mech = vickrey(n)
                return count, _pair_witness(mech, theta, {"truth": tuple(theta), "optimal": A}, "winner", problem)
        return count, None

    count, w = sweep(at, grid.points(n), jobs)
    return VerificationReport("corollary1", count, w is None, w)


# -------------------------------------------------- per-player optimality


def check_pointwise_optimal(strategy: Strategy, mechanism: Mechanism, grid: Grid, n: int | None = None,
                            jobs: int = 1) -> VerificationReport:
    """``strategy`` is a best response against every announced ``theta_{-i}`` on the grid."""
    n = mechanism.n if n is None else n
    i = strategy.player
    values = tuple(grid)

    def at(theta):
        bid = strategy(theta[: i - 1], theta[i - 1])
        mine = theta[: i - 1] + (bid,) + theta[i:]
        got = utility(mechanism, mine, theta, i)
        count = 0
        for other in values:
            count += 1
            alt = theta[: i - 1] + (other,) + theta[i:]
            if utility(mechanism, alt, theta, i) > got:
                return count, _pair_witness(mechanism, theta, {strategy.name or "strategy": mine, "deviation": alt},
                                            f"u_{i}", "a grid bid does strictly better")
        return count, None

    count, w = sweep(at, grid.points(n), jobs)
    return VerificationReport(f"optimal[{mechanism.name}, {strategy.name}, player {i}]", count, w is None, w)


def _dominance_family(i: int, n: int, grid: Grid) -> list[tuple[str, Profile]]:
    """Uniform opponent profiles used where dominance quantifies over all strategies."""
    makers: list[tuple[str, Callable[[int], Strategy]]] = [
        ("truth", truth_strategy),
        ("vickrey-opt", vickrey_opt_strategy),
        ("adversarial", adversarial_strategy),
    ]
    if n >= 3:
        makers.append(("bc-opt", lambda j: bc_opt_strategy(j, n)))
    for c in grid:
        makers.append((f"constant:{format_value(c)}", lambda j, c=c: constant_strategy(j, c)))
    return [(name, uniform_profile(make, n)) for name, make in makers]


def check_no_dominant(mechanism: Mechanism, grid: Grid, n: int | None = None, i: int = 1,
                      jobs: int = 1) -> VerificationReport:
    """No strategy of a non-last player is dominant.

    First the textbook instance: player ``i`` has type 2, everybody else 0,
    earlier players are truthful and later ones play ``adversarial``.  Any
    optimal strategy must bid 2 there, yet bidding 1 earns more.  If the grid
    cannot express that instance, the opponent family is searched instead.
    """
    n = mechanism.n if n is None else n
    if not 1 <= i < n:
        raise ValueError("only players before the last can lack dominant strategies")
    header = ("opponents range over {truth, vickrey-opt, bc-opt, adversarial, constants}; "
              "a witness refutes dominance, absence of one proves nothing")
    two, one, zero = Fraction(2), Fraction(1), Fraction(0)
    if {zero, one, two} <= set(grid):
        theta = (zero,) * (i - 1) + (two,) + (zero,) * (n - i)
        opponents = tuple(truth_strategy(j) for j in range(1, i)) + (truth_strategy(i),) + tuple(
            adversarial_strategy(j) for j in range(i + 1, n + 1))
        forced = allowed_bids(theta[: i - 1], two, i, n, grid)
        honest = continue_profile(opponents, theta, theta[: i - 1] + (two,))
        shaded = continue_profile(opponents, theta, theta[: i - 1] + (one,))
        w = _pair_witness(mechanism, theta, {"optimal": honest, "bid-1": shaded}, f"u_{i}",
                          f"every optimal strategy of player {i} bids 2 here; bidding 1 pays more")
        ok = forced == (two,) and w.values["bid-1"] > w.values["optimal"]
        return VerificationReport(f"no-dominant[{mechanism.name}, player {i}]", 1, ok, w, header,
                                  {"optimal_bids": list(forced)})

    family = _dominance_family(i, n, grid)
    values = tuple(grid)

    def at(theta):
        count = 0
        if not theta[i - 1] > prefix_max(theta, i):
            return 0, None
        for name, profile in family:
            prefix = theta[: i - 1]
            honest = continue_profile(profile, theta, prefix + (theta[i - 1],))
            base = utility(mechanism, honest, theta, i)
            for b in values:
                count += 1
                other = continue_profile(profile, theta, prefix + (b,))
                if utility(mechanism, other, theta, i) > base:
                    return count, _pair_witness(mechanism, theta, {"optimal": honest, f"bid-{format_value(b)}": other},
                                                f"u_{i}", f"opponents after player {i} play {name}")
        return count, None

    count, w = sweep(at, grid.points(n), jobs)
    return VerificationReport(f"no-dominant[{mechanism.name}, player {i}]", count, w is not None, w, header)


def check_last_player_dominant(mechanism: Mechanism, grid: Grid, n: int | None = None,
                               jobs: int = 1) -> VerificationReport:
    """Any last-player bid that wins exactly when its type beats the field is a best response."""
    n = mechanism.n if n is None else n
    values = tuple(grid)
    bids_above = grid.extended()

    def at(prefix):
        count = 0
        top = max(prefix)
        for theta_n in values:
            theta = prefix + (theta_n,)
            if theta_n > top:
                shaped = [b for b in bids_above if b > top]
            else:
                shaped = [b for b in bids_above if b <= top]
            for b in shaped:
                mine = prefix + (b,)
                got = utility(mechanism, mine, theta, n)
                for d in values:
                    count += 1
                    alt = prefix + (d,)
                    if utility(mechanism, alt, theta, n) > got:
                        return count, _pair_witness(mechanism, theta, {"shaped": mine, "deviation": alt},
                                                    f"u_{n}", "shaped last-player bid is beaten")
        return count, None

    count, w = sweep(at, grid.points(n - 1), jobs)
    return VerificationReport(f"last-player-dominant[{mechanism.name}]", count, w is None, w,
                              "earlier bids range over every prefix in the grid")


# ---------------------------------------------------------- vickrey results


def _matched_pairs(family: Sequence[Vector], i: int) -> Iterable[tuple[Vector, Vector]]:
    """Pairs reachable by changing only player i's optimal strategy.

    They share bids before ``i``; if they also share bid ``i`` the later
    players (same strategies, same prefix) must bid the same, so the vectors
    coincide.  Distinct bids at ``i`` free every later choice.
    """
    groups: dict[Vector, list[Vector]] = defaultdict(list)
    for A in family:
        groups[A[: i - 1]].append(A)
    for members in groups.values():
        for a, b in itertools.combinations(members, 2):
            if a[i - 1] != b[i - 1]:
                yield a, b


def check_vickrey_utility_equality(grid: Grid, n: int, jobs: int = 1) -> VerificationReport:
    """Against fixed optimal opponents every optimal strategy gives the same utility."""
    mech = vickrey(n)

    def at(theta):
        family = consistent_announcements(theta, grid)
        count = 0
        for i in range(1, n + 1):
            for a, b in _matched_pairs(family, i):
                count += 1
                if utility(mech, a, theta, i) != utility(mech, b, theta, i):
                    return count, _pair_witness(mech, theta, {"A": a, "B": b}, f"u_{i}",
                                                f"utilities of player {i} differ")
        if theta[-1] == max(theta[:-1]):
            for A in family:
                count += 1
                if utility(mech, A, theta, n) != 0:
                    return count, _pair_witness(mech, theta, {"A": A}, f"u_{n}",
                                                "last player tied with the top type but earns a non-zero utility")
        return count, None

    count, witness = sweep(at, grid.points(n), jobs)
    loose_count, loose_example = _loose_pairing_violations(mech, grid, n)
    details = {
        "unmatched_pair_violations": loose_count,
        "unmatched_pair_example": loose_example,
    }
    header = ("pairs share bids before player i and differ at i; pairs that agree up to i but "
              "differ later need different opponent strategies and are counted only in details")
    return VerificationReport("vickrey-equality", count, witness is None, witness, header, details)


def _loose_pairing_violations(mech: Mechanism, grid: Grid, n: int) -> tuple[int, Witness | None]:
    total, first = 0, None
    for theta in grid.points(n):
        family = consistent_announcements(theta, grid)
        for i in range(1, n + 1):
            groups: dict[Vector, list[Vector]] = defaultdict(list)
            for A in family:
                groups[A[: i - 1]].append(A)
            for members in groups.values():
                us = {utility(mech, A, theta, i): A for A in members}
                if len(us) > 1:
                    total += 1
                    if first is None:
                        (u1, a1), (u2, a2) = sorted(us.items())[:2]
                        first = _pair_witness(mech, theta, {"A": a1, "B": a2}, f"u_{i}",
                                              "opponents' later bids differ between the two vectors")
    return total, first


def check_socially_maximal_vickrey(grid: Grid, n: int, jobs: int = 1) -> VerificationReport:
    """Nobody else does better when player i uses vickrey-opt rather than another optimal bid."""
    mech = vickrey(n)

    def at(theta):
        count = 0
        for i in range(1, n + 1):
            prefix = theta[: i - 1]
            mine = prefix + (vickrey_opt_strategy(i)(prefix, theta[i - 1]),) + theta[i:]
            ours = run_mechanism(mech, mine, theta)
            for b in allowed_bids(prefix, theta[i - 1], i, n, grid):
                alt = prefix + (b,) + theta[i:]
                theirs = run_mechanism(mech, alt, theta)
                for j in range(1, n + 1):
                    if j == i:
                        continue
                    count += 1
                    if theirs.utility(j) > ours.utility(j):
                        return count, _pair_witness(mech, theta, {"vickrey-opt": mine, "optimal": alt}, f"u_{j}",
                                                    f"player {i}'s alternative optimal bid helps player {j}")
        return count, None

    count, w = sweep(at, grid.points(n), jobs)
    return VerificationReport("vickrey-socially-maximal", count, w is None, w)


def vickrey_opt_closed_form(theta: Sequence[Fraction]) -> Fraction:
    """Welfare when everybody plays vickrey-opt: winner's type minus the best earlier type."""
    w = argsmax(theta)
    return theta[w - 1] - (max(theta[: w - 1]) if w > 1 else 0)


def bc_opt_closed_form(theta: Sequence[Fraction], announced: Sequence[Fraction]) -> Fraction:
    w = argsmax(theta)
    n = len(theta)
    return theta[w - 1] - Fraction(2, n) * (kth_highest(announced, 2) - kth_highest(announced, 3))


def check_sw_maximal(mechanism: Mechanism, profile: Profile, grid: Grid, n: int | None = None,
                     jobs: int = 1) -> VerificationReport:
    """The profile's welfare is the best any consistent optimal announcement achieves.

    Also checks that the profile is itself optimal play, keeps the winner,
    matches its closed form and never does worse than truth-telling.
    """
    n = mechanism.n if n is None else n
    name = profile[0].name

    def at(theta):
        A = apply_profile(profile, theta)
        ours = run_mechanism(mechanism, A, theta)
        sw = ours.social_welfare
        truth_sw = run_mechanism(mechanism, theta, theta).social_welfare

        def fail(note, labelled):
            return _pair_witness(mechanism, theta, labelled, "sw", note)

        if not is_consistent(theta, A):
            return 1, fail("profile leaves optimal play", {name: A})
        if argsmax(A) != argsmax(theta):
            return 1, fail("profile changes the winner", {name: A, "truth": tuple(theta)})
        if mechanism.kind == VICKREY and sw != vickrey_opt_closed_form(theta) and name == "vickrey-opt":
            return 1, fail("closed form mismatch", {name: A})
        if mechanism.kind == BAILEY_CAVALLO and sw != bc_opt_closed_form(theta, A):
            return 1, fail("closed form mismatch", {name: A})
        if sw < truth_sw:
            return 1, fail("worse than truth-telling", {name: A, "truth": tuple(theta)})
        count = 1
        for B in consistent_announcements(theta, grid):
            count += 1
            if run_mechanism(mechanism, B, theta).social_welfare > sw:
                return count, fail("another optimal announcement has higher welfare", {name: A, "optimal": B})
        return count, None

    count, w = sweep(at, grid.points(n), jobs)
    return VerificationReport(f"sw-maximal[{mechanism.name}, {name}]", count, w is None, w)


# --------------------------------------------------------------- bc results


def bc_utility_inequality_instance(epsilon: Fraction = Fraction(1)) -> Witness:
    """Three players with types (10, 9, 8); player 2 switches between two optimal strategies.

    Under the undercutting profile the bids are (10, 10-e, 10-2e); when player
    2 matches the previous bid instead they become (10, 10, 10-e), and its
    redistribution rises from (10-2e)/3 to (10-e)/3.
    """
    epsilon = parse_value(epsilon)
    if not 0 < epsilon <= 5:
        raise ValueError("epsilon must lie in (0, 5]")
    theta = (Fraction(10), Fraction(9), Fraction(8))
    s = tuple(undercut_previous_strategy(j, epsilon) for j in (1, 2, 3))
    s_prime = (s[0], match_previous_strategy(2), s[2])
    mech = bailey_cavallo(3)
    return _pair_witness(mech, theta, {"s": apply_profile(s, theta), "s'": apply_profile(s_prime, theta)}, "u_2",
                         f"player 2 is a loser, so u_2 is its redistribution; epsilon={format_value(epsilon)}")


def _bc_pair_search(grid: Grid, n: int, jobs: int) -> tuple[int, Witness | None]:
    mech = bailey_cavallo(n)

    def at(theta):
        family = consistent_announcements(theta, grid)
        count = 0
        for i in range(1, n + 1):
            for a, b in _matched_pairs(family, i):
                count += 1
                ua, ub = utility(mech, a, theta, i), utility(mech, b, theta, i)
                if ua != ub:
                    lo, hi = (a, b) if ua < ub else (b, a)
                    return count, _pair_witness(mech, theta, {"s": lo, "s'": hi}, f"u_{i}",
                                                f"player {i} gains by switching optimal strategy")
        return count, None

    return sweep(at, grid.points(n), jobs)


def check_bc_not_utility_equal(grid: Grid, n: int, epsilon: Fraction = Fraction(1), jobs: int = 1) -> VerificationReport:
    """In BC some optimal strategy beats another against the same optimal opponents."""
    _require_bc(n)
    instance = bc_utility_inequality_instance(epsilon)
    instance_ok = instance.values["s'"] > instance.values["s"] and all(
        is_consistent(instance.theta, A) for A in instance.announcements.values()
    )
    count, found = _bc_pair_search(grid, n, jobs)
    details: dict[str, Any] = {"grid_witness": found}
    scaled = _scaled_instance(grid, n, epsilon)
    if scaled is not None:
        details["scaled_witness"] = scaled
    extras = [w for w in (found, scaled) if w is not None]
    return VerificationReport("bc-not-utility-equal", count + 1, instance_ok and found is not None, instance,
                              details=details, extra_witnesses=extras)


def _scaled_instance(grid: Grid, n: int, epsilon: Fraction) -> Witness | None:
    """The (10, 9, 8) construction moved to (top, top-e, top-2e) on the grid."""
    if n != 3:
        return None
    top = grid.top
    theta = (top, top - epsilon, top - 2 * epsilon)
    if not all(v in grid for v in theta):
        return None
    s = tuple(undercut_previous_strategy(j, epsilon) for j in (1, 2, 3))
    s_prime = (s[0], match_previous_strategy(2), s[2])
    return _pair_witness(bailey_cavallo(3), theta, {"s": apply_profile(s, theta), "s'": apply_profile(s_prime, theta)},
                         "u_2", "the three-player construction rescaled to the grid")


def check_claim_thirdhighest(grid: Grid, n: int, jobs: int = 1) -> VerificationReport:
    """bc-opt bids of players 1..n-1 dominate every optimal announcement entrywise."""
    _require_bc(n)
    profile = uniform_profile(lambda j: bc_opt_strategy(j, n), n)
    mech = bailey_cavallo(n)

    def at(theta):
        z = apply_profile(profile, theta)
        count = 0
        last_exceptions = 0
        for B in consistent_announcements(theta, grid):
            count += 1
            if any(B[k] > z[k] for k in range(n - 1)):
                return count, _pair_witness(mech, theta, {"bc-opt": z, "optimal": B}, "sw",
                                            "an early optimal bid exceeds the bc-opt bid")
            if B[-1] > z[-1]:
                last_exceptions += 1
        return count, None

    count, w = sweep(at, grid.points(n), jobs)
    last = sum(
        1 for theta in grid.points(n)
        for B in consistent_announcements(theta, grid)
        if B[-1] > apply_profile(profile, theta)[-1]
    )
    return VerificationReport("claim-thirdhighest", count, w is None, w,
                              details={"last_entry_exceeded": last})


def _best_bid_analysis(mechanism: Mechanism, prefix: Vector, theta_i: Fraction, grid: Grid,
                       completions: Sequence[Fraction]) -> tuple[Fraction | None, dict[Fraction, tuple]]:
    """For each optimal bid, a completion and a rival optimal bid with strictly higher welfare.

    Earlier players announced ``prefix`` truthfully and later players are
    truthful.  Returns the first bid with no such rival (a welfare-best bid
    for every completion) and the rivals found for the others.
    """
    n = mechanism.n
    i = len(prefix) + 1
    options = allowed_bids(prefix, theta_i, i, n, grid)
    beaten: dict[Fraction, tuple] = {}
    rests = list(itertools.product(completions, repeat=n - i))
    for b in options:
        for rest in rests:
            theta = prefix + (theta_i,) + rest
            sw_b = run_mechanism(mechanism, prefix + (b,) + rest, theta).social_welfare
            rival = next((c for c in options
                          if run_mechanism(mechanism, prefix + (c,) + rest, theta).social_welfare > sw_b), None)
            if rival is not None:
                beaten[b] = (theta, prefix + (b,) + rest, prefix + (rival,) + rest)
                break
        else:
            return b, beaten
    return None, beaten


def bc_case_completions(prefix: Vector, theta_i: Fraction, n: int) -> dict[str, Witness]:
    """Instantiate both completions from the BC impossibility argument, when the grid allows.

    Case 1 (player bids its type): the next type sits strictly between the
    bid and the top, later types below the bid.  Case 2 (player bids the
    top): the next type repeats the player's type.
    """
    mech = bailey_cavallo(n)
    i = len(prefix) + 1
    top = max(prefix)
    out: dict[str, Witness] = {}
    low = (Fraction(0),) * (n - i - 1)
    if low and theta_i == 0:
        return out  # no room for later types strictly below player i's
    between = (theta_i + top) / 2
    rest = (between,) + low
    theta = prefix + (theta_i,) + rest
    out["case1"] = _pair_witness(mech, theta, {"b": prefix + (theta_i,) + rest, "b'": prefix + (between,) + rest},
                                 "sw", "player bids its type; the rival bid equals the next type")
    rest = (theta_i,) + low
    theta = prefix + (theta_i,) + rest
    out["case2"] = _pair_witness(mech, theta, {"b": prefix + (top,) + rest, "b'": prefix + (theta_i,) + rest},
                                 "sw", "player bids the top; the rival bid is its own type")
    return out


def _case_prefix(items, grid: Grid, n: int):
    """First family prefix whose case completions exist, preferring ones on the grid."""
    usable = [it for it in items if it[1] > 0 or len(it[0]) + 2 == n]
    on_grid = [it for it in usable if (it[1] + max(it[0])) / 2 in grid]
    return (on_grid or usable or [None])[0]


def _family_prefixes(grid: Grid, i: int) -> Iterable[tuple[Vector, Fraction]]:
    """Distinct earlier bids, with player i holding the second highest type so far."""
    for prefix in itertools.permutations(tuple(grid), i - 1):
        top = max(prefix)
        rest = [v for v in prefix if v != top]
        for theta_i in grid:
            if theta_i < top and all(theta_i > v for v in rest):
                yield prefix, theta_i


def check_bc_no_socially_optimal(grid: Grid, n: int, i: int, jobs: int = 1,
                                 case_prefix: tuple[Vector, Fraction] | None = None) -> VerificationReport:
    """Middle players of BC have no welfare-best optimal bid; first and last players do.

    For ``1 < i < n`` every prefix in the family must leave each optimal bid
    beaten somewhere.  For ``i`` in ``{1, n}`` every prefix must admit a bid
    that is welfare-best under all completions.
    """
    _require_bc(n)
    if not 1 <= i <= n:
        raise ValueError(f"player {i} out of range 1..{n}")
    mech = bailey_cavallo(n)
    middle = 1 < i < n
    completions = tuple(grid)

    if middle:
        items = list(_family_prefixes(grid, i))
    else:
        items = [(p, t) for p in itertools.product(tuple(grid), repeat=i - 1) for t in grid]

    def at(item):
        prefix, theta_i = item
        best, beaten = _best_bid_analysis(mech, tuple(prefix), theta_i, grid, completions)
        if middle and best is not None:
            theta = tuple(prefix) + (theta_i,) + (grid.values[0],) * (n - i)
            return 1, Witness(mech.name, theta, {}, {}, "sw",
                              f"bid {format_value(best)} is welfare-best for every completion")
        if not middle and best is None:
            b, (theta, lo, hi) = next(iter(beaten.items()))
            return 1, _pair_witness(mech, theta, {"b": lo, "b'": hi}, "sw", "no welfare-best bid")
        return 1, None

    count, w = sweep(at, items, jobs)
    details: dict[str, Any] = {"prefixes": len(items)}
    extras: list[Witness] = []
    if middle:
        # spell out the two completions of the impossibility argument
        if case_prefix is None:
            case_prefix = _case_prefix(items, grid, n)
        cases = bc_case_completions(tuple(case_prefix[0]), case_prefix[1], n) if case_prefix else {}
        details["cases"] = cases
        extras = list(cases.values())
        cases_ok = len(cases) == 2 and all(c.values["b'"] > c.values["b"] for c in cases.values())
        passed = bool(items) and w is None and cases_ok
        first = None
        if items:
            prefix, theta_i = items[0]
            _, beaten = _best_bid_analysis(mech, tuple(prefix), theta_i, grid, completions)
            b, (theta, lo, hi) = next(iter(beaten.items()))
            first = _pair_witness(mech, theta, {"b": lo, "b'": hi}, "sw",
                                  f"player {i} bidding {format_value(b)} is beaten by another optimal bid")
        return VerificationReport(f"bc-no-socially-optimal[player {i}]", count, passed, w or first,
                                  "a witness shows a completion where a rival optimal bid has higher welfare",
                                  details, extras)
    return VerificationReport(f"bc-no-socially-optimal[player {i}]", count, w is None, w,
                              "first and last players: a welfare-best bid exists at every prefix", details)


# -------------------------------------------------------------------- nash


def nash_deviation_instance() -> Witness:
    """Two players with types (1, 2) under vickrey-opt; player 1 deviates to 3."""
    theta = (Fraction(1), Fraction(2))
    profile = uniform_profile(vickrey_opt_strategy, 2)
    before = apply_profile(profile, theta)
    after = continue_profile(profile, theta, (Fraction(3),))
    return _pair_witness(vickrey(2), theta, {"vickrey-opt": before, "deviation": after}, "u_1",
                         "player 1 bids 3, player 2 then bids 0")


def check_nash_within_optimal(mechanism: Mechanism, profile: Profile, grid: Grid, n: int | None = None,
                              jobs: int = 1) -> VerificationReport:
    """Nash checks of a profile read as a simultaneous game.

    (a) truth-telling is a Nash equilibrium; (b) a unilateral deviation to any
    grid bid, with later players reacting through the profile, is looked for;
    (c) among optimal deviations none pays and, unless the profile is
    truth-telling, no optimal announcement Pareto-dominates it.  Truthful
    play is usually Pareto-dominated; that is reported in ``details`` only.
    """
    n = mechanism.n if n is None else n
    name = profile[0].name
    values = tuple(grid)
    truth = check_groves_ic(mechanism, grid, n, jobs)

    def unrestricted(theta):
        A = apply_profile(profile, theta)
        count = 0
        for i in range(1, n + 1):
            base = utility(mechanism, A, theta, i)
            for d in values:
                count += 1
                B = continue_profile(profile, theta, A[: i - 1] + (d,))
                if utility(mechanism, B, theta, i) > base:
                    return count, _pair_witness(mechanism, theta, {name: A, "deviation": B}, f"u_{i}",
                                                f"player {i} deviates to {format_value(d)}")
        return count, None

    def restricted(theta):
        A = apply_profile(profile, theta)
        ours = run_mechanism(mechanism, A, theta)
        count = 0
        for i in range(1, n + 1):
            for b in allowed_bids(A[: i - 1], theta[i - 1], i, n, grid):
                count += 1
                B = continue_profile(profile, theta, A[: i - 1] + (b,))
                if utility(mechanism, B, theta, i) > ours.utility(i):
                    return count, _pair_witness(mechanism, theta, {name: A, "deviation": B}, f"u_{i}",
                                                f"optimal deviation of player {i} pays")
        return count, None

    def pareto(theta):
        A = apply_profile(profile, theta)
        ours = run_mechanism(mechanism, A, theta)
        count = 0
        for B in consistent_announcements(theta, grid):
            count += 1
            theirs = run_mechanism(mechanism, B, theta)
            diffs = [theirs.utility(j) - ours.utility(j) for j in range(1, n + 1)]
            if all(d >= 0 for d in diffs) and any(d > 0 for d in diffs):
                j = next(k for k, d in enumerate(diffs, start=1) if d > 0)
                return count, _pair_witness(mechanism, theta, {name: A, "dominating": B}, f"u_{j}",
                                            "optimal announcement Pareto-dominates the profile")
        return count, None

    c_u, dev = sweep(unrestricted, grid.points(n), jobs)
    c_r, bad = sweep(restricted, grid.points(n), jobs)
    c_p, dominated = sweep(pareto, grid.points(n), jobs)
    is_truth = name == "truth"
    details = {
        "truth_is_nash": truth.passed,
        "unrestricted_deviation_found": dev is not None,
        "unrestricted_deviation": dev,
        "optimal_deviation_pays": bad is not None,
        "pareto_dominated": dominated is not None,
        "pareto_example": dominated,
    }
    if not is_truth:
        bad = bad or dominated
    extras = [w for w in (dev,) if w is not None]
    if mechanism.kind == VICKREY and n == 2 and name == "vickrey-opt":
        instance = nash_deviation_instance()
        details["two_player_instance"] = instance
        extras.append(instance)
    passed = truth.passed and bad is None and (dev is not None) != is_truth
    witness = bad or (truth.witness if not truth.passed else None)
    return VerificationReport(f"nash[{mechanism.name}, {name}]", truth.instances + c_u + c_r + c_p, passed, witness,
                              "deviations in (b) are constant grid bids; (c) ranges over all optimal bids",
                              details, extras)


# ------------------------------------------------------------------ suites


def _mechanisms(n: int) -> list[Mechanism]:
    return [vickrey(n)] + ([bailey_cavallo(n)] if n >= 3 else [])


def _suite_groves_ic(n, grid, epsilon, jobs):
    return [check_groves_ic(m, grid, n, jobs) for m in _mechanisms(n)]


def _suite_feasibility(n, grid, epsilon, jobs):
    out = [check_feasibility(m, grid, n, jobs) for m in _mechanisms(n)]
    if n >= 3:
        out.append(check_bc_identities(grid, n, jobs))
    return out


def _suite_lemma1(n, grid, epsilon, jobs):
    return [check_lemma1(m, grid, n, jobs) for m in _mechanisms(n)]


def _suite_lemma4(n, grid, epsilon, jobs):
    reports = []
    for mech in _mechanisms(n):
        reports.append(check_lemma4_sweep(mech, grid, n, jobs))
        good = [truth_strategy, vickrey_opt_strategy, adversarial_strategy]
        if n >= 3:
            good.append(lambda j: bc_opt_strategy(j, n))
        for make in good:
            for i in range(1, n + 1):
                reports.append(check_lemma4(make(i), mech, grid, n))
        for part, broken in broken_lemma4_strategies(n).items():
            if broken is None:
                continue
            r = check_lemma4(broken, mech, grid, n)
            flagged = not r.passed and r.details.get("part") == part and r.witness is not None and bool(
                r.witness.announcements)
            reports.append(VerificationReport(f"lemma4-flags-part-{part}[{mech.name}, {broken.name}]",
                                              r.instances, flagged, r.witness,
                                              "a deliberately broken strategy must be flagged"))
    return reports


def _suite_corollary1(n, grid, epsilon, jobs):
    return [check_corollary1(grid, n, jobs)]


def _suite_vickrey_equality(n, grid, epsilon, jobs):
    return [check_vickrey_utility_equality(grid, n, jobs)]


def _suite_vickrey_socially_maximal(n, grid, epsilon, jobs):
    return [check_socially_maximal_vickrey(grid, n, jobs)]


def _suite_sw_maximal_vickrey(n, grid, epsilon, jobs):
    return [check_sw_maximal(vickrey(n), uniform_profile(vickrey_opt_strategy, n), grid, n, jobs)]


def _suite_sw_maximal_bc(n, grid, epsilon, jobs):
    _require_bc(n)
    return [check_sw_maximal(bailey_cavallo(n), uniform_profile(lambda j: bc_opt_strategy(j, n), n), grid, n, jobs)]


def _suite_bc_no_socially_optimal(n, grid, epsilon, jobs):
    _require_bc(n)
    return [check_bc_no_socially_optimal(grid, n, i, jobs) for i in range(1, n + 1)]


def _suite_bc_not_utility_equal(n, grid, epsilon, jobs):
    _require_bc(n)
    return [check_bc_not_utility_equal(grid, n, epsilon, jobs)]


def _bounded_groves(n: int) -> list[Mechanism]:
    """Mechanisms with 0 <= r_i < top other bid (r_i = 0 allowed when that top is 0)."""
    return _mechanisms(n) + ([parse_mechanism("groves:half-bc", n)] if n >= 3 else [])


def _suite_no_dominant(n, grid, epsilon, jobs):
    return [check_no_dominant(m, grid, n, i, jobs) for m in _bounded_groves(n) for i in range(1, n)]


def _suite_last_player_dominant(n, grid, epsilon, jobs):
    return [check_last_player_dominant(m, grid, n, jobs) for m in _bounded_groves(n)]


def _suite_nash(n, grid, epsilon, jobs):
    reports = [check_nash_within_optimal(vickrey(n), uniform_profile(truth_strategy, n), grid, n, jobs),
               check_nash_within_optimal(vickrey(n), uniform_profile(vickrey_opt_strategy, n), grid, n, jobs)]
    if n >= 3:
        reports.append(check_nash_within_optimal(bailey_cavallo(n), uniform_profile(truth_strategy, n), grid, n, jobs))
        reports.append(check_nash_within_optimal(bailey_cavallo(n),
                                                 uniform_profile(lambda j: bc_opt_strategy(j, n), n), grid, n, jobs))
    return reports


def _suite_claim_thirdhighest(n, grid, epsilon, jobs):
    _require_bc(n)
    return [check_claim_thirdhighest(grid, n, jobs)]


SUITES: dict[str, Callable[[int, Grid, Fraction, int], list[VerificationReport]]] = {
    "groves-ic": _suite_groves_ic,
    "feasibility": _suite_feasibility,
    "lemma1": _suite_lemma1,
    "lemma4": _suite_lemma4,
    "corollary1": _suite_corollary1,
    "vickrey-equality": _suite_vickrey_equality,
    "vickrey-socially-maximal": _suite_vickrey_socially_maximal,
    "sw-maximal-vickrey": _suite_sw_maximal_vickrey,
    "sw-maximal-bc": _suite_sw_maximal_bc,
    "bc-no-socially-optimal": _suite_bc_no_socially_optimal,
    "bc-not-utility-equal": _suite_bc_not_utility_equal,
    "no-dominant": _suite_no_dominant,
    "last-player-dominant": _suite_last_player_dominant,
    "nash": _suite_nash,
    "claim-thirdhighest": _suite_claim_thirdhighest,
}

BC_ONLY = {"sw-maximal-bc", "bc-no-socially-optimal", "bc-not-utility-equal", "claim-thirdhighest"}


def run_suite(name: str, n: int = 3, grid: Grid = DEFAULT_GRID, epsilon: Fraction = Fraction(1),
              jobs: int = 1) -> list[VerificationReport]:
    """Run one named suite, or every suite for ``"all"`` (BC-only suites skipped when n < 3)."""
    if name == "all":
        reports = []
        for suite, fn in SUITES.items():
            if suite in BC_ONLY and n < 3:
                continue
            reports.extend(fn(n, grid, epsilon, jobs))
        return reports
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](n, grid, epsilon, jobs)
