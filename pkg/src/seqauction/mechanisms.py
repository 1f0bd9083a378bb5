"""Vickrey, Bailey-Cavallo and generic Groves auctions.

Every auction here allocates to ``argsmax`` of the bids.  A generic Groves
auction is the pivotal (Vickrey) tax plus a redistribution ``r_i`` that sees
only the other players' bids.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .core import Outcome, argsmax, final_utility, kth_highest, kth_highest_excluding, without

# r(i, others, n) -> amount returned to player i
Redistribution = Callable[[int, tuple[Fraction, ...], int], Fraction]

VICKREY = "vickrey"
BAILEY_CAVALLO = "bailey-cavallo"
GROVES = "groves"


def _zero(i: int, others: tuple[Fraction, ...], n: int) -> Fraction:
    return Fraction(0)


def _bc(i: int, others: tuple[Fraction, ...], n: int) -> Fraction:
    return kth_highest(others, 2) / n


def _neg_max(i: int, others: tuple[Fraction, ...], n: int) -> Fraction:
    return -kth_highest(others, 1)


def _half_second(i: int, others: tuple[Fraction, ...], n: int) -> Fraction:
    return kth_highest(others, 2) / (2 * n)


NAMED_REDISTRIBUTIONS: dict[str, tuple[Redistribution, int]] = {
    # name: (function, minimum n)
    "zero": (_zero, 2),
    "bc": (_bc, 3),
    "half-bc": (_half_second, 3),
    "neg-max": (_neg_max, 2),
}


@dataclass(frozen=True)
class Mechanism:
    kind: str
    n: int
    redistribution: Redistribution = field(default=_zero, compare=False, repr=False)
    label: str = ""

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("an auction needs n >= 2 players")
        if self.kind == BAILEY_CAVALLO and self.n < 3:
            raise ValueError("BC requires n >= 3")
        if self.kind not in (VICKREY, BAILEY_CAVALLO, GROVES):
            raise ValueError(f"unknown mechanism kind {self.kind!r}")

    @property
    def name(self) -> str:
        return self.label or self.kind

    def redistribution_to(self, bids: Sequence[Fraction], i: int) -> Fraction:
        if self.kind == VICKREY:
            return Fraction(0)
        if self.kind == BAILEY_CAVALLO:
            return bc_redistribution(bids, i)
        return Fraction(self.redistribution(i, without(bids, i), len(bids)))

    def taxes(self, bids: Sequence[Fraction]) -> tuple[Fraction, ...]:
        self._check_size(bids)
        pivotal = pivotal_tax(bids)
        if self.kind == VICKREY:
            return pivotal
        return tuple(p + self.redistribution_to(bids, i) for i, p in enumerate(pivotal, start=1))

    def _check_size(self, bids: Sequence[Fraction]) -> None:
        if len(bids) != self.n:
            raise ValueError(f"expected {self.n} bids, got {len(bids)}")


def vickrey(n: int) -> Mechanism:
    return Mechanism(VICKREY, n)


def bailey_cavallo(n: int) -> Mechanism:
    return Mechanism(BAILEY_CAVALLO, n)


def groves(n: int, redistribution: Redistribution, label: str = "groves") -> Mechanism:
    return Mechanism(GROVES, n, redistribution, label)


def parse_mechanism(selector: str, n: int) -> Mechanism:
    """Build a mechanism from ``vickrey``, ``bailey-cavallo`` or ``groves:<name>``."""
    selector = selector.strip()
    if selector == VICKREY:
        return vickrey(n)
    if selector in (BAILEY_CAVALLO, "bc"):
        return bailey_cavallo(n)
    if selector.startswith("groves:"):
        name = selector.split(":", 1)[1]
        if name not in NAMED_REDISTRIBUTIONS:
            known = ", ".join(sorted(NAMED_REDISTRIBUTIONS))
            raise ValueError(f"unknown redistribution {name!r} (known: {known})")
        fn, min_n = NAMED_REDISTRIBUTIONS[name]
        if n < min_n:
            raise ValueError(f"redistribution {name!r} requires n >= {min_n}")
        return groves(n, fn, selector)
    raise ValueError(f"unknown mechanism {selector!r}")


def pivotal_tax(bids: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """The winner pays the second highest bid; everybody else pays nothing."""
    if len(bids) < 2:
        raise ValueError("pivotal tax needs n >= 2 bids")
    winner = argsmax(bids)
    second = kth_highest(bids, 2)
    return tuple(-second if i == winner else Fraction(0) for i in range(1, len(bids) + 1))


def bc_redistribution(bids: Sequence[Fraction], i: int) -> Fraction:
    n = len(bids)
    if n < 3:
        raise ValueError("BC requires n >= 3")
    return kth_highest_excluding(bids, i, 2) / n


def bc_tax(bids: Sequence[Fraction]) -> tuple[Fraction, ...]:
    pivotal = pivotal_tax(bids)
    return tuple(p + bc_redistribution(bids, i) for i, p in enumerate(pivotal, start=1))


def bc_aggregate_redistribution(bids: Sequence[Fraction]) -> Fraction:
    """Closed form of the summed BC redistribution."""
    n = len(bids)
    return Fraction(n - 2, n) * kth_highest(bids, 2) + Fraction(2, n) * kth_highest(bids, 3)


def bc_aggregate_tax(bids: Sequence[Fraction]) -> Fraction:
    """Closed form of the summed BC tax; never positive."""
    n = len(bids)
    return -Fraction(2, n) * (kth_highest(bids, 2) - kth_highest(bids, 3))


def run_mechanism(mechanism: Mechanism, bids: Sequence[Fraction], true_types: Sequence[Fraction]) -> Outcome:
    if len(bids) != len(true_types):
        raise ValueError(f"{len(bids)} bids but {len(true_types)} types")
    bids = tuple(bids)
    winner = argsmax(bids)
    taxes = mechanism.taxes(bids)
    utilities = tuple(
        final_utility(winner, taxes, i, true_types[i - 1]) for i in range(1, len(bids) + 1)
    )
    return Outcome(winner, taxes, utilities, sum(utilities, Fraction(0)))


def utility(mechanism: Mechanism, bids: Sequence[Fraction], true_types: Sequence[Fraction], i: int) -> Fraction:
    """Final utility of player ``i`` alone; cheaper than a full outcome."""
    bids = tuple(bids)
    winner = argsmax(bids)
    tax = mechanism.taxes(bids)[i - 1]
    return final_utility(winner, (tax,) * len(bids), i, true_types[i - 1])


def check_feasible(mechanism: Mechanism, bids: Sequence[Fraction]) -> bool:
    return sum(mechanism.taxes(bids), Fraction(0)) <= 0


def check_incentive_compatible(
    mechanism: Mechanism, grid: Sequence[Fraction], n: int | None = None
) -> tuple[bool, dict | None]:
    """Exhaustive truth-telling check over ``grid ** n``.

    Returns ``(ok, witness)`` where the witness is the lexicographically
    first ``(theta, i, deviation)`` at which lying pays.
    """
    n = mechanism.n if n is None else n
    grid = tuple(grid)
    for theta in itertools.product(grid, repeat=n):
        for i in range(1, n + 1):
            honest = utility(mechanism, theta, theta, i)
            for lie in grid:
                if lie == theta[i - 1]:
                    continue
                bids = theta[: i - 1] + (lie,) + theta[i:]
                lying = utility(mechanism, bids, theta, i)
                if lying > honest:
                    return False, {
                        "theta": theta,
                        "player": i,
                        "deviation": lie,
                        "truthful_utility": honest,
                        "deviation_utility": lying,
                    }
    return True, None
