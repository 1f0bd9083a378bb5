"""Command line: simulate scenarios, run verification suites, print counterexamples.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from . import oracle
from .core import format_value, parse_types, parse_value
from .mechanisms import parse_mechanism, run_mechanism, vickrey
from .oracle import Grid, Witness
from .strategies import apply_profile, make_profile

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3
OUTPUTS = ("table", "csv", "json")
CSV_COLUMNS = ["profile", "player", "announced", "winner", "tax", "utility", "sw"]


class UsageError(Exception):
    pass


class InvariantViolation(Exception):
    pass


@dataclass
class ScenarioConfig:
    n: int
    mechanism: str
    types: tuple[Fraction, ...]
    profile: list[str]
    output: str = "table"
    label: str = ""

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ScenarioConfig":
        try:
            types = parse_types(data["types"])
            n = int(data.get("n", len(types)))
            profile = data.get("profile", "truth")
            if isinstance(profile, str):
                profile = [profile] * n
            config = cls(n, str(data.get("mechanism", "vickrey")), types, list(profile),
                         str(data.get("output", "table")), str(data.get("label", "")))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad scenario: {exc}") from exc
        config.validate()
        return config

    def validate(self) -> None:
        if len(self.types) != self.n:
            raise UsageError(f"n={self.n} but {len(self.types)} types given")
        if len(self.profile) != self.n:
            raise UsageError(f"n={self.n} but {len(self.profile)} strategies given")
        if self.output not in OUTPUTS:
            raise UsageError(f"output must be one of {', '.join(OUTPUTS)}")
        try:
            parse_mechanism(self.mechanism, self.n)
            make_profile(self.profile, self.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    def to_dict(self) -> dict[str, Any]:
        out = {
            "n": self.n,
            "mechanism": self.mechanism,
            "types": [format_value(v) for v in self.types],
            "profile": list(self.profile),
            "output": self.output,
        }
        if self.label:
            out["label"] = self.label
        return out

    @property
    def profile_label(self) -> str:
        if self.label:
            return self.label
        if len(set(self.profile)) == 1:
            return self.profile[0]
        return "|".join(self.profile)


@dataclass
class ComparisonRow:
    profile: str
    announcements: tuple[Fraction, ...]
    winner: int
    aggregate_tax: Fraction
    sw: Fraction
    utilities: tuple[Fraction, ...]
    taxes: tuple[Fraction, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict[str, Any]:
        return {
            "profile": self.profile,
            "announcements": [format_value(v) for v in self.announcements],
            "winner": self.winner,
            "aggregate_tax": format_value(self.aggregate_tax),
            "sw": format_value(self.sw),
            "taxes": [format_value(v) for v in self.taxes],
            "utilities": [format_value(v) for v in self.utilities],
        }

    def value(self, quantity: str) -> Fraction:
        """Same quantities as :func:`seqauction.oracle.measure`."""
        if quantity == "sw":
            return self.sw
        if quantity == "aggregate_tax":
            return self.aggregate_tax
        if quantity == "winner":
            return Fraction(self.winner)
        kind, _, idx = quantity.partition("_")
        if kind == "u":
            return self.utilities[int(idx) - 1]
        if kind == "t":
            return self.taxes[int(idx) - 1]
        raise ValueError(f"unknown quantity {quantity!r}")


def _row(label: str, config: ScenarioConfig, selectors: Sequence[str]) -> ComparisonRow:
    mech = parse_mechanism(config.mechanism, config.n)
    bids = apply_profile(make_profile(list(selectors), config.n), config.types)
    outcome = run_mechanism(mech, bids, config.types)
    try:
        outcome.check(config.types)
    except AssertionError as exc:
        raise InvariantViolation(str(exc)) from exc
    row = ComparisonRow(label, bids, outcome.winner, outcome.aggregate_tax, outcome.social_welfare,
                        outcome.utilities, outcome.taxes)
    if row.sw != sum(row.utilities, Fraction(0)):
        raise InvariantViolation("row welfare differs from the sum of utilities")
    return row


def cmd_simulate(config: ScenarioConfig) -> list[ComparisonRow]:
    """The configured profile, followed by truth-telling as a baseline."""
    config.validate()
    rows = [_row(config.profile_label, config, config.profile)]
    if any(sel != "truth" for sel in config.profile) or config.label:
        rows.append(_row("truth", config, ["truth"] * config.n))
    return rows


def render_rows(rows: Sequence[ComparisonRow], output: str, config: ScenarioConfig | None = None) -> str:
    if output == "json":
        payload: dict[str, Any] = {"rows": [r.to_dict() for r in rows]}
        if config is not None:
            payload = {"scenario": config.to_dict(), **payload}
        return json.dumps(payload, indent=2) + "\n"
    if output == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            for i, (bid, tax, u) in enumerate(zip(r.announcements, r.taxes, r.utilities), start=1):
                writer.writerow([r.profile, i, format_value(bid), r.winner, format_value(tax), format_value(u),
                                 format_value(r.sw)])
            writer.writerow([r.profile, "total", "", r.winner, format_value(r.aggregate_tax),
                             format_value(sum(r.utilities, Fraction(0))), format_value(r.sw)])
        return buf.getvalue()
    lines = []
    for r in rows:
        bids = " ".join(format_value(v) for v in r.announcements)
        us = " ".join(format_value(v) for v in r.utilities)
        lines.append(f"{r.profile:<16} bids [{bids}]  winner {r.winner}  tax {format_value(r.aggregate_tax):>6}"
                     f"  sw {format_value(r.sw):>6}  utilities [{us}]")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ witness replay


def witness_scenarios(witness: Witness) -> list[ScenarioConfig]:
    """One scenario per announced vector; constant strategies bid it back exactly."""
    n = len(witness.theta)
    return [
        ScenarioConfig(n, witness.mechanism, witness.theta, [f"constant:{format_value(b)}" for b in bids],
                       "json", label)
        for label, bids in witness.announcements.items()
    ]


def replay_witness(witness: Witness) -> dict[str, Fraction]:
    """Re-simulate a witness and read back the quantity it reports, per label."""
    out = {}
    for config in witness_scenarios(witness):
        row = cmd_simulate(config)[0]
        out[config.label] = row.value(witness.quantity)
    return out


# ---------------------------------------------------------------- verify


def cmd_verify(suite: str, n: int, grid: Grid, epsilon: Fraction, jobs: int = 1) -> list[oracle.VerificationReport]:
    if suite != "all" and suite not in oracle.SUITES:
        raise UsageError(f"unknown suite {suite!r}")
    try:
        return oracle.run_suite(suite, n, grid, epsilon, jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def render_reports(suite: str, n: int, grid: Grid, epsilon: Fraction, reports, output: str) -> str:
    passed = all(r.passed for r in reports)
    if output == "json":
        payload = {
            "suite": suite,
            "n": n,
            "grid": [format_value(v) for v in grid],
            "epsilon": format_value(epsilon),
            "passed": passed,
            "reports": [r.to_dict() for r in reports],
        }
        return json.dumps(payload, indent=2) + "\n"
    if output == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["suite", "instances", "passed", "theta", "values"])
        for r in reports:
            w = r.witness
            theta = " ".join(format_value(v) for v in w.theta) if w else ""
            values = " ".join(f"{k}={format_value(v)}" for k, v in w.values.items()) if w else ""
            writer.writerow([r.suite, r.instances, "true" if r.passed else "false", theta, values])
        return buf.getvalue()
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.suite}  ({r.instances} instances)" for r in reports]
    lines.append(f"{'PASS' if passed else 'FAIL'}  {len(reports)} reports")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------- counterexamples


def _counterexample_no_dominant(epsilon: Fraction) -> list[Witness]:
    report = oracle.check_no_dominant(vickrey(3), Grid.range(0, 3), 3, 1)
    return [report.witness]


def _counterexample_bc_not_dominant(epsilon: Fraction) -> list[Witness]:
    return [oracle.bc_utility_inequality_instance(epsilon)]


def _counterexample_nash(epsilon: Fraction) -> list[Witness]:
    return [oracle.nash_deviation_instance()]


def _counterexample_bc_no_socially_optimal(epsilon: Fraction) -> list[Witness]:
    four, two = Fraction(4), Fraction(2)
    cases = oracle.bc_case_completions((four,), two, 3)
    return [cases["case1"], cases["case2"]]


COUNTEREXAMPLES = {
    "bc-not-dominant": _counterexample_bc_not_dominant,
    "nash-deviation": _counterexample_nash,
    "no-dominant": _counterexample_no_dominant,
    "bc-no-socially-optimal": _counterexample_bc_no_socially_optimal,
}


def cmd_counterexample(name: str, epsilon: Fraction = Fraction(1)) -> list[Witness]:
    if name not in COUNTEREXAMPLES:
        raise UsageError(f"unknown counterexample {name!r}")
    try:
        return COUNTEREXAMPLES[name](epsilon)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def render_witnesses(name: str, witnesses: Sequence[Witness], output: str) -> str:
    if output == "json":
        payload = {
            "name": name,
            "witnesses": [w.to_dict() for w in witnesses],
            "scenarios": [[c.to_dict() for c in witness_scenarios(w)] for w in witnesses],
        }
        return json.dumps(payload, indent=2) + "\n"
    lines = []
    for w in witnesses:
        lines.append(f"{name}: {w.mechanism}, theta = ({', '.join(format_value(v) for v in w.theta)})")
        for label, bids in w.announcements.items():
            value = w.values.get(label)
            shown = format_value(value) if value is not None else "-"
            lines.append(f"  {label:<12} bids ({', '.join(format_value(v) for v in bids)})  "
                         f"{w.quantity} = {shown}")
        if w.note:
            lines.append(f"  {w.note}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ parser


def _parse_grid(text: str) -> Grid:
    try:
        return Grid.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _parse_rational(text: str) -> Fraction:
    try:
        return parse_value(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seqauction", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one scenario against the truthful baseline")
    sim.add_argument("--scenario", help="JSON scenario file")
    sim.add_argument("--mechanism", default="vickrey")
    sim.add_argument("--types", help="comma separated types, e.g. 3,5,4")
    sim.add_argument("--profile", default="truth", help="one selector, or one per player separated by commas")
    sim.add_argument("--n", type=int)
    sim.add_argument("--out", choices=OUTPUTS)

    ver = sub.add_parser("verify", help="run verification suites")
    ver.add_argument("--suite", default="all", choices=["all", *oracle.SUITES])
    ver.add_argument("--n", type=int, default=3)
    ver.add_argument("--grid", type=_parse_grid, default=oracle.DEFAULT_GRID)
    ver.add_argument("--epsilon", type=_parse_rational, default=Fraction(1))
    ver.add_argument("--jobs", type=int, default=1)
    ver.add_argument("--out", choices=OUTPUTS, default="json")

    ce = sub.add_parser("counterexample", help="print a named counterexample")
    ce.add_argument("name", choices=sorted(COUNTEREXAMPLES))
    ce.add_argument("--epsilon", type=_parse_rational, default=Fraction(1))
    ce.add_argument("--out", choices=OUTPUTS, default="table")
    return parser


def _scenario_from_args(args) -> ScenarioConfig:
    if args.scenario:
        try:
            with open(args.scenario) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read scenario: {exc}") from exc
        if args.out:
            data["output"] = args.out
        return ScenarioConfig.from_dict(data)
    if not args.types:
        raise UsageError("give --scenario or --types")
    types = [t for t in args.types.split(",") if t.strip()]
    profile = [p for p in args.profile.split(",") if p.strip()]
    data = {"types": types, "mechanism": args.mechanism, "output": args.out or "table",
            "profile": profile[0] if len(profile) == 1 else profile}
    if args.n is not None:
        data["n"] = args.n
    return ScenarioConfig.from_dict(data)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            config = _scenario_from_args(args)
            rows = cmd_simulate(config)
            sys.stdout.write(render_rows(rows, config.output, config))
            return EXIT_OK
        if args.command == "verify":
            if args.jobs < 1:
                raise UsageError("--jobs must be at least 1")
            reports = cmd_verify(args.suite, args.n, args.grid, args.epsilon, args.jobs)
            sys.stdout.write(render_reports(args.suite, args.n, args.grid, args.epsilon, reports, args.out))
            return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED
        witnesses = cmd_counterexample(args.name, args.epsilon)
        sys.stdout.write(render_witnesses(args.name, witnesses, args.out))
        return EXIT_OK
    except UsageError as exc:
        print(f"seqauction: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"seqauction: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
