"""Exact values, order statistics, allocation and utility accounting.

Players are indexed from 1 everywhere in this package.  Every money amount
is a :class:`fractions.Fraction`; there is no floating point path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Value = Fraction

# Stand-in for the maximum over an empty prefix; every type is >= 0 > -1.
EMPTY_PREFIX_MAX = Fraction(-1)


def parse_value(text: str | int | Fraction) -> Fraction:
    """Parse ``"4"``, ``"2.5"`` or ``"10/3"`` into an exact rational."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_value(v: Fraction) -> str:
    """Canonical ``p/q`` string (``q`` omitted when it is 1)."""
    return str(Fraction(v))


def parse_types(items: Iterable[str | int | Fraction]) -> tuple[Fraction, ...]:
    """Parse a type or bid vector; entries must be non-negative."""
    values = tuple(parse_value(x) for x in items)
    for v in values:
        if v < 0:
            raise ValueError(f"negative type or bid: {format_value(v)}")
    return values


def argsmax(values: Sequence[Fraction]) -> int:
    """Smallest 1-based index attaining the maximum."""
    if not values:
        raise ValueError("empty bid vector")
    best = 0
    for k in range(1, len(values)):
        if values[k] > values[best]:
            best = k
    return best + 1


def kth_highest(values: Sequence[Fraction], k: int) -> Fraction:
    """k-th largest entry, counting multiplicity."""
    if not 1 <= k <= len(values):
        raise ValueError(f"k={k} out of range for {len(values)} values")
    return sorted(values, reverse=True)[k - 1]


def without(values: Sequence[Fraction], i: int) -> tuple[Fraction, ...]:
    """The vector with player ``i`` removed."""
    if not 1 <= i <= len(values):
        raise ValueError(f"player {i} out of range 1..{len(values)}")
    return tuple(values[: i - 1]) + tuple(values[i:])


def kth_highest_excluding(values: Sequence[Fraction], i: int, k: int) -> Fraction:
    return kth_highest(without(values, i), k)


def prefix_max(values: Sequence[Fraction], i: int) -> Fraction:
    """Max of the entries before player ``i``; ``-1`` when ``i == 1``."""
    if i <= 1:
        return EMPTY_PREFIX_MAX
    return max(values[: i - 1])


def final_utility(winner: int, taxes: Sequence[Fraction], i: int, theta_i: Fraction) -> Fraction:
    if winner == i:
        return theta_i + taxes[i - 1]
    return taxes[i - 1]


@dataclass(frozen=True)
class Outcome:
    winner: int
    taxes: tuple[Fraction, ...]
    utilities: tuple[Fraction, ...]
    social_welfare: Fraction

    @property
    def n(self) -> int:
        return len(self.taxes)

    @property
    def aggregate_tax(self) -> Fraction:
        return sum(self.taxes, Fraction(0))

    def utility(self, i: int) -> Fraction:
        return self.utilities[i - 1]

    def tax(self, i: int) -> Fraction:
        return self.taxes[i - 1]

    def check(self, true_types: Sequence[Fraction]) -> None:
        """Raise ``AssertionError`` if the accounting identities fail."""
        if not 1 <= self.winner <= self.n:
            raise AssertionError(f"winner {self.winner} outside 1..{self.n}")
        if self.social_welfare != sum(self.utilities, Fraction(0)):
            raise AssertionError("social welfare differs from the sum of utilities")
        for i in range(1, self.n + 1):
            expected = final_utility(self.winner, self.taxes, i, true_types[i - 1])
            if self.utility(i) != expected:
                raise AssertionError(f"utility of player {i} is inconsistent with its tax")
