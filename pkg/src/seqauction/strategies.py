"""Sequential bidding strategies and announcement vectors.

A strategy of player ``i`` maps the bids already announced by players
``1..i-1`` plus its own true type to a bid.  Strategies always see the
*announced* prefix, never the true types of earlier players.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .core import EMPTY_PREFIX_MAX, format_value, kth_highest, parse_value
from .mechanisms import Mechanism, run_mechanism

BidFunction = Callable[[tuple[Fraction, ...], Fraction], Fraction]


@dataclass(frozen=True)
class Strategy:
    player: int
    bid: BidFunction
    myopic: bool = False
    name: str = ""

    def __call__(self, prefix: Sequence[Fraction], theta_i: Fraction) -> Fraction:
        prefix = tuple(prefix)
        if len(prefix) != self.player - 1:
            raise ValueError(
                f"player {self.player} expects {self.player - 1} earlier bids, got {len(prefix)}"
            )
        out = Fraction(self.bid(prefix, theta_i))
        if out < 0:
            raise ValueError(f"strategy {self.name!r} produced a negative bid {out}")
        return out


Profile = tuple[Strategy, ...]


def running_max(prefix: Sequence[Fraction]) -> Fraction:
    return max(prefix) if prefix else EMPTY_PREFIX_MAX


def truth_strategy(i: int) -> Strategy:
    return Strategy(i, lambda prefix, theta: theta, myopic=True, name="truth")


def vickrey_opt_strategy(i: int) -> Strategy:
    """Bid the true type when it beats every earlier bid, else bid 0."""

    def bid(prefix, theta):
        return theta if theta > running_max(prefix) else Fraction(0)

    return Strategy(i, bid, name="vickrey-opt")


def bc_opt_strategy(i: int, n: int) -> Strategy:
    """Truthful when winning; otherwise echo the top bid, or the runner-up bid if last."""
    if n < 3:
        raise ValueError("BC requires n >= 3")
    if not 1 <= i <= n:
        raise ValueError(f"player {i} out of range 1..{n}")

    def bid(prefix, theta):
        if theta > running_max(prefix):
            return theta
        if i <= n - 1:
            return kth_highest(prefix, 1)
        if len(prefix) < 2:
            raise ValueError("last player needs at least two earlier bids")
        return kth_highest(prefix, 2)

    return Strategy(i, bid, name="bc-opt")


def adversarial_strategy(i: int, step: Fraction = Fraction(1)) -> Strategy:
    """Truthful when winning; otherwise bid just under the current top bid."""

    def bid(prefix, theta):
        top = running_max(prefix)
        if theta > top:
            return theta
        return max(top - step, Fraction(0))

    return Strategy(i, bid, name="adversarial")


def constant_strategy(i: int, c: Fraction | str | int) -> Strategy:
    c = parse_value(c)
    if c < 0:
        raise ValueError("constant bid must be non-negative")
    return Strategy(i, lambda prefix, theta: c, myopic=True, name=f"constant:{format_value(c)}")


def undercut_previous_strategy(i: int, epsilon: Fraction = Fraction(1)) -> Strategy:
    """Truthful when winning; otherwise bid ``epsilon`` below the previous bid."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")

    def bid(prefix, theta):
        if theta > running_max(prefix):
            return theta
        return max(Fraction(0), prefix[-1] - epsilon)

    return Strategy(i, bid, name=f"undercut:{format_value(epsilon)}")


def match_previous_strategy(i: int) -> Strategy:
    """Truthful when winning; otherwise repeat the previous bid."""

    def bid(prefix, theta):
        if theta > running_max(prefix):
            return theta
        return prefix[-1]

    return Strategy(i, bid, name="match-previous")


def parse_strategy(selector: str, i: int, n: int) -> Strategy:
    selector = selector.strip()
    if selector == "truth":
        return truth_strategy(i)
    if selector == "vickrey-opt":
        return vickrey_opt_strategy(i)
    if selector == "bc-opt":
        return bc_opt_strategy(i, n)
    if selector == "adversarial":
        return adversarial_strategy(i)
    if selector == "match-previous":
        return match_previous_strategy(i)
    if selector.startswith("undercut:"):
        return undercut_previous_strategy(i, parse_value(selector.split(":", 1)[1]))
    if selector.startswith("constant:"):
        return constant_strategy(i, selector.split(":", 1)[1])
    raise ValueError(f"unknown strategy {selector!r}")


def make_profile(selectors: str | Sequence[str], n: int) -> Profile:
    """One strategy per player from a selector or a list of selectors."""
    if isinstance(selectors, str):
        selectors = [selectors] * n
    if len(selectors) != n:
        raise ValueError(f"expected {n} strategy selectors, got {len(selectors)}")
    return tuple(parse_strategy(sel, i, n) for i, sel in enumerate(selectors, start=1))


def uniform_profile(factory: Callable[[int], Strategy], n: int) -> Profile:
    return tuple(factory(i) for i in range(1, n + 1))


def apply_profile(profile: Sequence[Strategy], theta: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Announced bids when each player applies its strategy in turn."""
    if len(profile) != len(theta):
        raise ValueError(f"profile has {len(profile)} strategies for {len(theta)} players")
    announced: list[Fraction] = []
    for k, (strategy, theta_i) in enumerate(zip(profile, theta), start=1):
        if strategy.player != k:
            raise ValueError(f"position {k} holds a strategy for player {strategy.player}")
        announced.append(strategy(tuple(announced), theta_i))
    return tuple(announced)


def continue_profile(
    profile: Sequence[Strategy], theta: Sequence[Fraction], prefix: Sequence[Fraction]
) -> tuple[Fraction, ...]:
    """Extend an already announced prefix using the remaining strategies."""
    announced = list(prefix)
    for k in range(len(prefix) + 1, len(theta) + 1):
        announced.append(profile[k - 1](tuple(announced), theta[k - 1]))
    return tuple(announced)


def social_welfare(mechanism: Mechanism, theta: Sequence[Fraction], profile: Sequence[Strategy]) -> Fraction:
    return run_mechanism(mechanism, apply_profile(profile, theta), theta).social_welfare
