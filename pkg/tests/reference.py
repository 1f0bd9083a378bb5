"""Deliberately naive re-derivations used as test oracles.

Taxes come from the Clarke form (others' welfare at the chosen outcome minus
the best the others could do alone) rather than from the second-price rule.
"""

from fractions import Fraction
from itertools import product


def winner(bids):
    top = max(bids)
    return [k for k, b in enumerate(bids, start=1) if b == top][0]


def clarke_taxes(bids):
    w = winner(bids)
    out = []
    for i in range(1, len(bids) + 1):
        others_here = sum((b for j, b in enumerate(bids, start=1) if j != i and j == w), Fraction(0))
        others_alone = max(b for j, b in enumerate(bids, start=1) if j != i)
        out.append(others_here - others_alone)
    return out


def second_of(values):
    return sorted(values)[-2]


def taxes(kind, bids):
    base = clarke_taxes(bids)
    if kind == "vickrey":
        return base
    n = len(bids)
    return [t + second_of([b for j, b in enumerate(bids, start=1) if j != i]) / n
            for i, t in enumerate(base, start=1)]


def utilities(kind, bids, theta):
    w = winner(bids)
    return [t + (theta[i - 1] if i == w else 0) for i, t in enumerate(taxes(kind, bids), start=1)]


def welfare(kind, bids, theta):
    return sum(utilities(kind, bids, theta), Fraction(0))


def optimal_bid_ok(prefix, theta_i, i, n, bid):
    """Optimal-bid conditions written out case by case."""
    seen = max(prefix) if prefix else None
    winning = seen is None or theta_i > seen
    if i < n:
        return bid == theta_i if winning else bid <= seen
    if winning:
        return seen is None or bid > seen
    if theta_i == seen:
        return True
    return bid <= seen


def consistent(theta, grid):
    n = len(theta)
    return [b for b in product(grid, repeat=n)
            if all(optimal_bid_ok(b[: k - 1], theta[k - 1], k, n, b[k - 1]) for k in range(1, n + 1))]


def F(*xs):
    return tuple(Fraction(x) for x in xs)
