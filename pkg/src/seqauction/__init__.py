"""Sequential single-item Groves auctions (Vickrey and Bailey-Cavallo) in exact arithmetic."""

from .core import Outcome, argsmax, final_utility, format_value, kth_highest, kth_highest_excluding, parse_value, prefix_max
from .mechanisms import Mechanism, bailey_cavallo, parse_mechanism, run_mechanism, vickrey
from .strategies import Strategy, apply_profile, make_profile, social_welfare

__all__ = [
    "Mechanism",
    "Outcome",
    "Strategy",
    "apply_profile",
    "argsmax",
    "bailey_cavallo",
    "final_utility",
    "format_value",
    "kth_highest",
    "kth_highest_excluding",
    "make_profile",
    "parse_mechanism",
    "parse_value",
    "prefix_max",
    "run_mechanism",
    "social_welfare",
    "vickrey",
]
