"""Shared defaults and the search-node budget."""

import os
from fractions import Fraction

DEFAULT_DEPTH = 12
DEFAULT_TOL = Fraction(1, 1_000_000)
DEFAULT_NODE_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    """A search or enumeration would exceed the configured node budget."""


def node_budget() -> int:
    raw = os.environ.get("FM_NODE_BUDGET")
    if raw is None or raw == "":
        return DEFAULT_NODE_BUDGET
    value = int(raw)
    if value <= 0:
        raise ValueError("FM_NODE_BUDGET must be positive")
    return value
