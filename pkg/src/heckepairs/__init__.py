"""Exact computations around pair counts of Hecke eigenvalue angles at level 1."""

__version__ = "0.1.0"


class ConsistencyError(RuntimeError):
    """An internal cross-check failed; the result cannot be trusted."""
