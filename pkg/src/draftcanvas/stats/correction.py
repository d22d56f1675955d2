"""Holm-Bonferroni step-down correction for multiple comparisons."""

from __future__ import annotations

from typing import Sequence


class OutOfRange(ValueError):
    """Raised when a p-value lies outside [0, 1]."""


def holm_bonferroni(ps: Sequence[float]) -> list[float]:
    """Adjust a family of p-values with the Holm step-down procedure.

    Sorting the raw values ascending, the i-th smallest (1-based) is
    multiplied by (m - i + 1), clipped at 1, and raised to the running
    maximum so adjusted values are nondecreasing in sort order. The result
    is returned in the original input order.
    """
    if not ps:
        raise ValueError("holm_bonferroni needs at least one p-value")
    m = len(ps)
    for p in ps:
        if not 0.0 <= p <= 1.0:
            raise OutOfRange(f"p-value {p} outside [0, 1]")
    order = sorted(range(m), key=lambda i: ps[i])
    adjusted = [0.0] * m
    running = 0.0
    for rank, idx in enumerate(order):
        running = max(running, min(1.0, (m - rank) * ps[idx]))
        adjusted[idx] = running
    return adjusted
