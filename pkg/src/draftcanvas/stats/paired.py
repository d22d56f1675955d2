"""Paired significance tests: Student's paired t and Wilcoxon signed-rank."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from statistics import NormalDist
from typing import Sequence

from scipy.stats import t as t_distribution


class LengthMismatch(ValueError):
    """Raised when the two paired samples cannot be paired positionally."""


class ZeroVariance(ValueError):
    """Raised when paired differences have no variance."""


class AllZeroDifferences(ValueError):
    """Raised when every paired difference is zero."""


class Method(str, Enum):
    PAIRED_T = "paired-t"
    WILCOXON_SIGNED_RANK = "wilcoxon-signed-rank"


@dataclass(frozen=True)
class PairedMeasures:
    """Per-participant paired observations for one measure.

    Pairing is positional: a[i] and b[i] belong to the same participant.
    """

    label: str
    a: tuple[float, ...]
    b: tuple[float, ...]

    def __init__(self, label: str, a: Sequence[float], b: Sequence[float]):
        if len(a) != len(b):
            raise LengthMismatch(
                f"{label!r}: condition lengths differ ({len(a)} vs {len(b)})"
            )
        if len(a) < 2:
            raise LengthMismatch(f"{label!r}: need at least 2 pairs, got {len(a)}")
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "a", tuple(float(x) for x in a))
        object.__setattr__(self, "b", tuple(float(x) for x in b))

    @property
    def n(self) -> int:
        return len(self.a)

    def differences(self) -> list[float]:
        return [y - x for x, y in zip(self.a, self.b)]


@dataclass(frozen=True)
class TestResult:
    method: Method
    statistic: float
    p: float
    n: int
    note: str = field(default="")


def paired_t(m: PairedMeasures) -> TestResult:
    """Two-sided paired t-test on b - a differences."""
    diffs = m.differences()
    n = len(diffs)
    mean = math.fsum(diffs) / n
    sd = math.sqrt(math.fsum((d - mean) ** 2 for d in diffs) / (n - 1))
    if sd == 0.0:
        raise ZeroVariance(f"{m.label!r}: paired differences are all identical")
    t = mean / (sd / math.sqrt(n))
    p = 2.0 * float(t_distribution.sf(abs(t), n - 1))
    return TestResult(Method.PAIRED_T, t, min(1.0, p), n)


def _midranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mid = (i + j) / 2 + 1  # ranks are 1-based
        for k in range(i, j + 1):
            ranks[order[k]] = mid
        i = j + 1
    return ranks


def _exact_two_sided_p(ranks: Sequence[float], w_plus: float) -> float:
    """Exact p over all sign assignments; ranks must be untied integers.

    Counts rank subsets whose sum is at least as far from the null center
    n(n+1)/4 as the observed statistic. Comparisons run on 4x-scaled
    integers so the result is the exact count divided by 2^n.
    """
    n = len(ranks)
    total = n * (n + 1) // 2
    counts = [0] * (total + 1)
    counts[0] = 1
    for r in range(1, n + 1):
        for s in range(total, r - 1, -1):
            counts[s] += counts[s - r]
    threshold = abs(4 * int(round(w_plus)) - n * (n + 1))
    matching = sum(
        c for s, c in enumerate(counts) if abs(4 * s - n * (n + 1)) >= threshold
    )
    return matching / 2**n


def wilcoxon_signed_rank(m: PairedMeasures, *, exact_limit: int = 25) -> TestResult:
    """Two-sided Wilcoxon signed-rank test on b - a differences.

    Zero differences are dropped (noted in the result). Tied absolute
    differences get midranks. The p-value is exact (full enumeration over
    sign assignments) when n <= exact_limit and no ties exist; otherwise a
    normal approximation with tie and continuity corrections is used.
    """
    diffs = [d for d in m.differences() if d != 0.0]
    dropped = m.n - len(diffs)
    if not diffs:
        raise AllZeroDifferences(f"{m.label!r}: all paired differences are zero")
    n = len(diffs)
    abs_diffs = [abs(d) for d in diffs]
    ranks = _midranks(abs_diffs)
    w_plus = math.fsum(r for r, d in zip(ranks, diffs) if d > 0)

    notes = []
    if dropped:
        notes.append(f"dropped {dropped} zero difference(s)")

    has_ties = len(set(abs_diffs)) != n
    if not has_ties and n <= exact_limit:
        p = _exact_two_sided_p(ranks, w_plus)
        notes.append("exact enumeration")
    else:
        center = n * (n + 1) / 4
        tie_term = 0.0
        seen: dict[float, int] = {}
        for v in abs_diffs:
            seen[v] = seen.get(v, 0) + 1
        for count in seen.values():
            tie_term += count**3 - count
        variance = n * (n + 1) * (2 * n + 1) / 24 - tie_term / 48
        offset = w_plus - center
        if offset == 0.0:
            p = 1.0
        else:
            z = (offset - math.copysign(0.5, offset)) / math.sqrt(variance)
            p = 2.0 * (1.0 - NormalDist().cdf(abs(z)))
        notes.append("normal approximation with tie and continuity correction")

    return TestResult(
        Method.WILCOXON_SIGNED_RANK, w_plus, min(1.0, p), n, "; ".join(notes)
    )
