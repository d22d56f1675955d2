"""Whole-family paired analysis: normality-gated tests plus Holm correction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from draftcanvas.stats.correction import holm_bonferroni
from draftcanvas.stats.descriptive import Descriptive, descriptive
from draftcanvas.stats.normality import (
    ConstantSample,
    SampleTooSmall,
    shapiro_wilk,
)
from draftcanvas.stats.paired import (
    AllZeroDifferences,
    LengthMismatch,
    Method,
    PairedMeasures,
    paired_t,
    wilcoxon_signed_rank,
)


@dataclass(frozen=True)
class FamilyRow:
    """One report row: descriptives per condition plus the gated test."""

    label: str
    n: int
    a: Descriptive
    b: Descriptive
    method: Method | None
    statistic: float | None
    p_raw: float | None
    p_adjusted: float | None
    note: str = ""


def analyze_paired_family(
    measures: Sequence[PairedMeasures], alpha: float = 0.05
) -> list[FamilyRow]:
    """Analyze a family of paired measures the way a within-subjects study is.

    Per measure: descriptive statistics per condition, then a Shapiro-Wilk
    test on the paired differences gates the significance test (normal at
    level alpha -> paired t, otherwise Wilcoxon signed-rank). Raw p-values
    are Holm-adjusted across the family. Measures whose differences are all
    zero yield "n/a" rows (no p-value) and do not enter the correction.
    """
    if not measures:
        return []
    n = measures[0].n
    for m in measures:
        if m.n != n:
            raise LengthMismatch(
                f"{m.label!r}: expected {n} pairs like the rest of the family, "
                f"got {m.n}"
            )

    rows: list[FamilyRow] = []
    testable: list[int] = []
    for m in measures:
        stats_a = descriptive(m.a)
        stats_b = descriptive(m.b)
        diffs = m.differences()
        try:
            use_t, gate_note = _gate(diffs, alpha)
            result = paired_t(m) if use_t else wilcoxon_signed_rank(m)
        except AllZeroDifferences:
            rows.append(
                FamilyRow(
                    m.label, m.n, stats_a, stats_b,
                    None, None, None, None, "all differences zero",
                )
            )
            continue
        note = "; ".join(part for part in (gate_note, result.note) if part)
        testable.append(len(rows))
        rows.append(
            FamilyRow(
                m.label, m.n, stats_a, stats_b,
                result.method, result.statistic, result.p, None, note,
            )
        )

    if testable:
        adjusted = holm_bonferroni([rows[i].p_raw for i in testable])
        for i, p_adj in zip(testable, adjusted):
            row = rows[i]
            rows[i] = FamilyRow(
                row.label, row.n, row.a, row.b,
                row.method, row.statistic, row.p_raw, p_adj, row.note,
            )
    return rows


def _gate(diffs: Sequence[float], alpha: float) -> tuple[bool, str]:
    """Pick the test for a difference vector; True means paired t."""
    try:
        normality = shapiro_wilk(diffs)
    except ConstantSample:
        return False, "normality gate skipped (constant differences)"
    except SampleTooSmall:
        return False, "normality gate skipped (too few pairs)"
    if normality.pvalue >= alpha:
        return True, f"differences normal (Shapiro-Wilk p={normality.pvalue:.3g})"
    return False, f"differences non-normal (Shapiro-Wilk p={normality.pvalue:.3g})"
