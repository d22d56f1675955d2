"""Statistics toolkit for paired within-subjects study data.

Descriptive statistics, normality testing, paired significance tests with a
normality-gated test selection rule, step-down multiple-comparison
correction, survey scoring (creativity-support and workload instruments),
and interaction-event analytics.
"""

from draftcanvas.stats.correction import OutOfRange, holm_bonferroni
from draftcanvas.stats.descriptive import Descriptive, EmptySample, descriptive
from draftcanvas.stats.events import event_log_summary
from draftcanvas.stats.family import FamilyRow, analyze_paired_family
from draftcanvas.stats.normality import (
    ConstantSample,
    SampleTooLarge,
    SampleTooSmall,
    ShapiroResult,
    shapiro_wilk,
)
from draftcanvas.stats.paired import (
    AllZeroDifferences,
    LengthMismatch,
    PairedMeasures,
    TestResult,
    ZeroVariance,
    paired_t,
    wilcoxon_signed_rank,
)
from draftcanvas.stats.surveys import (
    CSI_FACTORS,
    CsiResponse,
    InvalidItemScore,
    TlxResponse,
    WeightsDontSumTo10,
    csi_score,
)

__all__ = [
    "AllZeroDifferences",
    "CSI_FACTORS",
    "ConstantSample",
    "CsiResponse",
    "Descriptive",
    "EmptySample",
    "FamilyRow",
    "InvalidItemScore",
    "LengthMismatch",
    "OutOfRange",
    "PairedMeasures",
    "SampleTooLarge",
    "SampleTooSmall",
    "ShapiroResult",
    "TestResult",
    "TlxResponse",
    "WeightsDontSumTo10",
    "ZeroVariance",
    "analyze_paired_family",
    "csi_score",
    "descriptive",
    "event_log_summary",
    "holm_bonferroni",
    "paired_t",
    "shapiro_wilk",
    "wilcoxon_signed_rank",
]
