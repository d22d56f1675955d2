"""Survey scoring for creativity-support and workload instruments."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping


class InvalidItemScore(ValueError):
    """Raised when a survey item score lies outside its scale."""


class WeightsDontSumTo10(ValueError):
    """Raised when pairwise-comparison wins do not form a valid weighting."""


class CsiFactor(str, Enum):
    ENJOYMENT = "Enjoyment"
    EXPLORATION = "Exploration"
    EXPRESSIVENESS = "Expressiveness"
    IMMERSION = "Immersion"
    RESULTS_WORTH_EFFORT = "ResultsWorthEffort"


CSI_FACTORS: tuple[CsiFactor, ...] = tuple(CsiFactor)

# 5 factors -> C(5,2) = 10 pairwise comparisons to distribute.
_TOTAL_WINS = 10


@dataclass(frozen=True)
class CsiResponse:
    """One participant's creativity-support answers for one condition.

    Each factor gets two item scores in [0, 10] (factor score = their sum)
    and a pairwise-comparison win count; the five win counts sum to 10.
    """

    item_scores: Mapping[CsiFactor, tuple[float, float]]
    pairwise_wins: Mapping[CsiFactor, int]

    def __post_init__(self) -> None:
        for factor in CSI_FACTORS:
            if factor not in self.item_scores:
                raise InvalidItemScore(f"missing item scores for {factor.value}")
            if factor not in self.pairwise_wins:
                raise WeightsDontSumTo10(f"missing win count for {factor.value}")
        for factor, items in self.item_scores.items():
            if len(items) != 2:
                raise InvalidItemScore(f"{factor.value}: expected two item scores")
            for score in items:
                if not 0 <= score <= 10:
                    raise InvalidItemScore(
                        f"{factor.value}: item score {score} outside [0, 10]"
                    )
        wins = list(self.pairwise_wins.values())
        if any(w < 0 or int(w) != w for w in wins):
            raise WeightsDontSumTo10(f"win counts must be nonnegative integers: {wins}")
        if sum(wins) != _TOTAL_WINS:
            raise WeightsDontSumTo10(f"win counts sum to {sum(wins)}, expected 10")


def csi_score(r: CsiResponse) -> tuple[dict[CsiFactor, float], float]:
    """Return per-factor scores in [0, 20] and the weighted overall in [0, 100].

    overall = sum(factor_score * wins) / 2; with win counts summing to 10
    and factor scores capped at 20 this spans exactly [0, 100].
    """
    factor_scores = {
        factor: items[0] + items[1] for factor, items in r.item_scores.items()
    }
    overall = (
        sum(factor_scores[f] * r.pairwise_wins[f] for f in CSI_FACTORS) / 2
    )
    return factor_scores, overall


TLX_SCALES = (
    "mental",
    "physical",
    "temporal",
    "performance",
    "effort",
    "frustration",
)


@dataclass(frozen=True)
class TlxResponse:
    """Raw workload ratings, one integer per scale on [scale_min, scale_max]."""

    mental: int
    physical: int
    temporal: int
    performance: int
    effort: int
    frustration: int
    scale_min: int = 1
    scale_max: int = 5

    def __post_init__(self) -> None:
        if self.scale_min >= self.scale_max:
            raise ValueError("scale_min must be below scale_max")
        for name in TLX_SCALES:
            rating = getattr(self, name)
            if not self.scale_min <= rating <= self.scale_max:
                raise InvalidItemScore(
                    f"{name}: rating {rating} outside "
                    f"[{self.scale_min}, {self.scale_max}]"
                )

    def ratings(self) -> dict[str, int]:
        return {name: getattr(self, name) for name in TLX_SCALES}
