"""Descriptive statistics: mean, sample standard deviation, median."""

from __future__ import annotations

import math
from collections import namedtuple
from typing import Sequence

Descriptive = namedtuple("Descriptive", ("mean", "sd", "median"))


class EmptySample(ValueError):
    """Raised when a sample contains no observations."""


def descriptive(sample: Sequence[float]) -> Descriptive:
    """Return (mean, sd, median) for a sample.

    The standard deviation uses the n-1 denominator and is 0.0 for a single
    observation. The median uses the midpoint rule for even-length samples.
    """
    n = len(sample)
    if n == 0:
        raise EmptySample("descriptive statistics need at least one observation")
    mean = math.fsum(sample) / n
    if n == 1:
        sd = 0.0
    else:
        sd = math.sqrt(math.fsum((x - mean) ** 2 for x in sample) / (n - 1))
    ordered = sorted(sample)
    mid = n // 2
    if n % 2 == 1:
        median = float(ordered[mid])
    else:
        median = (ordered[mid - 1] + ordered[mid]) / 2
    return Descriptive(mean, sd, median)
