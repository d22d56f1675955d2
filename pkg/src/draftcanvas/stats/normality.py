"""Shapiro-Wilk W test for normality.

Implements Royston's 1995 approximation (Applied Statistics algorithm
AS R94) for complete samples: coefficients from normal order-statistic
means normalized with the published correction polynomials, and the
W -> p transform via a lognormal/normal approximation of 1 - W.
"""

from __future__ import annotations

import math
from collections import namedtuple
from statistics import NormalDist
from typing import Sequence

ShapiroResult = namedtuple("ShapiroResult", ("statistic", "pvalue"))


class SampleTooSmall(ValueError):
    """Raised for samples with fewer than 3 observations."""


class SampleTooLarge(ValueError):
    """Raised for samples above the approximation's validated range."""


class ConstantSample(ValueError):
    """Raised when all observations are (numerically) identical."""


_MAX_N = 5000
_TINY = 1e-19

# Correction polynomials, ascending powers (AS R94).
_C1 = (0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056)
_C2 = (0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633)
_C3 = (0.544, -0.39978, 0.025054, -6.714e-4)
_C4 = (1.3822, -0.77857, 0.062767, -0.0020322)
_C5 = (-1.5861, -0.31082, -0.083751, 0.0038915)
_C6 = (-0.4803, -0.082676, 0.0030302)
_G = (-2.273, 0.459)

_PI6 = 1.90985931710274  # 6/pi
_STQR = 1.04719755119660  # pi/3


def _poly(coeffs: Sequence[float], x: float) -> float:
    total = 0.0
    for c in reversed(coeffs):
        total = total * x + c
    return total


def _coefficients(n: int) -> list[float]:
    """Half-vector of W coefficients; index 0 pairs the sample extremes."""
    n2 = n // 2
    if n == 3:
        return [math.sqrt(0.5)]
    nd = NormalDist()
    an25 = n + 0.25
    m = [nd.inv_cdf((i - 0.375) / an25) for i in range(1, n2 + 1)]
    summ2 = 2.0 * math.fsum(v * v for v in m)
    ssumm2 = math.sqrt(summ2)
    rsn = 1.0 / math.sqrt(n)
    a1 = _poly(_C1, rsn) - m[0] / ssumm2
    a = [0.0] * n2
    if n > 5:
        start = 2
        a2 = -m[1] / ssumm2 + _poly(_C2, rsn)
        fac = math.sqrt(
            (summ2 - 2.0 * m[0] ** 2 - 2.0 * m[1] ** 2)
            / (1.0 - 2.0 * a1**2 - 2.0 * a2**2)
        )
        a[1] = a2
    else:
        start = 1
        fac = math.sqrt((summ2 - 2.0 * m[0] ** 2) / (1.0 - 2.0 * a1**2))
    a[0] = a1
    for i in range(start, n2):
        a[i] = -m[i] / fac
    return a


def shapiro_wilk(sample: Sequence[float]) -> ShapiroResult:
    """Return (W, p) for the null hypothesis that the sample is normal.

    Valid for 3 <= n <= 5000 non-constant samples. For n == 3 the p-value
    is exact; otherwise it comes from the AS R94 normalizing transform of
    log(1 - W).
    """
    n = len(sample)
    if n < 3:
        raise SampleTooSmall(f"need at least 3 observations, got {n}")
    if n > _MAX_N:
        raise SampleTooLarge(f"approximation validated up to n={_MAX_N}, got {n}")
    xs = sorted(float(x) for x in sample)
    spread = xs[-1] - xs[0]
    if spread < _TINY:
        raise ConstantSample("sample has (numerically) zero range")

    a = _coefficients(n)
    mean = math.fsum(xs) / n
    ssq = math.fsum((x - mean) ** 2 for x in xs)
    num = math.fsum(a[i] * (xs[n - 1 - i] - xs[i]) for i in range(n // 2))
    w = min(1.0, num * num / ssq)

    if n == 3:
        p = _PI6 * (math.asin(math.sqrt(w)) - _STQR)
        return ShapiroResult(w, min(1.0, max(0.0, p)))

    w1 = 1.0 - w
    if w1 <= 0.0:
        return ShapiroResult(w, 1.0)
    y = math.log(w1)
    an = float(n)
    if n <= 11:
        gamma = _poly(_G, an)
        if y >= gamma:
            return ShapiroResult(w, _TINY)
        y = -math.log(gamma - y)
        mu = _poly(_C3, an)
        sigma = math.exp(_poly(_C4, an))
    else:
        lan = math.log(an)
        mu = _poly(_C5, lan)
        sigma = math.exp(_poly(_C6, lan))
    p = 1.0 - NormalDist().cdf((y - mu) / sigma)
    return ShapiroResult(w, min(1.0, max(0.0, p)))
