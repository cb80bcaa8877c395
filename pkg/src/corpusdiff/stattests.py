"""Welch two-sample t-tests, p-value matrices, relative differences.

The two-sided p-value comes from the Student-t CDF evaluated through the
regularized incomplete beta function, computed here with a modified
Lentz continued fraction (relative tolerance 1e-12) so reported p-values
are bit-stable across platforms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .lexical import MetricError


@dataclass(slots=True)
class TTestResult:
    t: float
    df: float
    p: float


@dataclass(slots=True)
class PValueMatrix:
    labels: list[str]
    cells: list[list[float]]  # symmetric, diagonal exactly 1

    def to_dict(self) -> dict:
        return {"labels": self.labels, "cells": self.cells}

    @classmethod
    def from_dict(cls, data: dict) -> "PValueMatrix":
        return cls(labels=list(data["labels"]), cells=[list(r) for r in data["cells"]])


_BETACF_MAX_ITER = 300
_BETACF_EPS = 1e-12
_BETACF_TINY = 1e-300


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _BETACF_TINY:
        d = _BETACF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _BETACF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _BETACF_TINY:
            d = _BETACF_TINY
        c = 1.0 + aa / c
        if abs(c) < _BETACF_TINY:
            c = _BETACF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _BETACF_TINY:
            d = _BETACF_TINY
        c = 1.0 + aa / c
        if abs(c) < _BETACF_TINY:
            c = _BETACF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETACF_EPS:
            return h
    raise MetricError(f"incomplete beta did not converge for a={a} b={b} x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise MetricError("incomplete beta requires positive parameters")
    if x < 0.0 or x > 1.0:
        raise MetricError(f"incomplete beta argument {x} outside [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_sf_two_sided(t: float, df: float) -> float:
    """P(|T| >= t) for T ~ Student-t with df degrees of freedom."""
    if df <= 0:
        raise MetricError(f"degrees of freedom {df} must be positive")
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


def _mean_var(xs: list[float]) -> tuple[float, float]:
    n = len(xs)
    mean = sum(xs) / n
    var = sum((x - mean) ** 2 for x in xs) / (n - 1)
    return mean, var


def welch_t_test(xs: list[float], ys: list[float]) -> TTestResult:
    """Welch unequal-variance t-test, two-sided.

    Degenerate samples with zero variance on both sides map to p = 1
    (equal means) or p = 0 (unequal means) by convention.
    """
    if len(xs) < 2 or len(ys) < 2:
        raise MetricError("each sample needs at least 2 elements")
    m1, v1 = _mean_var(xs)
    m2, v2 = _mean_var(ys)
    n1, n2 = len(xs), len(ys)
    se2 = v1 / n1 + v2 / n2
    if se2 == 0.0:
        if m1 == m2:
            return TTestResult(t=0.0, df=float(n1 + n2 - 2), p=1.0)
        return TTestResult(t=math.inf if m1 > m2 else -math.inf,
                           df=float(n1 + n2 - 2), p=0.0)
    t = (m1 - m2) / math.sqrt(se2)
    df = se2 * se2 / (
        (v1 / n1) ** 2 / (n1 - 1) + (v2 / n2) ** 2 / (n2 - 1)
    )
    return TTestResult(t=t, df=df, p=student_t_sf_two_sided(abs(t), df))


def pvalue_matrix(samples: dict[str, list[float]]) -> PValueMatrix:
    """Pairwise Welch p-values over named samples; diagonal exactly 1."""
    labels = list(samples)
    if len(labels) < 2:
        raise MetricError("p-value matrix needs at least 2 corpora")
    k = len(labels)
    cells = [[1.0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            p = welch_t_test(samples[labels[i]], samples[labels[j]]).p
            cells[i][j] = p
            cells[j][i] = p
    return PValueMatrix(labels=labels, cells=cells)


def relative_difference(model_value: float, reference_value: float) -> float:
    """100 * (model - reference) / reference."""
    if reference_value == 0:
        raise MetricError("relative difference against a zero reference")
    return 100.0 * (model_value - reference_value) / reference_value
