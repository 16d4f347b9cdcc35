"""Point estimators: Pearson, Kendall's tau (and its sine transform),
regular Gini correlations, the symmetric Gini correlation and its
corrected version, empirical spatial ranks, and a permutation test of
exchangeability.

All pairwise statistics run over the fixed pair order i < j through the
kernel backend, so results are reproducible bit-for-bit across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from . import _backend as kernels
from .core import BivariateSample, CorrelationValue, clamp_correlation, is_constant
from .elliptic import invert_k
from .errors import DegenerateColumn, DomainError, TooFewPoints

_MASK64 = (1 << 64) - 1


def pearson(sample: BivariateSample) -> CorrelationValue:
    """Product-moment correlation; requires both columns non-constant."""
    for name, col in (("x", sample.xs), ("y", sample.ys)):
        if is_constant(col):
            raise DegenerateColumn(f"column {name} is constant")
    dx = sample.xs - np.mean(sample.xs)
    dy = sample.ys - np.mean(sample.ys)
    # Normalize before combining: the product of the two sums can
    # under/overflow at extreme data scales even when each is benign.
    sx = math.sqrt(np.dot(dx, dx))
    sy = math.sqrt(np.dot(dy, dy))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateColumn("column is constant at working precision")
    r = float(np.dot(dx / sx, dy / sy))
    return CorrelationValue(r, "pearson")


def kendall_tau(sample: BivariateSample, tie_correction: bool = True) -> CorrelationValue:
    """Kendall rank correlation from pairwise concordance counts.

    Tied pairs contribute 0 to the numerator.  With ``tie_correction``
    the denominator is sqrt(P_x * P_y) over the non-tied pair counts
    (the tie-adjusted statistic, which published reference values for
    tied data use); without it the denominator is the plain C(n, 2).
    The two coincide on tie-free data.
    """
    for name, col in (("x", sample.xs), ("y", sample.ys)):
        if is_constant(col):
            raise DegenerateColumn(f"column {name} is constant")
    num, px, py = kernels.kendall_stats(sample.xs, sample.ys)
    if tie_correction:
        denom = math.sqrt(float(px) * float(py))
    else:
        denom = sample.n * (sample.n - 1) / 2.0
    return CorrelationValue(num / denom, "kendall_tau")


def rho_from_tau(tau: float) -> CorrelationValue:
    """Map Kendall's tau to the elliptical correlation: sin(pi tau / 2)."""
    if not (-1.0 <= tau <= 1.0):
        raise DomainError(f"tau must lie in [-1, 1], got {tau}")
    return CorrelationValue(math.sin(math.pi * tau / 2.0), "tau_to_rho")


def _indicator_column(col: np.ndarray, ties: str) -> np.ndarray:
    if ties == "kernel":
        return col
    if ties == "break_by_order":
        # Ordinal ranks resolve ties by data position, matching
        # concomitant-of-order-statistics computations on tied data.
        return rankdata(col, method="ordinal").astype(np.float64)
    raise DomainError(f"ties must be 'kernel' or 'break_by_order', got {ties!r}")


def gini_regular(
    sample: BivariateSample, direction: str = "xy", ties: str = "kernel"
) -> CorrelationValue:
    """Regular (marginal-rank) Gini correlation as a U-statistic ratio.

    Direction ``xy`` estimates cov(X, G(Y)) / cov(X, F(X)); ``yx`` swaps
    the roles.  ``ties`` selects how tied indicator values enter: the
    plain sign kernel (ties give 0) or position-broken ties.
    """
    if direction == "xy":
        xv, yv, tag = sample.xs, sample.ys, "gini_xy"
    elif direction == "yx":
        xv, yv, tag = sample.ys, sample.xs, "gini_yx"
    else:
        raise DomainError(f"direction must be 'xy' or 'yx', got {direction!r}")
    if is_constant(xv):
        raise DegenerateColumn("denominator column is constant")
    s1, s2 = kernels.regular_gini_sums(xv, _indicator_column(yv, ties))
    return CorrelationValue(s1 / s2, tag)


@dataclass(frozen=True)
class GiniComponents:
    """The three pairwise sums behind the symmetric Gini correlation:
    t1 ~ cov_g(X, X), t2 ~ cov_g(X, Y), t3 ~ cov_g(Y, Y) (unnormalized)."""

    t1: float
    t2: float
    t3: float


def symmetric_gini_components(sample: BivariateSample) -> GiniComponents:
    """Sums over pairs i<j of dx^2/d, dx dy/d, dy^2/d with d = |z_i - z_j|.

    Coincident pairs contribute 0 to all three sums (spatial sign of the
    zero vector is zero).
    """
    t1, t2, t3 = kernels.symgini_components(sample.xs, sample.ys)
    return GiniComponents(t1, t2, t3)


def symmetric_gini(sample: BivariateSample) -> CorrelationValue:
    """Symmetric Gini correlation t2 / sqrt(t1 t3).

    Symmetric in the two columns; invariant under common translation and
    common scaling (a != 0); sensitive to heterogeneous scaling.
    """
    c = symmetric_gini_components(sample)
    if c.t1 <= 0.0 or c.t3 <= 0.0:
        raise DegenerateColumn("pairwise Gini variance vanished (constant column?)")
    return CorrelationValue(
        c.t2 / (math.sqrt(c.t1) * math.sqrt(c.t3)), "symmetric_gini"
    )


def corrected_symmetric_gini(sample: BivariateSample) -> CorrelationValue:
    """Fisher-consistent estimate of the elliptical correlation parameter:
    the k-map inverse of the symmetric Gini correlation.

    Only meaningful as an estimator of rho under homogeneous elliptical
    models; for other data it simply reports k^-1 of the statistic.
    """
    rho_g = clamp_correlation(symmetric_gini(sample).value)
    return CorrelationValue(invert_k(rho_g), "corrected_symmetric_gini")


def _sample_columns(sample):
    if isinstance(sample, BivariateSample):
        return sample.xs, sample.ys
    pts = np.asarray(sample, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
        raise DomainError("expected a BivariateSample or an (n, 2) array")
    return np.ascontiguousarray(pts[:, 0]), np.ascontiguousarray(pts[:, 1])


def empirical_spatial_rank(point, sample) -> np.ndarray:
    """Average unit vector from the sample points toward ``point``.

    Terms with a sample point equal to ``point`` contribute zero; the
    result has Euclidean norm <= 1.
    """
    p = np.asarray(point, dtype=np.float64).reshape(-1)
    if p.size != 2 or not np.all(np.isfinite(p)):
        raise DomainError("point must be a finite 2-vector")
    xs, ys = _sample_columns(sample)
    dx = p[0] - xs
    dy = p[1] - ys
    d = np.hypot(dx, dy)
    keep = d > 0.0
    inv = np.zeros_like(d)
    np.divide(1.0, d, out=inv, where=keep)
    return np.array([np.sum(dx * inv), np.sum(dy * inv)]) / xs.size


@dataclass(frozen=True)
class ExchangeabilityResult:
    """Permutation test of gamma(X,Y) = gamma(Y,X) on standardized columns."""

    statistic: float
    p_value: float
    n_permutations: int
    seed: int


def _mad_standardize(col: np.ndarray) -> np.ndarray:
    med = np.median(col)
    mad = np.median(np.abs(col - med))
    if mad == 0.0:
        raise DegenerateColumn("median absolute deviation is zero")
    return (col - med) / mad


def _gamma_diff(x: np.ndarray, y: np.ndarray) -> float:
    s1, s2 = kernels.regular_gini_sums(x, y)
    t1, t2 = kernels.regular_gini_sums(y, x)
    if s2 == 0.0 or t2 == 0.0:
        raise DegenerateColumn("constant column inside permutation statistic")
    return s1 / s2 - t1 / t2


def exchangeability_test(
    sample: BivariateSample, n_permutations: int = 9999, seed: int = 0
) -> ExchangeabilityResult:
    """Two-sided permutation test of exchangeability of the two columns.

    The statistic is the difference of the two regular Gini correlations
    on median/MAD standardized columns.  The null distribution swaps
    (x_i, y_i) -> (y_i, x_i) independently per observation; the p-value
    uses add-one smoothing.  Deterministic for a fixed seed.
    """
    if sample.n < 8:
        raise TooFewPoints(f"exchangeability test needs n >= 8, got {sample.n}")
    if n_permutations < 99:
        raise DomainError(f"need at least 99 permutations, got {n_permutations}")
    xs = _mad_standardize(sample.xs)
    ys = _mad_standardize(sample.ys)
    observed = _gamma_diff(xs, ys)
    gen = np.random.Generator(np.random.Philox(key=[seed & _MASK64, 0]))
    exceed = 0
    for _ in range(n_permutations):
        swap = gen.random(sample.n) < 0.5
        xp = np.where(swap, ys, xs)
        yp = np.where(swap, xs, ys)
        if abs(_gamma_diff(xp, yp)) >= abs(observed):
            exceed += 1
    p_value = (1.0 + exceed) / (n_permutations + 1.0)
    return ExchangeabilityResult(observed, p_value, n_permutations, seed)
