"""Affine-equivariant Gini scatter matrix via fixed-point iteration, and
the affine-invariant symmetric Gini correlation read off from it."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend as kernels
from .core import BivariateSample, CorrelationValue, ScatterMatrix2
from .errors import DegenerateSample, DomainError, NonConvergence

_DET_FLOOR = 1e-300


@dataclass(frozen=True)
class FixedPointConfig:
    """Stopping rule: relative Frobenius residual below ``tolerance`` or
    ``max_iterations`` reached."""

    tolerance: float = 1e-10
    max_iterations: int = 200

    def __post_init__(self):
        if not (self.tolerance > 0.0):
            raise DomainError(f"tolerance must be > 0, got {self.tolerance}")
        if self.max_iterations < 1:
            raise DomainError(f"max_iterations must be >= 1, got {self.max_iterations}")


@dataclass(frozen=True)
class FixedPointReport:
    sigma: ScatterMatrix2
    iterations: int
    final_residual: float
    converged: bool


def spd_sqrt(m: ScatterMatrix2) -> ScatterMatrix2:
    """Symmetric square root of a 2x2 SPD matrix, closed form:
    (M + sqrt(det) I) / sqrt(trace + 2 sqrt(det))."""
    s = math.sqrt(m.det())
    scale = 1.0 / math.sqrt(m.trace() + 2.0 * s)
    return ScatterMatrix2((m.g11 + s) * scale, m.g12 * scale, (m.g22 + s) * scale)


def fit_gini_scatter(
    sample: BivariateSample, config: FixedPointConfig | None = None
) -> FixedPointReport:
    """Fit the affine-equivariant Gini scatter by re-weighted iteration.

    Starting from the identity, each step averages the pairwise
    difference outer products weighted by the inverse Mahalanobis length
    under the current iterate; coincident pairs are skipped.  Raises
    DegenerateSample when the iterate turns singular (collinear data)
    and NonConvergence (carrying the last report) at the iteration cap.
    """
    cfg = config or FixedPointConfig()
    xs, ys = sample.xs, sample.ys
    distinct = np.unique(sample.points(), axis=0).shape[0]
    if distinct < 2:
        raise DegenerateSample("fewer than 2 distinct points")
    scale = 2.0 / (sample.n * (sample.n - 1))
    s11, s12, s22 = 1.0, 0.0, 1.0
    residual = math.inf
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        det = s11 * s22 - s12 * s12
        if not math.isfinite(det) or det <= _DET_FLOOR:
            raise DegenerateSample("scatter iterate is singular (collinear sample?)")
        a, b, c = s22 / det, -s12 / det, s11 / det
        p11, p12, p22 = kernels.scatter_pair_sums(xs, ys, a, b, c)
        if not (math.isfinite(p11) and math.isfinite(p12) and math.isfinite(p22)):
            raise DegenerateSample("scatter iterate lost positive definiteness")
        n11, n12, n22 = scale * p11, scale * p12, scale * p22
        norm_old = math.sqrt(s11 * s11 + 2.0 * s12 * s12 + s22 * s22)
        diff = math.sqrt(
            (n11 - s11) ** 2 + 2.0 * (n12 - s12) ** 2 + (n22 - s22) ** 2
        )
        residual = diff / norm_old
        s11, s12, s22 = n11, n12, n22
        if residual < cfg.tolerance:
            sigma = _as_scatter(s11, s12, s22)
            return FixedPointReport(sigma, iterations, residual, True)
    report = FixedPointReport(_as_scatter(s11, s12, s22), iterations, residual, False)
    raise NonConvergence(
        f"no convergence in {cfg.max_iterations} iterations "
        f"(residual {residual:.3e} >= tolerance {cfg.tolerance:.3e})",
        report=report,
    )


def _as_scatter(s11, s12, s22) -> ScatterMatrix2:
    try:
        return ScatterMatrix2(s11, s12, s22)
    except DomainError as exc:
        raise DegenerateSample(f"fitted scatter is not positive definite: {exc}") from exc


def affine_symmetric_gini(
    sample: BivariateSample, config: FixedPointConfig | None = None
) -> CorrelationValue:
    """Normalized off-diagonal of the fitted Gini scatter.

    Invariant up to sign under any heterogeneous rescaling of the two
    columns (changes sign with the sign of the scale product).
    """
    report = fit_gini_scatter(sample, config)
    return CorrelationValue(report.sigma.correlation(), "affine_symmetric_gini")


def _fit_scatter_nd(points: np.ndarray, tolerance: float = 1e-10, max_iterations: int = 200):
    """d-dimensional variant of the fixed point on raw points (numpy path).

    Internal: used for multi-column dataset reports where one scatter fit
    per group yields every pairwise correlation at once.  Returns
    (matrix, iterations, residual, converged).
    """
    z = np.asarray(points, dtype=np.float64)
    n, d = z.shape
    iu = np.triu_indices(n, 1)
    diffs = z[iu[0]] - z[iu[1]]
    diffs = diffs[~np.all(diffs == 0.0, axis=1)]
    if diffs.shape[0] == 0:
        raise DegenerateSample("fewer than 2 distinct points")
    scale = 2.0 / (n * (n - 1))
    s = np.eye(d)
    residual = math.inf
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        det = np.linalg.det(s)
        if not math.isfinite(det) or det <= _DET_FLOOR:
            raise DegenerateSample("scatter iterate is singular (collinear sample?)")
        q = np.einsum("ij,jk,ik->i", diffs, np.linalg.inv(s), diffs)
        if np.any(q <= 0.0) or not np.all(np.isfinite(q)):
            raise DegenerateSample("scatter iterate lost positive definiteness")
        s_new = scale * (diffs / np.sqrt(q)[:, None]).T @ diffs
        residual = float(np.linalg.norm(s_new - s) / np.linalg.norm(s))
        s = s_new
        if residual < tolerance:
            return s, iterations, residual, True
    return s, iterations, residual, False
