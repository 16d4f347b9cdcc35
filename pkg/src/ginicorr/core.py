"""Domain types, input validation, and shared numeric conventions.

All types are immutable after construction and safe to share across
concurrent tasks.  Internal arithmetic is 64-bit floating point
throughout; correlation outputs are clamped to [-1, 1] after all
arithmetic because ratio estimators can overshoot by ~1e-15.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DomainError,
    LengthMismatch,
    NonFiniteValue,
    NotPositiveDefinite,
    TooFewPoints,
)

#: Tags of every point estimator the toolkit produces.
ESTIMATOR_TAGS = (
    "pearson",
    "kendall_tau",
    "tau_to_rho",
    "gini_xy",
    "gini_yx",
    "symmetric_gini",
    "corrected_symmetric_gini",
    "affine_symmetric_gini",
)

#: Numerical slack allowed before clamping a correlation into [-1, 1].
CORRELATION_SLACK = 1e-12


@dataclass(frozen=True)
class BivariateSample:
    """Immutable paired observations (x_i, y_i), the universal input.

    Construct through :func:`validate_sample`; the arrays are stored as
    read-only float64 and are never mutated by any operation.
    """

    xs: np.ndarray
    ys: np.ndarray
    n: int

    def points(self) -> np.ndarray:
        """Observations as an (n, 2) array (fresh copy)."""
        return np.column_stack([self.xs, self.ys])

    def swapped(self) -> "BivariateSample":
        """The same observations with the roles of x and y exchanged."""
        return BivariateSample(self.ys, self.xs, self.n)


def validate_sample(xs: Sequence[float], ys: Sequence[float]) -> BivariateSample:
    """Validate paired input and return a :class:`BivariateSample`.

    Raises
    ------
    LengthMismatch
        if the sequences differ in length.
    TooFewPoints
        if fewer than 2 observations are supplied.
    NonFiniteValue
        if any entry is NaN or infinite (reports the first offending index).
    """
    x = np.asarray(xs, dtype=np.float64).reshape(-1)
    y = np.asarray(ys, dtype=np.float64).reshape(-1)
    if x.size != y.size:
        raise LengthMismatch(f"x has {x.size} values, y has {y.size}")
    if x.size < 2:
        raise TooFewPoints(f"need at least 2 observations, got {x.size}")
    for name, col in (("x", x), ("y", y)):
        bad = ~np.isfinite(col)
        if bad.any():
            idx = int(np.argmax(bad))
            raise NonFiniteValue(f"non-finite {name} value at index {idx}", index=idx)
    # Private copies so later mutation of the caller's buffers cannot leak in.
    x = x.copy()
    y = y.copy()
    x.setflags(write=False)
    y.setflags(write=False)
    return BivariateSample(x, y, int(x.size))


def is_constant(column: np.ndarray) -> bool:
    """Exact min == max check (the non-degeneracy criterion)."""
    return bool(np.min(column) == np.max(column))


@dataclass(frozen=True)
class ScatterMatrix2:
    """Symmetric positive-definite 2x2 matrix (g21 = g12 implicit)."""

    g11: float
    g12: float
    g22: float

    def __post_init__(self):
        if not (math.isfinite(self.g11) and math.isfinite(self.g12) and math.isfinite(self.g22)):
            raise NotPositiveDefinite("scatter entries must be finite")
        if self.g11 <= 0.0 or self.g22 <= 0.0 or self.det() <= 0.0:
            raise NotPositiveDefinite(
                f"not positive definite: g11={self.g11}, g12={self.g12}, g22={self.g22}"
            )

    def det(self) -> float:
        return self.g11 * self.g22 - self.g12 * self.g12

    def trace(self) -> float:
        return self.g11 + self.g22

    def correlation(self) -> float:
        """Normalized off-diagonal g12 / sqrt(g11 g22)."""
        return self.g12 / (math.sqrt(self.g11) * math.sqrt(self.g22))

    def as_array(self) -> np.ndarray:
        return np.array([[self.g11, self.g12], [self.g12, self.g22]])

    @classmethod
    def from_array(cls, m: np.ndarray) -> "ScatterMatrix2":
        m = np.asarray(m, dtype=np.float64)
        if m.shape != (2, 2):
            raise DomainError(f"expected a 2x2 matrix, got shape {m.shape}")
        if abs(m[0, 1] - m[1, 0]) > 1e-9 * (abs(m[0, 1]) + abs(m[1, 0]) + 1.0):
            raise DomainError("matrix is not symmetric")
        off = 0.5 * (m[0, 1] + m[1, 0])
        return cls(float(m[0, 0]), float(off), float(m[1, 1]))

    @classmethod
    def homogeneous(cls, rho: float, scale: float = 1.0) -> "ScatterMatrix2":
        """scale^2 * [[1, rho], [rho, 1]]; rejects |rho| >= 1 (singular)."""
        s2 = scale * scale
        return cls(s2, s2 * rho, s2)


def clamp_correlation(value: float) -> float:
    """Clamp into [-1, 1], allowing only roundoff-sized overshoot."""
    if not math.isfinite(value):
        raise DomainError(f"correlation evaluated to non-finite value {value}")
    if abs(value) > 1.0 + CORRELATION_SLACK:
        raise DomainError(f"correlation {value} exceeds [-1, 1] beyond numerical slack")
    return min(1.0, max(-1.0, value))


@dataclass(frozen=True)
class CorrelationValue:
    """A correlation in [-1, 1] with the identity of its estimator attached."""

    value: float
    estimator: str

    def __post_init__(self):
        if self.estimator not in ESTIMATOR_TAGS:
            raise DomainError(f"unknown estimator tag {self.estimator!r}")
        object.__setattr__(self, "value", clamp_correlation(self.value))


@dataclass(frozen=True)
class EllipticalModelSpec:
    """Elliptical model: family (normal | t(nu) | kotz), location, scatter."""

    family: str
    mu: np.ndarray
    sigma: ScatterMatrix2
    nu: Optional[float] = None

    def __post_init__(self):
        if self.family not in ("normal", "t", "kotz"):
            raise DomainError(f"unknown family {self.family!r}")
        if self.family == "t":
            if self.nu is None or not (self.nu > 0):
                raise DomainError("t family requires degrees of freedom nu > 0")
        mu = np.asarray(self.mu, dtype=np.float64).reshape(-1)
        if mu.size != 2 or not np.all(np.isfinite(mu)):
            raise DomainError("mu must be a finite 2-vector")
        mu = mu.copy()
        mu.setflags(write=False)
        object.__setattr__(self, "mu", mu)

    @property
    def rho(self) -> float:
        """Scatter correlation parameter g12 / sqrt(g11 g22)."""
        return self.sigma.correlation()


@dataclass(frozen=True)
class EstimateEntry:
    """One estimator's value plus (optionally) its asymptotic standard error."""

    value: CorrelationValue
    stderr: Optional[float] = None

    def __post_init__(self):
        if self.stderr is not None and not (self.stderr >= 0.0):
            raise DomainError(f"standard error must be >= 0, got {self.stderr}")


@dataclass(frozen=True)
class EstimateReport:
    """All estimator values for one dataset, with metadata.

    ``affine_iterations``/``affine_residual`` carry the convergence
    diagnostics of the affine fixed-point fit when it was run.
    """

    dataset: str
    n: int
    estimates: tuple = field(default_factory=tuple)
    affine_iterations: Optional[int] = None
    affine_residual: Optional[float] = None

    def by_tag(self, tag: str) -> EstimateEntry:
        for e in self.estimates:
            if e.value.estimator == tag:
                return e
        raise KeyError(tag)
