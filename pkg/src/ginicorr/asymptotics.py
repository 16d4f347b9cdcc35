"""Influence functions and plug-in asymptotic variances (ASV) for the
four linear-correlation estimators, plus asymptotic relative efficiency.

Plug-ins follow the V-statistic convention (all ordered pairs, zero
diagonal), so the zero-mean identity of the empirical influence function
holds at finite n up to roundoff rather than only asymptotically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend as kernels
from .core import BivariateSample, is_constant
from .elliptic import k_derivative
from .errors import DegenerateColumn, DomainError, TooFewPoints
from .estimators import corrected_symmetric_gini, kendall_tau

_JENSEN_SLACK = 1e-9


@dataclass(frozen=True)
class MomentSet:
    """Central moments sigma_kl = E[(X - EX)^k (Y - EY)^l] through order 4,
    plus the means, as needed by the Pearson influence and variance."""

    mean_x: float
    mean_y: float
    sigma20: float
    sigma02: float
    sigma11: float
    sigma22: float
    sigma40: float
    sigma04: float
    sigma31: float
    sigma13: float

    def __post_init__(self):
        if not (self.sigma20 > 0.0 and self.sigma02 > 0.0):
            raise DomainError("second moments must be positive")
        if self.sigma40 < self.sigma20**2 * (1.0 - _JENSEN_SLACK) or self.sigma04 < self.sigma02**2 * (
            1.0 - _JENSEN_SLACK
        ):
            raise DomainError("fourth moments violate the Jensen bound")

    @classmethod
    def from_sample(cls, sample: BivariateSample) -> "MomentSet":
        for name, col in (("x", sample.xs), ("y", sample.ys)):
            if is_constant(col):
                raise DegenerateColumn(f"column {name} is constant")
        mx = float(np.mean(sample.xs))
        my = float(np.mean(sample.ys))
        dx = sample.xs - mx
        dy = sample.ys - my

        def m(k, l):
            return float(np.mean(dx**k * dy**l))

        return cls(mx, my, m(2, 0), m(0, 2), m(1, 1), m(2, 2), m(4, 0), m(0, 4), m(3, 1), m(1, 3))

    @classmethod
    def normal_population(cls, rho: float) -> "MomentSet":
        """Exact moments of the standard bivariate normal with correlation rho."""
        if not (-1.0 < rho < 1.0):
            raise DomainError(f"need |rho| < 1, got {rho}")
        return cls(0.0, 0.0, 1.0, 1.0, rho, 1.0 + 2.0 * rho * rho, 3.0, 3.0, 3.0 * rho, 3.0 * rho)

    @property
    def rho(self) -> float:
        return self.sigma11 / math.sqrt(self.sigma20 * self.sigma02)


@dataclass(frozen=True)
class AsvEstimate:
    """Asymptotic variance of sqrt(n)(estimate - target) for one estimator."""

    estimator: str
    value: float
    method: str  # plug_in | closed_form
    heavy_tail_warning: bool = False

    def __post_init__(self):
        if not (self.value >= 0.0):
            raise DomainError(f"asymptotic variance must be >= 0, got {self.value}")
        if self.method not in ("plug_in", "closed_form"):
            raise DomainError(f"unknown method {self.method!r}")


def _v_stat_components(sample: BivariateSample):
    """V-statistic normalizations of the three pairwise Gini sums."""
    t1, t2, t3 = kernels.symgini_components(sample.xs, sample.ys)
    n2 = float(sample.n) * float(sample.n)
    return 2.0 * t1 / n2, 2.0 * t2 / n2, 2.0 * t3 / n2


def _if_combination(l1, l2, l3, T1, T2, T3):
    # Algebraically -(rho_g/2)(L1/T1 - 2 L2/T2 + L3/T3) with
    # rho_g = T2/sqrt(T1 T3), rewritten to stay defined at T2 = 0.
    root = math.sqrt(T1) * math.sqrt(T3)
    rho_g = T2 / root
    return -(rho_g / 2.0) * (l1 / T1 + l3 / T3) + l2 / root


def influence_rho_g(point, sample: BivariateSample) -> float:
    """Empirical influence of one contaminating point on the symmetric
    Gini correlation (plug-in of the analytic influence function)."""
    p = np.asarray(point, dtype=np.float64).reshape(-1)
    if p.size != 2 or not np.all(np.isfinite(p)):
        raise DomainError("point must be a finite 2-vector")
    T1, T2, T3 = _v_stat_components(sample)
    if T1 <= 0.0 or T3 <= 0.0:
        raise DegenerateColumn("pairwise Gini variance vanished (constant column?)")
    l1, l2, l3 = kernels.if_sums_at(p[0], p[1], sample.xs, sample.ys)
    n = float(sample.n)
    return _if_combination(l1 / n, l2 / n, l3 / n, T1, T2, T3)


def influence_pearson(
    point, mean_x: float, mean_y: float, sigma20: float, sigma02: float, sigma11: float
) -> float:
    """Influence of a point on the Pearson correlation (quadratic, unbounded)."""
    if not (sigma20 > 0.0 and sigma02 > 0.0):
        raise DomainError("variances must be positive")
    p = np.asarray(point, dtype=np.float64).reshape(-1)
    sx = math.sqrt(sigma20)
    sy = math.sqrt(sigma02)
    rho = sigma11 / (sx * sy)
    u = (p[0] - mean_x) / sx
    v = (p[1] - mean_y) / sy
    return u * v - 0.5 * rho * (u * u + v * v)


def influence_kendall(point, sample: BivariateSample) -> float:
    """Influence of a point on Kendall's tau: 2(2 P - 1 - tau) with P the
    empirical concordance probability against the sample.  Bounded by 4."""
    p = np.asarray(point, dtype=np.float64).reshape(-1)
    prod = (p[0] - sample.xs) * (p[1] - sample.ys)
    p_conc = float(np.count_nonzero(prod > 0.0)) / sample.n
    tau = kendall_tau(sample).value
    return 2.0 * (2.0 * p_conc - 1.0 - tau)


def _if_arrays(sample: BivariateSample):
    T1, T2, T3 = _v_stat_components(sample)
    if T1 <= 0.0 or T3 <= 0.0:
        raise DegenerateColumn("pairwise Gini variance vanished (constant column?)")
    l1, l2, l3 = kernels.if_sums_all(sample.xs, sample.ys)
    n = float(sample.n)
    return l1 / n, l2 / n, l3 / n, T1, T2, T3


def asv_symmetric_gini(sample: BivariateSample) -> AsvEstimate:
    """Plug-in asymptotic variance of the symmetric Gini correlation:
    the average squared empirical influence over the sample."""
    if sample.n < 3:
        raise TooFewPoints(f"ASV plug-in needs n >= 3, got {sample.n}")
    L1, L2, L3, T1, T2, T3 = _if_arrays(sample)
    iv = _if_combination(L1, L2, L3, T1, T2, T3)
    return AsvEstimate("symmetric_gini", float(np.mean(iv * iv)), "plug_in")


def _asv_symmetric_gini_expanded(sample: BivariateSample) -> float:
    """Six-term expansion of the same variance; cross-check path only.
    Identical to the squared-influence average up to roundoff."""
    L1, L2, L3, T1, T2, T3 = _if_arrays(sample)
    if T2 == 0.0:
        raise DomainError("expanded form is undefined at rho_g = 0")
    rho_g = T2 / (math.sqrt(T1) * math.sqrt(T3))
    e = np.mean
    combo = (
        e(L1 * L1) / T1**2
        + 4.0 * e(L2 * L2) / T2**2
        + e(L3 * L3) / T3**2
        - 4.0 * e(L1 * L2) / (T1 * T2)
        + 2.0 * e(L1 * L3) / (T1 * T3)
        - 4.0 * e(L2 * L3) / (T2 * T3)
    )
    return rho_g * rho_g / 4.0 * float(combo)


def asv_corrected(sample: BivariateSample) -> AsvEstimate:
    """Asymptotic variance of the k-corrected estimator:
    ASV(symmetric Gini) divided by k'(rho_hat)^2."""
    base = asv_symmetric_gini(sample)
    rho_hat = corrected_symmetric_gini(sample).value
    if abs(rho_hat) >= 1.0:
        raise DomainError("corrected estimate at the boundary; ASV undefined")
    deriv = k_derivative(rho_hat)
    return AsvEstimate("corrected_symmetric_gini", base.value / (deriv * deriv), "plug_in")


def asv_pearson(sample_or_moments) -> AsvEstimate:
    """Asymptotic variance of the Pearson correlation from the fourth-order
    central moments.

    Requires finite fourth moments, which is the caller's responsibility
    (under heavy tails, e.g. t(nu <= 4) scatter, the population quantity
    does not exist and the plug-in output is not meaningful).
    """
    if isinstance(sample_or_moments, BivariateSample):
        m = MomentSet.from_sample(sample_or_moments)
        method = "plug_in"
    elif isinstance(sample_or_moments, MomentSet):
        m = sample_or_moments
        method = "closed_form"
    else:
        raise DomainError("expected a BivariateSample or a MomentSet")
    rho = m.rho
    # (rho^2/4) * 4 sigma31/(sigma11 sigma20) recast as
    # sigma11 sigma31 / (sigma20^2 sigma02): no 0/0 at independence.
    value = (
        (1.0 + rho * rho / 2.0) * m.sigma22 / (m.sigma20 * m.sigma02)
        + rho * rho / 4.0 * (m.sigma40 / m.sigma20**2 + m.sigma04 / m.sigma02**2)
        - m.sigma11 * m.sigma31 / (m.sigma20**2 * m.sigma02)
        - m.sigma11 * m.sigma13 / (m.sigma20 * m.sigma02**2)
    )
    return AsvEstimate("pearson", max(value, 0.0), method)


def pearson_asv_normal(rho: float) -> AsvEstimate:
    """Closed form under bivariate normality: (1 - rho^2)^2."""
    return AsvEstimate("pearson", (1.0 - rho * rho) ** 2, "closed_form")


def asv_regular_gini(sample: BivariateSample) -> AsvEstimate:
    """Plug-in asymptotic variance of the regular Gini correlation
    gamma(X, Y) from its two U-statistic kernels."""
    if sample.n < 3:
        raise TooFewPoints(f"ASV plug-in needs n >= 3, got {sample.n}")
    if is_constant(sample.xs):
        raise DegenerateColumn("column x is constant")
    raw1, raw2 = kernels.gini_g_all(sample.xs, sample.ys)
    g1 = raw1 / (4.0 * (sample.n - 1))
    g2 = raw2 / (4.0 * (sample.n - 1))
    theta1 = float(np.mean(g1))
    theta2 = float(np.mean(g2))
    if theta2 == 0.0:
        raise DegenerateColumn("Gini mean difference of x vanished")
    zeta1 = float(np.mean(g1 * g1)) - theta1 * theta1
    zeta2 = float(np.mean(g2 * g2)) - theta2 * theta2
    zeta3 = float(np.mean(g1 * g2)) - theta1 * theta2
    value = (
        4.0 * zeta1 / theta2**2
        + 4.0 * theta1**2 * zeta2 / theta2**4
        - 8.0 * theta1 * zeta3 / theta2**3
    )
    return AsvEstimate("gini_xy", max(value, 0.0), "plug_in")


def regular_gini_asv_normal(rho: float) -> AsvEstimate:
    """Closed form under bivariate normality."""
    value = (
        math.pi / 3.0
        + (math.pi / 3.0 + 4.0 * math.sqrt(3.0)) * rho * rho
        - 4.0 * rho * math.asin(rho / 2.0)
        - 4.0 * rho * rho * math.sqrt(4.0 - rho * rho)
    )
    return AsvEstimate("gini_xy", value, "closed_form")


def asv_tau_rho(sample: BivariateSample) -> AsvEstimate:
    """Plug-in asymptotic variance of sin(pi tau / 2) by the delta method:
    (pi^2/4)(1 - rho^2) v_tau with v_tau from the concordance kernel."""
    if sample.n < 3:
        raise TooFewPoints(f"ASV plug-in needs n >= 3, got {sample.n}")
    for name, col in (("x", sample.xs), ("y", sample.ys)):
        if is_constant(col):
            raise DegenerateColumn(f"column {name} is constant")
    g = kernels.kendall_g_all(sample.xs, sample.ys).astype(np.float64) / (sample.n - 1)
    tau = float(np.mean(g))
    v_tau = 4.0 * (float(np.mean(g * g)) - tau * tau)
    rho = math.sin(math.pi * tau / 2.0)
    value = math.pi**2 / 4.0 * (1.0 - rho * rho) * v_tau
    return AsvEstimate("tau_to_rho", max(value, 0.0), "plug_in")


def tau_rho_asv_normal(rho: float) -> AsvEstimate:
    """Closed form under bivariate normality."""
    value = math.pi**2 * (1.0 - rho * rho) * (
        1.0 / 9.0 - 4.0 / math.pi**2 * math.asin(rho / 2.0) ** 2
    )
    return AsvEstimate("tau_to_rho", value, "closed_form")


def are(asv_a: AsvEstimate, asv_b: AsvEstimate) -> float:
    """Asymptotic relative efficiency of estimator a relative to b:
    ASV(b) / ASV(a)."""
    if asv_a.value == 0.0:
        raise DomainError("ARE undefined: reference ASV is zero")
    return asv_b.value / asv_a.value
