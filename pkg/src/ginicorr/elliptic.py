"""Complete elliptic integrals and the k(rho) map.

k maps the elliptical correlation parameter rho to the symmetric Gini
correlation via complete elliptic integrals.  The integrals take the
*parameter* convention: EK(m) integrates (1 - m sin^2 t)^(-1/2).  The
map passes m = 2 rho / (rho + 1); this is the convention consistent with
the monotone ordering 2/pi asin(rho) < k(rho) < rho and it is validated
against an independent Monte Carlo pair oracle (see simulation.k_oracle
and the acceptance suite).

Negative arguments are handled by odd symmetry, k(-rho) = -k(rho).
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

#: |rho| below this uses polynomial interpolation instead of the closed
#: form, whose 1/rho term cancels catastrophically at the origin.
_SMALL_RHO = 1e-4

#: Default resolution of the inversion grid (2e4 + 1 points on [-1, 1]).
DEFAULT_GRID_STEP = 1e-4


def _agm_ek_ee(m: np.ndarray, mc: np.ndarray):
    """EK(m), EE(m) by the arithmetic-geometric mean, to ~1e-15 relative.

    ``mc`` is 1 - m supplied by the caller (computed without cancellation
    where that matters, e.g. (1-rho)/(1+rho)).  Requires 0 <= m < 1.
    """
    a = np.ones_like(m)
    b = np.sqrt(mc)
    csum = 0.5 * m  # the n = 0 term of sum 2^(n-1) c_n^2, c_0^2 = m
    weight = 1.0
    for _ in range(64):
        c = 0.5 * (a - b)
        csum = csum + weight * c * c
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        weight *= 2.0
        if np.max(np.abs(c)) <= 1e-17:
            break
    ek = np.pi / (2.0 * a)
    ee = ek * (1.0 - csum)
    return ek, ee


def complete_elliptic_first(m: float) -> float:
    """EK(m) = integral over [0, pi/2] of (1 - m sin^2 t)^(-1/2) dt.

    Requires 0 <= m < 1 (the integrand is singular at m = 1).
    """
    if not (0.0 <= m < 1.0):
        raise DomainError(f"EK requires 0 <= m < 1, got {m}")
    ek, _ = _agm_ek_ee(np.float64(m), np.float64(1.0 - m))
    return float(ek)


def complete_elliptic_second(m: float) -> float:
    """EE(m) = integral over [0, pi/2] of (1 - m sin^2 t)^(1/2) dt.

    Requires 0 <= m <= 1; EE(1) = 1 exactly.
    """
    if not (0.0 <= m <= 1.0):
        raise DomainError(f"EE requires 0 <= m <= 1, got {m}")
    if m == 1.0:
        return 1.0
    _, ee = _agm_ek_ee(np.float64(m), np.float64(1.0 - m))
    return float(ee)


def _k_closed_abs(r: np.ndarray) -> np.ndarray:
    """Closed form on 0 < r < 1: 1/r + ((r-1)/r) EK(m)/EE(m), m = 2r/(1+r)."""
    m = 2.0 * r / (1.0 + r)
    mc = (1.0 - r) / (1.0 + r)
    ek, ee = _agm_ek_ee(m, mc)
    return 1.0 / r + (r - 1.0) / r * ek / ee


@functools.lru_cache(maxsize=1)
def _small_rho_poly() -> np.ndarray:
    """Degree-4 interpolant through k at 0, +-1e-4, +-2e-4 (odd by symmetry)."""
    nodes = np.array([-2e-4, -1e-4, 0.0, 1e-4, 2e-4])
    pos = _k_closed_abs(np.array([1e-4, 2e-4]))
    values = np.array([-pos[1], -pos[0], 0.0, pos[0], pos[1]])
    return np.polynomial.polynomial.polyfit(nodes, values, 4)


def _k_many(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=np.float64)
    out = np.empty_like(rho)
    sign = np.sign(rho)
    r = np.abs(rho)
    exact = (r == 0.0) | (r == 1.0)
    small = (r < _SMALL_RHO) & ~exact
    mid = ~exact & ~small
    out[exact] = rho[exact]
    if np.any(small):
        out[small] = np.polynomial.polynomial.polyval(rho[small], _small_rho_poly())
    if np.any(mid):
        out[mid] = sign[mid] * _k_closed_abs(r[mid])
    return out


def k_of_rho(rho: float) -> float:
    """The symmetric Gini correlation k(rho) of a homogeneous elliptical
    model with correlation parameter rho.

    Exact passthrough at rho in {-1, 0, 1}; odd in rho; strictly
    increasing.
    """
    if not (-1.0 <= rho <= 1.0):
        raise DomainError(f"k is defined on [-1, 1], got {rho}")
    return float(_k_many(np.atleast_1d(np.float64(rho)))[0])


def _k_derivative_closed(rho: float) -> float:
    """Closed-form dk/drho (even in rho); valid away from rho = 0, +-1."""
    r = abs(rho)
    m = np.float64(2.0 * r / (1.0 + r))
    mc = np.float64((1.0 - r) / (1.0 + r))
    ek, ee = _agm_ek_ee(m, mc)
    num = -3.0 * (r + 1.0) * ee * ee + 4.0 * ee * ek + (r - 1.0) * ek * ek
    den = 2.0 * (r + 1.0) * r * r * ee * ee
    return float(num / den)


def k_derivative(rho: float, cross_check: bool = True) -> float:
    """dk/drho by central finite differences of the validated k.

    The closed-form expression is evaluated as a cross-check away from
    the branch points; a mismatch beyond 1e-4 raises a warning, not an
    error.
    """
    if not (-1.0 < rho < 1.0):
        raise DomainError(f"k' is defined on (-1, 1), got {rho}")
    h = min(1e-6, 0.5 * (1.0 - abs(rho)))
    fd = (k_of_rho(rho + h) - k_of_rho(rho - h)) / (2.0 * h)
    if cross_check and 1e-3 <= abs(rho) <= 0.999:
        closed = _k_derivative_closed(rho)
        if abs(closed - fd) > 1e-4:
            warnings.warn(
                f"k'({rho}): closed form {closed} differs from finite "
                f"difference {fd} by more than 1e-4",
                RuntimeWarning,
                stacklevel=2,
            )
    return fd


@dataclass(frozen=True)
class KGrid:
    """Tabulated correspondence rho -> k(rho), strictly increasing both ways."""

    rho_values: np.ndarray
    k_values: np.ndarray

    def __post_init__(self):
        r, k = self.rho_values, self.k_values
        if r.ndim != 1 or r.shape != k.shape or r.size < 3:
            raise DomainError("grid arrays must be equal-length 1-D with >= 3 points")
        if not (np.all(np.diff(r) > 0) and np.all(np.diff(k) > 0)):
            raise DomainError("grid must be strictly increasing in rho and k")
        if r[0] != -1.0 or r[-1] != 1.0 or k[0] != -1.0 or k[-1] != 1.0:
            raise DomainError("grid must span [-1, 1] with k(+-1) = +-1")
        r.setflags(write=False)
        k.setflags(write=False)

    @classmethod
    def build(cls, step: float = DEFAULT_GRID_STEP) -> "KGrid":
        if not (0 < step <= 0.5):
            raise DomainError(f"grid step must be in (0, 0.5], got {step}")
        npts = round(2.0 / step) + 1
        rhos = np.linspace(-1.0, 1.0, npts)
        return cls(rhos, _k_many(rhos))

    def rho_from_k(self, k_targets):
        """Piecewise-linear inverse on the grid (fast path for simulation;
        interior error ~1e-6 at the default resolution)."""
        return np.interp(k_targets, self.k_values, self.rho_values)


@functools.lru_cache(maxsize=1)
def default_grid() -> KGrid:
    return KGrid.build(DEFAULT_GRID_STEP)


def invert_k(rho_g: float, tolerance: float = 1e-9) -> float:
    """rho with |k(rho) - rho_g| <= tolerance, by grid bracketing plus
    bisection refinement (k is strictly increasing)."""
    if not (-1.0 <= rho_g <= 1.0):
        raise DomainError(f"k^-1 is defined on [-1, 1], got {rho_g}")
    if rho_g in (-1.0, 0.0, 1.0):
        return rho_g
    grid = default_grid()
    idx = int(np.searchsorted(grid.k_values, rho_g))
    idx = min(max(idx, 1), grid.k_values.size - 1)
    lo = float(grid.rho_values[idx - 1])
    hi = float(grid.rho_values[idx])
    flo = float(grid.k_values[idx - 1]) - rho_g
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = k_of_rho(mid) - rho_g
        if abs(fmid) <= tolerance or (hi - lo) < 1e-15:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return mid
