"""Seeded samplers for the three elliptical families (normal, t(nu), Kotz)
with arbitrary 2x2 scatter.

Streams are counter-based (Philox keyed by (master_seed, stream_id)), so
distinct stream ids are independent and replicate r of a simulation can
use stream_id = r with no cross-replicate coupling.  All draws are
deterministic transforms of a fixed-shape uniform block per observation
(no rejection loops), so streams are stable across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincinv

from .affine import spd_sqrt
from .core import BivariateSample, EllipticalModelSpec
from .errors import DomainError

_MASK64 = (1 << 64) - 1

# Chi-square draws invert the Gamma CDF at a uniform; clipping the
# uniform away from {0, 1} keeps the quantile finite.  The truncation
# probability (1e-12 per draw) is far below any Monte Carlo resolution
# used here.
_U_LO = 1e-12
_U_HI = 1.0 - 1e-16


@dataclass(frozen=True)
class RngStream:
    """A (master_seed, stream_id) pair fully determining one random stream."""

    master_seed: int
    stream_id: int

    def generator(self) -> np.random.Generator:
        key = [self.master_seed & _MASK64, self.stream_id & _MASK64]
        return np.random.Generator(np.random.Philox(key=key))


def _box_muller(u1: np.ndarray, u2: np.ndarray):
    r = np.sqrt(-2.0 * np.log1p(-u1))
    ang = 2.0 * np.pi * u2
    return r * np.cos(ang), r * np.sin(ang)


def sample_elliptical(spec: EllipticalModelSpec, n: int, rng: RngStream) -> BivariateSample:
    """Draw n independent observations from the elliptical model.

    normal: mu + S w with w standard bivariate normal and S the symmetric
    square root of the scatter.  t(nu): the normal draw scaled per-point
    by sqrt(nu / chi2_nu).  kotz: mu + S r u with r ~ Gamma(shape 2,
    scale 1) and u uniform on the unit circle.
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    gen = rng.generator()
    root = spd_sqrt(spec.sigma)
    if spec.family == "normal":
        u = gen.random((n, 2))
        w1, w2 = _box_muller(u[:, 0], u[:, 1])
    elif spec.family == "t":
        u = gen.random((n, 3))
        w1, w2 = _box_muller(u[:, 0], u[:, 1])
        chi2 = 2.0 * gammaincinv(spec.nu / 2.0, np.clip(u[:, 2], _U_LO, _U_HI))
        s = np.sqrt(spec.nu / chi2)
        w1 = w1 * s
        w2 = w2 * s
    else:  # kotz
        u = gen.random((n, 3))
        ang = 2.0 * np.pi * u[:, 0]
        r = -np.log((1.0 - u[:, 1]) * (1.0 - u[:, 2]))
        w1 = r * np.cos(ang)
        w2 = r * np.sin(ang)
    xs = spec.mu[0] + root.g11 * w1 + root.g12 * w2
    ys = spec.mu[1] + root.g12 * w1 + root.g22 * w2
    xs.setflags(write=False)
    ys.setflags(write=False)
    return BivariateSample(xs, ys, n)
