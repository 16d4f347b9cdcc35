"""Blocked-numpy fallback for the O(n^2) pairwise kernels.

Same signatures as the compiled extension (``_kernels``).  Sums run over
row blocks in a fixed order, so results are deterministic for a given
input regardless of machine or thread settings.  The compiled backend
accumulates with compensated (Neumaier) summation; the two backends
agree to ~1 ulp, not bit-for-bit.
"""

import numpy as np

BACKEND_NAME = "numpy"

_BLOCK = 256


def _row_blocks(n):
    for i0 in range(0, n, _BLOCK):
        yield i0, min(i0 + _BLOCK, n)


def symgini_components(x, y):
    """Sums over pairs i<j of (dx^2/d, dx*dy/d, dy^2/d), d = hypot(dx, dy).

    Pairs with coincident points (d = 0) contribute 0 to all three sums.
    """
    n = x.size
    t1 = t2 = t3 = 0.0
    for i0, i1 in _row_blocks(n):
        dx = x[i0:i1, None] - x[None, :]
        dy = y[i0:i1, None] - y[None, :]
        upper = np.arange(n)[None, :] > np.arange(i0, i1)[:, None]
        d = np.hypot(dx, dy)
        keep = upper & (d > 0.0)
        inv = np.zeros_like(d)
        np.divide(1.0, d, out=inv, where=keep)
        t1 += float(np.sum(dx * dx * inv))
        t2 += float(np.sum(dx * dy * inv))
        t3 += float(np.sum(dy * dy * inv))
    return t1, t2, t3


def regular_gini_sums(xv, ysign):
    """(sum of dx*sgn(dy), sum of |dx|) over pairs i<j.

    ``xv`` supplies the differences, ``ysign`` only enters through the
    sign of its differences (ties give 0).
    """
    n = xv.size
    s1 = s2 = 0.0
    for i0, i1 in _row_blocks(n):
        dx = xv[i0:i1, None] - xv[None, :]
        sy = np.sign(ysign[i0:i1, None] - ysign[None, :])
        upper = np.arange(n)[None, :] > np.arange(i0, i1)[:, None]
        s1 += float(np.sum(np.where(upper, dx * sy, 0.0)))
        s2 += float(np.sum(np.where(upper, np.abs(dx), 0.0)))
    return s1, s2


def kendall_stats(x, y):
    """(sum of sgn(dx)*sgn(dy), #pairs with dx!=0, #pairs with dy!=0) over i<j."""
    n = x.size
    num = 0
    px = 0
    py = 0
    for i0, i1 in _row_blocks(n):
        sx = np.sign(x[i0:i1, None] - x[None, :])
        sy = np.sign(y[i0:i1, None] - y[None, :])
        upper = np.arange(n)[None, :] > np.arange(i0, i1)[:, None]
        num += int(np.sum((sx * sy)[upper]))
        px += int(np.count_nonzero(sx[upper]))
        py += int(np.count_nonzero(sy[upper]))
    return num, px, py


def kendall_g_all(x, y):
    """For each i, the integer sum over j != i of sgn((xj-xi)(yj-yi))."""
    n = x.size
    g = np.zeros(n, dtype=np.int64)
    for i0, i1 in _row_blocks(n):
        sx = np.sign(x[i0:i1, None] - x[None, :])
        sy = np.sign(y[i0:i1, None] - y[None, :])
        g[i0:i1] = np.sum((sx * sy).astype(np.int64), axis=1)
    return g


def gini_g_all(xv, ysign):
    """Per-point sums over j != i of dx*sgn(dy) and |dx| (4x the h kernels)."""
    n = xv.size
    g1 = np.zeros(n)
    g2 = np.zeros(n)
    for i0, i1 in _row_blocks(n):
        dx = xv[i0:i1, None] - xv[None, :]
        sy = np.sign(ysign[i0:i1, None] - ysign[None, :])
        g1[i0:i1] = np.sum(dx * sy, axis=1)
        g2[i0:i1] = np.sum(np.abs(dx), axis=1)
    return g1, g2


def scatter_pair_sums(x, y, a, b, c):
    """Weighted pairwise outer-product sums for the scatter fixed point.

    Returns sums over i<j of (dx^2, dx*dy, dy^2) / sqrt(q) with
    q = a*dx^2 + 2b*dx*dy + c*dy^2 and [[a, b], [b, c]] the inverse of
    the current iterate.  Coincident pairs are skipped; a non-positive q
    on a distinct pair marks a non-PD iterate and returns NaNs.
    """
    n = x.size
    s11 = s12 = s22 = 0.0
    for i0, i1 in _row_blocks(n):
        dx = x[i0:i1, None] - x[None, :]
        dy = y[i0:i1, None] - y[None, :]
        upper = np.arange(n)[None, :] > np.arange(i0, i1)[:, None]
        q = a * dx * dx + 2.0 * b * dx * dy + c * dy * dy
        nonzero = (dx != 0.0) | (dy != 0.0)
        keep = upper & nonzero
        if np.any(keep & (q <= 0.0)):
            return float("nan"), float("nan"), float("nan")
        w = np.zeros_like(q)
        np.divide(1.0, np.sqrt(q, where=keep, out=np.ones_like(q)), out=w, where=keep)
        s11 += float(np.sum(dx * dx * w))
        s12 += float(np.sum(dx * dy * w))
        s22 += float(np.sum(dy * dy * w))
    return s11, s12, s22


def if_sums_at(px, py, x, y):
    """Sums over sample points of 2*(dx^2, dx*dy, dy^2)/d at one probe point.

    d is the distance from (px, py) to each sample point; coincident
    sample points contribute 0.
    """
    dx = px - x
    dy = py - y
    d = np.hypot(dx, dy)
    keep = d > 0.0
    inv = np.zeros_like(d)
    np.divide(1.0, d, out=inv, where=keep)
    l1 = float(np.sum(2.0 * dx * dx * inv))
    l2 = float(np.sum(2.0 * dx * dy * inv))
    l3 = float(np.sum(2.0 * dy * dy * inv))
    return l1, l2, l3


def if_sums_all(x, y):
    """`if_sums_at` evaluated at every sample point (three length-n arrays)."""
    n = x.size
    l1 = np.zeros(n)
    l2 = np.zeros(n)
    l3 = np.zeros(n)
    for i0, i1 in _row_blocks(n):
        dx = x[i0:i1, None] - x[None, :]
        dy = y[i0:i1, None] - y[None, :]
        d = np.hypot(dx, dy)
        keep = d > 0.0
        inv = np.zeros_like(d)
        np.divide(1.0, d, out=inv, where=keep)
        l1[i0:i1] = 2.0 * np.sum(dx * dx * inv, axis=1)
        l2[i0:i1] = 2.0 * np.sum(dx * dy * inv, axis=1)
        l3[i0:i1] = 2.0 * np.sum(dy * dy * inv, axis=1)
    return l1, l2, l3
