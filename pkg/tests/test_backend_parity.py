"""The compiled kernels and the blocked-numpy fallback must agree to
roundoff on identical inputs."""

import numpy as np
import pytest

from ginicorr import _kernels_np as np_k

compiled = pytest.importorskip("ginicorr._kernels")


def random_columns(n, seed, ties=False):
    rng = np.random.default_rng(seed)
    if ties:
        x = rng.integers(0, 6, size=n).astype(np.float64)
        y = rng.integers(0, 6, size=n).astype(np.float64)
    else:
        x = rng.normal(size=n)
        y = rng.normal(size=n)
    return x, y


@pytest.mark.parametrize("n", [2, 3, 17, 200, 701])
@pytest.mark.parametrize("ties", [False, True])
def test_parity_all_kernels(n, ties):
    x, y = random_columns(n, seed=n + 7 * ties, ties=ties)

    for got, want in zip(compiled.symgini_components(x, y), np_k.symgini_components(x, y)):
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)

    for got, want in zip(compiled.regular_gini_sums(x, y), np_k.regular_gini_sums(x, y)):
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)

    assert compiled.kendall_stats(x, y) == tuple(np_k.kendall_stats(x, y))

    assert np.array_equal(compiled.kendall_g_all(x, y), np_k.kendall_g_all(x, y))

    for got, want in zip(compiled.gini_g_all(x, y), np_k.gini_g_all(x, y)):
        assert np.allclose(got, want, rtol=1e-12, atol=1e-12)

    a, b, c = 1.3, -0.2, 0.9
    for got, want in zip(
        compiled.scatter_pair_sums(x, y, a, b, c), np_k.scatter_pair_sums(x, y, a, b, c)
    ):
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)

    for got, want in zip(compiled.if_sums_at(0.3, -0.7, x, y), np_k.if_sums_at(0.3, -0.7, x, y)):
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)

    for got, want in zip(compiled.if_sums_all(x, y), np_k.if_sums_all(x, y)):
        assert np.allclose(got, want, rtol=1e-12, atol=1e-12)


def test_scatter_non_pd_signals_nan():
    x, y = random_columns(50, seed=1)
    got = compiled.scatter_pair_sums(x, y, -1.0, 0.0, -1.0)
    want = np_k.scatter_pair_sums(x, y, -1.0, 0.0, -1.0)
    assert all(np.isnan(v) for v in got)
    assert all(np.isnan(v) for v in want)


def test_coincident_points_skipped_both_backends():
    x = np.array([1.0, 1.0, 2.0])
    y = np.array([3.0, 3.0, 4.0])
    got = compiled.symgini_components(x, y)
    want = np_k.symgini_components(x, y)
    assert got == pytest.approx(want, rel=1e-13)
    # only the two pairs involving the distinct point contribute
    assert got[0] > 0
