import math

import numpy as np
import pytest
from scipy import integrate

from ginicorr import (
    DomainError,
    KGrid,
    complete_elliptic_first,
    complete_elliptic_second,
    default_grid,
    invert_k,
    k_derivative,
    k_of_rho,
)
from ginicorr.elliptic import _k_derivative_closed


def quad_ek(m):
    return integrate.quad(
        lambda t: 1.0 / math.sqrt(1.0 - m * math.sin(t) ** 2), 0, math.pi / 2, epsabs=1e-14
    )


def quad_ee(m):
    return integrate.quad(
        lambda t: math.sqrt(1.0 - m * math.sin(t) ** 2), 0, math.pi / 2, epsabs=1e-14
    )


# --- complete elliptic integrals -------------------------------------------


def test_ek_trivial_and_domain():
    assert complete_elliptic_first(0.0) == pytest.approx(math.pi / 2, abs=1e-14)
    for bad in (-0.1, 1.0, 1.5):
        with pytest.raises(DomainError):
            complete_elliptic_first(bad)


def test_ee_trivial_endpoints():
    assert complete_elliptic_second(0.0) == pytest.approx(math.pi / 2, abs=1e-14)
    assert complete_elliptic_second(1.0) == 1.0
    for bad in (-1e-9, 1.0 + 1e-9):
        with pytest.raises(DomainError):
            complete_elliptic_second(bad)


def test_ek_half_quadrature_oracle():
    # Frozen from adaptive quadrature of the defining integral.
    assert complete_elliptic_first(0.5) == pytest.approx(1.8540746773013719, abs=1e-12)
    assert complete_elliptic_second(0.5) == pytest.approx(1.3506438810476755, abs=1e-12)


@pytest.mark.parametrize("m", [0.01, 0.1, 0.3, 0.6666667, 0.9, 0.99, 0.999999])
def test_agm_matches_quadrature(m):
    # The quadrature oracle degrades near the m = 1 singularity; allow it
    # its own reported error on top of the 1e-12 contract.
    vk, ek_err = quad_ek(m)
    ve, ee_err = quad_ee(m)
    assert complete_elliptic_first(m) == pytest.approx(vk, abs=1e-12 + 2 * ek_err)
    assert complete_elliptic_second(m) == pytest.approx(ve, abs=1e-12 + 2 * ee_err)


def test_agm_near_singularity_reference():
    # Frozen mpmath values at the exact float arguments.
    assert complete_elliptic_first(0.999999) == pytest.approx(8.294051463601062, abs=1e-12)
    assert complete_elliptic_second(0.999999) == pytest.approx(1.0000038970261722, abs=1e-12)


# --- k map ------------------------------------------------------------------


def test_k_exact_branch_points():
    assert k_of_rho(0.0) == 0.0
    assert k_of_rho(1.0) == 1.0
    assert k_of_rho(-1.0) == -1.0


def test_k_domain():
    for bad in (1.0000001, -1.1):
        with pytest.raises(DomainError):
            k_of_rho(bad)


def test_k_against_independent_quadrature():
    # Independent oracle: evaluate the closed form with quadrature-based
    # EK/EE instead of the AGM path.
    for rho in (0.1, 0.3, 0.5, 0.7, 0.9, 0.99):
        m = 2 * rho / (rho + 1)
        expected = 1 / rho + (rho - 1) / rho * quad_ek(m)[0] / quad_ee(m)[0]
        assert k_of_rho(rho) == pytest.approx(expected, abs=1e-10)


def test_k_half_bracket():
    # 2/pi asin(0.5) = 1/3 < k(0.5) < 0.5, and the value agrees with the
    # angular-integral ground truth (frozen from quadrature).
    v = k_of_rho(0.5)
    assert 1.0 / 3.0 < v < 0.5
    assert v == pytest.approx(0.3912292210653781, abs=1e-12)


def test_k_continuity_at_branch_points():
    eps = 1e-8
    assert abs(k_of_rho(0.0) - k_of_rho(eps)) < 1e-6
    assert abs(k_of_rho(0.0) - k_of_rho(-eps)) < 1e-6
    assert abs(k_of_rho(1.0) - k_of_rho(1.0 - eps)) < 1e-6
    assert abs(k_of_rho(-1.0) - k_of_rho(-1.0 + eps)) < 1e-6


def test_k_small_rho_interpolation_consistent():
    # The interpolated region must join the closed form smoothly.
    assert k_of_rho(1e-4) == pytest.approx(0.75 * 1e-4, rel=1e-3)
    assert k_of_rho(5e-5) == pytest.approx(0.75 * 5e-5, rel=1e-3)
    assert k_of_rho(9.9e-5) < k_of_rho(1.01e-4)


def test_k_odd_symmetry_grid():
    for rho in np.arange(0.01, 1.0, 0.01):
        assert abs(k_of_rho(-rho) + k_of_rho(rho)) <= 1e-6


def test_k_ordering_grid():
    for rho in np.arange(0.01, 1.0, 0.01):
        v = k_of_rho(rho)
        assert 2.0 / math.pi * math.asin(rho) < v < rho


def test_k_monotone_grid():
    grid = default_grid()
    assert np.all(np.diff(grid.k_values) > 0)


# --- derivative -------------------------------------------------------------


def test_k_derivative_matches_finite_difference_oracle():
    h = 1e-6
    fd = (k_of_rho(0.5 + h) - k_of_rho(0.5 - h)) / (2 * h)
    assert k_derivative(0.5) == pytest.approx(fd, abs=1e-6)


def test_k_derivative_at_zero_bracket():
    d0 = k_derivative(0.0)
    assert 2.0 / math.pi < d0 < 1.0
    assert d0 == pytest.approx(0.75, abs=1e-4)


@pytest.mark.parametrize("rho", [-0.95, -0.5, -0.1, 0.0, 0.1, 0.5, 0.9, 0.99])
def test_k_derivative_positive(rho):
    assert k_derivative(rho) > 0


def test_k_derivative_closed_form_agrees():
    for rho in (0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99):
        assert _k_derivative_closed(rho) == pytest.approx(k_derivative(rho), abs=1e-6)


def test_k_derivative_domain():
    for bad in (1.0, -1.0, 1.5):
        with pytest.raises(DomainError):
            k_derivative(bad)


# --- inversion ---------------------------------------------------------------


def test_invert_trivial():
    assert invert_k(0.0) == 0.0
    assert invert_k(1.0) == 1.0
    assert invert_k(-1.0) == -1.0
    with pytest.raises(DomainError):
        invert_k(1.2)


def test_invert_roundtrip_07():
    assert invert_k(k_of_rho(0.7)) == pytest.approx(0.7, abs=1e-6)


def test_invert_k_residual_contract():
    for target in (-0.83, -0.2, 0.0137, 0.4, 0.9, 0.999):
        rho = invert_k(target)
        assert abs(k_of_rho(rho) - target) <= 1e-9


def test_roundtrip_grid():
    for rho in np.arange(-0.99, 0.991, 0.01):
        assert abs(invert_k(k_of_rho(rho)) - rho) <= 1e-6


# --- KGrid --------------------------------------------------------------------


def test_kgrid_build_and_invariants():
    grid = KGrid.build(0.01)
    assert grid.rho_values.size == 201
    assert grid.rho_values[0] == -1.0 and grid.k_values[0] == -1.0
    assert grid.rho_values[-1] == 1.0 and grid.k_values[-1] == 1.0
    assert grid.k_values[100] == 0.0  # midpoint
    assert np.all(np.diff(grid.k_values) > 0)


def test_kgrid_rejects_bad_grids():
    with pytest.raises(DomainError):
        KGrid(np.array([-1.0, 0.0, 1.0]), np.array([-1.0, 0.5, 0.2]))
    with pytest.raises(DomainError):
        KGrid.build(0.0)


def test_kgrid_linear_inverse_accuracy():
    grid = default_grid()
    for rho in (-0.9, -0.33, 0.1234, 0.5, 0.95):
        approx = float(grid.rho_from_k(k_of_rho(rho)))
        assert abs(approx - rho) < 5e-6


def test_default_grid_cached():
    assert default_grid() is default_grid()
