import math
from concurrent.futures import ThreadPoolExecutor

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goldilocks import kernels
from goldilocks.errors import DomainError
from goldilocks.kernels import (
    Method,
    asymptotic_limits,
    closed_form_kernel,
    isotropic_closed_form,
    isotropic_kernel,
    quadrature_kernel,
    series_kernel,
    taylor_kernel,
)


def mp_kernel(z, dps=30):
    """High-order quadrature of the u-integral in extended precision."""
    with mpmath.workdps(dps):
        z = mpmath.mpf(z)

        def f(u):
            return (1 + u * u) * (1 - mpmath.expj(z * (1 - u))) / 4

        pts = mpmath.linspace(-1, 1, max(2, int(z) + 2))
        return complex(mpmath.quad(f, pts))


def mp_closed(z, dps=80):
    with mpmath.workdps(dps):
        z = mpmath.mpf(z)
        h = mpmath.sin(z) / z + mpmath.cos(z) / z ** 2 - mpmath.sin(z) / z ** 3
        return mpmath.mpf(2) / 3 - mpmath.expj(z) * h


# ----------------------------------------------------------------- closed form

def test_closed_form_zero():
    r = closed_form_kernel(0.0)
    assert r.value == 0j
    assert r.method is Method.CLOSED_FORM


def test_closed_form_small_z_matches_long_wavelength_law():
    r = closed_form_kernel(0.01)
    expected = complex(7 / 15 * 1e-4, -2 / 3 * 0.01)
    assert abs(r.value.real - expected.real) / expected.real < 1e-3
    assert abs(r.value.imag - expected.imag) / abs(expected.imag) < 1e-3


def test_closed_form_large_z():
    r = closed_form_kernel(1000.0)
    ref = mp_kernel(1000.0)
    assert abs(r.value.real - 2 / 3) < 0.01
    assert abs(r.value.imag) < 0.01
    assert abs(r.value - ref) < 1e-12


@pytest.mark.parametrize("z", [1e-5, 1e-4, 9.99e-4, 1e-3, 0.01, 0.3, 0.5, 1.0, 2.0, 7.5, 50.0, 333.0])
def test_closed_form_relative_accuracy(z):
    ref = mp_closed(z)
    r = closed_form_kernel(z)
    assert abs(r.value.real - float(ref.real)) <= 1e-13 * abs(float(ref.real)) + 1e-16
    assert abs(r.value.imag - float(ref.imag)) <= 1e-13 * abs(float(ref.imag)) + 1e-16
    assert r.abs_error_estimate <= 1e-12


def test_closed_form_rejects_bad_input():
    for z in (-1.0, math.inf, math.nan):
        with pytest.raises(DomainError):
            closed_form_kernel(z)


def test_switchover_is_continuous():
    below = closed_form_kernel(1e-3 * (1 - 1e-12)).value
    above = closed_form_kernel(1e-3).value
    assert abs(below - above) < 1e-15


# ------------------------------------------------------------------ quadrature

def test_quadrature_zero():
    assert quadrature_kernel(0.0, 1e-10).value == 0j


def test_quadrature_near_phase_optimum():
    z = 1.2566
    q = quadrature_kernel(z, 1e-12).value
    c = closed_form_kernel(z).value
    assert abs(q.imag - c.imag) <= 0.01 * abs(c.imag)


@pytest.mark.parametrize("z", [50.0, 600.0, 5000.0])
def test_quadrature_matches_closed_form(z):
    assert abs(quadrature_kernel(z, 1e-12).value - closed_form_kernel(z).value) < 1e-8


def test_quadrature_tolerance_domain():
    with pytest.raises(DomainError):
        quadrature_kernel(1.0, 1e-15)
    with pytest.raises(DomainError):
        quadrature_kernel(1.0, 0.1)


# ---------------------------------------------------------------------- series

def test_series_zero():
    r = series_kernel(0.0, 1e-10)
    assert r.value == 0j
    assert r.terms_or_evals == 1


def test_series_matches_closed_form_at_two():
    assert abs(series_kernel(2.0).value - closed_form_kernel(2.0).value) < 1e-9


def test_series_matches_quadrature_at_thirty():
    assert abs(series_kernel(30.0).value - quadrature_kernel(30.0, 1e-10).value) < 1e-8


def test_series_term_count_grows_with_z():
    counts = [series_kernel(z).terms_or_evals for z in (1.0, 10.0, 100.0)]
    assert counts == sorted(counts)
    assert counts[-1] > 100


def test_series_large_argument():
    assert abs(series_kernel(5000.0).value - closed_form_kernel(5000.0).value) < 1e-10


# ---------------------------------------------------------------------- taylor

def test_third_taylor_coefficient_from_high_precision_expansion():
    with mpmath.workdps(80):
        z = mpmath.mpf("1e-12")
        c1 = mpmath.mpc(0, -mpmath.mpf(2) / 3)
        c2 = mpmath.mpf(7) / 15
        c3 = (mp_closed(z, 80) - c1 * z - c2 * z ** 2) / z ** 3
    assert complex(c3) == pytest.approx(kernels.TAYLOR_C3, abs=1e-9)
    assert kernels.TAYLOR_C3 == pytest.approx(11j / 45, abs=1e-16)


def test_taylor_zero():
    assert taylor_kernel(0.0, 2).value == 0j


def test_taylor_second_order_value():
    r = taylor_kernel(0.1, 2)
    assert r.value.real == pytest.approx(4.667e-3, rel=1e-3)
    assert r.value.imag == pytest.approx(-6.667e-2, rel=1e-3)
    assert r.value == pytest.approx(7 / 15 * 0.01 - 2j / 3 * 0.1, abs=1e-15)


def test_taylor_truncation_error():
    diff = abs(taylor_kernel(0.1, 2).value - closed_form_kernel(0.1).value)
    assert diff < abs(kernels.TAYLOR_C3) * 0.1 ** 3 * 1.5
    assert taylor_kernel(0.1, 2).abs_error_estimate == pytest.approx(abs(kernels.TAYLOR_C3) * 1e-3)


def test_taylor_third_order_beats_second():
    exact = closed_form_kernel(0.05).value
    assert abs(taylor_kernel(0.05, 3).value - exact) < abs(taylor_kernel(0.05, 2).value - exact)


def test_taylor_order_domain():
    with pytest.raises(DomainError):
        taylor_kernel(0.1, 4)


# ------------------------------------------------------------------- isotropic

def _mp_isotropic(z):
    """Isotropic kernel by brute-force 2-D quadrature over both polar cosines."""
    with mpmath.workdps(20):
        def w(c, cp):
            return (1 + c * c * cp * cp + (1 - c * c) * (1 - cp * cp) / 2) / 2

        def f(c, cp):
            return w(c, cp) * (1 - mpmath.cos(z * (c - cp))) / 4

        return float(mpmath.quad(f, [-1, 1], [-1, 1]))


def test_isotropic_zero():
    assert isotropic_kernel(0.0).value == 0j


@pytest.mark.parametrize("z", [0.3, 2.0, 6.0])
def test_isotropic_against_two_dimensional_quadrature(z):
    assert isotropic_kernel(z).value.real == pytest.approx(_mp_isotropic(z), abs=1e-9)


@pytest.mark.parametrize("z", np.geomspace(1e-3, 1e3, 17))
def test_isotropic_imaginary_part_vanishes(z):
    tol = 1e-10
    r = isotropic_kernel(z, tol)
    assert abs(r.value.imag) <= tol
    assert r.value.real == pytest.approx(isotropic_closed_form(z), abs=1e-9)


def test_isotropic_saturation():
    assert isotropic_kernel(1e3).value.real == pytest.approx(2 / 3, abs=1e-3)


# ------------------------------------------------------------------ asymptotic

def test_asymptotic_limits():
    assert asymptotic_limits("directional") == (2 / 3, 0.0)
    re_i, im_i = asymptotic_limits("isotropic")
    assert im_i == 0.0
    assert re_i == pytest.approx(isotropic_kernel(1e3).value.real, abs=1e-3)
    # mean of (1 + u^2)/4 over [-1, 1]
    assert float(mpmath.quad(lambda u: (1 + u * u) / 4, [-1, 1])) == pytest.approx(2 / 3)


# ------------------------------------------------------------------ invariants

def test_all_methods_vanish_at_zero():
    for r in (closed_form_kernel(0.0), quadrature_kernel(0.0), series_kernel(0.0),
              taylor_kernel(0.0, 3), isotropic_kernel(0.0)):
        assert r.value == 0j


def test_real_part_non_negative_on_log_grid():
    assert min(closed_form_kernel(z).value.real for z in np.geomspace(1e-4, 1e4, 400)) >= 0.0


def test_cross_method_agreement():
    for z in np.geomspace(1e-2, 50.0, 60):
        c = closed_form_kernel(z).value
        assert abs(c - quadrature_kernel(z).value) <= 1e-8
        assert abs(c - series_kernel(z).value) <= 1e-8


@pytest.mark.parametrize("z", np.geomspace(1e-5, 1e-2, 12))
def test_small_z_law(z):
    v = closed_form_kernel(z).value
    assert abs(v.imag + 2 / 3 * z) <= 1e-2 * 2 / 3 * z
    assert abs(v.real - 7 / 15 * z * z) <= 1e-2 * 7 / 15 * z * z


@pytest.mark.parametrize("z", np.geomspace(200.0, 1e4, 25))
def test_large_z_law(z):
    v = closed_form_kernel(z).value
    assert abs(v.real - 2 / 3) <= 0.02
    assert abs(v.imag) <= 0.02


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.0, max_value=1e4))
def test_kernel_result_bounds(z):
    r = closed_form_kernel(z)
    assert 0.0 <= r.value.real <= 4 / 3
    assert abs(r.value.imag) <= 2 / 3
    assert r.abs_error_estimate >= 0.0


def test_concurrent_evaluation_is_deterministic():
    zs = list(np.geomspace(1e-2, 100.0, 64))
    serial = [series_kernel(z).value for z in zs]
    with ThreadPoolExecutor(max_workers=8) as pool:
        parallel = list(pool.map(lambda z: series_kernel(z).value, zs))
    assert serial == parallel


def test_dispatch():
    assert kernels.evaluate(2.0, "directional", "jacobi_anger").method is Method.JACOBI_ANGER
    assert kernels.evaluate(2.0, "isotropic", "closed_form").value.imag == 0.0
    asym = kernels.evaluate(10.0, "directional", "asymptotic")
    assert asym.value == complex(2 / 3, 0.0)
