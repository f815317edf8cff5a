"""Dimensionless angular kernel of the localization rate.

For a beam along +z scattering elastically off a superposition separated
along +z, with differential cross-section shape (1 + cos^2)/2, the
localization rate factorizes as ``F(dx) = flux * g * q**j * F_ang(q * dx)``
with

    F_ang(z) = 1/4 * integral_{-1}^{1} (1 + u^2) (1 - exp(i z (1 - u))) du

where u is the cosine of the outgoing polar angle. ``Re F_ang`` decoheres,
``Im F_ang`` imprints a relative phase. The isotropic variant averages the
incoming direction over the sphere as well.

Every directional evaluator here (closed form, adaptive quadrature,
Jacobi-Anger series, Taylor polynomial) is independent of the others so they
can cross-check each other.
"""

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import quadrature
from .bessel import bessel_jn_sequence
from .errors import ConvergenceError, DomainError

# Taylor coefficients of F_ang(z) = sum_n c_n z^n. Expanding the exponential,
# c_n = -(i^n / n!) * m_n with moments m_n = 1/4 int (1+u^2)(1-u)^n du, and
# substituting w = 1 - u gives m_n = (2^(n+2)/(n+1) - 2^(n+3)/(n+2) + 2^(n+3)/(n+3)) / 4.
#   m_1 = 2/3   -> c_1 = -2i/3
#   m_2 = 14/15 -> c_2 = 7/15
#   m_3 = 22/15 -> c_3 = -(i^3/6)(22/15) = 11i/45
TAYLOR_C1 = -2j / 3
TAYLOR_C2 = 7 / 15
TAYLOR_C3 = 11j / 45
TAYLOR_C4 = -(1 / 24) * (58 / 35)  # m_4 = 58/35, used only as the order-3 error estimate

#: Re F_ang saturates at the total weight of the angular shape.
SATURATION = 2 / 3

DEFAULT_SWITCHOVER = 1e-3


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"
    JACOBI_ANGER = "jacobi_anger"
    TAYLOR = "taylor"
    ASYMPTOTIC = "asymptotic"
    MONTECARLO = "montecarlo"


class Mode(str, enum.Enum):
    DIRECTIONAL = "directional"
    ISOTROPIC = "isotropic"


@dataclass(frozen=True)
class KernelResult:
    value: complex
    abs_error_estimate: float
    method: Method
    terms_or_evals: int

    @property
    def real(self):
        return self.value.real

    @property
    def imag(self):
        return self.value.imag


def _check_z(z):
    z = float(z)
    if not math.isfinite(z) or z < 0.0:
        raise DomainError(f"z must be finite and non-negative, got {z!r}")
    return z


def _moment(n):
    """Exact m_n = 1/4 int_{-1}^{1} (1 + u^2) (1 - u)^n du."""
    two = Fraction(2)
    return (two ** (n + 2) / (n + 1) - two ** (n + 3) / (n + 2) + two ** (n + 3) / (n + 3)) / 4


def _series_coefficients(order):
    coeffs = []
    for n in range(1, order + 1):
        m = float(_moment(n))
        coeffs.append(-(1j ** n) * m / math.factorial(n))
    return coeffs


_EXACT_COEFFS = _series_coefficients(12)


def _taylor_sum(z, coeffs):
    acc = 0.0 + 0.0j
    for c in reversed(coeffs):
        acc = (acc + c) * z
    return acc


def taylor_kernel(z, order=2):
    """Truncated small-z expansion of the directional kernel.

    The error estimate is the magnitude of the first omitted term.
    """
    z = _check_z(z)
    if order not in (1, 2, 3):
        raise DomainError(f"order must be 1, 2 or 3, got {order!r}")
    coeffs = [TAYLOR_C1, TAYLOR_C2, TAYLOR_C3][:order]
    nxt = [TAYLOR_C2, TAYLOR_C3, TAYLOR_C4][order - 1]
    value = _taylor_sum(z, coeffs)
    return KernelResult(complex(value), abs(nxt) * z ** (order + 1), Method.TAYLOR, order)


def _one_minus_sinc(z):
    """1 - sin(z)/z without cancellation."""
    if z < 0.5:
        z2 = z * z
        term, total = 1.0, 0.0
        for k in range(1, 12):
            term *= -z2 / ((2 * k) * (2 * k + 1))
            total -= term
        return total
    return 1.0 - math.sin(z) / z


def _j1_over_z_minus_third(z):
    """j1(z)/z - 1/3 without cancellation (j1 is the spherical Bessel function)."""
    if z < 0.5:
        z2 = z * z
        # j1(z)/z = sum_k (-1)^k (2k+2) z^(2k) / (2k+3)!
        total = 0.0
        power = 1.0
        for k in range(1, 12):
            power *= -z2
            total += (2 * k + 2) * power / math.factorial(2 * k + 3)
        return total
    s, c = math.sin(z), math.cos(z)
    return (s / z - c) / (z * z) - 1.0 / 3.0


def closed_form_kernel(z, switchover=DEFAULT_SWITCHOVER):
    """Directional kernel from its trigonometric closed form.

    Integrating the u-integral analytically gives

        F_ang(z) = 2/3 - exp(iz) * h(z),   h(z) = j0(z) - j1(z)/z

    with spherical Bessel functions j0, j1. The real part is evaluated as
    ``(2/3 - h) + 2 sin^2(z/2) h`` with both pieces free of cancellation.
    Below ``switchover`` the exact Taylor series is used instead.
    """
    z = _check_z(z)
    if z == 0.0:
        return KernelResult(0j, 0.0, Method.CLOSED_FORM, 0)
    if z < switchover:
        value = _taylor_sum(z, _EXACT_COEFFS)
        return KernelResult(complex(value), 1e-16 * abs(value), Method.CLOSED_FORM, len(_EXACT_COEFFS))
    deficit = _one_minus_sinc(z) + _j1_over_z_minus_third(z)  # 2/3 - h
    h = SATURATION - deficit
    half_s = math.sin(0.5 * z)
    re = deficit + 2.0 * half_s * half_s * h
    im = -math.sin(z) * h
    err = 8.0 * np.finfo(float).eps * (1.0 + abs(h))
    return KernelResult(complex(re, im), err, Method.CLOSED_FORM, 1)


def _directional_integrand(z):
    def f(u):
        w = z * (1.0 - u)
        s = np.sin(0.5 * w)
        # 1 - exp(iw) = 2 sin^2(w/2) - i sin(w)
        return 0.25 * (1.0 + u * u) * (2.0 * s * s - 1j * np.sin(w))
    return f


def quadrature_kernel(z, tol=1e-12, max_depth=40):
    """Directional kernel by adaptive Gauss-Kronrod quadrature over u.

    For z > 500 the interval is pre-split into pieces no longer than pi/z so
    each piece sees at most half an oscillation.
    """
    z = _check_z(z)
    if not (1e-14 < tol < 1e-2):
        raise DomainError(f"tol must lie in (1e-14, 1e-2), got {tol!r}")
    pieces = int(math.ceil(2.0 * z / math.pi)) if z > 500.0 else 1
    res = quadrature.integrate(_directional_integrand(z), -1.0, 1.0, tol,
                               max_depth=max_depth, initial_pieces=pieces)
    return KernelResult(res.value, res.abs_error, Method.QUADRATURE, res.n_evals)


def _chebyshev_moment(n):
    """int_{-1}^{1} (1 + u^2) T_n(u) du, zero for odd n."""
    if n % 2:
        return 0.0

    def t_int(k):
        return 2.0 / (1.0 - k * k)  # k even

    # u^2 T_n = (T_{n+2} + 2 T_n + T_{|n-2|}) / 4
    return t_int(n) + 0.25 * (t_int(n + 2) + 2.0 * t_int(n) + t_int(abs(n - 2)))


def series_kernel(z, tol=1e-12):
    """Directional kernel from the Jacobi-Anger expansion.

    With u = cos(theta), exp(-izu) = J0(z) + 2 sum_n (-i)^n J_n(z) cos(n theta),
    and each harmonic integrates against (1 + u^2) in closed form. Odd
    harmonics vanish identically, so the stopping rule (three consecutive
    negligible terms) is applied to the even harmonics, and never before the
    order exceeds z, where the terms start to decay.
    """
    z = _check_z(z)
    if tol <= 0.0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    if z == 0.0:
        return KernelResult(0j, 0.0, Method.JACOBI_ANGER, 1)
    n_max = int(math.ceil(z)) + 200
    jn = bessel_jn_sequence(n_max, z)
    partial = jn[0] * _chebyshev_moment(0)
    small_run = 0
    last_terms = []
    n_terms = 1
    for n in range(2, n_max + 1, 2):
        sign = 1.0 if n % 4 == 0 else -1.0  # (-i)^n for even n
        term = 2.0 * sign * jn[n] * _chebyshev_moment(n)
        partial += term
        n_terms = n + 1
        last_terms.append(abs(term))
        floor = tol * abs(partial) if abs(partial) > tol else tol
        small_run = small_run + 1 if abs(term) < floor else 0
        if small_run >= 3 and n > z:
            integral = partial
            value = SATURATION - 0.25 * complex(math.cos(z), math.sin(z)) * integral
            return KernelResult(value, 0.25 * sum(last_terms[-3:]), Method.JACOBI_ANGER, n_terms)
    raise ConvergenceError(
        f"Jacobi-Anger series did not converge within {n_max} terms at z={z:g}",
        best_estimate=SATURATION - 0.25 * complex(math.cos(z), math.sin(z)) * partial,
    )


def _isotropic_integrand(z):
    def f(c):
        e = np.exp(1j * z * c)
        return np.stack([e, c * c * e])
    return f


def isotropic_kernel(z, tol=1e-10, max_depth=40):
    """Kernel for incoming directions uniform over the sphere.

    Averaging the weight (1 + (n.n')^2)/2 over both azimuths leaves
    (1 + c^2 c'^2 + (1-c^2)(1-c'^2)/2)/2, with c, c' the polar cosines, which
    separates. The double integral then reduces to

        F_iso(z) = 2/3 - 1/8 (|P0|^2 + |P2|^2 + |P0 - P2|^2 / 2)

    with P_k = int_{-1}^{1} c^k exp(izc) dc evaluated by adaptive quadrature.
    The result is real: exchanging incoming and outgoing directions conjugates
    the phase factor while leaving the weight unchanged.
    """
    z = _check_z(z)
    if not (1e-12 < tol < 1e-2):
        raise DomainError(f"tol must lie in (1e-12, 1e-2), got {tol!r}")
    if z == 0.0:
        return KernelResult(0j, 0.0, Method.QUADRATURE, 0)
    sub_tol = tol / 20.0
    pieces = int(math.ceil(2.0 * z / math.pi)) if z > 500.0 else 1
    evals = 0
    moments = []
    errs = []
    for k in (0, 2):
        def f(c, k=k):
            return (c ** k) * np.exp(1j * z * c)
        res = quadrature.integrate(f, -1.0, 1.0, sub_tol, max_depth=max_depth,
                                   initial_pieces=pieces)
        moments.append(res.value)
        errs.append(res.abs_error)
        evals += res.n_evals
    p0, p2 = moments
    weighted = abs(p0) ** 2 + abs(p2) ** 2 + 0.5 * abs(p0 - p2) ** 2
    value = SATURATION - weighted / 8.0
    # first-order propagation of the moment errors, |P_k| <= 2
    err = 0.5 * (2.0 * errs[0] + 2.0 * errs[1]) + (errs[0] + errs[1]) / 4.0
    return KernelResult(complex(value, 0.0), err, Method.QUADRATURE, evals)


def isotropic_closed_form(z):
    """Isotropic kernel via spherical Bessel functions (reference evaluation).

    P0 = 2 j0(z) and P2 = 2 (j0(z) - 2 j1(z)/z), both real.
    """
    z = _check_z(z)
    if z == 0.0:
        return 0.0
    j0 = 1.0 - _one_minus_sinc(z)
    j1_over_z = _j1_over_z_minus_third(z) + 1.0 / 3.0
    p0 = 2.0 * j0
    p2 = 2.0 * (j0 - 2.0 * j1_over_z)
    return SATURATION - (p0 * p0 + p2 * p2 + 0.5 * (p0 - p2) ** 2) / 8.0


def asymptotic_limits(shape):
    """Large-z saturation values ``(re_limit, im_limit)`` for an angular shape.

    Both shapes carry total weight 2/3, and the oscillating part averages out
    in either case, so Re saturates at 2/3 while Im tends to zero.
    """
    mode = Mode(shape)
    if mode is Mode.DIRECTIONAL:
        return SATURATION, 0.0
    return SATURATION, 0.0


def evaluate(z, mode=Mode.DIRECTIONAL, method=Method.CLOSED_FORM, tol=1e-12, seed=0,
             n_samples=100_000):
    """Dispatch to the evaluator selected by ``mode`` and ``method``."""
    mode = Mode(mode)
    method = Method(method)
    if method is Method.MONTECARLO:
        from .montecarlo import mc_kernel

        est = mc_kernel(z, mode, n_samples, seed)
        return KernelResult(est.mean, 2.0 * math.hypot(est.stderr_re, est.stderr_im),
                            Method.MONTECARLO, est.n_samples)
    if mode is Mode.ISOTROPIC:
        return isotropic_kernel(z, max(tol, 1e-11))
    if method is Method.CLOSED_FORM:
        return closed_form_kernel(z)
    if method is Method.QUADRATURE:
        return quadrature_kernel(z, tol)
    if method is Method.JACOBI_ANGER:
        return series_kernel(z, tol)
    if method is Method.TAYLOR:
        return taylor_kernel(z, 3)
    if method is Method.ASYMPTOTIC:
        re, im = asymptotic_limits(mode)
        return KernelResult(complex(re, im), 1.0 / max(_check_z(z), 1e-300), Method.ASYMPTOTIC, 0)
    raise DomainError(f"unsupported method {method!r}")
