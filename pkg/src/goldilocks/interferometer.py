"""Spin readout of the interferometer.

The embedded spin starts in |+> and its coherence picks up the localization
rate: rho_12(t) = rho_12(0) exp(-F t). A pi/2 phase gate S = diag(1, i)
followed by a Hadamard maps the accumulated phase onto populations, so
rho_f,11 - rho_f,22 = A sin(phi). The opposite phase-gate convention
S = diag(1, -i) flips the sign of this signal.

Sign convention: ``phase_rate = -Im F``, so the accumulated phase
``phi = phase_rate * t`` is positive at small separations.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoOptimumError
from .kernels import Method, Mode
from .physics import ComplexRate, effective_flux, localization_rate

PHASE_GATE = np.diag([1.0, 1.0j])
HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)

_STATE_TOL = 1e-12


@dataclass(frozen=True)
class SpinState:
    """2x2 density matrix of the embedded spin."""

    rho: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        if rho.shape != (2, 2):
            raise DomainError(f"density matrix must be 2x2, got shape {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > _STATE_TOL:
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > _STATE_TOL:
            raise DomainError("density matrix does not have unit trace")
        if np.linalg.eigvalsh(rho).min() < -_STATE_TOL:
            raise DomainError("density matrix is not positive semidefinite")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @classmethod
    def from_parameters(cls, a, b, A, phi):
        """State 1/2 [[a, A e^{i phi}], [A e^{-i phi}, b]] with a + b = 2."""
        off = A * complex(math.cos(phi), math.sin(phi))
        return cls(0.5 * np.array([[a, off], [off.conjugate(), b]]))

    @classmethod
    def plus(cls):
        return cls.from_parameters(1.0, 1.0, 1.0, 0.0)

    @classmethod
    def minus(cls):
        return cls.from_parameters(1.0, 1.0, 1.0, math.pi)

    @property
    def coherence(self):
        return complex(self.rho[0, 1])

    def purity(self):
        return float(np.real(np.trace(self.rho @ self.rho)))


@dataclass(frozen=True)
class VisibilityPhase:
    A: float
    phi: float

    @classmethod
    def from_rate(cls, rate, t):
        return cls(math.exp(-rate.deco_rate * t), rate.phase_rate * t)

    @property
    def signal(self):
        return self.A * math.sin(self.phi)


def evolve(rho0, rate, t):
    """Apply the localization rate for time ``t``; populations are untouched."""
    if t < 0.0:
        raise DomainError(f"t must be non-negative, got {t!r}")
    factor = np.exp(complex(-rate.deco_rate, rate.phase_rate) * t)
    rho = rho0.rho.copy()
    rho[0, 1] = rho[0, 1] * factor
    rho[1, 0] = np.conj(rho[0, 1])
    return SpinState(rho)


def apply_readout_gates(rho):
    """H S rho S^dagger H."""
    u = HADAMARD @ PHASE_GATE
    out = u @ rho.rho @ u.conj().T
    # restore exact Hermiticity lost to rounding
    return SpinState(0.5 * (out + out.conj().T))


def signal(rho_f):
    """Population difference rho_f,11 - rho_f,22 after the readout gates."""
    return float(np.real(rho_f.rho[0, 0] - rho_f.rho[1, 1]))


def efficiency(rate, t):
    """Overlap <-|rho(t)|-> of the evolved |+> state with |->."""
    if t < 0.0:
        raise DomainError(f"t must be non-negative, got {t!r}")
    return 0.5 * (1.0 - math.exp(-rate.deco_rate * t) * math.cos(rate.phase_rate * t))


def _rates_on_grid(beam, xs, mode, delta_xs, method, threads):
    def one(dx):
        return localization_rate(beam, xs, dx, mode, method)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, delta_xs))
    return [one(dx) for dx in delta_xs]


def signal_components(beam, xs, mode, dx_over_lambda, t_grid, method=Method.CLOSED_FORM,
                      phase_model="rate", threads=1):
    """Visibility, phase and signal on a (dx/lambda, t) grid.

    ``phase_model="rate"`` accumulates phi = phase_rate * t. ``"caption"``
    instead fixes phi = 2 pi dx / lambda at every time, for comparison.
    Returns three arrays of shape ``(len(dx_over_lambda), len(t_grid))``.
    """
    ratios = np.asarray(dx_over_lambda, dtype=float)
    times = np.asarray(t_grid, dtype=float)
    if ratios.size == 0 or times.size == 0:
        raise DomainError("grids must be non-empty")
    if np.any(np.diff(ratios) < 0.0) or np.any(np.diff(times) < 0.0):
        raise DomainError("grids must be ascending")
    if np.any(times < 0.0):
        raise DomainError("times must be non-negative")
    rates = _rates_on_grid(beam, xs, mode, ratios * beam.wavelength, method, threads)
    deco = np.array([r.deco_rate for r in rates])
    phase = np.array([r.phase_rate for r in rates])
    A = np.exp(-np.outer(deco, times))
    if phase_model == "rate":
        phi = np.outer(phase, times)
    elif phase_model == "caption":
        phi = np.repeat((2.0 * math.pi * ratios)[:, None], times.size, axis=1)
    else:
        raise DomainError(f"unknown phase model {phase_model!r}")
    return A, phi, A * np.sin(phi)


def signal_map(beam, xs, mode, dx_over_lambda, t_grid, method=Method.CLOSED_FORM,
               phase_model="rate", threads=1):
    """Signal A sin(phi) on a (dx/lambda, t) grid."""
    return signal_components(beam, xs, mode, dx_over_lambda, t_grid, method,
                             phase_model, threads)[2]


@dataclass(frozen=True)
class GoldilocksResult:
    z_star: float
    window: tuple
    value_star: float
    threshold: float
    wavelength: float
    criterion: str

    @property
    def dx_over_lambda_star(self):
        return self.z_star / (2.0 * math.pi)

    @property
    def dx_star(self):
        return self.dx_over_lambda_star * self.wavelength

    @property
    def window_dx_over_lambda(self):
        return tuple(z / (2.0 * math.pi) for z in self.window)


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, lo, hi, tol=1e-12):
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol * max(1.0, abs(lo) + abs(hi)):
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = f(d)
    x = 0.5 * (lo + hi)
    return x, f(x)


def _crossing(f, inside, outside, level, iters=60):
    for _ in range(iters):
        mid = 0.5 * (inside + outside)
        if f(mid) >= level:
            inside = mid
        else:
            outside = mid
    return inside


def goldilocks_search(beam, xs, mode=Mode.DIRECTIONAL, t=1.0, criterion="max_abs_im_kernel",
                      s0=0.95, z_range=(1e-3, 1e2), n_grid=400, method=Method.CLOSED_FORM):
    """Locate the separation that maximizes the phase signature.

    ``criterion="max_abs_im_kernel"`` maximizes |phase_rate| per unit of
    effective flux, i.e. |Im F_ang| for a monochromatic beam.
    ``criterion="signal_threshold"`` maximizes |A sin phi| at time ``t``.
    The coarse argmax on a log-spaced z grid is refined by golden-section
    search in log z; the window is the contiguous z range around it where the
    criterion stays at or above ``s0`` times its maximum.

    Raises
    ------
    NoOptimumError
        If the objective vanishes on the whole grid (e.g. isotropic mode).
    """
    if not 0.0 < s0 < 1.0:
        raise DomainError(f"s0 must lie in (0, 1), got {s0!r}")
    flux = effective_flux(beam, xs)
    if flux <= 0.0:
        raise NoOptimumError("effective flux is zero; nothing to optimize")

    def rate_at(log_z):
        return localization_rate(beam, xs, math.exp(log_z) / beam.q0, mode, method)

    if criterion == "max_abs_im_kernel":
        def objective(log_z):
            return abs(rate_at(log_z).phase_rate) / flux
    elif criterion == "signal_threshold":
        def objective(log_z):
            return abs(VisibilityPhase.from_rate(rate_at(log_z), t).signal)
    else:
        raise DomainError(f"unknown criterion {criterion!r}")

    grid = np.linspace(math.log(z_range[0]), math.log(z_range[1]), n_grid)
    values = np.array([objective(x) for x in grid])
    i = int(np.argmax(values))
    if values[i] <= 1e-9:
        raise NoOptimumError(f"objective {criterion} is flat (max {values[i]:.3g})")
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, n_grid - 1)]
    x_star, f_star = _golden_max(objective, lo, hi)
    if values[i] > f_star:
        x_star, f_star = grid[i], values[i]
    level = s0 * f_star

    left = i
    while left > 0 and values[left - 1] >= level:
        left -= 1
    right = i
    while right < n_grid - 1 and values[right + 1] >= level:
        right += 1
    x_lo = grid[0] if left == 0 else _crossing(objective, min(grid[left], x_star), grid[left - 1], level)
    x_hi = grid[-1] if right == n_grid - 1 else _crossing(objective, max(grid[right], x_star), grid[right + 1], level)
    x_lo, x_hi = min(x_lo, x_star), max(x_hi, x_star)
    return GoldilocksResult(math.exp(x_star), (math.exp(x_lo), math.exp(x_hi)), f_star, level,
                            beam.wavelength, criterion)


def rate_from_complex(value, delta_x=0.0, z=0.0):
    """ComplexRate from a complex F (convenience for tests and scripts)."""
    return ComplexRate(value.real, -value.imag, delta_x, z)
