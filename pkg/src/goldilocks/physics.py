"""Physical-unit layer: cross-sections, beams and the dimensional localization rate.

All quantities are SI. A cross-section model supplies the coupling ``g * q**j``
(an area) that multiplies the common angular shape (1 + cos^2)/2. The
localization rate of a monochromatic beam is then

    F(dx) = n v g q0^j * F_ang(q0 dx)

and its real part is a decoherence rate while ``-Im F`` is the rate at which
relative phase accumulates (positive for small separations).
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import constants
from .errors import DomainError
from .kernels import SATURATION, TAYLOR_C2, Method, Mode, evaluate

_trapezoid = getattr(np, "trapezoid", None) or np.trapz


class CrossSectionKind(str, enum.Enum):
    POWERLAW = "powerlaw"
    THOMPSON = "thompson"
    RAYLEIGH = "rayleigh"
    RUTHERFORD = "rutherford"


@dataclass(frozen=True)
class CrossSectionModel:
    """Power-law cross-section ``g q^j (1 + cos^2)/2``.

    ``g`` has units m^(2+j), so ``g q^j`` is an area.
    """

    kind: CrossSectionKind
    g: float
    j: int
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not (self.g > 0.0 and math.isfinite(self.g)):
            raise DomainError(f"coupling g must be positive and finite, got {self.g!r}")
        if int(self.j) != self.j or self.j < 0:
            raise DomainError(f"exponent j must be a non-negative integer, got {self.j!r}")

    def coupling(self, q):
        """Area ``g q^j`` at wavenumber ``q`` [rad/m]."""
        return self.g * np.asarray(q, dtype=float) ** self.j


def powerlaw(g, j):
    return CrossSectionModel(CrossSectionKind.POWERLAW, float(g), int(j))


def thompson(electron_radius=constants.CLASSICAL_ELECTRON_RADIUS):
    """Thompson scattering: j = 0 and g = r_e**2."""
    return CrossSectionModel(CrossSectionKind.THOMPSON, electron_radius ** 2, 0,
                             {"electron_radius": electron_radius})


def rayleigh(radius=50e-9, permittivity=2.1, coupling="eps_plus_one"):
    """Rayleigh scattering off a dielectric sphere: j = 4.

    ``coupling="eps_plus_one"`` uses ``a^6 |(eps-1)/(eps+1)|^2``; ``"clausius_mossotti"``
    uses the conventional ``a^6 |(eps-1)/(eps+2)|^2``. The defaults (50 nm
    radius, eps = 2.1 for fused silica near 1064 nm) are assumptions.
    """
    if radius <= 0.0:
        raise DomainError(f"sphere radius must be positive, got {radius!r}")
    if coupling == "eps_plus_one":
        factor = abs((permittivity - 1.0) / (permittivity + 1.0)) ** 2
    elif coupling == "clausius_mossotti":
        factor = abs((permittivity - 1.0) / (permittivity + 2.0)) ** 2
    else:
        raise DomainError(f"unknown Rayleigh coupling {coupling!r}")
    return CrossSectionModel(CrossSectionKind.RAYLEIGH, radius ** 6 * factor, 4,
                             {"radius": radius, "permittivity": permittivity,
                              "coupling": coupling})


def thermal_wavenumber(temperature, mass):
    """q with k_B T / 2 = hbar^2 q^2 / (2 m)."""
    if temperature <= 0.0 or mass <= 0.0:
        raise DomainError("temperature and mass must be positive")
    return math.sqrt(mass * constants.BOLTZMANN * temperature) / constants.HBAR


def rutherford_prefactor(Z, Zp, T, m):
    """Rutherford coupling at the thermal wavenumber [m^2].

    Substituting hbar^2 q^2 = m k_B T into m^2/(hbar^4 q^4) (Z Z' e^2)^2/(4 pi eps0)^2
    cancels the mass exactly, leaving (Z Z' e^2 / (4 pi eps0 k_B T))^2.
    ``m`` is validated but does not enter the result.
    """
    if T <= 0.0 or m <= 0.0:
        raise DomainError("temperature and mass must be positive")
    coulomb = constants.ELEMENTARY_CHARGE ** 2 / (4.0 * math.pi * constants.VACUUM_PERMITTIVITY)
    return (Z * Zp * coulomb / (constants.BOLTZMANN * T)) ** 2


def rutherford(Z=1, Zp=1, T=100.0, m=1e-25):
    """Rutherford model as a j = 0 coupling at the thermal wavenumber.

    The Rutherford angular factor is (1 + cos^2), twice the common shape, so
    ``g = 2 * rutherford_prefactor``.
    """
    prefactor = rutherford_prefactor(Z, Zp, T, m)
    return CrossSectionModel(CrossSectionKind.RUTHERFORD, 2.0 * prefactor, 0,
                             {"Z": Z, "Zp": Zp, "T": T, "m": m, "prefactor": prefactor,
                              "q_thermal": thermal_wavenumber(T, m)})


def ion_detection_rate(Zp, T, m, flux_density, Z=1):
    """Rate of ion scattering events on the sensor [1/s].

    This is the saturated decoherence rate ``Re F(dx -> inf)``: the flux times
    the Rutherford coupling (including its factor 2 relative to the common
    shape) times the 2/3 total weight of the angular kernel.
    """
    if flux_density < 0.0:
        raise DomainError(f"flux density must be non-negative, got {flux_density!r}")
    return flux_density * 2.0 * rutherford_prefactor(Z, Zp, T, m) * SATURATION


class BeamKind(str, enum.Enum):
    MONOCHROMATIC = "monochromatic"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class BeamSpec:
    """Particle beam travelling along +z.

    Monochromatic beams carry a wavenumber ``q0`` and a flux density ``n v``
    [1/(m^2 s)]. Tabulated beams carry samples of the spectral flux density
    ``n(q) v(q)`` [1/(m^3 s)] on an ascending wavenumber grid.
    """

    kind: BeamKind
    q0: float
    flux_density: float = 0.0
    q_table: tuple = ()
    flux_table: tuple = ()

    def __post_init__(self):
        if self.kind is BeamKind.MONOCHROMATIC:
            if not self.q0 > 0.0:
                raise DomainError(f"q0 must be positive, got {self.q0!r}")
            if self.flux_density < 0.0:
                raise DomainError(f"flux density must be non-negative, got {self.flux_density!r}")
        else:
            q = np.asarray(self.q_table, dtype=float)
            nv = np.asarray(self.flux_table, dtype=float)
            if q.size == 0:
                raise DomainError("tabulated beam needs a non-empty table")
            if q.shape != nv.shape:
                raise DomainError("wavenumber and flux tables differ in length")
            if np.any(q <= 0.0) or np.any(np.diff(q) <= 0.0):
                raise DomainError("wavenumbers must be positive and strictly ascending")
            if np.any(nv < 0.0):
                raise DomainError("negative flux in table")

    @property
    def wavelength(self):
        return 2.0 * math.pi / self.q0


def monochromatic(flux_density, q0=None, wavelength=None):
    if (q0 is None) == (wavelength is None):
        raise DomainError("give exactly one of q0 or wavelength")
    if q0 is None:
        if wavelength <= 0.0:
            raise DomainError(f"wavelength must be positive, got {wavelength!r}")
        q0 = 2.0 * math.pi / wavelength
    return BeamSpec(BeamKind.MONOCHROMATIC, float(q0), float(flux_density))


def tabulated(q, flux):
    """Beam from samples of n(q) v(q); ``q0`` is the flux-weighted mean wavenumber."""
    q = tuple(float(v) for v in q)
    flux = tuple(float(v) for v in flux)
    if not q:
        raise DomainError("tabulated beam needs a non-empty table")
    qa, fa = np.asarray(q), np.asarray(flux)
    total = _trapezoid(fa, qa) if qa.size > 1 else 0.0
    q_ref = float(_trapezoid(fa * qa, qa) / total) if total > 0.0 else float(qa.mean())
    return BeamSpec(BeamKind.TABULATED, q_ref, 0.0, q, flux)


def photon_beam(wavelength, area, photons_per_second=1e6):
    """Single-photon stream: ``photons_per_second`` photons through ``area``."""
    if area <= 0.0:
        raise DomainError(f"photon area must be positive, got {area!r}")
    return monochromatic(photons_per_second / area, wavelength=wavelength)


def normalized_preset(wavelength=1.0, j=0):
    """Beam and cross-section with ``n v g q^j = 1/s``, as used for signal maps."""
    xs = powerlaw(1.0, j)
    beam = monochromatic(1.0, wavelength=wavelength)
    flux = 1.0 / float(xs.coupling(beam.q0))
    return monochromatic(flux, wavelength=wavelength), xs


def effective_flux(beam, xs):
    """Scattering-weighted flux ``int dq n v g q^j`` [1/s]."""
    if beam.kind is BeamKind.MONOCHROMATIC:
        return beam.flux_density * float(xs.coupling(beam.q0))
    q = np.asarray(beam.q_table)
    if q.size == 1:
        return 0.0
    return float(_trapezoid(np.asarray(beam.flux_table) * xs.coupling(q), q))


@dataclass(frozen=True)
class ComplexRate:
    """Localization rate split into decoherence [1/s] and phase [rad/s] parts."""

    deco_rate: float
    phase_rate: float
    delta_x: float = 0.0
    z: float = 0.0

    @property
    def value(self):
        """Complex F = deco_rate - i phase_rate."""
        return complex(self.deco_rate, -self.phase_rate)


def localization_rate(beam, xs, delta_x, mode=Mode.DIRECTIONAL, method=Method.CLOSED_FORM,
                      tol=1e-12):
    """Complex localization rate at superposition size ``delta_x`` [m]."""
    if not (delta_x >= 0.0 and math.isfinite(delta_x)):
        raise DomainError(f"delta_x must be finite and non-negative, got {delta_x!r}")
    if beam.kind is BeamKind.MONOCHROMATIC:
        z = beam.q0 * delta_x
        value = effective_flux(beam, xs) * evaluate(z, mode, method, tol).value
    else:
        q = np.asarray(beam.q_table)
        weights = np.asarray(beam.flux_table) * xs.coupling(q)
        kern = np.array([evaluate(qi * delta_x, mode, method, tol).value for qi in q])
        value = complex(_trapezoid(weights * kern, q)) if q.size > 1 else 0j
        z = beam.q0 * delta_x
    return ComplexRate(value.real, -value.imag, delta_x, z)


def lindblad_limits(beam, xs):
    """Curvature and saturation of Re F, for the two Lindblad-type limits.

    Returns ``(kappa, gamma)`` with ``kappa = d^2 Re F / d dx^2`` at dx = 0
    [1/(m^2 s)] and ``gamma = Re F(dx -> inf)`` [1/s], both for the
    directional shape.
    """
    if beam.kind is BeamKind.MONOCHROMATIC:
        kappa = 2.0 * TAYLOR_C2 * beam.q0 ** 2 * effective_flux(beam, xs)
    else:
        q = np.asarray(beam.q_table)
        w = np.asarray(beam.flux_table) * xs.coupling(q)
        kappa = 2.0 * TAYLOR_C2 * float(_trapezoid(w * q * q, q))
    return kappa, SATURATION * effective_flux(beam, xs)
