"""Phase signatures and decoherence of spatial superpositions in directional particle beams."""

from .errors import ConvergenceError, DomainError, NoOptimumError, SamplingError
from .interferometer import (
    SpinState,
    VisibilityPhase,
    apply_readout_gates,
    efficiency,
    evolve,
    goldilocks_search,
    signal,
    signal_map,
)
from .kernels import (
    KernelResult,
    Method,
    Mode,
    asymptotic_limits,
    closed_form_kernel,
    isotropic_kernel,
    quadrature_kernel,
    series_kernel,
    taylor_kernel,
)
from .bessel import bessel_jn
from .montecarlo import McEstimate, mc_kernel, sampler_selftest
from .physics import (
    BeamSpec,
    ComplexRate,
    CrossSectionModel,
    effective_flux,
    ion_detection_rate,
    localization_rate,
    rutherford_prefactor,
)

__version__ = "0.1.0"
