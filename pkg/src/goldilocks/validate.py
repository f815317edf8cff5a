"""Cross-method validation suite behind ``goldilocks validate``.

Each check returns its worst deviation and the threshold it is held to. The
report contains no timings, so two runs with the same seed are byte-identical.
"""

import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import bessel, interferometer, kernels, montecarlo, physics
from .errors import DomainError


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    max_dev: float
    threshold: float
    detail: str = ""


def _check(name, dev, threshold, detail=""):
    dev = float(dev)
    return Check(name, bool(dev <= threshold), dev, float(threshold), detail)


def check_kernel_zero():
    values = [
        kernels.closed_form_kernel(0.0).value,
        kernels.quadrature_kernel(0.0, 1e-10).value,
        kernels.series_kernel(0.0, 1e-10).value,
        kernels.taylor_kernel(0.0, 3).value,
        kernels.isotropic_kernel(0.0).value,
        montecarlo.mc_kernel(0.0, "directional", 1000, 0).mean,
    ]
    return _check("kernel_zero", max(abs(v) for v in values), 0.0, "all methods at z=0")


def _cross_method_grid():
    return np.geomspace(1e-2, 50.0, 200)


def check_cross_quadrature():
    dev = max(abs(kernels.closed_form_kernel(z).value - kernels.quadrature_kernel(z, 1e-12).value)
              for z in _cross_method_grid())
    return _check("cross_method_quadrature", dev, 1e-8, "200 log-spaced z in [1e-2, 50]")


def check_cross_series():
    dev = max(abs(kernels.closed_form_kernel(z).value - kernels.series_kernel(z, 1e-12).value)
              for z in _cross_method_grid())
    return _check("cross_method_series", dev, 1e-8, "200 log-spaced z in [1e-2, 50]")


def check_taylor_small_z():
    dev = 0.0
    for z in np.geomspace(1e-4, 1e-2, 20):
        exact = kernels.closed_form_kernel(z).value
        approx = kernels.taylor_kernel(z, 2).value
        dev = max(dev, abs(approx.real - exact.real) / abs(exact.real),
                  abs(approx.imag - exact.imag) / abs(exact.imag))
    return _check("taylor_small_z", dev, 1e-2, "order-2 polynomial vs closed form, z <= 1e-2")


def long_wavelength_fit(zs=(1e-3, 3e-3, 1e-2)):
    """Least-squares slopes of Im F vs z and Re F vs z^2 through the origin."""
    zs = np.asarray(zs)
    vals = np.array([kernels.closed_form_kernel(z).value for z in zs])
    lin = float(np.sum(zs * vals.imag) / np.sum(zs ** 2))
    quad = float(np.sum(zs ** 2 * vals.real) / np.sum(zs ** 4))
    return lin, quad


def check_long_wavelength_fit():
    lin, quad = long_wavelength_fit()
    dev = max(abs(lin / float(Fraction(-2, 3)) - 1.0), abs(quad / float(Fraction(7, 15)) - 1.0))
    return _check("long_wavelength_fit", dev, 5e-3,
                  f"linear Im coefficient {lin:.9f}, quadratic Re coefficient {quad:.9f}")


def check_short_wavelength():
    dev = 0.0
    for z in [1e3] + list(np.geomspace(200.0, 1e4, 40)):
        v = kernels.closed_form_kernel(z).value
        dev = max(dev, abs(v.real - 2.0 / 3.0), abs(v.imag))
    return _check("short_wavelength_limit", dev, 1e-2, "z >= 200: Re -> 2/3, Im -> 0")


def check_re_nonnegative():
    worst = min(kernels.closed_form_kernel(z).value.real for z in np.geomspace(1e-4, 1e4, 400))
    return _check("re_nonnegative", max(-worst, 0.0), 0.0, f"min Re = {worst:.3e}")


def check_isotropic():
    dev_im, dev_ref = 0.0, 0.0
    for z in np.geomspace(1e-2, 1e3, 30):
        r = kernels.isotropic_kernel(z, 1e-10)
        dev_im = max(dev_im, abs(r.value.imag))
        dev_ref = max(dev_ref, abs(r.value.real - kernels.isotropic_closed_form(z)))
    return [
        _check("isotropic_im_zero", dev_im, 1e-10, "|Im| on 30 z in [1e-2, 1e3]"),
        _check("isotropic_vs_reference", dev_ref, 1e-9, "quadrature vs spherical-Bessel form"),
    ]


def check_asymptotic_limits():
    re_d, im_d = kernels.asymptotic_limits("directional")
    re_i, im_i = kernels.asymptotic_limits("isotropic")
    iso = kernels.isotropic_kernel(1e3).value
    dev = max(abs(re_d - 2.0 / 3.0), abs(im_d), abs(im_i), abs(iso.real - re_i))
    return _check("asymptotic_limits", dev, 1e-2, "saturation constants vs kernels at z=1e3")


def check_montecarlo(seed, n_samples, threads):
    worst = 0.0
    for z in (0.5, 2.0, 10.0):
        est = montecarlo.mc_kernel(z, "directional", n_samples, seed, threads)
        ref = kernels.closed_form_kernel(z).value
        worst = max(worst, abs(est.mean.real - ref.real) / est.stderr_re,
                    abs(est.mean.imag - ref.imag) / est.stderr_im)
    iso = montecarlo.mc_kernel(5.0, "isotropic", n_samples, seed, threads)
    ref = kernels.isotropic_kernel(5.0).value.real
    iso_dev = max(abs(iso.mean.imag) / iso.stderr_im, abs(iso.mean.real - ref) / iso.stderr_re)
    return [
        _check("montecarlo_directional", worst, 4.0, "standard errors, z in {0.5, 2, 10}"),
        _check("montecarlo_isotropic", iso_dev, 4.0, "standard errors, z = 5"),
    ]


def check_sampler(seed, n_samples):
    report = montecarlo.sampler_selftest(max(n_samples, 100_000), seed)
    return _check("sampler_moments", max(abs(c.z_score) for c in report), 5.0,
                  "moments 1-4 of u under 3/8 (1 + u^2), in standard errors")


def check_bessel_recurrence(seed):
    rng = np.random.default_rng(seed)
    dev = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 400))
        x = float(rng.uniform(0.1, 1000.0))
        jm, j0, jp = (bessel.bessel_jn(k, x) for k in (n - 1, n, n + 1))
        dev = max(dev, abs(jm + jp - (2.0 * n / x) * j0))
    return _check("bessel_recurrence", dev, 1e-9, "500 random (n, x)")


def _random_state_parameters(rng):
    a = float(rng.uniform(0.0, 2.0))
    b = 2.0 - a
    A = float(rng.uniform(0.0, 1.0)) * math.sqrt(a * b)
    phi = float(rng.uniform(-math.pi, math.pi))
    return a, b, A, phi


def check_gate_algebra(seed):
    rng = np.random.default_rng(seed + 1)
    dev_diag, dev_sig = 0.0, 0.0
    for _ in range(1000):
        a, b, A, phi = _random_state_parameters(rng)
        rho = interferometer.SpinState.from_parameters(a, b, A, phi)
        rf = interferometer.apply_readout_gates(rho)
        d = np.real(np.diag(rf.rho))
        dev_diag = max(dev_diag, abs(d[0] - (a + b + 2 * A * math.sin(phi)) / 4),
                       abs(d[1] - (a + b - 2 * A * math.sin(phi)) / 4))
        dev_sig = max(dev_sig, abs(interferometer.signal(rf) - 2.0 * rho.coherence.imag))
        amp = float(rng.uniform(0.0, 1.0))
        unit = interferometer.SpinState.from_parameters(1.0, 1.0, amp, phi)
        dev_sig = max(dev_sig, abs(interferometer.signal(interferometer.apply_readout_gates(unit))
                                   - amp * math.sin(phi)))
    return [
        _check("gate_diagonal", dev_diag, 1e-12, "(a+b +- 2A sin phi)/4 on 1000 random states"),
        _check("gate_signal", dev_sig, 1e-12, "signal = A sin phi = 2 Im rho_12"),
    ]


def check_evolve(seed):
    rng = np.random.default_rng(seed + 2)
    failures = 0
    for _ in range(500):
        a, b, A, phi = _random_state_parameters(rng)
        rho = interferometer.SpinState.from_parameters(a, b, A, phi)
        rate = physics.ComplexRate(float(rng.uniform(0, 5)), float(rng.uniform(-10, 10)))
        try:
            out = interferometer.evolve(rho, rate, float(rng.uniform(0, 3)))
        except DomainError:
            failures += 1
            continue
        if np.max(np.abs(np.diag(out.rho) - np.diag(rho.rho))) > 1e-15:
            failures += 1
    return _check("evolve_invariants", failures, 0, "Hermitian, unit trace, PSD, fixed populations")


def check_efficiency(seed):
    rng = np.random.default_rng(seed + 3)
    t = 1.7
    peak = interferometer.efficiency(physics.ComplexRate(0.0, math.pi / t), t)
    dev = abs(peak - 1.0)
    out_of_range = 0
    mismatch = 0.0
    minus = interferometer.SpinState.minus().rho
    for _ in range(10_000):
        rate = physics.ComplexRate(float(rng.exponential(2.0)), float(rng.normal(0.0, 10.0)))
        tt = float(rng.uniform(0.0, 5.0))
        eta = interferometer.efficiency(rate, tt)
        if not 0.0 <= eta <= 1.0:
            out_of_range += 1
    for _ in range(200):
        rate = physics.ComplexRate(float(rng.exponential(2.0)), float(rng.normal(0.0, 10.0)))
        tt = float(rng.uniform(0.0, 5.0))
        rho = interferometer.evolve(interferometer.SpinState.plus(), rate, tt).rho
        overlap = float(np.real(np.trace(minus @ rho)))
        mismatch = max(mismatch, abs(overlap - interferometer.efficiency(rate, tt)))
    return [
        _check("efficiency_peak", dev, 1e-12, "eta(rate=(0, pi/t), t) = 1"),
        _check("efficiency_range", out_of_range, 0, "eta in [0, 1] on 1e4 random inputs"),
        _check("efficiency_overlap", mismatch, 1e-12, "eta = <-|rho(t)|->"),
    ]


def check_goldilocks():
    beam, xs = physics.normalized_preset()
    res = interferometer.goldilocks_search(beam, xs)
    ratio = res.dx_over_lambda_star
    dev = 0.0 if 0.15 <= ratio <= 0.30 else min(abs(ratio - 0.15), abs(ratio - 0.30))
    sig = interferometer.goldilocks_search(beam, xs, criterion="signal_threshold", s0=0.95)
    empty = 0.0 if sig.window[0] < sig.window[1] else 1.0
    return [
        _check("goldilocks_optimum", dev, 0.0, f"argmax |Im F_ang| at dx/lambda = {ratio:.6f}"),
        _check("goldilocks_window", empty, 0.0,
               "signal-threshold window [{:.6f}, {:.6f}] dx/lambda".format(*sig.window_dx_over_lambda)),
    ]


def run_validation(seed=12345, n_samples=1_000_000, threads=1):
    checks = [
        check_kernel_zero(),
        check_cross_quadrature(),
        check_cross_series(),
        check_taylor_small_z(),
        check_long_wavelength_fit(),
        check_short_wavelength(),
        check_re_nonnegative(),
        *check_isotropic(),
        check_asymptotic_limits(),
        *check_montecarlo(seed, n_samples, threads),
        check_sampler(seed, n_samples),
        check_bessel_recurrence(seed),
        *check_gate_algebra(seed),
        check_evolve(seed),
        *check_efficiency(seed),
        *check_goldilocks(),
    ]
    return checks


def format_report(checks, fmt="text", seed=None, n_samples=None):
    if fmt == "json":
        doc = {"seed": seed, "n_samples": n_samples,
               "passed": all(c.passed for c in checks),
               "checks": [asdict(c) for c in checks]}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    lines = [f"goldilocks validate  seed={seed}  n_samples={n_samples}"]
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        lines.append(f"{status}  {c.name:<26} max_dev={c.max_dev:.6e}  threshold={c.threshold:.3e}  {c.detail}")
    n_fail = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - n_fail}/{len(checks)} checks passed")
    return "\n".join(lines) + "\n"
