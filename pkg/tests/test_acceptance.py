"""Acceptance criteria, one test per criterion.

Each test prints a single ``ACCEPT <n> PASS|FAIL`` line; run with
``pytest tests/test_acceptance.py -s`` to see them.
"""

import math
import time

import numpy as np
import pytest

from goldilocks import cli, interferometer, kernels, physics
from goldilocks.montecarlo import mc_kernel


def report(number, name, passed, detail):
    print(f"\nACCEPT {number:>2} {'PASS' if passed else 'FAIL'}  {name}: {detail}")
    assert passed, f"criterion {number} ({name}) failed: {detail}"


def _local_maxima(y):
    return np.flatnonzero((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:])) + 1


def test_01_long_wavelength_law():
    start = time.perf_counter()
    zs = np.array([1e-3, 3e-3, 1e-2])
    vals = np.array([kernels.closed_form_kernel(z).value for z in zs])
    lin = np.polyfit(zs, vals.imag, 1)[0]
    quad = np.linalg.lstsq(np.stack([zs ** 2, zs ** 3], axis=1), vals.real, rcond=None)[0][0]
    elapsed = time.perf_counter() - start
    dl, dq = abs(lin / (-2 / 3) - 1), abs(quad / (7 / 15) - 1)
    report(1, "long-wavelength law", dl <= 5e-3 and dq <= 5e-3 and elapsed < 1.0,
           f"Im slope {lin:.8f} (rel dev {dl:.2e}), Re quad {quad:.8f} (rel dev {dq:.2e}), {elapsed:.3f} s")


def test_02_short_wavelength_law():
    start = time.perf_counter()
    v = kernels.closed_form_kernel(1e3).value
    elapsed = time.perf_counter() - start
    dre, dim = abs(v.real - 2 / 3), abs(v.imag)
    report(2, "short-wavelength law", dre <= 0.01 and dim <= 0.01 and elapsed < 1.0,
           f"|Re-2/3| = {dre:.2e}, |Im| = {dim:.2e}, {elapsed:.3f} s")


def test_03_cross_method_agreement():
    start = time.perf_counter()
    dq = ds = 0.0
    for z in np.geomspace(1e-2, 50.0, 200):
        c = kernels.closed_form_kernel(z).value
        dq = max(dq, abs(c - kernels.quadrature_kernel(z, 1e-12).value))
        ds = max(ds, abs(c - kernels.series_kernel(z, 1e-12).value))
    elapsed = time.perf_counter() - start
    report(3, "cross-method agreement", max(dq, ds) <= 1e-8 and elapsed < 10.0,
           f"max |cf-quad| = {dq:.2e}, max |cf-series| = {ds:.2e}, {elapsed:.2f} s")


def test_04_monte_carlo_oracle():
    start = time.perf_counter()
    worst = 0.0
    for z in (0.5, 2.0, 10.0):
        est = mc_kernel(z, "directional", 1_000_000, 20240)
        ref = kernels.closed_form_kernel(z).value
        worst = max(worst, abs(est.mean.real - ref.real) / est.stderr_re,
                    abs(est.mean.imag - ref.imag) / est.stderr_im)
    iso_worst = 0.0
    for z in (0.5, 2.0, 10.0):
        est = mc_kernel(z, "isotropic", 1_000_000, 20240)
        iso_worst = max(iso_worst, abs(est.mean.imag) / est.stderr_im)
    elapsed = time.perf_counter() - start
    report(4, "Monte Carlo oracle", worst <= 4.0 and iso_worst <= 4.0 and elapsed < 30.0,
           f"directional max {worst:.2f} sigma, isotropic |Im| max {iso_worst:.2f} sigma, {elapsed:.1f} s")


def test_05_goldilocks_optimum():
    beam, xs = physics.normalized_preset()
    res = interferometer.goldilocks_search(beam, xs)
    sig = interferometer.goldilocks_search(beam, xs, t=1.0, criterion="signal_threshold", s0=0.95)
    lo, hi = sig.window_dx_over_lambda
    ok = 0.15 <= res.dx_over_lambda_star <= 0.30 and hi > lo
    report(5, "Goldilocks optimum", ok,
           f"dx*/lambda = {res.dx_over_lambda_star:.5f}, 0.95 window [{lo:.5f}, {hi:.5f}]")


def test_06_gate_algebra():
    rng = np.random.default_rng(6)
    dev_diag = dev_sig = 0.0
    for _ in range(1000):
        a = rng.uniform(0.0, 2.0)
        b = 2.0 - a
        A = rng.uniform(0.0, 1.0) * math.sqrt(a * b)
        phi = rng.uniform(-math.pi, math.pi)
        out = interferometer.apply_readout_gates(interferometer.SpinState.from_parameters(a, b, A, phi))
        d = np.diag(out.rho).real
        dev_diag = max(dev_diag, abs(d[0] - (a + b + 2 * A * math.sin(phi)) / 4),
                       abs(d[1] - (a + b - 2 * A * math.sin(phi)) / 4))
        amp = rng.uniform(0.0, 1.0)
        unit = interferometer.SpinState.from_parameters(1.0, 1.0, amp, phi)
        s = interferometer.signal(interferometer.apply_readout_gates(unit))
        dev_sig = max(dev_sig, abs(s - amp * math.sin(phi)))
    report(6, "gate algebra", dev_diag <= 1e-12 and dev_sig <= 1e-12,
           f"diagonal dev {dev_diag:.2e}, signal dev {dev_sig:.2e} over 1000 states")


def test_07_efficiency():
    rng = np.random.default_rng(7)
    peak_dev = max(abs(interferometer.efficiency(physics.ComplexRate(0.0, math.pi / t), t) - 1.0)
                   for t in (0.1, 1.0, 3.7))
    bad = 0
    for _ in range(10_000):
        rate = physics.ComplexRate(rng.exponential(3.0), rng.normal(0.0, 20.0))
        eta = interferometer.efficiency(rate, rng.uniform(0.0, 10.0))
        bad += not 0.0 <= eta <= 1.0
    report(7, "efficiency", peak_dev <= 1e-12 and bad == 0,
           f"peak dev {peak_dev:.2e}, {bad} of 10000 outside [0, 1]")


def test_08_ion_numbers():
    pre = physics.rutherford_prefactor(1, 1, 100.0, 1e-25)
    pre2 = physics.rutherford_prefactor(1, 2, 100.0, 1e-25)
    rate = physics.ion_detection_rate(1, 100.0, 1e-25, 1e14)
    ok = (1e-14 / 5 <= pre <= 5e-14 and 4e-14 / 5 <= pre2 <= 4e-14 * 5
          and 0.2 <= rate <= 5.0)
    report(8, "ion numbers", ok,
           f"prefactor {pre:.4e} m^2 (Z'=2: {pre2:.4e}), detection rate {rate:.3f} 1/s")


def test_09_figure_shapes():
    notes = []
    # Re: monotone rise to its first peak, then oscillation about 2/3 whose
    # envelope shrinks; the envelope is the maximum over each period-pi window
    z = np.geomspace(1e-3, 10.0, 20_001)
    F = np.array([kernels.closed_form_kernel(v).value for v in z])
    re, im = F.real, np.abs(F.imag)
    first = _local_maxima(re)[0]
    k = int(np.argmax(im))
    re_ok = bool(np.all(np.diff(re[: first + 1]) > 0.0))
    im_ok = bool(np.all(np.diff(im[: k + 1]) > 0.0))
    tail = np.arange(z[first], 1e3, 2e-3)
    Ft = np.array([kernels.closed_form_kernel(v).value for v in tail])
    n_win = int((tail[-1] - tail[0]) // math.pi)
    win = np.minimum(((tail - tail[0]) // math.pi).astype(int), n_win - 1)
    re_env = np.array([np.abs(Ft.real[win == w] - 2 / 3).max() for w in range(n_win)])
    im_env = np.array([np.abs(Ft.imag[win == w]).max() for w in range(n_win)])
    re_ok &= bool(np.all(np.diff(re_env) < 0.0)) and re_env[-1] < 0.01
    # |Im|: single lobe, nothing after the peak comes back up to it
    im_ok &= bool(np.all(np.diff(im_env) < 0.0)) and im_env[0] < im[k]
    notes.append(f"Re first peak z={z[first]:.3f}")
    notes.append(f"|Im| peak z={z[k]:.4f}")
    # signal map
    beam, xs = physics.normalized_preset()
    ratios, t = np.linspace(0.0, 1.5, 151), np.linspace(0.0, 5.0, 51)
    S = interferometer.signal_map(beam, xs, "directional", ratios, t)
    i = np.unravel_index(np.argmax(S), S.shape)[0]
    map_ok = bool(np.all(np.abs(S) <= 1.0) and np.all(S[:, 0] == 0.0) and 0.0 < ratios[i] < 0.2)
    notes.append(f"signal max {S.max():.3f} at dx/lambda={ratios[i]:.3f}")
    # photon efficiency curves
    xs_r = physics.rayleigh(50e-9, 2.1)
    grid = np.linspace(0.0, 2.0, 401)
    interior = []
    for area in (1e-13, 3e-13, 1e-12):
        pb = physics.photon_beam(1064e-9, area)
        eta = np.array([interferometer.efficiency(
            physics.localization_rate(pb, xs_r, r * 1064e-9), 1.0) for r in grid])
        interior.append(len(_local_maxima(eta)) >= 1)
    notes.append(f"photon interior maxima {interior}")
    report(9, "figure shapes", re_ok and im_ok and map_ok and all(interior),
           f"Re {re_ok}, |Im| {im_ok}, map {map_ok}; " + "; ".join(notes))


def test_10_validate_determinism(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    codes = (cli.main(["validate", "--seed", "777", "--out", str(a)]),
             cli.main(["validate", "--seed", "777", "--out", str(b)]))
    same = a.read_bytes() == b.read_bytes()
    report(10, "validate determinism", same and codes == (0, 0),
           f"exit codes {codes}, byte-identical {same}")
