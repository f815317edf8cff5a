"""Command-line front end.

Exit codes: 0 success, 1 usage or config error, 2 no optimum, 3 convergence
failure, 4 validation failure.
"""

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from . import interferometer, kernels, physics, svg
from .config import ConfigError, SCHEMAS, load_config
from .errors import ConvergenceError, DomainError, NoOptimumError
from .validate import format_report, run_validation

EXIT_OK, EXIT_USAGE, EXIT_NO_OPTIMUM, EXIT_CONVERGENCE, EXIT_VALIDATION = 0, 1, 2, 3, 4

CSV_SCHEMA_VERSION = 1

CURVE_COLUMNS = ["mode", "dx_over_lambda", "z", "re_kernel", "im_kernel", "method",
                 "err_estimate", "status"]
SIGNAL_MAP_COLUMNS = ["dx_over_lambda", "t_s", "A", "phi", "signal"]
PHOTON_COLUMNS = ["dx_over_lambda", "A_p_m2", "eta"]


def fmt(x):
    """17 significant digits, enough to round-trip a double; -0 is written as 0."""
    return format(float(x) + 0.0, ".17g")


def _csv_text(command, columns, rows):
    buf = io.StringIO()
    buf.write(f"# goldilocks {command} schema v{CSV_SCHEMA_VERSION}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return buf.getvalue()


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _write_file(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _map(fn, items, threads):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def cmd_curve(cfg, out):
    ratios = cfg["dx_over_lambda"]

    def row(job):
        mode, ratio = job
        z = 2.0 * math.pi * ratio
        try:
            res = kernels.evaluate(z, mode, cfg["method"], cfg["tol"], cfg["seed"], cfg["n_samples"])
            return [mode, ratio, z, res.value.real, res.value.imag, res.method.value,
                    res.abs_error_estimate, "ok"]
        except ConvergenceError as exc:
            best = exc.best_estimate if exc.best_estimate is not None else complex("nan")
            return [mode, ratio, z, best.real, best.imag, cfg["method"], float("nan"),
                    "convergence_error"]

    jobs = [(mode, r) for mode in cfg["modes"] for r in ratios]
    rows = _map(row, jobs, cfg["threads"])
    _emit(_csv_text("curve", CURVE_COLUMNS, rows), out)
    if cfg["svg"]:
        series = {}
        for mode in cfg["modes"]:
            sel = [r for r in rows if r[0] == mode]
            series[f"Re ({mode})"] = [r[3] for r in sel]
            series[f"Im ({mode})"] = [r[4] for r in sel]
        logx = bool(ratios[0] > 0.0 and ratios[-1] / ratios[0] > 100.0)
        _write_file(cfg["svg"], svg.curves(ratios, series, "dx/lambda",
                                           "angular kernel F_ang", logx=logx))
    return EXIT_OK


def _normalized_beam(wavelength, j, flux_rate):
    xs = physics.powerlaw(1.0, j)
    q0 = 2.0 * math.pi / wavelength
    return physics.monochromatic(flux_rate / float(xs.coupling(q0)), q0=q0), xs


def cmd_signal_map(cfg, out):
    beam, xs = _normalized_beam(cfg["wavelength"], cfg["j"], cfg["effective_flux"])
    ratios, times = cfg["dx_over_lambda"], cfg["t"]
    A, phi, S = interferometer.signal_components(beam, xs, cfg["mode"], ratios, times,
                                                 cfg["method"], cfg["phase_model"], cfg["threads"])
    rows = [[ratios[i], times[j], A[i, j], phi[i, j], S[i, j]]
            for i in range(len(ratios)) for j in range(len(times))]
    _emit(_csv_text("signal-map", SIGNAL_MAP_COLUMNS, rows), out)
    if cfg["svg"]:
        _write_file(cfg["svg"], svg.heatmap(S, times, ratios, "t [s]", "dx/lambda",
                                            "signal A sin(phi)"))
    return EXIT_OK


def cmd_photon_eff(cfg, out):
    xs = physics.rayleigh(cfg["radius"], cfg["permittivity"], cfg["coupling"])
    ratios = cfg["dx_over_lambda"]
    rows = []
    for area in cfg["areas"]:
        beam = physics.photon_beam(cfg["wavelength"], area, cfg["photon_rate"])

        def eta(ratio, beam=beam):
            rate = physics.localization_rate(beam, xs, ratio * cfg["wavelength"], cfg["mode"],
                                             cfg["method"])
            return interferometer.efficiency(rate, cfg["t"])

        rows.extend([r, area, e] for r, e in zip(ratios, _map(eta, ratios, cfg["threads"])))
    _emit(_csv_text("photon-eff", PHOTON_COLUMNS, rows), out)
    return EXIT_OK


def ion_report(cfg):
    T, m, Z, Zp, flux = cfg["temperature"], cfg["mass"], cfg["Z"], cfg["Zp"], cfg["flux"]
    xs = physics.rutherford(Z, Zp, T, m)
    q = xs.params["q_thermal"]
    beam = physics.monochromatic(flux, q0=q)
    best = interferometer.goldilocks_search(beam, xs)
    return {
        "inputs": {"temperature_K": T, "mass_kg": m, "Z": Z, "Zp": Zp,
                   "flux_per_m2_s": flux},
        "prefactor_m2": physics.rutherford_prefactor(Z, Zp, T, m),
        "coupling_g_m2": xs.g,
        "effective_flux_per_s": physics.effective_flux(beam, xs),
        "detection_rate_per_s": physics.ion_detection_rate(Zp, T, m, flux, Z),
        "thermal_wavenumber_per_m": q,
        "thermal_wavelength_m": 2.0 * math.pi / q,
        "dx_star_m": best.dx_star,
        "dx_star_over_lambda": best.dx_over_lambda_star,
        "max_phase_per_event_rad": best.value_star / kernels.SATURATION,
    }


def cmd_ion(cfg, out):
    _emit(json.dumps(ion_report(cfg), indent=2) + "\n", out)
    return EXIT_OK


def cmd_optimize(cfg, out):
    beam, xs = _normalized_beam(cfg["wavelength"], cfg["j"], cfg["effective_flux"])
    try:
        res = interferometer.goldilocks_search(
            beam, xs, cfg["mode"], cfg["t"], cfg["criterion"], cfg["s0"],
            (cfg["z_min"], cfg["z_max"]), cfg["n_grid"], cfg["method"])
    except NoOptimumError as exc:
        doc = {"error": "no_optimum", "message": str(exc), "mode": cfg["mode"],
               "criterion": cfg["criterion"]}
        _emit(json.dumps(doc, indent=2) + "\n", out)
        return EXIT_NO_OPTIMUM
    doc = {
        "criterion": cfg["criterion"],
        "mode": cfg["mode"],
        "j": cfg["j"],
        "s0": cfg["s0"],
        "t_s": cfg["t"],
        "z_star": res.z_star,
        "dx_star_over_lambda": res.dx_over_lambda_star,
        "dx_star_m": res.dx_star,
        "window_z": list(res.window),
        "window_dx_over_lambda": list(res.window_dx_over_lambda),
        "criterion_value_at_star": res.value_star,
        "threshold_value": res.threshold,
    }
    _emit(json.dumps(doc, indent=2) + "\n", out)
    return EXIT_OK


def cmd_validate(cfg, out):
    checks = run_validation(cfg["seed"], cfg["n_samples"], cfg["threads"])
    _emit(format_report(checks, cfg["format"], cfg["seed"], cfg["n_samples"]), out)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VALIDATION


COMMANDS = {
    "curve": cmd_curve,
    "signal-map": cmd_signal_map,
    "photon-eff": cmd_photon_eff,
    "ion": cmd_ion,
    "optimize": cmd_optimize,
    "validate": cmd_validate,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="goldilocks",
        description="Phase and decoherence of a spatial superposition in a directional particle beam.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="TOML config file")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--method", help="kernel method")
        p.add_argument("--mode", help="directional or isotropic")
        p.add_argument("--seed", type=int)
        p.add_argument("--threads", type=int)
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE", help="override a config key (repeatable)")
    return parser


def _flag_overrides(args):
    schema = SCHEMAS[args.command]
    pairs = []
    flags = {"method": args.method, "seed": args.seed, "threads": args.threads}
    if args.mode is not None:
        key = "modes" if "modes" in schema else "mode"
        flags[key] = [args.mode] if key == "modes" else args.mode
    for key, value in flags.items():
        if value is None:
            continue
        if key not in schema:
            raise ConfigError(f"--{key} does not apply to {args.command}")
        pairs.append((key, value))
    return pairs


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        overrides = list(args.overrides) + _flag_overrides(args)
        cfg, _ = load_config(args.command, args.config, overrides)
        return COMMANDS[args.command](cfg, args.out)
    except NoOptimumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_OPTIMUM
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
