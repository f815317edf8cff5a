"""Run configuration: TOML files, ``GOLDILOCKS_*`` environment overrides and
``--set key=value`` overrides, validated against a per-command schema.

Physical quantities are written with units (``wavelength = "1064 nm"``) and
converted to SI here; bare numbers for dimensional keys are rejected.
"""

import os
import sys
from dataclasses import dataclass

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import DomainError
from .units import parse_quantity

ENV_PREFIX = "GOLDILOCKS_"

METHODS = ("closed_form", "quadrature", "jacobi_anger", "taylor", "montecarlo")
MODES = ("directional", "isotropic")


class ConfigError(DomainError):
    """Invalid or unknown configuration entry."""


@dataclass(frozen=True)
class Field:
    kind: str
    default: object
    dimension: str = ""
    choices: tuple = ()


def _grid(start, stop, num, spacing="linear"):
    return {"start": start, "stop": stop, "num": num, "spacing": spacing}


_COMMON = {
    "method": Field("str", "closed_form", choices=METHODS),
    "threads": Field("int", 1),
}

SCHEMAS = {
    "curve": {
        **_COMMON,
        "dx_over_lambda": Field("grid", _grid(1e-3, 1e2, 101, "log")),
        "modes": Field("str_list", ["directional"], choices=MODES),
        "tol": Field("float", 1e-12),
        "n_samples": Field("int", 100_000),
        "seed": Field("int", 0),
        "svg": Field("str", ""),
    },
    "signal-map": {
        **_COMMON,
        "dx_over_lambda": Field("grid", _grid(0.0, 1.5, 151)),
        "t": Field("time_grid", _grid("0 s", "5 s", 51)),
        "mode": Field("str", "directional", choices=MODES),
        "effective_flux": Field("quantity", "1 1/s", "rate"),
        "j": Field("int", 0),
        "wavelength": Field("quantity", "1 um", "length"),
        "phase_model": Field("str", "rate", choices=("rate", "caption")),
        "svg": Field("str", ""),
    },
    "photon-eff": {
        **_COMMON,
        "dx_over_lambda": Field("grid", _grid(0.0, 2.0, 401)),
        "wavelength": Field("quantity", "1064 nm", "length"),
        "radius": Field("quantity", "50 nm", "length"),
        "permittivity": Field("float", 2.1),
        "coupling": Field("str", "eps_plus_one", choices=("eps_plus_one", "clausius_mossotti")),
        "areas": Field("quantity_list", ["1e-13 m2", "3e-13 m2", "1e-12 m2"], "area"),
        "photon_rate": Field("quantity", "1e6 1/s", "rate"),
        "t": Field("quantity", "1 s", "time"),
        "mode": Field("str", "directional", choices=MODES),
    },
    "ion": {
        "temperature": Field("quantity", "100 K", "temperature"),
        "mass": Field("quantity", "1e-25 kg", "mass"),
        "Z": Field("int", 1),
        "Zp": Field("int", 1),
        "flux": Field("quantity", "1e14 1/(m2 s)", "flux"),
    },
    "optimize": {
        **_COMMON,
        "mode": Field("str", "directional", choices=MODES),
        "criterion": Field("str", "max_abs_im_kernel",
                           choices=("max_abs_im_kernel", "signal_threshold")),
        "s0": Field("float", 0.95),
        "t": Field("quantity", "1 s", "time"),
        "j": Field("int", 0),
        "wavelength": Field("quantity", "1 um", "length"),
        "effective_flux": Field("quantity", "1 1/s", "rate"),
        "z_min": Field("float", 1e-3),
        "z_max": Field("float", 1e2),
        "n_grid": Field("int", 400),
    },
    "validate": {
        "seed": Field("int", 12345),
        "n_samples": Field("int", 1_000_000),
        "threads": Field("int", 1),
        "format": Field("str", "text", choices=("text", "json")),
    },
}


def _make_grid(key, spec, parse):
    if isinstance(spec, list):
        values = np.array([parse(v) for v in spec], dtype=float)
    elif isinstance(spec, dict):
        unknown = set(spec) - {"start", "stop", "num", "spacing"}
        if unknown:
            raise ConfigError(f"{key}: unknown grid keys {sorted(unknown)}")
        try:
            start, stop = parse(spec["start"]), parse(spec["stop"])
            num = int(spec["num"])
        except KeyError as exc:
            raise ConfigError(f"{key}: grid needs start, stop and num") from exc
        spacing = spec.get("spacing", "linear")
        if num < 1:
            raise ConfigError(f"{key}: grid needs at least one point")
        if spacing == "linear":
            values = np.linspace(start, stop, num)
        elif spacing == "log":
            if start <= 0.0 or stop <= 0.0:
                raise ConfigError(f"{key}: log grid needs positive bounds")
            values = np.geomspace(start, stop, num)
        else:
            raise ConfigError(f"{key}: spacing must be 'linear' or 'log'")
    else:
        raise ConfigError(f"{key}: grid must be a table or a list")
    if values.size == 0 or np.any(np.diff(values) < 0.0):
        raise ConfigError(f"{key}: grid must be non-empty and ascending")
    return values


def _as_float(key):
    def parse(v):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{key}: expected a number, got {v!r}")
        return float(v)
    return parse


def _convert(key, field, raw):
    try:
        if field.kind == "quantity":
            return parse_quantity(raw, field.dimension)
        if field.kind == "quantity_list":
            if not isinstance(raw, list) or not raw:
                raise ConfigError(f"{key}: expected a non-empty list of quantities")
            return [parse_quantity(v, field.dimension) for v in raw]
        if field.kind == "grid":
            return _make_grid(key, raw, _as_float(key))
        if field.kind == "time_grid":
            return _make_grid(key, raw, lambda v: parse_quantity(v, "time"))
    except ConfigError:
        raise
    except DomainError as exc:
        raise ConfigError(f"{key}: {exc}") from exc
    if field.kind == "float":
        return _as_float(key)(raw)
    if field.kind == "int":
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise ConfigError(f"{key}: expected an integer, got {raw!r}")
        return raw
    if field.kind == "str":
        if not isinstance(raw, str):
            raise ConfigError(f"{key}: expected a string, got {raw!r}")
        if field.choices and raw not in field.choices:
            raise ConfigError(f"{key}: {raw!r} not one of {list(field.choices)}")
        return raw
    if field.kind == "str_list":
        if isinstance(raw, str):
            raw = [raw]
        if not isinstance(raw, list) or not raw:
            raise ConfigError(f"{key}: expected a non-empty list")
        for v in raw:
            if v not in field.choices:
                raise ConfigError(f"{key}: {v!r} not one of {list(field.choices)}")
        return list(raw)
    raise ConfigError(f"{key}: unsupported field kind {field.kind}")


def _parse_literal(text):
    """Read an override value as a TOML literal, falling back to a bare string."""
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def load_config(command, path=None, overrides=(), env=None):
    """Build the validated configuration for ``command``.

    Precedence, lowest first: schema defaults, config file, environment
    variables ``GOLDILOCKS_<KEY>``, explicit ``overrides`` (``key=value``
    strings or ``(key, value)`` pairs).

    Returns ``(values, raw)``: SI-converted values and the unconverted inputs.
    """
    if command not in SCHEMAS:
        raise ConfigError(f"unknown command {command!r}")
    schema = SCHEMAS[command]
    raw = {k: f.default for k, f in schema.items()}
    if path is not None:
        with open(path, "rb") as fh:
            try:
                data = tomllib.load(fh)
            except tomllib.TOMLDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from exc
        unknown = set(data) - set(schema)
        if unknown:
            raise ConfigError(f"unknown config keys for {command}: {sorted(unknown)}")
        raw.update(data)
    env = os.environ if env is None else env
    for key in schema:
        name = ENV_PREFIX + key.upper().replace("-", "_")
        if name in env:
            raw[key] = _parse_literal(env[name])
    for item in overrides:
        if isinstance(item, str):
            if "=" not in item:
                raise ConfigError(f"override {item!r} must look like key=value")
            key, text = item.split("=", 1)
            key, value = key.strip(), _parse_literal(text.strip())
        else:
            key, value = item
        if key not in schema:
            raise ConfigError(f"unknown config key for {command}: {key!r}")
        raw[key] = value
    values = {k: _convert(k, schema[k], raw[k]) for k in schema}
    return values, raw
