"""Parsing of unit-suffixed quantities such as ``"1064 nm"`` into SI floats."""

import re

from .errors import DomainError

ATOMIC_MASS_UNIT = 1.66053906660e-27  # kg, CODATA 2018

_PREFIX = {"": 1.0, "c": 1e-2, "m": 1e-3, "u": 1e-6, "n": 1e-9, "p": 1e-12, "f": 1e-15}

UNITS = {
    "length": {p + "m": f for p, f in _PREFIX.items()},
    "time": {p + "s": f for p, f in _PREFIX.items() if p != "c"},
    "area": {p + "m2": f * f for p, f in _PREFIX.items()},
    "temperature": {"K": 1.0, "mK": 1e-3, "uK": 1e-6},
    "mass": {"kg": 1.0, "g": 1e-3, "amu": ATOMIC_MASS_UNIT, "Da": ATOMIC_MASS_UNIT},
    "rate": {"1/s": 1.0, "s-1": 1.0, "Hz": 1.0},
    "flux": {},
}
for _p, _f in _PREFIX.items():
    for _form in ("1/({u}2s)", "1/(s{u}2)", "{u}-2s-1", "s-1{u}-2"):
        UNITS["flux"][_form.format(u=_p + "m")] = 1.0 / (_f * _f)

_NUMBER = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(.*?)\s*$")


def _normalize(unit):
    unit = unit.replace("µ", "u").replace("μ", "u")
    for ch in " ^*·":
        unit = unit.replace(ch, "")
    return unit


def parse_quantity(text, dimension):
    """Convert ``"<number> <unit>"`` to SI for the given dimension.

    Bare numbers are rejected so every physical input states its unit.
    """
    if dimension not in UNITS:
        raise DomainError(f"unknown dimension {dimension!r}")
    if not isinstance(text, str):
        raise DomainError(f"{dimension} value {text!r} needs an explicit unit, e.g. \"1064 nm\"")
    m = _NUMBER.match(text)
    if not m or not m.group(2):
        raise DomainError(f"cannot parse {dimension} quantity {text!r}; expected '<number> <unit>'")
    unit = _normalize(m.group(2))
    table = UNITS[dimension]
    if unit not in table:
        known = ", ".join(sorted(table))
        raise DomainError(f"unit {m.group(2)!r} is not a {dimension} unit (known: {known})")
    return float(m.group(1)) * table[unit]
