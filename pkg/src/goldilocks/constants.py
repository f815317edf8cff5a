"""Physical constants in SI units, frozen at CODATA 2018 values.

Source: E. Tiesinga et al., "CODATA recommended values of the fundamental
physical constants: 2018", Rev. Mod. Phys. 93, 025010 (2021).
"""

import math

# elementary charge [C], exact since the 2019 SI redefinition
ELEMENTARY_CHARGE = 1.602176634e-19

# vacuum electric permittivity [F/m], CODATA 2018
VACUUM_PERMITTIVITY = 8.8541878128e-12

# reduced Planck constant [J s], exact (h / 2pi with h = 6.62607015e-34)
HBAR = 6.62607015e-34 / (2.0 * math.pi)

# Boltzmann constant [J/K], exact
BOLTZMANN = 1.380649e-23

# classical electron radius [m], CODATA 2018
CLASSICAL_ELECTRON_RADIUS = 2.8179403262e-15

# speed of light in vacuum [m/s], exact
SPEED_OF_LIGHT = 299792458.0
