"""Physical constants (CODATA values via :mod:`scipy.constants`)."""

from scipy import constants as _c

HBAR = _c.hbar
KB = _c.k
MU_B = _c.physical_constants["Bohr magneton"][0]
TWO_PI = 2.0 * _c.pi
