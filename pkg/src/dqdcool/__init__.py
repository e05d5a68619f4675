"""
Cavity refrigeration by an engineered double-quantum-dot reservoir.

Modules
-------
pairstate
    Two-spin Hamiltonian, closed-form eigensystem, thermal states and
    reservoir statistics.
rates
    Occupations, linewidths and detuning-filtered exchange rates.
steady
    Analytic and semi-analytic steady states and effective temperatures.
lindblad
    Truncated-Fock master-equation oracle.
cli
    Configuration, sweeps, figure presets and validation.
"""

from .kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
