"""
Occupation factors, linewidths and detuning-filtered exchange rates.

All rates are angular frequencies (rad/s); temperatures are in kelvin.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import wofz

from .constants import HBAR, KB
from .errors import DomainError, ValidationError

__all__ = [
    "ResetParams",
    "CavityParams",
    "EmitterParams",
    "CollisionParams",
    "bose_occupation",
    "thermal_tls_population",
    "phonon_rates",
    "exchange_rate",
    "filtered_photon_number",
    "lorentzian_filter",
    "collision_strength",
    "bright_channel",
    "per_emitter_rate",
    "voigt_overlap",
    "voigt_rate_factor",
]

_EXP_GUARD = 700.0
PHI_WARN = 0.3


def _nonneg(name, v):
    if not (np.isfinite(v) and v >= 0):
        raise ValidationError(f"{name} must be finite and >= 0, got {v!r}")
    return float(v)


@dataclass(frozen=True)
class ResetParams:
    """Fast-reset channel pinning an emitter to the populations ``(r1, r2)``."""

    gamma_1_res: float
    gamma_phi_res: float = 0.0
    r1: float = 0.0

    def __post_init__(self):
        _nonneg("gamma_1_res", self.gamma_1_res)
        _nonneg("gamma_phi_res", self.gamma_phi_res)
        if not 0.0 <= self.r1 <= 1.0:
            raise ValidationError("reset r1 must lie in [0, 1]")

    @property
    def r2(self) -> float:
        return 1.0 - self.r1


@dataclass(frozen=True)
class CavityParams:
    """Single-mode cavity: frequency, loaded damping and bath temperature."""

    omega_c: float
    kappa: float
    T_bath: float

    def __post_init__(self):
        if not self.omega_c > 0:
            raise ValidationError("omega_c must be > 0")
        _nonneg("kappa", self.kappa)
        if not self.T_bath > 0:
            raise ValidationError("T_bath must be > 0")

    @property
    def n_bath(self) -> float:
        return bose_occupation(self.omega_c, self.T_bath)


@dataclass(frozen=True)
class EmitterParams:
    """Emitter transition, coupling and decoherence rates.

    ``gamma_perp`` is derived as ``gamma_1/2 + gamma_phi``. ``Delta`` is the
    detuning ``omega_qd - omega_c``.
    """

    omega_qd: float
    g: float
    gamma_1: float
    gamma_phi: float
    Delta: float = 0.0
    sigma_inh: float = 0.0
    p_th: float = 0.0
    reset: ResetParams | None = None

    def __post_init__(self):
        if not self.omega_qd > 0:
            raise ValidationError("omega_qd must be > 0")
        for name in ("gamma_1", "gamma_phi", "sigma_inh"):
            _nonneg(name, getattr(self, name))
        if not np.isfinite(self.g) or not np.isfinite(self.Delta):
            raise ValidationError("g and Delta must be finite")
        if not 0.0 <= self.p_th <= 0.5:
            raise ValidationError("p_th must lie in [0, 1/2]")

    @property
    def gamma_perp(self) -> float:
        return 0.5 * self.gamma_1 + self.gamma_phi

    @property
    def gamma_up(self) -> float:
        return self.gamma_1 * self.p_th

    @property
    def gamma_down(self) -> float:
        return self.gamma_1 * (1.0 - self.p_th)


@dataclass(frozen=True)
class CollisionParams:
    """Repeated-interaction stream: arrival rate, dwell time, phase and enhancement."""

    R: float
    tau: float
    phi: float
    chi: float = 1.0

    @property
    def pump_rate(self) -> float:
        """``R chi phi^2`` (1/s)."""
        return self.R * self.chi * self.phi**2


def bose_occupation(omega, T):
    """Bose-Einstein occupation ``1/(exp(hbar omega / kT) - 1)``.

    Returns 0 when the exponent exceeds 700.
    """
    T = np.asarray(T, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if np.any(T <= 0):
        raise DomainError("temperature must be > 0")
    if np.any(omega <= 0):
        raise DomainError("omega must be > 0")
    x = HBAR * omega / (KB * T)
    with np.errstate(over="ignore", divide="ignore"):
        n = np.where(x > _EXP_GUARD, 0.0, 1.0 / np.expm1(np.minimum(x, _EXP_GUARD)))
    return float(n) if n.ndim == 0 else n


def thermal_tls_population(omega_qd, T):
    """Thermal excited population ``n/(2n + 1)`` of a two-level system."""
    n = bose_occupation(omega_qd, T)
    return n / (2.0 * n + 1.0)


def phonon_rates(gamma_0, omega_qd, T):
    """Phonon-assisted ``(gamma_up, gamma_down, gamma_1)`` with detailed balance."""
    _nonneg("gamma_0", gamma_0)
    n = bose_occupation(omega_qd, T)
    up = gamma_0 * n
    down = gamma_0 * (n + 1.0)
    return up, down, up + down


def exchange_rate(g, kappa, gamma_perp, Delta=0.0):
    """Lorentzian cavity-emitter exchange rate.

    ``Gamma_c = 4 g^2 (kappa + gamma_perp) / ((kappa + gamma_perp)^2 + 4 Delta^2)``
    """
    w = kappa + gamma_perp
    if np.any(np.asarray(w) <= 0):
        raise DomainError("kappa + gamma_perp must be > 0 (singular linewidth)")
    return 4.0 * g**2 * w / (w**2 + 4.0 * np.asarray(Delta) ** 2)


def lorentzian_filter(Delta, Gamma_halfwidth):
    """Overlap factor ``1/(1 + (Delta/Gamma)^2)``."""
    if np.any(np.asarray(Gamma_halfwidth) <= 0):
        raise DomainError("Gamma_halfwidth must be > 0")
    return 1.0 / (1.0 + (np.asarray(Delta) / Gamma_halfwidth) ** 2)


def filtered_photon_number(n, Delta, Gamma_halfwidth):
    """Spectrally overlapped photon number ``n/(1 + (Delta/Gamma)^2)``."""
    if np.any(np.asarray(n) < 0):
        raise ValidationError("n must be >= 0")
    return n * lorentzian_filter(Delta, Gamma_halfwidth)


def collision_strength(g, tau, R, chi=1.0) -> CollisionParams:
    """Collision phase ``phi = g tau`` and stream parameters.

    Warns when ``phi > 0.3`` (weak-collision expansion invalid).
    """
    if not tau > 0:
        raise ValidationError("tau must be > 0")
    _nonneg("R", R)
    _nonneg("chi", chi)
    phi = float(g * tau)
    if abs(phi) > PHI_WARN:
        warnings.warn(f"collision phase phi = {phi:.3f} exceeds {PHI_WARN}", RuntimeWarning,
                      stacklevel=2)
    return CollisionParams(R=float(R), tau=float(tau), phi=phi, chi=float(chi))


def bright_channel(g1, g2, kappa, gamma_perp_1, gamma_perp_2, Delta_1, Delta_2, Delta_12=None):
    """Collective bright-mode coupling of two emitters.

    ``g_B = |g1 + g2|/sqrt(2)``, ``Delta_B = (Delta_1 + Delta_2)/2`` and the
    mean linewidth is broadened by the frequency mismatch ``|Delta_12|``.

    Returns
    -------
    g_B, Delta_B, Gamma_cB : float
        ``Gamma_cB = 2 g_B^2 G / (G^2 + Delta_B^2)`` with ``2G = kappa + gamma_bar``.
    """
    if gamma_perp_1 < 0 or gamma_perp_2 < 0 or kappa < 0:
        raise ValidationError("linewidths must be >= 0")
    if Delta_12 is None:
        Delta_12 = Delta_1 - Delta_2
    g_B = abs(g1 + g2) / np.sqrt(2.0)
    Delta_B = 0.5 * (Delta_1 + Delta_2)
    gbar = 0.5 * (gamma_perp_1 + gamma_perp_2) + abs(Delta_12)
    G = 0.5 * (kappa + gbar)
    if G <= 0:
        raise DomainError("kappa + mean linewidth must be > 0")
    return g_B, Delta_B, 2.0 * g_B**2 * G / (G**2 + Delta_B**2)


def per_emitter_rate(g_j, kappa, gamma_perp_j, Delta_j):
    """Single-emitter overlap ``2 g^2 G/(G^2 + Delta^2)`` with ``2G = kappa + gamma_perp``."""
    G = 0.5 * (kappa + gamma_perp_j)
    if G <= 0:
        raise DomainError("kappa + gamma_perp must be > 0")
    return 2.0 * g_j**2 * G / (G**2 + Delta_j**2)


def voigt_overlap(Delta, Gamma_halfwidth, sigma_inh):
    """Normalized Voigt profile at detuning `Delta`.

    Lorentzian half width `Gamma_halfwidth` convolved with a Gaussian of
    standard deviation `sigma_inh`; ``sigma_inh = 0`` gives
    ``(Gamma/pi)/(Delta^2 + Gamma^2)``.
    """
    if np.any(np.asarray(Gamma_halfwidth) < 0) or np.any(np.asarray(sigma_inh) < 0):
        raise ValidationError("widths must be >= 0")
    if np.all(np.asarray(sigma_inh) == 0):
        if np.any(np.asarray(Gamma_halfwidth) == 0):
            raise DomainError("Voigt profile needs Gamma > 0 or sigma > 0")
        return (Gamma_halfwidth / np.pi) / (np.asarray(Delta) ** 2 + Gamma_halfwidth**2)
    z = (np.asarray(Delta) + 1j * Gamma_halfwidth) / (sigma_inh * np.sqrt(2.0))
    return np.real(wofz(z)) / (sigma_inh * np.sqrt(2.0 * np.pi))


def voigt_rate_factor(Delta, Gamma_halfwidth, sigma_inh):
    """Multiplier turning a Lorentzian rate into its Voigt-broadened counterpart."""
    return voigt_overlap(Delta, Gamma_halfwidth, sigma_inh) / voigt_overlap(
        Delta, Gamma_halfwidth, 0.0
    )
