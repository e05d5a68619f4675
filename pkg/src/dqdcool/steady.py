"""
Analytic and semi-analytic steady states of the cavity + emitter system.

Models
------
clamped
    Emitter populations pinned at ``(r1, r2)`` by a fast reset (or a fresh
    collision stream): ``n = (kappa nbar + G r1)/(kappa + G (r2 - r1))``.
persistent
    Always-coupled emitter relaxing to ``p_th`` at rate ``gamma_1``; the
    steady occupation is the non-negative root of a quadratic.
two-emitter
    Two persistent emitters with independent exchange channels, solved by
    eliminating the emitter populations and root-finding in ``n``.
bright mode
    Matched two-emitter pair reduced to one collective channel.

All functions return a :class:`SteadyStateResult`; effective temperatures
are obtained by inverting Bose (cavity) and two-level (emitter) statistics.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .constants import HBAR, KB, TWO_PI
from .errors import InstabilityError, SolverError, ValidationError
from .pairstate import ReservoirStats
from .rates import (
    CavityParams,
    CollisionParams,
    EmitterParams,
    exchange_rate,
    lorentzian_filter,
)

__all__ = [
    "DEFAULT_OMEGA",
    "RESET_DOMINANCE",
    "Regime",
    "Solver",
    "SteadyStateResult",
    "SetpointSpec",
    "RateBundle",
    "setpoint",
    "weighted_mixture",
    "clamped_steady",
    "persistent_quadratic",
    "persistent_detuned",
    "collision_steady",
    "two_emitter_fixed_point",
    "bright_mode_steady",
    "effective_temperatures",
    "classify_regime",
    "clamped_grid",
    "persistent_grid",
    "filtered_grid",
    "two_emitter_grid",
]

DEFAULT_OMEGA = TWO_PI * 5e9
RESET_DOMINANCE = 5.0
_BAL_TOL = 1e-9
_TINY = float(np.finfo(float).tiny)


class Regime(str, enum.Enum):
    RESERVOIR_DOMINATED = "reservoir_dominated"
    BATH_DOMINATED = "bath_dominated"
    MEMORY_DOMINATED = "memory_dominated"
    EMITTER_PINNED = "emitter_pinned"
    CONSERVED_MANIFOLD = "conserved_manifold"


class Solver(str, enum.Enum):
    CLAMPED_CLOSED_FORM = "clamped_closed_form"
    PERSISTENT_QUADRATIC = "persistent_quadratic"
    FIXED_POINT = "fixed_point"
    COLLISION_STREAM = "collision_stream"
    LINDBLAD = "lindblad"


@dataclass(frozen=True)
class SteadyStateResult:
    """Steady occupation, emitter population(s) and effective temperatures.

    ``T_dqd`` is ``inf`` at ``p_e = 1/2`` and negative above it (population
    inversion, flagged by ``gain``). ``unique`` is False on the conserved
    manifold, where the answer depends on the initial condition.
    """

    n_star: float
    p_e_star: float | tuple[float, ...]
    T_cav: float
    T_dqd: float
    ratio: float
    regime: Regime
    solver: Solver
    residual: float = 0.0
    unique: bool = True
    gain: bool = False
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def p_e(self) -> float:
        """Population of the first (or only) emitter."""
        return self.p_e_star[0] if isinstance(self.p_e_star, tuple) else self.p_e_star


@dataclass(frozen=True)
class SetpointSpec:
    """Setpoint implied by reservoir statistics alone."""

    n_set: float
    T_set: float
    r1: float
    r2: float
    gain: bool


@dataclass(frozen=True)
class RateBundle:
    """Rates entering the regime classification (rad/s)."""

    kappa: float
    Gamma_c: float
    gamma_1: float = 0.0
    Delta: float = 0.0
    gamma_perp: float = 0.0
    gamma_1_res: float = 0.0


def effective_temperatures(n_star, p_e_star, omega_c=DEFAULT_OMEGA, omega_qd=DEFAULT_OMEGA):
    """Cavity and emitter temperatures (K) and their ratio.

    ``T_cav = hbar w_c / (k ln(1 + 1/n))``, ``T_dqd = hbar w_qd / (k ln(1/p - 1))``.
    ``n = 0`` gives 0; ``p = 1/2`` gives ``inf``; ``p > 1/2`` gives a negative
    temperature.
    """
    if not n_star >= 0:
        raise ValidationError(f"n_star must be >= 0, got {n_star!r}")
    if n_star == 0:
        T_cav = 0.0
    elif math.isinf(n_star):
        T_cav = math.inf
    else:
        T_cav = HBAR * omega_c / (KB * math.log1p(1.0 / n_star))
    p = float(p_e_star)
    if p <= 0.0:
        T_dqd = 0.0
    elif p == 0.5:
        T_dqd = math.inf
    elif p >= 1.0:
        T_dqd = -0.0
    else:
        T_dqd = HBAR * omega_qd / (KB * math.log(1.0 / p - 1.0))
    if T_dqd == 0.0:
        ratio = math.inf if T_cav > 0 else 1.0
    elif math.isinf(T_dqd):
        ratio = 0.0 if not math.isinf(T_cav) else 1.0
    else:
        ratio = T_cav / T_dqd
    return T_cav, T_dqd, ratio


def _bose_temperature(n, omega):
    if n <= 0:
        return 0.0
    return HBAR * omega / (KB * math.log1p(1.0 / n))


def setpoint(stats: ReservoirStats, omega_qd: float | None = None) -> SetpointSpec:
    """Setpoint occupation ``n_set = r1/(r2 - r1)`` and its temperature.

    ``r2 <= r1`` is flagged as gain (``n_set = T_set = inf``), not raised.
    """
    r1, r2 = stats.r1, stats.r2
    omega = omega_qd if omega_qd is not None else (stats.omega_qd or DEFAULT_OMEGA)
    if r2 <= r1:
        return SetpointSpec(n_set=math.inf, T_set=math.inf, r1=r1, r2=r2, gain=True)
    n_set = r1 / (r2 - r1)
    return SetpointSpec(n_set=n_set, T_set=_bose_temperature(n_set, omega), r1=r1, r2=r2,
                        gain=False)


def weighted_mixture(kappa, n_bath, Gamma_c, sp: SetpointSpec):
    """Clamped occupation as a mixture of bath and setpoint.

    ``n = (kappa nbar + Gd n_set)/(kappa + Gd)`` with drag ``Gd = Gamma_c (r2 - r1)``;
    algebraically identical to :func:`clamped_steady`.

    Returns
    -------
    n : float
    drag : float
    """
    drag = Gamma_c * (sp.r2 - sp.r1)
    if sp.gain:
        raise InstabilityError("setpoint in gain regime: no weighted-mixture form")
    return (kappa * n_bath + drag * sp.n_set) / (kappa + drag), drag


def classify_regime(b: RateBundle):
    """Qualitative regime of a rate bundle.

    Returns
    -------
    regime : Regime
    report : dict
        ``conditions`` maps each tested inequality to ``(satisfied, lhs, rhs)``;
        ``stream_like`` is True when a reset dominates ``max(kappa, Gamma_c)``
        by the factor :data:`RESET_DOMINANCE` and the detuning stays inside the
        overlap window ``|Delta| <= kappa + gamma_perp``.
    """
    f = RESET_DOMINANCE
    fastest = max(b.kappa, b.Gamma_c)
    cond = {
        "reset_dominance": (b.gamma_1_res >= f * fastest and b.gamma_1_res > 0,
                            b.gamma_1_res, f * fastest),
        "spectral_overlap": (abs(b.Delta) <= b.kappa + b.gamma_perp, abs(b.Delta),
                             b.kappa + b.gamma_perp),
        "bath_dominates": (b.kappa >= f * b.Gamma_c and b.kappa > 0, b.kappa, f * b.Gamma_c),
        "emitter_relaxation_dominates": (b.gamma_1 >= f * b.Gamma_c and b.gamma_1 > 0,
                                         b.gamma_1, f * b.Gamma_c),
        "exchange_dominates": (b.Gamma_c >= max(b.kappa, b.gamma_1) and b.Gamma_c > 0,
                               b.Gamma_c, max(b.kappa, b.gamma_1)),
    }
    stream_like = cond["reset_dominance"][0] and cond["spectral_overlap"][0]
    if b.kappa == 0 and b.gamma_1 == 0 and b.gamma_1_res == 0:
        regime = Regime.CONSERVED_MANIFOLD
    elif cond["bath_dominates"][0]:
        regime = Regime.BATH_DOMINATED
    elif b.gamma_1_res > 0:
        regime = Regime.RESERVOIR_DOMINATED
    elif cond["emitter_relaxation_dominates"][0]:
        regime = Regime.EMITTER_PINNED
    elif cond["exchange_dominates"][0]:
        regime = Regime.MEMORY_DOMINATED
    else:
        regime = Regime.RESERVOIR_DOMINATED
    return regime, {"conditions": cond, "stream_like": stream_like}


def _result(n, p, solver, regime, omega_c, omega_qd, residual=0.0, unique=True, **diag):
    p_first = p[0] if isinstance(p, tuple) else p
    T_cav, T_dqd, ratio = effective_temperatures(n, p_first, omega_c, omega_qd)
    return SteadyStateResult(
        n_star=float(n), p_e_star=p, T_cav=T_cav, T_dqd=T_dqd, ratio=ratio, regime=regime,
        solver=solver, residual=float(residual), unique=unique, gain=p_first > 0.5,
        diagnostics=diag,
    )


def _check_rates(**rates):
    for k, v in rates.items():
        if not (np.isfinite(v) and v >= 0):
            raise ValidationError(f"{k} must be finite and >= 0, got {v!r}")


# ---------------------------------------------------------------------------
# clamped / collision
# ---------------------------------------------------------------------------


def clamped_steady(kappa, n_bath, Gamma_c, r1, r2, *, omega_c=DEFAULT_OMEGA,
                   omega_qd=DEFAULT_OMEGA, gamma_1_res=math.inf, Delta=0.0,
                   gamma_perp=0.0, solver=Solver.CLAMPED_CLOSED_FORM) -> SteadyStateResult:
    """Closed-form steady state with clamped emitter statistics.

    ``n = (kappa nbar + G r1)/(kappa + G (r2 - r1))``; ``p_e = r1``.

    Raises
    ------
    InstabilityError
        If ``kappa + G (r2 - r1) <= 0``.
    """
    _check_rates(kappa=kappa, n_bath=n_bath, Gamma_c=Gamma_c)
    drag = kappa + Gamma_c * (r2 - r1)
    if not drag > 0:
        raise InstabilityError(f"kappa + Gamma_c (r2 - r1) = {drag!r} <= 0: runaway gain")
    n = (kappa * n_bath + Gamma_c * r1) / drag
    res = kappa * (n_bath - n) + Gamma_c * (r1 - (r2 - r1) * n)
    scale = kappa * (n_bath + n) + Gamma_c * (r1 + abs(r2 - r1) * n)
    regime, report = classify_regime(RateBundle(kappa=kappa, Gamma_c=Gamma_c, Delta=Delta,
                                                gamma_perp=gamma_perp,
                                                gamma_1_res=gamma_1_res))
    return _result(n, float(r1), solver, regime, omega_c, omega_qd,
                   residual=abs(res) / scale if scale > 0 else 0.0,
                   stream_like=report["stream_like"], pump=Gamma_c, r1=r1, r2=r2)


def collision_steady(cp: CollisionParams, r1, r2, kappa, n_bath, Delta=0.0,
                     Gamma_halfwidth=None, **kw) -> SteadyStateResult:
    """Steady state of the repeated-interaction stream.

    The pump scale ``R chi phi^2`` is multiplied by the Lorentzian filter
    ``1/(1 + (Delta/Gamma)^2)`` and inserted in the clamped closed form.
    """
    rate = cp.pump_rate
    if Delta != 0.0:
        if Gamma_halfwidth is None:
            raise ValidationError("Gamma_halfwidth required when Delta != 0")
        rate = rate * float(lorentzian_filter(Delta, Gamma_halfwidth))
    kw.setdefault("solver", Solver.COLLISION_STREAM)
    return clamped_steady(kappa, n_bath, rate, r1, r2, Delta=Delta, **kw)


# ---------------------------------------------------------------------------
# persistent emitter
# ---------------------------------------------------------------------------


def _balance_residual(n, p, G, kappa, g1, pth, nbar, ntilde=None):
    nt = n if ntilde is None else ntilde
    S = (2 * nt + 1) * p - nt
    r_cav = G * S - kappa * (n - nbar)
    r_em = G * S + g1 * (p - pth)
    scale = G * ((2 * nt + 1) * p + nt) + kappa * (n + nbar) + g1 * (p + pth)
    # occupations below the smallest normal float carry no relative precision
    scale = max(scale, (G + kappa + g1) * _TINY)
    return max(abs(r_cav), abs(r_em)) / scale if scale > 0 else 0.0


def _conserved(G, n0, p0):
    # n + p conserved and S = 0  ->  2n^2 + (2 - 2E) n - E = 0
    E = n0 + p0
    if G == 0:
        return n0, p0
    n = ((2 * E - 2) + math.sqrt((2 - 2 * E) ** 2 + 8 * E)) / 4
    return n, n / (2 * n + 1)


def persistent_quadratic(Gamma_c, kappa, gamma_1, p_th, n_bath, *, omega_c=DEFAULT_OMEGA,
                         omega_qd=DEFAULT_OMEGA, initial=None, Delta=0.0,
                         gamma_perp=0.0) -> SteadyStateResult:
    """Steady state of one persistent emitter exchanging with the cavity.

    The occupation solves ``a n^2 + b n + c = 0`` with

        a = -2 G kappa
        b = G g1 (2 p_th - 1) + G kappa (2 nbar - 1) - kappa g1
        c = G g1 p_th + G kappa nbar + kappa g1 nbar

    and the non-negative root is selected (for ``a < 0`` the roots have
    opposite signs). Then ``p_e = (G n + g1 p_th)/(G (2n + 1) + g1)``.

    With ``kappa = gamma_1 = 0`` the excitation number is conserved; the
    state on the ``S = 0`` manifold reached from `initial` ``(n0, p0)``
    (default ``(nbar, p_th)``) is returned with ``unique = False``.
    """
    _check_rates(Gamma_c=Gamma_c, kappa=kappa, gamma_1=gamma_1, n_bath=n_bath)
    if not 0.0 <= p_th <= 0.5:
        raise ValidationError("p_th must lie in [0, 1/2]")
    regime, report = classify_regime(RateBundle(kappa=kappa, Gamma_c=Gamma_c, gamma_1=gamma_1,
                                                Delta=Delta, gamma_perp=gamma_perp))
    n0, p0 = initial if initial is not None else (n_bath, p_th)

    if kappa == 0 and gamma_1 == 0:
        n, p = _conserved(Gamma_c, n0, p0)
        return _result(n, p, Solver.PERSISTENT_QUADRATIC, Regime.CONSERVED_MANIFOLD,
                       omega_c, omega_qd, unique=False, initial=(n0, p0))
    if Gamma_c == 0:
        n = n_bath if kappa > 0 else n0
        p = p_th if gamma_1 > 0 else p0
        return _result(n, p, Solver.PERSISTENT_QUADRATIC, regime, omega_c, omega_qd,
                       unique=kappa > 0 and gamma_1 > 0)

    n, a, b, c = kernels.persistent_root(Gamma_c, kappa, gamma_1, p_th, n_bath)
    # emitter balance; well conditioned even when kappa >> gamma_1
    p = (Gamma_c * n + gamma_1 * p_th) / (Gamma_c * (2 * n + 1) + gamma_1)
    res = _balance_residual(n, p, Gamma_c, kappa, gamma_1, p_th, n_bath)
    if not (n >= 0 and 0 <= p <= 1) or res > _BAL_TOL:
        raise SolverError("persistent root failed the balance check",
                          {"n": n, "p": p, "residual": res, "a": a, "b": b, "c": c})
    return _result(n, p, Solver.PERSISTENT_QUADRATIC, regime, omega_c, omega_qd, residual=res,
                   a=a, b=b, c=c, discriminant=b * b - 4 * a * c)


def persistent_detuned(cavity: CavityParams, emitter: EmitterParams, Delta=None,
                       use_filtered_n=False, *, damping=0.5, tol=1e-12,
                       maxiter=100_000) -> SteadyStateResult:
    """Persistent emitter at detuning `Delta` (defaults to ``emitter.Delta``).

    The exchange rate becomes ``Gamma_c(Delta)``. With `use_filtered_n` the
    emitter additionally sees the overlapped photon number
    ``n~ = n/(1 + (Delta/G)^2)``, ``2G = kappa + gamma_perp``, and the
    coupled balance is solved numerically.
    """
    Delta = emitter.Delta if Delta is None else Delta
    G = float(exchange_rate(emitter.g, cavity.kappa, emitter.gamma_perp, Delta))
    nbar = cavity.n_bath
    common = dict(omega_c=cavity.omega_c, omega_qd=emitter.omega_qd)
    if not use_filtered_n:
        return persistent_quadratic(G, cavity.kappa, emitter.gamma_1, emitter.p_th, nbar,
                                    Delta=Delta, gamma_perp=emitter.gamma_perp, **common)
    f = float(lorentzian_filter(Delta, 0.5 * (cavity.kappa + emitter.gamma_perp)))
    n, it, meth = kernels.reduced_root(cavity.kappa, nbar, f, [G], [emitter.gamma_1],
                                       [emitter.p_th], 1, damping, tol, maxiter)
    if meth == kernels.METHOD_FAILED or not math.isfinite(n):
        raise SolverError("filtered persistent fixed point did not converge",
                          {"iterations": it, "n": n})
    nt = f * n
    den = G * (2 * nt + 1) + emitter.gamma_1
    p = (G * nt + emitter.gamma_1 * emitter.p_th) / den if den > 0 else emitter.p_th
    res = _balance_residual(n, p, G, cavity.kappa, emitter.gamma_1, emitter.p_th, nbar, nt)
    regime, _ = classify_regime(RateBundle(kappa=cavity.kappa, Gamma_c=G,
                                           gamma_1=emitter.gamma_1, Delta=Delta,
                                           gamma_perp=emitter.gamma_perp))
    return _result(n, p, Solver.FIXED_POINT, regime, residual=res, iterations=it,
                   method=int(meth), filter=f, **common)


# ---------------------------------------------------------------------------
# two emitters
# ---------------------------------------------------------------------------


def two_emitter_fixed_point(Gammas, gamma_1s, p_ths, kappa, n_bath, *, omega_c=DEFAULT_OMEGA,
                            omega_qd=DEFAULT_OMEGA, damping=0.5, tol=1e-12,
                            maxiter=100_000) -> SteadyStateResult:
    """Steady state of two persistent emitters with independent channels.

    Each emitter obeys ``G_j S_j = -g1_j (p_j - pth_j)``, which fixes
    ``p_j(n)``; the cavity balance ``kappa (n - nbar) = sum_j G_j S_j`` is
    then a one-dimensional problem in ``n`` (damped iteration, bisection
    fallback).
    """
    G = [float(x) for x in Gammas]
    g1 = [float(x) for x in gamma_1s]
    pth = [float(x) for x in p_ths]
    if len(G) != 2 or len(g1) != 2 or len(pth) != 2:
        raise ValidationError("two emitters expected")
    _check_rates(kappa=kappa, n_bath=n_bath, G1=G[0], G2=G[1], g1a=g1[0], g1b=g1[1])
    if G[0] == 0 and G[1] == 0:
        n = n_bath
        meth, it = kernels.METHOD_CLOSED, 0
    else:
        n, it, meth = kernels.reduced_root(kappa, n_bath, 1.0, G, g1, pth, 2, damping, tol,
                                           maxiter)
    if meth == kernels.METHOD_FAILED or not math.isfinite(n):
        raise SolverError("two-emitter fixed point did not converge",
                          {"iterations": it, "n": n})
    p = []
    for j in range(2):
        den = G[j] * (2 * n + 1) + g1[j]
        p.append((G[j] * n + g1[j] * pth[j]) / den if den > 0 else pth[j])
    S = [(2 * n + 1) * pj - n for pj in p]
    res_cav = abs(kappa * (n_bath - n) + G[0] * S[0] + G[1] * S[1])
    scale = kappa * (n + n_bath) + sum(G[j] * ((2 * n + 1) * p[j] + n) for j in range(2))
    res_em = [abs(G[j] * S[j] + g1[j] * (p[j] - pth[j])) for j in range(2)]
    res = max([res_cav] + res_em) / scale if scale > 0 else 0.0
    regime, _ = classify_regime(RateBundle(kappa=kappa, Gamma_c=G[0] + G[1],
                                           gamma_1=max(g1)))
    return _result(n, tuple(p), Solver.FIXED_POINT, regime, omega_c, omega_qd, residual=res,
                   iterations=it, method=int(meth))


def bright_mode_steady(g_B, Delta_B, Delta_12, kappa, gamma_perp_bar, n_bath, *, stats=None,
                       p_th=None, gamma_1=None, clamped=True, omega_c=DEFAULT_OMEGA,
                       omega_qd=DEFAULT_OMEGA) -> SteadyStateResult:
    """Single-channel steady state driven by the collective bright mode.

    ``Gamma_cB = 2 g_B^2 G/(G^2 + Delta_B^2)`` with
    ``2G = kappa + gamma_perp_bar + |Delta_12|`` replaces ``Gamma_c`` in the
    clamped (``stats`` = ``(r1, r2)`` or :class:`ReservoirStats`) or the
    persistent (``p_th``, ``gamma_1``) model.
    """
    G = 0.5 * (kappa + gamma_perp_bar + abs(Delta_12))
    rate = 2.0 * g_B**2 * G / (G**2 + Delta_B**2) if G > 0 else 0.0
    if clamped:
        if stats is None:
            raise ValidationError("clamped bright mode needs reservoir stats")
        r1, r2 = (stats.r1, stats.r2) if isinstance(stats, ReservoirStats) else stats
        return clamped_steady(kappa, n_bath, rate, r1, r2, omega_c=omega_c, omega_qd=omega_qd,
                              Delta=Delta_B, gamma_perp=gamma_perp_bar)
    if p_th is None or gamma_1 is None:
        raise ValidationError("persistent bright mode needs p_th and gamma_1")
    return persistent_quadratic(rate, kappa, gamma_1, p_th, n_bath, omega_c=omega_c,
                                omega_qd=omega_qd, Delta=Delta_B, gamma_perp=gamma_perp_bar)


# ---------------------------------------------------------------------------
# vectorized grids (compiled kernels when available)
# ---------------------------------------------------------------------------


def clamped_grid(kappa, n_bath, Gamma_c, r1, r2):
    """Clamped occupation over broadcast arrays; NaN marks unstable points."""
    return kernels.clamped_batch(kappa, n_bath, Gamma_c, r1, r2)


def persistent_grid(Gamma_c, kappa, gamma_1, p_th, n_bath):
    """Persistent quadratic root over broadcast arrays."""
    return kernels.persistent_batch(Gamma_c, kappa, gamma_1, p_th, n_bath)


def filtered_grid(Gamma_c, kappa, gamma_1, p_th, n_bath, f, **kw):
    """Filtered persistent fixed point over broadcast arrays; returns ``(n, method)``."""
    return kernels.filtered_batch(Gamma_c, kappa, gamma_1, p_th, n_bath, f, **kw)


def two_emitter_grid(G1, G2, g1a, g1b, ptha, pthb, kappa, n_bath, **kw):
    """Two-emitter fixed point over broadcast arrays; returns ``(n, method)``."""
    return kernels.two_emitter_batch(G1, G2, g1a, g1b, ptha, pthb, kappa, n_bath, **kw)
