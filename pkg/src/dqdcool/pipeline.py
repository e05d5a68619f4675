"""
Single-point evaluation of a :class:`~dqdcool.config.RunConfig`.

Conventions shared by every model:

- ``Delta = omega_qd - omega_c`` enters only through spectral overlap; the
  reservoir statistics (``r1``, ``r2``, ``p_th``) are prepared at the cavity
  frequency, so detuning sweeps do not move the setpoint.
- ``T_dot`` is the dot setpoint temperature ``T_set``; ``ratio`` is
  ``T_cav / T_dot``.
- Two dots sit at ``omega_qd +/- Delta_12/2`` (dot 1 higher for
  ``Delta_12 > 0``); the one-dot channel couples the cavity to dot 1.
- Two-dot analytic models act through the collective bright channel, whose
  overlap is broadened by ``|Delta_12|``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .config import RunConfig
from .errors import DQDCoolError, InstabilityError
from .lindblad import (build_single_emitter, build_two_emitter, converge_cutoff,
                       steady_state)
from .pairstate import ReservoirStats, Variant, reservoir_stats, setpoint_pair_state
from .rates import (CavityParams, EmitterParams, bose_occupation, bright_channel,
                    collision_strength, exchange_rate, thermal_tls_population)
from .steady import (RateBundle, Solver, SteadyStateResult, bright_mode_steady, classify_regime,
                     clamped_steady, collision_steady, effective_temperatures,
                     persistent_quadratic)

__all__ = ["PointResult", "evaluate", "pair_statistics", "thermal_statistics",
           "single_exchange_rate", "collective_exchange_rate"]


@dataclass(frozen=True)
class PointResult:
    """Outcome of one configuration point; ``error`` is empty on success."""

    n_star: float = math.nan
    p_e: float = math.nan
    T_cav: float = math.nan
    T_dot: float = math.nan
    ratio: float = math.nan
    T_dqd: float = math.nan
    regime: str = ""
    solver: str = ""
    residual: float = math.nan
    cutoff: int | None = None
    gain: bool = False
    warning: str = ""
    error: str = ""
    extra: dict = field(default_factory=dict, compare=False)


def pair_statistics(cfg: RunConfig) -> ReservoirStats:
    """Pair-reservoir statistics for the configured variant (at ``omega_c``)."""
    ps = setpoint_pair_state(cfg["omega_c"], cfg["lambda"], cfg["T_set"],
                             delta_12=cfg["Delta_12"])
    return reservoir_stats(ps, Variant(cfg.variant), omega_qd=cfg["omega_c"])


def thermal_statistics(cfg: RunConfig) -> ReservoirStats:
    """Two-level thermal statistics at ``T_set`` (at ``omega_c``)."""
    return ReservoirStats.thermal(cfg["omega_c"], cfg["T_set"], Variant(cfg.variant))


def _gamma_perp(cfg):
    return 0.5 * cfg["gamma_1"] + cfg["gamma_phi"]


def _dot_detunings(cfg):
    half = 0.5 * cfg["Delta_12"]
    return cfg["Delta"] + half, cfg["Delta"] - half


def single_exchange_rate(cfg: RunConfig, Delta: float | None = None) -> float:
    """``Gamma_c(Delta)`` of dot 1 (defaults to its configured detuning)."""
    D = _dot_detunings(cfg)[0] if Delta is None else Delta
    return float(exchange_rate(cfg["g"], cfg["kappa"], _gamma_perp(cfg), D))


def collective_exchange_rate(cfg: RunConfig) -> float:
    """Bright-mode rate of two equal-coupling dots, broadened by ``|Delta_12|``."""
    gp = _gamma_perp(cfg)
    D1, D2 = _dot_detunings(cfg)
    return bright_channel(cfg["g"], cfg["g"], cfg["kappa"], gp, gp, D1, D2, cfg["Delta_12"])[2]


def _finish(res: SteadyStateResult, cfg: RunConfig, **kw) -> PointResult:
    T_dot = cfg["T_set"]
    return PointResult(
        n_star=res.n_star, p_e=res.p_e, T_cav=res.T_cav, T_dot=T_dot, ratio=res.T_cav / T_dot,
        T_dqd=res.T_dqd, regime=res.regime.value, solver=res.solver.value,
        residual=res.residual, gain=res.gain, **kw,
    )


def _collision(cfg, n_bath):
    stats = pair_statistics(cfg)
    common = dict(omega_c=cfg["omega_c"], omega_qd=cfg["omega_c"], gamma_perp=_gamma_perp(cfg))
    if cfg.variant == "two_dot":
        cp = collision_strength(cfg["g"], cfg["tau"], cfg["R"], cfg["chi"])
        # bright-channel overlap relative to matched resonance (mismatch broadens it)
        ref = collective_exchange_rate(cfg.with_params(Delta=0.0, Delta_12=0.0))
        rate = cp.pump_rate * collective_exchange_rate(cfg) / ref
        return clamped_steady(cfg["kappa"], n_bath, rate, stats.r1, stats.r2,
                              Delta=cfg["Delta"], solver=Solver.COLLISION_STREAM, **common)
    cp = collision_strength(cfg["g"], cfg["tau"], cfg["R"], 1.0)
    halfwidth = 0.5 * (cfg["kappa"] + _gamma_perp(cfg))
    return collision_steady(cp, stats.r1, stats.r2, cfg["kappa"], n_bath,
                            Delta=_dot_detunings(cfg)[0], Gamma_halfwidth=halfwidth, **common)


def _clamped(cfg, n_bath):
    stats = thermal_statistics(cfg)
    if cfg.variant == "two_dot":
        G, D = collective_exchange_rate(cfg), cfg["Delta"]
    else:
        D = _dot_detunings(cfg)[0]
        G = single_exchange_rate(cfg, D)
    return clamped_steady(cfg["kappa"], n_bath, G, stats.r1, stats.r2, omega_c=cfg["omega_c"],
                          omega_qd=cfg["omega_c"], Delta=D, gamma_perp=_gamma_perp(cfg))


def _persistent(cfg, n_bath):
    p_th = thermal_tls_population(cfg["omega_c"], cfg["T_set"])
    common = dict(omega_c=cfg["omega_c"], omega_qd=cfg["omega_c"])
    if cfg.variant == "two_dot":
        gp = _gamma_perp(cfg)
        D1, D2 = _dot_detunings(cfg)
        g_B, D_B, _ = bright_channel(cfg["g"], cfg["g"], cfg["kappa"], gp, gp, D1, D2,
                                     cfg["Delta_12"])
        return bright_mode_steady(g_B, D_B, cfg["Delta_12"], cfg["kappa"], gp, n_bath,
                                  p_th=p_th, gamma_1=cfg["gamma_1"], clamped=False, **common)
    D = _dot_detunings(cfg)[0]
    return persistent_quadratic(single_exchange_rate(cfg, D), cfg["kappa"], cfg["gamma_1"],
                                p_th, n_bath, Delta=D, gamma_perp=_gamma_perp(cfg), **common)


def _lindblad(cfg, n_bath):
    cavity = CavityParams(cfg["omega_c"], cfg["kappa"], cfg["T_bath"])
    p_th = thermal_tls_population(cfg["omega_c"], cfg["T_set"])

    def emitter(D):
        return EmitterParams(cfg["omega_c"] + D, g=cfg["g"], gamma_1=cfg["gamma_1"],
                             gamma_phi=cfg["gamma_phi"], Delta=D, p_th=p_th)

    if cfg.variant == "two_dot":
        ems = [emitter(D) for D in _dot_detunings(cfg)]

        def family(N):
            # the pair exchange enters the reservoir statistics only
            return build_two_emitter(cavity, ems, 0.0, N)
    else:
        em = emitter(_dot_detunings(cfg)[0])

        def family(N):
            return build_single_emitter(cavity, em, N)

    N = int(cfg.n_cutoff)
    if N == 0:
        N, _, _ = converge_cutoff(family, "n", method=cfg.lindblad_method)
    sd = steady_state(family(N), method=cfg.lindblad_method)
    p = sd.p_e[0]
    T_cav, T_dqd, _ = effective_temperatures(sd.n, p, cfg["omega_c"], cfg["omega_c"])
    regime, _ = classify_regime(RateBundle(kappa=cfg["kappa"], Gamma_c=single_exchange_rate(cfg),
                                           gamma_1=cfg["gamma_1"], Delta=cfg["Delta"],
                                           gamma_perp=_gamma_perp(cfg)))
    T_dot = cfg["T_set"]
    return PointResult(n_star=sd.n, p_e=p, T_cav=T_cav, T_dot=T_dot, ratio=T_cav / T_dot,
                       T_dqd=T_dqd, regime=regime.value, solver=Solver.LINDBLAD.value,
                       residual=sd.residual, cutoff=N, gain=p > 0.5,
                       extra={"trace": sd.observables["trace"],
                              "positivity_floor": sd.observables["positivity_floor"]})


_MODELS = {"collision": _collision, "clamped": _clamped, "persistent": _persistent,
           "lindblad": _lindblad}


def evaluate(cfg: RunConfig) -> PointResult:
    """Evaluate one point; solver failures are reported in ``error``, not raised.

    A runaway-gain instability is a physical outcome and is returned with
    ``gain = True`` and no error.
    """
    n_bath = bose_occupation(cfg["omega_c"], cfg["T_bath"])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            out = _MODELS[cfg.model](cfg, n_bath)
        except InstabilityError as exc:
            out = PointResult(T_dot=cfg["T_set"], gain=True, solver=cfg.model,
                              warning=f"unstable: {exc}")
        except (DQDCoolError, ArithmeticError, ValueError) as exc:
            out = PointResult(T_dot=cfg["T_set"], solver=cfg.model,
                              error=f"{type(exc).__name__}: {exc}")
    if not isinstance(out, PointResult):
        out = _finish(out, cfg)
    msgs = sorted({str(w.message) for w in caught})
    if msgs:
        joined = "; ".join(m for m in [out.warning] + msgs if m)
        out = PointResult(**{**out.__dict__, "warning": joined})
    return out
