"""
Validation harness: invariant suites and cross-solver equivalence checks.

Every check yields a :class:`Check` with the measured quantity, its bound
and a verdict. Random draws use fixed seeds, so reports are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
from scipy.linalg import expm

from .constants import HBAR, KB, TWO_PI
from .lindblad import (add_reset_channel, apply_lindbladian, build_single_emitter,
                       build_two_emitter, converge_cutoff, evolve, liouvillian,
                       model_exchange_rate, observables, product_state, steady_state,
                       thermal_cavity_state)
from .pairstate import (build_st_hamiltonian, eigensystem_cubic, shekhtman_rotate,
                        thermal_state)
from .rates import (CavityParams, CollisionParams, EmitterParams, bose_occupation,
                    collision_strength, exchange_rate, phonon_rates, thermal_tls_population)
from .steady import clamped_steady, collision_steady, persistent_quadratic

__all__ = [
    "Check",
    "SCOPES",
    "run_checks",
    "format_report",
    "analytic_checks",
    "lindblad_checks",
    "weak_coupling_cases",
    "clamp_cases",
    "OMEGA",
]

OMEGA = TWO_PI * 5e9
SCOPES = ("analytic", "lindblad", "all")


@dataclass(frozen=True)
class Check:
    """One line of the validation report; ``passed`` iff ``measured <= bound``."""

    name: str
    measured: float
    bound: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.measured) and self.measured <= self.bound)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


def _bath_temperature(nbar, omega=OMEGA):
    return HBAR * omega / (KB * math.log1p(1.0 / nbar))


# ---------------------------------------------------------------------------
# analytic suites
# ---------------------------------------------------------------------------


def _detailed_balance(rng, draws=200):
    worst = 0.0
    for _ in range(draws):
        g0 = 10 ** rng.uniform(0, 8)
        w = TWO_PI * 10 ** rng.uniform(8, 11)
        T = 10 ** rng.uniform(-2.5, 1.5)
        up, down, _ = phonon_rates(g0, w, T)
        target = math.exp(-HBAR * w / (KB * T))
        if target > 0:
            worst = max(worst, abs(up / down - target) / target)
    return worst


def _occupation_bound(rng, draws=500):
    worst = 0.0
    for _ in range(draws):
        nbar = 10 ** rng.uniform(-3, 1.5)
        r1 = rng.uniform(0, 0.45)
        r2 = 1 - r1
        kappa = 10 ** rng.uniform(-3, 3)
        G = 10 ** rng.uniform(-3, 3)
        n = clamped_steady(kappa, nbar, G, r1, r2).n_star
        n_set = r1 / (r2 - r1)
        lo, hi = min(n_set, nbar), max(n_set, nbar)
        worst = max(worst, (lo - n) / max(lo, 1e-300) if n < lo else 0.0,
                    (n - hi) / hi if n > hi else 0.0)
    return worst


def _mapping_identity(rng, rate_fn, draws=100):
    """Collision stream with ``R phi^2 = Gamma_c(0)`` and a Lorentzian filter
    against the clamped closed form fed ``Gamma_c(Delta)``."""
    worst = 0.0
    for _ in range(draws):
        g = TWO_PI * 10 ** rng.uniform(4, 6.5)
        kappa = TWO_PI * 10 ** rng.uniform(2, 6)
        gp = TWO_PI * 10 ** rng.uniform(3, 6.5)
        Delta = rng.uniform(-3, 3) * (kappa + gp)
        nbar = 10 ** rng.uniform(-2, 1)
        r1 = rng.uniform(0, 0.4)
        G0 = float(rate_fn(g, kappa, gp, 0.0))
        tau = 1e-9
        phi = g * tau
        cp = CollisionParams(R=G0 / phi**2, tau=tau, phi=phi, chi=1.0)
        a = collision_steady(cp, r1, 1 - r1, kappa, nbar, Delta=Delta,
                             Gamma_halfwidth=0.5 * (kappa + gp)).n_star
        b = clamped_steady(kappa, nbar, float(rate_fn(g, kappa, gp, Delta)), r1, 1 - r1).n_star
        worst = max(worst, abs(a - b) / b)
    return worst


def _cubic_vs_dense(rng, draws=1000):
    worst = 0.0
    for _ in range(draws):
        J0, delta, k = rng.normal(size=3) * 10 ** rng.uniform(-2, 2, size=3)
        es = eigensystem_cubic(J0, delta, k)
        ref = np.linalg.eigvalsh(build_st_hamiltonian(J0, delta, k))
        scale = max(1.0, np.abs(ref).max())
        worst = max(worst, np.abs(np.sort(es.lambdas) - ref).max() / scale)
    return worst


def _thermal_state(rng, draws=200):
    worst = 0.0
    for _ in range(draws):
        J0, delta, k = rng.normal(size=3)
        T = HBAR / KB * 10 ** rng.uniform(-0.5, 1)
        ps = thermal_state(eigensystem_cubic(J0, delta, k), T)
        H = build_st_hamiltonian(J0, delta, k)
        rho = expm(-H * HBAR / (KB * T))
        rho /= np.trace(rho)
        worst = max(worst, np.abs(ps.rho_st - rho).max())
    return worst


def _shekhtman(rng, draws=200):
    worst = 0.0
    for _ in range(draws):
        J = 10 ** rng.uniform(-1, 1)
        D = rng.normal(size=3) * 10 ** rng.uniform(-2, 0.5)
        worst = max(worst, shekhtman_rotate(J, D).exchange_residual)
    return worst


def _persistent_balance(rng, draws=300):
    worst = 0.0
    for _ in range(draws):
        r = persistent_quadratic(10 ** rng.uniform(-2, 4), 10 ** rng.uniform(-2, 4),
                                 10 ** rng.uniform(-2, 4), rng.uniform(0, 0.5),
                                 10 ** rng.uniform(-3, 1.5))
        worst = max(worst, r.residual)
    return worst


def analytic_checks(rate_fn: Callable = exchange_rate, seed: int = 1) -> list[Check]:
    """Closed-form, Hamiltonian-layer and mapping checks (seconds)."""
    rng = np.random.default_rng(seed)
    phi = collision_strength(TWO_PI * 0.5e6, 50e-9, 5e6).phi
    return [
        Check("bose_occupation_1K", abs(bose_occupation(OMEGA, 1.0) - 3.69), 0.02),
        Check("bose_occupation_10K", abs(bose_occupation(OMEGA, 10.0) - 41.2), 0.5),
        Check("collision_phase_baseline", abs(phi - 0.157), 0.001),
        Check("detailed_balance", _detailed_balance(rng), 1e-12),
        Check("clamped_occupation_bound", _occupation_bound(rng), 1e-9),
        Check("collision_clamped_mapping_identity", _mapping_identity(rng, rate_fn), 1e-12),
        Check("persistent_balance_residual", _persistent_balance(rng), 1e-9),
        Check("cubic_vs_dense_eigenvalues", _cubic_vs_dense(rng), 1e-9),
        Check("thermal_pair_state_vs_expm", _thermal_state(rng), 1e-10),
        Check("shekhtman_dm_elimination", _shekhtman(rng), 1e-10),
    ]


# ---------------------------------------------------------------------------
# Lindblad suites
# ---------------------------------------------------------------------------


def weak_coupling_cases(n: int, seed: int = 7):
    """Random single-emitter sets with ``g <= 0.1 (kappa + gamma_perp)`` and ``nbar <= 0.5``.

    Yields ``(cavity, emitter)`` pairs.
    """
    rng = np.random.default_rng(seed)
    for _ in range(n):
        nbar = rng.uniform(0.05, 0.5)
        kappa = TWO_PI * 10 ** rng.uniform(3, 5.5)
        g1 = TWO_PI * 10 ** rng.uniform(3, 5.5)
        gphi = TWO_PI * 10 ** rng.uniform(3, 5.5)
        gp = 0.5 * g1 + gphi
        g = rng.uniform(0.01, 0.1) * (kappa + gp)
        Delta = rng.uniform(-0.5, 0.5) * (kappa + gp)
        p_th = thermal_tls_population(OMEGA, rng.uniform(0.03, 0.3))
        yield (CavityParams(OMEGA, kappa, _bath_temperature(nbar)),
               EmitterParams(OMEGA + Delta, g=g, gamma_1=g1, gamma_phi=gphi, Delta=Delta,
                             p_th=p_th))


def clamp_cases(n: int, factor: float = 10.0, seed: int = 11):
    """Random reset-clamped sets at reset dominance ``factor``.

    The reset rate solves ``gamma_1_res = factor * max(kappa, Gamma_c)`` with
    ``Gamma_c`` including the reset's own broadening. Yields
    ``(cavity, emitter, gamma_1_res, r1, Gamma_c)``.
    """
    rng = np.random.default_rng(seed)
    for _ in range(n):
        nbar = rng.uniform(0.05, 0.5)
        kappa = TWO_PI * 10 ** rng.uniform(3, 5.5)
        gphi = TWO_PI * 10 ** rng.uniform(3, 5.5)
        g = rng.uniform(0.01, 0.1) * (kappa + gphi)
        Delta = rng.uniform(-0.5, 0.5) * (kappa + gphi)
        T_set = rng.uniform(0.03, 0.3)
        r1 = 1.0 / (math.exp(HBAR * OMEGA / (KB * T_set)) + 1.0)
        cavity = CavityParams(OMEGA, kappa, _bath_temperature(nbar))
        em = EmitterParams(OMEGA + Delta, g=g, gamma_1=0.0, gamma_phi=gphi, Delta=Delta)
        gres = factor * kappa
        for _ in range(200):
            G = model_exchange_rate(cavity, em, gamma_1_res=gres)
            new = factor * max(kappa, G)
            if abs(new - gres) <= 1e-14 * new:
                break
            gres = new
        yield cavity, em, gres, r1, model_exchange_rate(cavity, em, gamma_1_res=gres)


def _converged(family, method="null_space"):
    N, _, _ = converge_cutoff(family, "n", rel_tol=1e-6)
    return steady_state(family(N), method), N


def weak_coupling_errors(n: int = 20, seed: int = 7, rate: str = "model"):
    """Relative ``|n_L - n_A|/n_A`` per case.

    ``rate = "model"`` feeds the analytic side the exchange rate implied by the
    master equation; ``"literal"`` uses ``exchange_rate`` with ``gamma_perp``.
    Returns ``(errors, steady densities)``.
    """
    errs, states = [], []
    for cavity, em in weak_coupling_cases(n, seed):
        sd, _ = _converged(lambda N: build_single_emitter(cavity, em, N))
        if rate == "model":
            G = model_exchange_rate(cavity, em)
        else:
            G = float(exchange_rate(em.g, cavity.kappa, em.gamma_perp, em.Delta))
        ref = persistent_quadratic(G, cavity.kappa, em.gamma_1, em.p_th, cavity.n_bath).n_star
        errs.append(abs(sd.n - ref) / ref)
        states.append(sd)
    return errs, states


def clamp_errors(n: int = 20, factor: float = 10.0, seed: int = 11):
    """Relative ``|n_L - n_clamped|/n_clamped`` per reset-dominated case."""
    errs, states = [], []
    for cavity, em, gres, r1, G in clamp_cases(n, factor, seed):
        sd, _ = _converged(
            lambda N: add_reset_channel(build_single_emitter(cavity, em, N), gres, 0.0, r1))
        ref = clamped_steady(cavity.kappa, cavity.n_bath, G, r1, 1 - r1).n_star
        errs.append(abs(sd.n - ref) / ref)
        states.append(sd)
    return errs, states


def liouvillian_consistency(seed: int = 3) -> float:
    """Max deviation between superoperator and channel-by-channel action (relative)."""
    rng = np.random.default_rng(seed)
    cav = CavityParams(OMEGA, TWO_PI * 1e5, 0.3)
    ems = [EmitterParams(OMEGA, g=TWO_PI * 3e4, gamma_1=TWO_PI * 2e5, gamma_phi=TWO_PI * 1e5,
                         Delta=TWO_PI * 2e4 * s, p_th=0.05) for s in (1, -1)]
    worst = 0.0
    for model in (build_single_emitter(cav, ems[0], 6), build_two_emitter(cav, ems, 1e5, 4)):
        model = add_reset_channel(model, TWO_PI * 1e5, TWO_PI * 1e4, 0.02)
        d = model.dim
        X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        X = X @ X.conj().T
        X /= np.trace(X)
        L = liouvillian(model)
        a = (L @ X.reshape(-1, order="F")).reshape(d, d, order="F")
        b = apply_lindbladian(model, X)
        worst = max(worst, np.abs(a - b).max() / abs(L).max())
    return worst


def dark_state_leak(N: int = 4, t_max: float = 1e-5) -> float:
    """Max cavity population of the symmetric dark state with no dissipation."""
    cav = CavityParams(OMEGA, 0.0, 1.0)
    em = EmitterParams(OMEGA, g=TWO_PI * 1e6, gamma_1=0.0, gamma_phi=0.0)
    model = build_two_emitter(cav, [em, em], TWO_PI * 2e5, N)
    psi_em = np.zeros(4, dtype=complex)
    psi_em[1], psi_em[2] = 1 / math.sqrt(2), -1 / math.sqrt(2)  # (|ge> - |eg>)/sqrt 2
    rho = np.kron(thermal_cavity_state(N + 1, 0.0), np.outer(psi_em, psi_em.conj()))
    worst = 0.0
    for r in evolve(model, rho, np.linspace(0, t_max, 21)):
        worst = max(worst, observables(r, model.spec)["n"])
    return worst


def excitation_drift(N: int = 6, t_max: float = 2e-5) -> float:
    """Max drift of ``n + p_e`` for ``kappa = gamma_1 = 0`` (pure dephasing allowed)."""
    cav = CavityParams(OMEGA, 0.0, 1.0)
    em = EmitterParams(OMEGA, g=TWO_PI * 1e6, gamma_1=0.0, gamma_phi=TWO_PI * 2e5,
                       Delta=TWO_PI * 3e5)
    model = build_single_emitter(cav, em, N)
    rho0 = product_state(model.spec, cavity=thermal_cavity_state(N + 1, 0.0),
                         emitters=[np.diag([0.0, 1.0])])
    rho0 = 0.5 * rho0 + 0.5 * product_state(
        model.spec, cavity=np.diag(np.eye(N + 1)[2]).astype(complex))
    ref = None
    worst = 0.0
    for r in evolve(model, rho0, np.linspace(0, t_max, 21)):
        obs = observables(r, model.spec)
        total = obs["n"] + obs["p_e"][0]
        ref = total if ref is None else ref
        worst = max(worst, abs(total - ref))
    return worst


def lindblad_checks(n_cases: int = 6, seed: int = 7) -> list[Check]:
    """Oracle checks against the truncated Lindblad model (tens of seconds)."""
    weak, s1 = weak_coupling_errors(n_cases, seed)
    clamp, s2 = clamp_errors(n_cases, 10.0, seed + 4)
    states = s1 + s2
    trace = max(abs(s.observables["trace"] - 1.0) for s in states)
    floor = max(-s.observables["positivity_floor"] for s in states)
    return [
        Check("liouvillian_action_consistency", liouvillian_consistency(), 1e-12),
        Check("weak_coupling_vs_persistent", max(weak), 0.05),
        Check("clamp_vs_reset_lindblad_factor10", max(clamp), 0.02),
        Check("steady_trace", trace, 1e-8),
        Check("steady_positivity", floor, 1e-8),
        Check("dark_state_protection", dark_state_leak(), 1e-8),
        Check("conserved_excitation", excitation_drift(), 1e-6),
    ]


def run_checks(scope: str = "all", rate_fn: Callable = exchange_rate) -> list[Check]:
    """Checks of `scope`; `rate_fn` replaces ``exchange_rate`` in the mapping identity."""
    if scope not in SCOPES:
        raise ValueError(f"scope must be one of {SCOPES}")
    out: list[Check] = []
    if scope in ("analytic", "all"):
        out += analytic_checks(rate_fn)
    if scope in ("lindblad", "all"):
        out += lindblad_checks()
    return out


def format_report(checks: Iterable[Check]) -> str:
    """``name,measured,bound,verdict`` lines with a header."""
    lines = ["name,measured,bound,verdict"]
    for c in checks:
        lines.append(f"{c.name},{c.measured:.6e},{c.bound:.1e},{c.verdict}")
    return "\n".join(lines) + "\n"
