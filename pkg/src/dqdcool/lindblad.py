"""
Truncated-Fock Lindblad oracle for one or two emitters coupled to a cavity.

The Hilbert space is ``cavity (N+1) x emitter_1 (2) [x emitter_2 (2)]`` with
emitter basis ``(|g>, |e>)``. Hamiltonians are written in the frame rotating
at the cavity frequency, so only detunings appear. Superoperators act on
column-stacked density matrices, ``vec(A rho B) = (B^T kron A) vec(rho)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigvalsh
from scipy.sparse.linalg import expm_multiply, splu

from .errors import CutoffError, SolverError, ValidationError
from .rates import CavityParams, EmitterParams, exchange_rate

__all__ = [
    "HilbertSpec",
    "LindbladModel",
    "SteadyDensity",
    "destroy",
    "emitter_lowering",
    "build_single_emitter",
    "build_two_emitter",
    "build_cavity_only",
    "add_reset_channel",
    "liouvillian",
    "apply_lindbladian",
    "steady_state",
    "evolve",
    "converge_cutoff",
    "observables",
    "thermal_cavity_state",
    "product_state",
    "emitter_coherence_rate",
    "model_exchange_rate",
]

_SM = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))  # |g><e|
_SZ = sp.csr_matrix(np.diag([-1.0, 1.0]))


@dataclass(frozen=True)
class HilbertSpec:
    """Photon cutoff and number of emitters."""

    n_cutoff: int
    n_emitters: int = 1

    def __post_init__(self):
        if int(self.n_cutoff) != self.n_cutoff or self.n_cutoff < 2:
            raise ValidationError(f"n_cutoff must be an integer >= 2, got {self.n_cutoff!r}")
        if self.n_emitters not in (0, 1, 2):
            raise ValidationError("n_emitters must be 0, 1 or 2")

    @property
    def dim(self) -> int:
        return (self.n_cutoff + 1) * 2**self.n_emitters

    @property
    def factors(self) -> tuple[int, ...]:
        return (self.n_cutoff + 1,) + (2,) * self.n_emitters


@dataclass(frozen=True)
class LindbladModel:
    """Hamiltonian (rad/s) and named jump operators with their rates."""

    spec: HilbertSpec
    H: sp.csr_matrix
    jumps: tuple[tuple[str, sp.csr_matrix, float], ...]
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        herm = abs(self.H - self.H.getH()).max() if self.H.nnz else 0.0
        scale = max(abs(self.H).max() if self.H.nnz else 0.0, 1.0)
        if herm > 1e-12 * scale:
            raise ValidationError("Hamiltonian is not Hermitian")
        for name, _, rate in self.jumps:
            if not (math.isfinite(rate) and rate >= 0):
                raise ValidationError(f"jump rate {name} = {rate!r} must be >= 0")

    @property
    def dim(self) -> int:
        return self.spec.dim

    def rates(self) -> dict[str, float]:
        return {name: rate for name, _, rate in self.jumps}


@dataclass(frozen=True)
class SteadyDensity:
    """Steady state and its diagnostics."""

    rho: np.ndarray
    residual: float
    observables: dict
    method: str
    spec: HilbertSpec

    @property
    def n(self) -> float:
        return self.observables["n"]

    @property
    def p_e(self) -> list[float]:
        return self.observables["p_e"]


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


def destroy(n_levels: int) -> sp.csr_matrix:
    """Annihilation operator on ``n_levels`` Fock states."""
    return sp.diags(np.sqrt(np.arange(1, n_levels)), 1, format="csr")


def _embed(op, slot, factors):
    mats = [sp.identity(d, format="csr") for d in factors]
    mats[slot] = op
    out = mats[0]
    for m in mats[1:]:
        out = sp.kron(out, m, format="csr")
    return out


def cavity_annihilation(spec: HilbertSpec) -> sp.csr_matrix:
    return _embed(destroy(spec.n_cutoff + 1), 0, spec.factors)


def emitter_lowering(spec: HilbertSpec, j: int) -> sp.csr_matrix:
    """``sigma_-`` of emitter `j` (0-based) on the full space."""
    if not 0 <= j < spec.n_emitters:
        raise ValidationError(f"emitter index {j} out of range")
    return _embed(_SM, 1 + j, spec.factors)


def emitter_sigma_z(spec: HilbertSpec, j: int) -> sp.csr_matrix:
    return _embed(_SZ, 1 + j, spec.factors)


def _emitter_jumps(spec, j, em: EmitterParams):
    sm = emitter_lowering(spec, j)
    tag = f"_{j + 1}" if spec.n_emitters > 1 else ""
    jumps = [
        ("emitter_decay" + tag, sm, em.gamma_down),
        ("emitter_excite" + tag, sm.getH().tocsr(), em.gamma_up),
        ("dephasing" + tag, emitter_sigma_z(spec, j), 0.5 * em.gamma_phi),
    ]
    if em.reset is not None:
        jumps += _reset_jumps(spec, j, em.reset.gamma_1_res, em.reset.gamma_phi_res,
                              em.reset.r1)
    return jumps


def _reset_jumps(spec, j, gamma_1_res, gamma_phi_res, r1):
    sm = emitter_lowering(spec, j)
    tag = f"_{j + 1}" if spec.n_emitters > 1 else ""
    return [
        ("reset_up" + tag, sm.getH().tocsr(), gamma_1_res * r1),
        ("reset_down" + tag, sm, gamma_1_res * (1.0 - r1)),
        ("reset_dephasing" + tag, emitter_sigma_z(spec, j), 0.5 * gamma_phi_res),
    ]


def _cavity_jumps(spec, cavity: CavityParams):
    a = cavity_annihilation(spec)
    nb = cavity.n_bath
    return [
        ("cavity_loss", a, cavity.kappa * (nb + 1.0)),
        ("cavity_gain", a.getH().tocsr(), cavity.kappa * nb),
    ]


def build_cavity_only(cavity: CavityParams, N: int) -> LindbladModel:
    """Damped cavity with no emitter."""
    spec = HilbertSpec(N, 0)
    H = sp.csr_matrix((spec.dim, spec.dim), dtype=complex)
    return LindbladModel(spec, H, tuple(_cavity_jumps(spec, cavity)), {"cavity": cavity})


def build_single_emitter(cavity: CavityParams, emitter: EmitterParams, N: int,
                         include_g_par: bool = False, g_par: float = 0.0) -> LindbladModel:
    """Jaynes-Cummings model with thermal cavity loss and emitter dissipation.

    ``H = Delta s+ s- + g (a s+ + a^dag s-)``. Jumps: ``kappa(nbar+1) D[a]``,
    ``kappa nbar D[a^dag]``, ``gamma_down D[s-]``, ``gamma_up D[s+]``,
    ``(gamma_phi/2) D[s_z]`` (plus reset channels if ``emitter.reset`` is set).
    The optional longitudinal term ``g_par (a + a^dag) s_z`` is non-secular
    in the rotating frame and is included only on request.
    """
    spec = HilbertSpec(N, 1)
    a = cavity_annihilation(spec)
    sm = emitter_lowering(spec, 0)
    spl = sm.getH()
    H = emitter.Delta * (spl @ sm) + emitter.g * (a @ spl + a.getH() @ sm)
    if include_g_par:
        warnings.warn("g_par term is non-secular in the rotating frame", RuntimeWarning,
                      stacklevel=2)
        H = H + g_par * ((a + a.getH()) @ emitter_sigma_z(spec, 0))
    jumps = _cavity_jumps(spec, cavity) + _emitter_jumps(spec, 0, emitter)
    return LindbladModel(spec, sp.csr_matrix(H, dtype=complex), tuple(jumps),
                         {"cavity": cavity, "emitters": (emitter,)})


def build_two_emitter(cavity: CavityParams, emitters: Sequence[EmitterParams],
                      lambda_exchange: float, N: int) -> LindbladModel:
    """Tavis-Cummings model with flip-flop exchange between the emitters.

    ``H = sum_j [Delta_j s+_j s-_j + g_j (a s+_j + h.c.)] + lambda (s+_1 s-_2 + h.c.)``
    with independent dissipators for each emitter.
    """
    if len(emitters) != 2:
        raise ValidationError("two emitters expected")
    spec = HilbertSpec(N, 2)
    a = cavity_annihilation(spec)
    H = sp.csr_matrix((spec.dim, spec.dim), dtype=complex)
    sms = [emitter_lowering(spec, j) for j in range(2)]
    jumps = _cavity_jumps(spec, cavity)
    for j, em in enumerate(emitters):
        sm = sms[j]
        H = H + em.Delta * (sm.getH() @ sm) + em.g * (a @ sm.getH() + a.getH() @ sm)
        jumps += _emitter_jumps(spec, j, em)
    H = H + lambda_exchange * (sms[0].getH() @ sms[1] + sms[1].getH() @ sms[0])
    return LindbladModel(spec, sp.csr_matrix(H), tuple(jumps),
                         {"cavity": cavity, "emitters": tuple(emitters),
                          "lambda": lambda_exchange})


def add_reset_channel(model: LindbladModel, gamma_1_res: float, gamma_phi_res: float = 0.0,
                      r1: float = 0.0, emitters: Sequence[int] | None = None) -> LindbladModel:
    """Append reset dissipators pumping emitter(s) towards ``(r1, 1 - r1)``.

    Rates ``gamma_1_res r1`` (up), ``gamma_1_res (1 - r1)`` (down) and
    ``gamma_phi_res/2`` on ``s_z``.
    """
    if not 0.0 <= r1 <= 1.0:
        raise ValidationError("r1 must lie in [0, 1]")
    targets = range(model.spec.n_emitters) if emitters is None else emitters
    extra = []
    for j in targets:
        extra += _reset_jumps(model.spec, j, gamma_1_res, gamma_phi_res, r1)
    params = dict(model.params)
    params["reset"] = (gamma_1_res, gamma_phi_res, r1)
    return replace(model, jumps=model.jumps + tuple(extra), params=params)


# ---------------------------------------------------------------------------
# superoperator
# ---------------------------------------------------------------------------


def emitter_coherence_rate(emitter: EmitterParams, gamma_1_res: float = 0.0,
                           gamma_phi_res: float = 0.0) -> float:
    """Decay rate of ``<s->`` produced by this module's emitter dissipators.

    ``gamma_1/2 + gamma_phi + gamma_1_res/2 + gamma_phi_res`` (rad/s).
    """
    return emitter.gamma_perp + 0.5 * gamma_1_res + gamma_phi_res


def model_exchange_rate(cavity: CavityParams, emitter: EmitterParams, gamma_1_res: float = 0.0,
                        gamma_phi_res: float = 0.0) -> float:
    """Weak-coupling exchange rate implied by the master equation.

    The cavity-emitter coherence ``<a^dag s->`` decays at
    ``kappa/2 + gamma_c`` with ``gamma_c`` from :func:`emitter_coherence_rate`,
    so the Lorentzian overlap width is ``kappa + 2 gamma_c``. This is the rate
    the reduced rate equations must use to reproduce the Lindblad steady state.
    """
    gc = emitter_coherence_rate(emitter, gamma_1_res, gamma_phi_res)
    return float(exchange_rate(emitter.g, cavity.kappa, 2.0 * gc, emitter.Delta))


def liouvillian(model: LindbladModel) -> sp.csr_matrix:
    """Sparse Liouvillian acting on column-stacked density matrices."""
    d = model.dim
    eye = sp.identity(d, format="csr", dtype=complex)
    H = model.H
    L = -1j * (sp.kron(eye, H) - sp.kron(H.T, eye))
    for _, op, rate in model.jumps:
        if rate == 0:
            continue
        op = sp.csr_matrix(op, dtype=complex)
        ld = op.getH() @ op
        L = L + rate * (sp.kron(op.conj(), op) - 0.5 * sp.kron(eye, ld) - 0.5 * sp.kron(ld.T, eye))
    return sp.csr_matrix(L)


def apply_lindbladian(model: LindbladModel, rho) -> np.ndarray:
    """``d rho/dt`` evaluated channel by channel (no superoperator)."""
    rho = np.asarray(rho, dtype=complex)
    H = model.H
    out = -1j * (H @ rho - (H.T @ rho.T).T)
    for _, op, rate in model.jumps:
        if rate == 0:
            continue
        op = sp.csr_matrix(op, dtype=complex)
        opd = op.getH()
        ld = opd @ op
        op_rho = op @ rho
        out = out + rate * ((opd.T @ op_rho.T).T - 0.5 * (ld @ rho) - 0.5 * (ld.T @ rho.T).T)
    return out


def _vec(rho):
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def _unvec(v, d):
    return np.asarray(v).reshape(d, d, order="F")


def _rate_scale(model):
    rates = [r for _, _, r in model.jumps if r > 0]
    h = abs(model.H).max() if model.H.nnz else 0.0
    return max(rates + [h, 1.0]), (min(rates) if rates else 0.0)


def _finalize(model, rho, L, scale, method):
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    residual = float(np.abs(L @ _vec(rho)).max() / scale)
    return SteadyDensity(rho=rho, residual=residual, observables=observables(rho, model.spec),
                         method=method, spec=model.spec)


def steady_state(model: LindbladModel, method: str = "null_space", tol: float = 1e-9,
                 rho0=None, max_windows: int = 200_000) -> SteadyDensity:
    """Steady state of `model`.

    Parameters
    ----------
    method : {"null_space", "time_evolution"}
        ``null_space`` solves ``L rho = 0`` with one equation replaced by the
        trace condition (sparse LU on the rate-normalized Liouvillian).
        ``time_evolution`` propagates `rho0` (default: cavity vacuum, emitters
        in ``|g>``) in windows of ``1/(10 * slowest rate)`` and stops once
        ``n`` and every ``p_e`` change by less than `tol` over three
        consecutive windows.
    tol : float
        Drift tolerance for time evolution; the null-space residual must be
        below ``max(tol, 1e-8)`` in rate-normalized units.
    """
    scale, slowest = _rate_scale(model)
    if slowest <= 0:
        raise ValidationError("steady state needs at least one nonzero dissipative rate")
    d = model.dim
    L = liouvillian(model)
    if method == "null_space":
        Ls = (L / scale).tolil()
        trace_row = np.zeros(d * d, dtype=complex)
        trace_row[np.arange(d) * (d + 1)] = 1.0
        Ls[0, :] = trace_row
        rhs = np.zeros(d * d, dtype=complex)
        rhs[0] = 1.0
        try:
            v = splu(Ls.tocsc()).solve(rhs)
        except RuntimeError as exc:
            raise SolverError(f"sparse LU failed: {exc}", {"dim": d}) from exc
        out = _finalize(model, _unvec(v, d), L, scale, method)
        if not out.residual <= max(tol, 1e-8):
            raise SolverError("null-space residual above tolerance",
                              {"residual": out.residual, "tol": tol})
        return out
    if method == "time_evolution":
        rho = product_state(model.spec) if rho0 is None else np.asarray(rho0, dtype=complex)
        dt = 1.0 / (10.0 * slowest)
        v = _vec(rho)
        prev = _track(rho, model.spec)
        quiet = 0
        for w in range(max_windows):
            v = expm_multiply(L * dt, v)
            rho = _unvec(v, d)
            cur = _track(rho, model.spec)
            drift = float(np.abs(cur - prev).max())
            prev = cur
            quiet = quiet + 1 if drift < tol else 0
            if quiet >= 3:
                return _finalize(model, rho, L, scale, method)
        raise SolverError("time evolution did not reach a steady state",
                          {"windows": max_windows, "last_drift": drift})
    raise ValidationError(f"unknown method {method!r}")


def _track(rho, spec):
    obs = _expectations(rho, spec)
    return np.array([obs[0]] + list(obs[1]))


def evolve(model: LindbladModel, rho0, times) -> list[np.ndarray]:
    """Density matrices at the requested `times` (s), starting from `rho0` at t = 0."""
    L = liouvillian(model)
    d = model.dim
    v = _vec(rho0)
    t_prev = 0.0
    out = []
    for t in times:
        if t < t_prev:
            raise ValidationError("times must be non-decreasing")
        if t > t_prev:
            v = expm_multiply(L * (t - t_prev), v)
        out.append(_unvec(v, d).copy())
        t_prev = t
    return out


# ---------------------------------------------------------------------------
# states and observables
# ---------------------------------------------------------------------------


def thermal_cavity_state(n_levels: int, nbar: float) -> np.ndarray:
    """Truncated, renormalized thermal state of a single mode."""
    if nbar == 0:
        p = np.zeros(n_levels)
        p[0] = 1.0
    else:
        x = nbar / (nbar + 1.0)
        p = x ** np.arange(n_levels)
        p /= p.sum()
    return np.diag(p).astype(complex)


def product_state(spec: HilbertSpec, cavity=None, emitters=None) -> np.ndarray:
    """Product state ``rho_cav x rho_1 [x rho_2]``; defaults are vacuum and ``|g>``."""
    rho = thermal_cavity_state(spec.n_cutoff + 1, 0.0) if cavity is None else cavity
    ems = emitters or [np.diag([1.0, 0.0])] * spec.n_emitters
    for e in ems:
        rho = np.kron(rho, e)
    return np.asarray(rho, dtype=complex)


def _expectations(rho, spec):
    d_cav = spec.n_cutoff + 1
    r = rho.reshape(d_cav, 2**spec.n_emitters, d_cav, 2**spec.n_emitters)
    cav_pop = np.real(np.einsum("iaia->i", r))
    n = float(np.dot(np.arange(d_cav), cav_pop))
    pe = []
    em = np.real(np.einsum("iaib->ab", r)).diagonal()
    for j in range(spec.n_emitters):
        bits = (np.arange(2**spec.n_emitters) >> (spec.n_emitters - 1 - j)) & 1
        pe.append(float(em[bits == 1].sum()))
    return n, pe


def observables(rho, spec: HilbertSpec) -> dict:
    """``n``, per-emitter ``p_e``, purity, trace and smallest eigenvalue."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (spec.dim, spec.dim):
        raise ValidationError(f"rho shape {rho.shape} does not match dim {spec.dim}")
    n, pe = _expectations(rho, spec)
    herm = 0.5 * (rho + rho.conj().T)
    return {
        "n": n,
        "p_e": pe,
        "purity": float(np.real(np.vdot(rho.conj().T, rho))),
        "trace": float(np.real(np.trace(rho))),
        "positivity_floor": float(eigvalsh(herm)[0]),
    }


def converge_cutoff(family: Callable[[int], LindbladModel],
                    observable: str | Callable[[SteadyDensity], float] = "n",
                    rel_tol: float = 1e-4, N_start: int = 2, N_max: int = 80,
                    method: str = "null_space"):
    """Smallest cutoff whose observable is stable against adding a Fock level.

    Returns ``(N, value, history)`` where ``N`` is the first cutoff with
    ``|v(N+1) - v(N)| <= rel_tol |v(N+1)|`` (or both values below 1e-15).

    Raises
    ------
    CutoffError
        If no such ``N <= N_max`` exists; the drift sequence is attached.
    """
    if isinstance(observable, str):
        name = observable

        def observable(sd, _name=name):
            if _name == "n":
                return sd.n
            if _name.startswith("p_e"):
                return sd.p_e[int(_name[3:] or 0)]
            return sd.observables[_name]

    history = []
    prev = observable(steady_state(family(N_start), method))
    history.append((N_start, prev))
    for N in range(N_start, N_max):
        cur = observable(steady_state(family(N + 1), method))
        history.append((N + 1, cur))
        if abs(cur - prev) <= rel_tol * abs(cur) or max(abs(cur), abs(prev)) < 1e-15:
            return N, prev, history
        prev = cur
    raise CutoffError(f"observable not converged by N = {N_max}", {"history": history})
