"""
Two-spin double-quantum-dot Hamiltonian and reservoir statistics.

The pair is described in the singlet/triplet basis ``{T+, T0, T-, S0}``
(index order 0..3) by the minimal Hamiltonian

    H = [[J0/4 + d,   0,     0,      -i k ],
         [0,          J0/4,  0,       0   ],
         [0,          0,     J0/4 - d, -i k],
         [ i k,       0,     i k,   -3J0/4]]

with every entry an angular frequency (rad/s). The pipeline is

    microscopic (J, D, B) -> Shekhtman frame (J0, alpha, n) -> local fields
    -> (delta, k) -> closed-form eigensystem -> thermal state
    -> product basis -> single-dot marginal -> reservoir statistics (r1, r2)

The product basis is ``{uu, ud, du, dd}`` with dot A as the first factor and
``|d>`` (spin down) taken as the excited single-dot state.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh

from .constants import HBAR, KB, MU_B
from .errors import DegenerateExchangeError, DomainError, ValidationError

__all__ = [
    "GammaTensorMode",
    "Variant",
    "SpinPairParams",
    "RotatedFrame",
    "EigenSystem",
    "PairState",
    "ReservoirStats",
    "U_ST_TO_PRODUCT",
    "rodrigues",
    "nanowire_exchange_map",
    "shekhtman_rotate",
    "local_fields",
    "st_parameters",
    "minimal_st_parameters",
    "rotated_frame",
    "build_st_hamiltonian",
    "inhomogeneous_st_hamiltonian",
    "eigensystem_cubic",
    "thermal_state",
    "thermal_state_dense",
    "to_product_basis",
    "reduce_dot",
    "excitation_probability",
    "reservoir_stats",
    "setpoint_pair_state",
    "mixing_angle",
]

_UNIT_TOL = 1e-12
_DEGENERATE_TOL = 1e-9
_RESIDUAL_TOL = 1e-11
_Z = np.array([0.0, 0.0, 1.0])


class GammaTensorMode(str, enum.Enum):
    NONE = "none"
    DM_RESIDUAL = "dm_residual"


class Variant(str, enum.Enum):
    ONE_DOT = "one_dot"
    TWO_DOT = "two_dot"


def _vec3(v, name):
    a = np.asarray(v, dtype=float).reshape(-1)
    if a.shape != (3,) or not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} must be a finite 3-vector, got {v!r}")
    a = a.copy()
    a.setflags(write=False)
    return a


def _unit(v, name):
    a = _vec3(v, name)
    if abs(np.linalg.norm(a) - 1.0) > _UNIT_TOL:
        raise ValidationError(f"{name} must be a unit vector (|{name}| = {np.linalg.norm(a)!r})")
    return a


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


def _cross_matrix(v):
    """Matrix ``[v]x`` with ``[v]x @ u = v x u``."""
    return np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])


def _dm_matrix(D):
    """Antisymmetric exchange matrix ``eps_ijk D_k`` (so ``S1 . M S2 = D . (S1 x S2)``)."""
    return -_cross_matrix(D)


def rodrigues(n_hat, angle: float) -> np.ndarray:
    """Rotation matrix about `n_hat` by `angle` (right-handed)."""
    n = np.asarray(n_hat, dtype=float)
    c, s = np.cos(angle), np.sin(angle)
    return c * np.eye(3) + s * _cross_matrix(n) + (1.0 - c) * np.outer(n, n)


# ---------------------------------------------------------------------------
# microscopic parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpinPairParams:
    """Microscopic DQD spin-pair parameters.

    Parameters
    ----------
    J : float
        Isotropic exchange (rad/s).
    D : array_like
        Dzyaloshinskii-Moriya vector (rad/s).
    B : array_like
        Laboratory magnetic field (T).
    g_star : float
        Effective g-factor.
    gamma_tensor_mode : GammaTensorMode
        ``none`` drops the symmetric anisotropy; ``dm_residual`` keeps it.
    J0_bare, d, x_so, dm_axis : optional
        Nanowire inputs, recorded when built by :meth:`from_nanowire`.
    """

    J: float
    D: np.ndarray
    B: np.ndarray
    g_star: float = 2.0
    gamma_tensor_mode: GammaTensorMode = GammaTensorMode.NONE
    J0_bare: float | None = None
    d: float | None = None
    x_so: float | None = None
    dm_axis: np.ndarray | None = None
    gamma_tensor: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if not np.isfinite(self.J):
            raise ValidationError("J must be finite")
        object.__setattr__(self, "J", float(self.J))
        object.__setattr__(self, "D", _vec3(self.D, "D"))
        object.__setattr__(self, "B", _vec3(self.B, "B"))
        object.__setattr__(self, "gamma_tensor_mode", GammaTensorMode(self.gamma_tensor_mode))
        if self.dm_axis is not None:
            object.__setattr__(self, "dm_axis", _unit(self.dm_axis, "dm_axis"))
        if self.x_so is not None and not self.x_so > 0:
            raise ValidationError("x_so must be > 0")
        if self.J0_bare is not None and not np.isfinite(self.J0_bare):
            raise ValidationError("J0_bare must be real and finite")
        if self.gamma_tensor is None:
            object.__setattr__(self, "gamma_tensor", _frozen(np.zeros((3, 3))))
        else:
            object.__setattr__(self, "gamma_tensor", _frozen(np.asarray(self.gamma_tensor, float)))

    @classmethod
    def from_nanowire(cls, J0_bare, d, x_so, v_hat, B, g_star=2.0,
                      gamma_tensor_mode=GammaTensorMode.NONE):
        """Build parameters from the nanowire exchange map."""
        J, D, gamma = nanowire_exchange_map(J0_bare, d, x_so, v_hat, gamma_tensor_mode)
        return cls(J=J, D=D, B=B, g_star=g_star, gamma_tensor_mode=gamma_tensor_mode,
                   J0_bare=J0_bare, d=d, x_so=x_so, dm_axis=v_hat, gamma_tensor=gamma)


def nanowire_exchange_map(J0_bare, d, x_so, v_hat, gamma_tensor_mode=GammaTensorMode.DM_RESIDUAL):
    """Exchange parameters of a nanowire DQD with spin-orbit rotation.

    With ``zeta = 2 d / x_so``::

        J = J0 cos^2 zeta,  D = J0 sin(2 zeta) v,  Gamma = J0 sin^2 zeta (2 v v^T - I)

    Parameters
    ----------
    J0_bare : float
        Bare exchange (rad/s).
    d : float
        Interdot half distance (m).
    x_so : float
        Spin-orbit length (m).
    v_hat : array_like
        Unit spin-orbit axis.
    gamma_tensor_mode : GammaTensorMode
        ``none`` returns a zero anisotropy tensor.

    Returns
    -------
    J : float
    D : ndarray, shape (3,)
    Gamma : ndarray, shape (3, 3)
    """
    if not x_so > 0:
        raise ValidationError("x_so must be > 0")
    v = _unit(v_hat, "v_hat")
    zeta = 2.0 * d / x_so
    J = J0_bare * np.cos(zeta) ** 2
    D = J0_bare * np.sin(2.0 * zeta) * v
    if GammaTensorMode(gamma_tensor_mode) is GammaTensorMode.NONE:
        gamma = np.zeros((3, 3))
    else:
        gamma = J0_bare * np.sin(zeta) ** 2 * (2.0 * np.outer(v, v) - np.eye(3))
    return float(J), D, gamma


# ---------------------------------------------------------------------------
# rotated frame
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RotatedFrame:
    """Quantities after removing the DM term by opposite spin rotations."""

    J0_eff: float
    alpha: float
    n_hat: np.ndarray
    gamma_dm: np.ndarray
    exchange_residual: float
    B1: np.ndarray | None = None
    B2: np.ndarray | None = None
    B_avg: np.ndarray | None = None
    B_diff: np.ndarray | None = None
    delta: float | None = None
    k: float | None = None
    beta_y: float | None = None


def shekhtman_rotate(J: float, D) -> RotatedFrame:
    """Map ``J S1.S2 + D.(S1 x S2)`` onto an isotropic exchange.

    ``J0 = sgn(J) sqrt(J^2 + |D|^2)``, ``cos a = J/J0``, ``sin a = |D|/J0``. The
    spins are rotated about ``n = D/|D|`` by ``+a/2`` and ``-a/2`` (a relative
    rotation of ``a``), after which the coupling matrix is
    ``J0 I - Gamma_DM`` with ``Gamma_DM = (J0 - J) n n^T``. That identity is
    checked numerically and its relative residual stored.

    Raises
    ------
    DegenerateExchangeError
        If ``J = |D| = 0``.
    """
    D = _vec3(D, "D")
    dnorm = float(np.linalg.norm(D))
    J0 = float(np.hypot(J, dnorm))
    if J0 == 0.0:
        raise DegenerateExchangeError("J = |D| = 0: exchange frame undefined")
    # principal branch |alpha| <= pi/2; J0 keeps the sign of J (ferromagnetic J < 0)
    if J < 0:
        J0 = -J0
    alpha = float(np.arctan(dnorm / J)) if J != 0 else 0.5 * np.pi
    if dnorm > 0:
        n_hat = D / dnorm
        gamma_dm = (J0 - J) * np.outer(n_hat, n_hat)
    else:
        n_hat = _Z.copy()
        gamma_dm = np.zeros((3, 3))
    M = J * np.eye(3) + _dm_matrix(D)
    rotated = rodrigues(n_hat, 0.5 * alpha) @ M @ rodrigues(n_hat, -0.5 * alpha).T
    residual = float(np.abs(rotated + gamma_dm - J0 * np.eye(3)).max() / abs(J0))
    if residual > 1e-10:
        raise ArithmeticError(f"DM elimination residual {residual:.3e} exceeds 1e-10")
    return RotatedFrame(J0_eff=J0, alpha=alpha, n_hat=_frozen(n_hat),
                        gamma_dm=_frozen(gamma_dm), exchange_residual=residual)


def local_fields(B, n_hat, alpha: float):
    """Local fields seen by the two spins in the rotated frame.

    Returns
    -------
    B1, B2 : ndarray
        ``R(n, +alpha) B`` and ``R(n, -alpha) B``.
    B_avg, B_diff : ndarray
        ``(B1 + B2)/2`` and the half difference ``(B1 - B2)/2 = sin(alpha) n x B``.
    """
    B = _vec3(B, "B")
    n = _unit(n_hat, "n_hat")
    B1 = rodrigues(n, alpha) @ B
    B2 = rodrigues(n, -alpha) @ B
    return B1, B2, 0.5 * (B1 + B2), 0.5 * (B1 - B2)


def st_parameters(B1, B2, g_star: float, z_hat=_Z, y_eff=None):
    """Project the local Zeeman fields onto the S/T parametrization.

    Parameters
    ----------
    B1, B2 : array_like
        Local fields (T).
    g_star : float
        Effective g-factor.
    z_hat : array_like
        Quantization axis.
    y_eff : array_like, optional
        Transverse projection axis. Defaults to the half-difference field
        projected transverse to `z_hat` and normalized.

    Returns
    -------
    delta, k : float
        Angular frequencies (rad/s).
    beta_y : float
        Transverse inhomogeneity fraction, ``sqrt(2) |k| / sqrt(delta^2 + 2 k^2)``.
    """
    B1 = _vec3(B1, "B1")
    B2 = _vec3(B2, "B2")
    z = _unit(z_hat, "z_hat")
    b_avg = 0.5 * (B1 + B2)
    b_diff = 0.5 * (B1 - B2)
    if y_eff is None:
        t = b_diff - np.dot(b_diff, z) * z
        tn = np.linalg.norm(t)
        y = t / tn if tn > 0 else np.zeros(3)
    else:
        y = _unit(y_eff, "y_eff")
    scale = g_star * MU_B / HBAR
    delta = scale * float(np.dot(b_avg, z))
    k = scale * float(np.dot(b_diff, y)) / np.sqrt(2.0)
    dz = np.sqrt(delta**2 + 2.0 * k**2)
    beta_y = float(np.sqrt(2.0) * abs(k) / dz) if dz > 0 else 0.0
    return delta, k, beta_y


def minimal_st_parameters(delta_z: float, beta_y: float):
    """``delta = dz sqrt(1 - beta^2)`` and ``k = beta dz / sqrt(2)``."""
    if not 0.0 <= beta_y <= 1.0:
        raise ValidationError("beta_y must lie in [0, 1]")
    return delta_z * np.sqrt(1.0 - beta_y**2), beta_y * delta_z / np.sqrt(2.0)


def rotated_frame(params: SpinPairParams, z_hat=None) -> RotatedFrame:
    """Full frame for `params`: exchange rotation, local fields and ``(delta, k)``.

    The quantization axis defaults to the laboratory field direction.
    """
    fr = shekhtman_rotate(params.J, params.D)
    B1, B2, b_avg, b_diff = local_fields(params.B, fr.n_hat, fr.alpha)
    if z_hat is None:
        bn = np.linalg.norm(params.B)
        z_hat = params.B / bn if bn > 0 else _Z
    delta, k, beta_y = st_parameters(B1, B2, params.g_star, z_hat)
    return RotatedFrame(J0_eff=fr.J0_eff, alpha=fr.alpha, n_hat=fr.n_hat,
                        gamma_dm=fr.gamma_dm, exchange_residual=fr.exchange_residual,
                        B1=_frozen(B1), B2=_frozen(B2), B_avg=_frozen(b_avg),
                        B_diff=_frozen(b_diff), delta=delta, k=k, beta_y=beta_y)


# ---------------------------------------------------------------------------
# Hamiltonian and eigensystem
# ---------------------------------------------------------------------------


def build_st_hamiltonian(J0: float, delta: float, k: float) -> np.ndarray:
    """Minimal S/T Hamiltonian (rad/s), basis ``{T+, T0, T-, S0}``."""
    if not np.all(np.isfinite([J0, delta, k])):
        raise ValidationError("J0, delta, k must be finite")
    H = np.diag([J0 / 4 + delta, J0 / 4, J0 / 4 - delta, -3 * J0 / 4]).astype(complex)
    H[0, 3] = H[2, 3] = -1j * k
    H[3, 0] = H[3, 2] = 1j * k
    return H


# product basis {uu, ud, du, dd} <- S/T basis {T+, T0, T-, S0}
_S2 = 1.0 / np.sqrt(2.0)
U_ST_TO_PRODUCT = np.array(
    [[1, 0, 0, 0], [0, _S2, 0, _S2], [0, _S2, 0, -_S2], [0, 0, 1, 0]], dtype=complex
)
U_ST_TO_PRODUCT.setflags(write=False)

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_I2 = np.eye(2)


def inhomogeneous_st_hamiltonian(J0: float, delta_1: float, delta_2: float) -> np.ndarray:
    """S/T Hamiltonian of ``J0 S1.S2 + delta_1 S1z + delta_2 S2z``.

    For ``delta_1 = delta_2 = delta`` this is the minimal Hamiltonian with
    ``k = 0``; a mismatch couples T0 and S0 through ``(delta_1 - delta_2)/2``.
    """
    s = [0.5 * _SX, 0.5 * _SY, 0.5 * _SZ]
    H = J0 * sum(np.kron(si, si) for si in s)
    H = H + delta_1 * np.kron(s[2], _I2) + delta_2 * np.kron(_I2, s[2])
    U = U_ST_TO_PRODUCT
    return U.conj().T @ H @ U


@dataclass(frozen=True)
class EigenSystem:
    """Eigenpairs of the minimal S/T Hamiltonian.

    ``lambdas[0] = J0/4`` belongs to the decoupled T0 state; ``lambdas[1:]``
    are the three mixed levels in ascending order. ``vectors[:, i]`` is the
    normalized eigenvector of ``lambdas[i]``.
    """

    J0: float
    delta: float
    k: float
    lambdas: np.ndarray
    vectors: np.ndarray
    A_coeffs: np.ndarray
    B_coeffs: np.ndarray
    norms: np.ndarray
    p: float
    q: float
    dense_fallback: bool

    @property
    def hamiltonian(self) -> np.ndarray:
        return build_st_hamiltonian(self.J0, self.delta, self.k)


def eigensystem_cubic(J0: float, delta: float, k: float) -> EigenSystem:
    """Closed-form eigensystem via the trigonometric cubic solution.

    The mixed levels are ``-J0/12 + 2 sqrt(-p/3) cos(arccos(3q/(2p) sqrt(-3/p))/3 - 2 pi j/3)``
    with ``p = -(J0^2/3 + delta^2 + 2k^2)`` and
    ``q = 2J0^3/27 - 2 J0 delta^2/3 + 2 J0 k^2/3``. Eigenvectors are
    ``(A, 0, B, 1)/N`` with ``A = ik/(J0/4 + delta - lam)``,
    ``B = ik/(J0/4 - delta - lam)``.

    When a denominator is within ``1e-9 * scale`` of zero the coefficients
    are ill-defined, and near-degenerate roots lose accuracy in ``arccos``;
    in either case (detected by the eigen-residual) the 3x3 block is
    diagonalized densely instead (``dense_fallback = True``).
    """
    H = build_st_hamiltonian(J0, delta, k)
    scale = max(abs(J0), abs(delta), abs(k))
    # work in units of `scale` so p and q neither under- nor overflow
    js, ds, ks = (x / scale for x in (J0, delta, k)) if scale > 0 else (0.0, 0.0, 0.0)
    ps = -(js**2 / 3 + ds**2 + 2 * ks**2)
    qs = 2 * js**3 / 27 - 2 * js * ds**2 / 3 + 2 * js * ks**2 / 3
    p, q = ps * scale**2, qs * scale**3

    lam = None
    if scale > 0 and ps < 0:
        arg = np.clip(3 * qs / (2 * ps) * np.sqrt(-3 / ps), -1.0, 1.0)
        theta = np.arccos(arg) / 3
        j = np.arange(3)
        lam = scale * np.sort(-js / 12 + 2 * np.sqrt(-ps / 3) * np.cos(theta - 2 * np.pi * j / 3))
        den_a = js / 4 + ds - lam / scale
        den_b = js / 4 - ds - lam / scale
        if min(np.abs(den_a).min(), np.abs(den_b).min()) < _DEGENERATE_TOL:
            lam = None

    vectors = np.zeros((4, 4), dtype=complex)
    vectors[1, 0] = 1.0
    if lam is not None:
        A = 1j * ks / den_a
        B = 1j * ks / den_b
        N = np.sqrt(1 + np.abs(A) ** 2 + np.abs(B) ** 2)
        vectors[0, 1:] = A / N
        vectors[2, 1:] = B / N
        vectors[3, 1:] = 1 / N
        # arccos loses ~sqrt(eps) near degenerate roots; verify before trusting
        resid = np.abs(H @ vectors - vectors * np.concatenate([[J0 / 4], lam])).max()
        gram = np.abs(vectors.conj().T @ vectors - np.eye(4)).max()
        if resid > _RESIDUAL_TOL * scale or gram > _RESIDUAL_TOL:
            lam = None
            vectors[:, 1:] = 0.0
        else:
            fallback = False
    if lam is None:
        idx = [0, 2, 3]
        w, v = eigh(H[np.ix_(idx, idx)])
        lam = w
        vectors[np.ix_(idx, [1, 2, 3])] = v
        with np.errstate(divide="ignore", invalid="ignore"):
            A = np.where(np.abs(v[2]) > 0, v[0] / v[2], np.nan)
            B = np.where(np.abs(v[2]) > 0, v[1] / v[2], np.nan)
            N = np.where(np.abs(v[2]) > 0, 1 / np.abs(v[2]), np.nan)
        fallback = True

    return EigenSystem(
        J0=float(J0), delta=float(delta), k=float(k),
        lambdas=_frozen(np.concatenate([[J0 / 4], lam])), vectors=_frozen(vectors),
        A_coeffs=_frozen(A), B_coeffs=_frozen(B), norms=_frozen(N),
        p=float(p), q=float(q), dense_fallback=fallback,
    )


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairState:
    """Pair density matrix in both bases."""

    rho_st: np.ndarray
    rho_prod: np.ndarray
    temperature: float


def _boltzmann(lambdas, T):
    if not T > 0:
        raise DomainError(f"temperature must be > 0, got {T!r}")
    lam = np.asarray(lambdas, dtype=float)
    if np.isinf(T):
        return np.ones_like(lam)
    return np.exp(-HBAR * (lam - lam.min()) / (KB * T))


def thermal_state(es: EigenSystem, T: float) -> PairState:
    """Gibbs state of the minimal Hamiltonian at temperature `T` (K).

    Matrix elements follow the closed-form sums over the cubic branches,
    e.g. ``rho_11 = sum_j w_j |A_j|^2 / N_j^2 / Z``; weights are shifted by
    the ground energy so millikelvin temperatures do not underflow.
    ``T = inf`` gives ``I/4``.
    """
    w = _boltzmann(es.lambdas, T)
    Z = w.sum()
    if es.dense_fallback:
        V = es.vectors
        rho = (V * (w / Z)) @ V.conj().T
    else:
        wj = w[1:] / Z
        A, B, N2 = es.A_coeffs, es.B_coeffs, es.norms**2
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0] = np.sum(wj * np.abs(A) ** 2 / N2)
        rho[1, 1] = w[0] / Z
        rho[2, 2] = np.sum(wj * np.abs(B) ** 2 / N2)
        rho[3, 3] = np.sum(wj / N2)
        rho[0, 2] = np.sum(wj * A * np.conj(B) / N2)
        rho[0, 3] = np.sum(wj * A / N2)
        rho[2, 3] = np.sum(wj * B / N2)
        rho[2, 0] = np.conj(rho[0, 2])
        rho[3, 0] = np.conj(rho[0, 3])
        rho[3, 2] = np.conj(rho[2, 3])
    rho = 0.5 * (rho + rho.conj().T)
    return PairState(rho_st=_frozen(rho), rho_prod=_frozen(to_product_basis(rho)),
                     temperature=float(T))


def thermal_state_dense(H_st, T: float) -> PairState:
    """Gibbs state of an arbitrary 4x4 S/T-basis Hamiltonian (rad/s)."""
    w_e, V = eigh(np.asarray(H_st, dtype=complex))
    w = _boltzmann(w_e, T)
    rho = (V * (w / w.sum())) @ V.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return PairState(rho_st=_frozen(rho), rho_prod=_frozen(to_product_basis(rho)),
                     temperature=float(T))


def to_product_basis(rho_st) -> np.ndarray:
    """``U rho U^dagger`` with the fixed S/T -> product unitary."""
    U = U_ST_TO_PRODUCT
    return U @ np.asarray(rho_st, dtype=complex) @ U.conj().T


def reduce_dot(rho_prod, which: str = "A") -> np.ndarray:
    """Partial trace of a product-basis pair state onto dot ``A`` or ``B``."""
    r = np.asarray(rho_prod, dtype=complex).reshape(2, 2, 2, 2)
    if which == "A":
        return np.einsum("ijkj->ik", r)
    if which == "B":
        return np.einsum("jijk->ik", r)
    raise ValidationError(f"which must be 'A' or 'B', got {which!r}")


def excitation_probability(rho_dot, w_hat=_Z) -> float:
    """``Tr[(I - sigma.w)/2 rho]``: population of the spin state anti-aligned with `w_hat`."""
    w = _unit(w_hat, "w_hat")
    rho = np.asarray(rho_dot, dtype=complex)
    proj = 0.5 * (_I2 - (w[0] * _SX + w[1] * _SY + w[2] * _SZ))
    p = float(np.real(np.trace(proj @ rho)))
    if -_UNIT_TOL <= p < 0.0:
        p = 0.0
    elif 1.0 < p <= 1.0 + _UNIT_TOL:
        p = 1.0
    elif not 0.0 <= p <= 1.0:
        raise ValidationError(f"excitation probability {p!r} outside [0, 1]: invalid state")
    return p


@dataclass(frozen=True)
class ReservoirStats:
    """Prepared excited/ground populations of the cavity-coupled transition.

    For ``two_dot`` the pair (r1, r2) is not normalized.
    """

    r1: float
    r2: float
    variant: Variant
    T_set: float | None = None
    omega_qd: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        object.__setattr__(self, "r1", float(self.r1))
        object.__setattr__(self, "r2", float(self.r2))
        for name in ("r1", "r2"):
            v = getattr(self, name)
            if not -_UNIT_TOL <= v <= 1.0 + _UNIT_TOL:
                raise ValidationError(f"{name} = {v!r} outside [0, 1]")
        if self.variant is Variant.ONE_DOT and abs(self.r1 + self.r2 - 1.0) > _UNIT_TOL:
            raise ValidationError("one_dot statistics must satisfy r1 + r2 = 1")

    @classmethod
    def thermal(cls, omega_qd: float, T_set: float, variant=Variant.ONE_DOT):
        """Two-level detailed-balance statistics at `T_set`."""
        x = HBAR * omega_qd / (KB * T_set) if T_set > 0 else np.inf
        r1 = 1.0 / (np.exp(x) + 1.0) if x < 700 else 0.0
        return cls(r1=r1, r2=1.0 - r1, variant=variant, T_set=T_set, omega_qd=omega_qd)


def reservoir_stats(ps: PairState, variant=Variant.ONE_DOT, w1=None,
                    omega_qd: float | None = None) -> ReservoirStats:
    """Reservoir statistics of a pair state.

    one_dot: ``r1 = rho_33 + (rho_22 + rho_44)/2`` (dot A excited along z),
    or the projector expectation along `w1`. two_dot:
    ``r1 = rho_33 + rho_22``, ``r2 = rho_11 + rho_22`` (S/T indices).
    """
    variant = Variant(variant)
    d = np.real(np.diag(ps.rho_st))
    if variant is Variant.ONE_DOT:
        if w1 is None:
            r1 = d[2] + 0.5 * (d[1] + d[3])
        else:
            r1 = excitation_probability(reduce_dot(ps.rho_prod, "A"), w1)
        r1 = min(max(r1, 0.0), 1.0)
        return ReservoirStats(r1=r1, r2=1.0 - r1, variant=variant,
                              T_set=ps.temperature, omega_qd=omega_qd)
    r1 = d[2] + d[1]
    r2 = d[0] + d[1]
    if r1 + r2 > 1.0 + 1e-12:
        raise ArithmeticError("two_dot statistics exceed unit total population")
    return ReservoirStats(r1=float(r1), r2=float(r2), variant=variant,
                          T_set=ps.temperature, omega_qd=omega_qd)


def setpoint_pair_state(omega_qd: float, lambda_exchange: float, T_set: float,
                        beta_y: float = 0.0, delta_12: float = 0.0) -> PairState:
    """Thermal reservoir pair for a dot transition `omega_qd` and flip-flop `lambda_exchange`.

    Uses ``J0 = 2 lambda`` and Zeeman term ``-(omega_qd + lambda)`` so that,
    after absorbing the ``J0/2`` zz shift, each dot's bare transition sits at
    `omega_qd` with ``|d>`` the upper level. A nonzero `delta_12` splits the
    dot frequencies to ``omega_qd +/- delta_12/2`` (dot A higher for
    ``delta_12 > 0``) and the state is built by dense diagonalization.
    """
    J0 = 2.0 * lambda_exchange
    if delta_12 != 0.0:
        if beta_y != 0.0:
            raise ValidationError("delta_12 and beta_y cannot be combined")
        d1 = -(omega_qd + 0.5 * delta_12 + lambda_exchange)
        d2 = -(omega_qd - 0.5 * delta_12 + lambda_exchange)
        return thermal_state_dense(inhomogeneous_st_hamiltonian(J0, d1, d2), T_set)
    dz = -(omega_qd + lambda_exchange)
    delta, k = minimal_st_parameters(dz, beta_y)
    return thermal_state(eigensystem_cubic(J0, delta, k), T_set)


def mixing_angle(epsilon: float, t_c: float, g0: float):
    """Charge-qubit mixing angle and projected couplings.

    Returns
    -------
    theta : float
        ``atan2(2 t_c, epsilon)``.
    omega_qd : float
        ``sqrt(epsilon^2 + 4 t_c^2)`` (rad/s).
    g_perp, g_par : float
        ``g0 sin(theta)``, ``g0 cos(theta)``.
    """
    if epsilon == 0 and t_c == 0:
        raise DomainError("epsilon and t_c cannot both vanish")
    theta = float(np.arctan2(2.0 * t_c, epsilon))
    return theta, float(np.hypot(epsilon, 2.0 * t_c)), g0 * np.sin(theta), g0 * np.cos(theta)
