import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import eigh, expm

from dqdcool.constants import HBAR, KB, MU_B, TWO_PI
from dqdcool.errors import DegenerateExchangeError, DomainError, ValidationError
from dqdcool.pairstate import (
    U_ST_TO_PRODUCT, EigenSystem, ReservoirStats, SpinPairParams, Variant, build_st_hamiltonian,
    eigensystem_cubic, excitation_probability, local_fields, minimal_st_parameters, mixing_angle,
    nanowire_exchange_map, reduce_dot, reservoir_stats, rodrigues, rotated_frame,
    setpoint_pair_state, shekhtman_rotate, st_parameters, thermal_state, thermal_state_dense,
    to_product_basis)

Z = np.array([0.0, 0.0, 1.0])
X = np.array([1.0, 0.0, 0.0])
finite = st.floats(-1e3, 1e3, allow_nan=False)


def _pure(i):
    rho = np.zeros((4, 4), dtype=complex)
    rho[i, i] = 1.0
    return rho


# --- nanowire map ---------------------------------------------------------

def test_nanowire_zero_rotation():
    J, D, G = nanowire_exchange_map(3.0, 0.0, 1e-7, Z)
    assert J == 3.0 and np.all(D == 0) and np.all(G == 0)


def test_nanowire_quarter_rotation():
    x_so = 1e-7
    J, D, _ = nanowire_exchange_map(2.0, np.pi / 8 * x_so, x_so, Z)
    assert J == pytest.approx(1.0, rel=1e-12)
    assert np.linalg.norm(D) == pytest.approx(2.0, rel=1e-12)


def test_nanowire_half_rotation_gamma_dominant():
    x_so = 1e-7
    J, D, G = nanowire_exchange_map(2.0, np.pi / 4 * x_so, x_so, Z)
    assert abs(J) < 1e-12 and np.linalg.norm(D) < 1e-12
    assert np.abs(G).max() == pytest.approx(2.0)


def test_nanowire_rejects_non_unit_axis():
    with pytest.raises(ValidationError):
        nanowire_exchange_map(1.0, 1e-8, 1e-7, [0, 0, 2.0])


def test_from_nanowire_records_inputs():
    p = SpinPairParams.from_nanowire(1.0, 1e-8, 1e-7, Z, B=[0, 0, 0.1])
    assert p.d == 1e-8 and p.x_so == 1e-7 and np.allclose(p.dm_axis, Z)


# --- Shekhtman rotation ---------------------------------------------------

def test_shekhtman_no_dm():
    fr = shekhtman_rotate(2.0, [0, 0, 0])
    assert fr.alpha == 0.0 and fr.J0_eff == 2.0


def test_shekhtman_equal_magnitudes():
    fr = shekhtman_rotate(1.0, [0, 1.0, 0])
    assert fr.alpha == pytest.approx(np.pi / 4)
    assert fr.J0_eff == pytest.approx(np.sqrt(2.0))


def test_shekhtman_degenerate():
    with pytest.raises(DegenerateExchangeError):
        shekhtman_rotate(0.0, [0, 0, 0])


@settings(max_examples=200, deadline=None)
@given(finite, finite, finite, finite)
def test_shekhtman_removes_dm_coupling(J, dx, dy, dz):
    D = np.array([dx, dy, dz])
    if np.hypot(J, np.linalg.norm(D)) < 1e-6:
        return
    fr = shekhtman_rotate(J, D)
    M = J * np.eye(3) + np.array([[0, dz, -dy], [-dz, 0, dx], [dy, -dx, 0]])
    R1 = rodrigues(fr.n_hat, 0.5 * fr.alpha)
    R2 = rodrigues(fr.n_hat, -0.5 * fr.alpha)
    rotated = R1 @ M @ R2.T + fr.gamma_dm
    assert np.abs(rotated - fr.J0_eff * np.eye(3)).max() <= 1e-10 * abs(fr.J0_eff)


# --- local fields and S/T projection --------------------------------------

def test_local_fields_identity_rotation():
    B1, B2, _, _ = local_fields([0.1, 0.2, 0.3], Z, 0.0)
    assert np.allclose(B1, [0.1, 0.2, 0.3]) and np.allclose(B2, B1)


def test_local_fields_parallel_axis():
    B1, B2, _, _ = local_fields([0, 0, 0.5], Z, 0.7)
    assert np.allclose(B1, [0, 0, 0.5]) and np.allclose(B2, [0, 0, 0.5])


def test_local_fields_perpendicular_axis():
    alpha = 0.3
    _, _, _, Bd = local_fields([0, 0, 0.5], X, alpha)
    assert np.linalg.norm(Bd) == pytest.approx(0.5 * np.sin(alpha), rel=1e-12)


def test_st_parameters_homogeneous():
    B = np.array([0, 0, 0.2])
    delta, k, beta = st_parameters(B, B, 2.0)
    assert k == 0.0 and beta == 0.0
    assert delta == pytest.approx(2.0 * MU_B * 0.2 / HBAR, rel=1e-12)


def test_st_parameters_quarter_turn():
    B = 0.2
    B1, B2, _, _ = local_fields([0, 0, B], X, np.pi / 4)
    delta, k, _ = st_parameters(B1, B2, 2.0)
    scale = 2.0 * MU_B * B / HBAR
    assert delta == pytest.approx(scale / np.sqrt(2), rel=1e-12)
    assert abs(k) == pytest.approx(scale / 2, rel=1e-12)


def test_minimal_parameters_fully_transverse():
    delta, k = minimal_st_parameters(3.0, 1.0)
    assert delta == 0.0 and k == pytest.approx(3.0 / np.sqrt(2))


def test_minimal_parameters_reject_out_of_range():
    with pytest.raises(ValidationError):
        minimal_st_parameters(1.0, 1.5)


def test_rotated_frame_consistent_beta():
    p = SpinPairParams(J=TWO_PI * 1e9, D=[TWO_PI * 3e8, 0, 0], B=[0, 0, 0.1])
    fr = rotated_frame(p)
    dz = np.hypot(fr.delta, np.sqrt(2) * fr.k)
    assert fr.beta_y == pytest.approx(np.sqrt(2) * abs(fr.k) / dz)


# --- Hamiltonian and eigensystem ------------------------------------------

def test_hamiltonian_decoupled():
    H = build_st_hamiltonian(1.0, 0.0, 0.0)
    assert np.allclose(H, np.diag([0.25, 0.25, 0.25, -0.75]))


def test_hamiltonian_hermitian():
    H = build_st_hamiltonian(1.3, -0.4, 0.9)
    assert np.allclose(H, H.conj().T)


def test_cubic_diagonal_case():
    es = eigensystem_cubic(1.0, 0.0, 0.0)
    assert np.allclose(np.sort(es.lambdas), [-0.75, 0.25, 0.25, 0.25])


def test_cubic_zeeman_split_triplet():
    es = eigensystem_cubic(1.0, 0.2, 0.0)
    assert np.allclose(np.sort(es.lambdas), [-0.75, 0.05, 0.25, 0.45])


def test_cubic_reference_point():
    es = eigensystem_cubic(1.0, 0.3, 0.2)
    H = build_st_hamiltonian(1.0, 0.3, 0.2)
    assert not es.dense_fallback
    assert np.abs(np.sort(es.lambdas) - eigh(H, eigvals_only=True)).max() < 1e-9
    for lam, v in zip(es.lambdas, es.vectors.T):
        assert np.linalg.norm(H @ v - lam * v) < 1e-9
        assert np.linalg.norm(v) == pytest.approx(1.0)


def test_cubic_degenerate_branch_falls_back():
    es = eigensystem_cubic(1.0, 0.0, 0.0)
    assert isinstance(es, EigenSystem) and es.dense_fallback


@settings(max_examples=300, deadline=None)
@given(*[st.floats(-10, 10, allow_subnormal=False)] * 3)
def test_cubic_residuals_and_trace(J0, delta, k):
    es = eigensystem_cubic(J0, delta, k)
    H = es.hamiltonian
    scale = max(abs(J0), abs(delta), abs(k), 1e-300)
    for lam, v in zip(es.lambdas, es.vectors.T):
        assert np.linalg.norm(H @ v - lam * v) <= 1e-10 * scale + 1e-300
    assert abs(es.lambdas.sum() - np.trace(H).real) <= 1e-10 * scale + 1e-300


# --- thermal state --------------------------------------------------------

def test_thermal_infinite_temperature():
    ps = thermal_state(eigensystem_cubic(TWO_PI * 1e9, TWO_PI * 2e8, TWO_PI * 1e8), np.inf)
    assert np.allclose(ps.rho_st, np.eye(4) / 4)


def test_thermal_zero_temperature_singlet():
    ps = thermal_state(eigensystem_cubic(TWO_PI * 1e10, 0.0, 0.0), 1e-3)
    assert np.allclose(ps.rho_st, _pure(3), atol=1e-12)


def test_thermal_rejects_nonpositive_temperature():
    with pytest.raises(DomainError):
        thermal_state(eigensystem_cubic(1.0, 0.3, 0.2), 0.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.1, 20), st.floats(-10, 10), st.floats(-10, 10), st.floats(0.02, 2.0))
def test_thermal_matches_matrix_exponential(J0_ghz, d_ghz, k_ghz, T):
    J0, delta, k = (TWO_PI * 1e9 * x for x in (J0_ghz, d_ghz, k_ghz))
    ps = thermal_state(eigensystem_cubic(J0, delta, k), T)
    H = build_st_hamiltonian(J0, delta, k)
    H = H - eigh(H, eigvals_only=True)[0] * np.eye(4)
    ref = expm(-HBAR * H / (KB * T))
    ref /= np.trace(ref)
    assert np.abs(ps.rho_st - ref).max() <= 1e-10


def test_thermal_dense_agrees():
    es = eigensystem_cubic(TWO_PI * 2e9, TWO_PI * 1e9, TWO_PI * 4e8)
    a = thermal_state(es, 0.1).rho_st
    b = thermal_state_dense(es.hamiltonian, 0.1).rho_st
    assert np.abs(a - b).max() < 1e-12


# --- product basis and marginals ------------------------------------------

def test_unitary_exact():
    U = U_ST_TO_PRODUCT
    assert np.abs(U @ U.conj().T - np.eye(4)).max() <= 1e-15


def test_identity_invariant():
    assert np.allclose(to_product_basis(np.eye(4) / 4), np.eye(4) / 4)


def test_singlet_in_product_basis():
    rho = to_product_basis(_pure(3))
    assert np.allclose(rho[1:3, 1:3], [[0.5, -0.5], [-0.5, 0.5]])
    assert np.isclose(np.abs(rho).sum(), 2.0)


def test_singlet_marginal_maximally_mixed():
    rho = to_product_basis(_pure(3))
    assert np.allclose(reduce_dot(rho, "A"), np.eye(2) / 2)
    assert np.allclose(reduce_dot(np.eye(4) / 4, "B"), np.eye(2) / 2)


def test_reduce_dot_rejects_label():
    with pytest.raises(ValidationError):
        reduce_dot(np.eye(4) / 4, "C")


def test_marginal_diagonal_formula_and_symmetry():
    ps = thermal_state(eigensystem_cubic(TWO_PI * 2e9, TWO_PI * 1e9, TWO_PI * 4e8), 0.1)
    r = ps.rho_st
    rA = reduce_dot(ps.rho_prod, "A")
    rB = reduce_dot(ps.rho_prod, "B")
    mix = 0.5 * (r[1, 1] + r[3, 3]).real
    assert rA[0, 0].real == pytest.approx(r[0, 0].real + mix, abs=1e-14)
    assert rA[1, 1].real == pytest.approx(r[2, 2].real + mix, abs=1e-14)
    assert np.allclose(np.diag(rA), np.diag(rB), atol=1e-15)
    assert np.allclose(rA[0, 1], -rB[0, 1], atol=1e-15)


def test_excitation_probability_cases():
    assert excitation_probability(np.eye(2) / 2, [0.6, 0.0, 0.8]) == pytest.approx(0.5)
    assert excitation_probability(np.diag([0.0, 1.0]), Z) == 1.0
    rho = np.array([[0.7, 0.1j], [-0.1j, 0.3]])
    assert excitation_probability(rho, Z) == pytest.approx(0.3)
    with pytest.raises(ValidationError):
        excitation_probability(rho, [0, 0, 2])


# --- reservoir statistics -------------------------------------------------

def test_stats_infinite_temperature():
    ps = thermal_state(eigensystem_cubic(1.0, 0.3, 0.2), np.inf)
    s = reservoir_stats(ps, Variant.ONE_DOT)
    assert s.r1 == pytest.approx(0.5) and s.r2 == pytest.approx(0.5)


def test_stats_pure_singlet():
    ps = thermal_state(eigensystem_cubic(TWO_PI * 1e10, 0.0, 0.0), 1e-3)
    one = reservoir_stats(ps, Variant.ONE_DOT)
    two = reservoir_stats(ps, Variant.TWO_DOT)
    assert one.r1 == pytest.approx(0.5) and one.r2 == pytest.approx(0.5)
    assert two.r1 == pytest.approx(0.0, abs=1e-12) and two.r2 == pytest.approx(0.0, abs=1e-12)


def test_stats_baseline_setpoint_refrigerates():
    ps = setpoint_pair_state(TWO_PI * 5e9, TWO_PI * 5e9, 0.05)
    for v in Variant:
        s = reservoir_stats(ps, v)
        assert s.r2 > s.r1
        assert 0.0 <= s.r1 <= 1.0 and 0.0 <= s.r2 <= 1.0
    one = reservoir_stats(ps, Variant.ONE_DOT)
    assert one.r1 + one.r2 == pytest.approx(1.0, abs=1e-12)


def test_stats_projector_axis_matches_default():
    ps = setpoint_pair_state(TWO_PI * 5e9, TWO_PI * 5e9, 0.05)
    a = reservoir_stats(ps, Variant.ONE_DOT)
    b = reservoir_stats(ps, Variant.ONE_DOT, w1=Z)
    assert a.r1 == pytest.approx(b.r1, abs=1e-12)


def test_stats_validation():
    with pytest.raises(ValidationError):
        ReservoirStats(0.3, 0.3, Variant.ONE_DOT)
    with pytest.raises(ValidationError):
        ReservoirStats(-0.1, 0.3, Variant.TWO_DOT)


def test_setpoint_mismatch_symmetric_in_sign():
    a = setpoint_pair_state(TWO_PI * 5e9, TWO_PI * 5e9, 0.05, delta_12=TWO_PI * 1e6)
    b = setpoint_pair_state(TWO_PI * 5e9, TWO_PI * 5e9, 0.05, delta_12=-TWO_PI * 1e6)
    sa, sb = (reservoir_stats(s, Variant.TWO_DOT) for s in (a, b))
    assert sa.r1 == pytest.approx(sb.r1, rel=1e-9) and sa.r2 == pytest.approx(sb.r2, rel=1e-9)


# --- charge mixing --------------------------------------------------------

def test_mixing_angle_cases():
    th, w, gp, gz = mixing_angle(0.0, 1.0, 2.0)
    assert th == pytest.approx(np.pi / 2) and gp == pytest.approx(2.0) and abs(gz) < 1e-15
    th, _, gp, _ = mixing_angle(1.0, 0.0, 2.0)
    assert th == 0.0 and gp == 0.0
    th, w, gp, gz = mixing_angle(2.0, 1.0, 2.0)
    assert th == pytest.approx(np.pi / 4)
    assert gp == pytest.approx(np.sqrt(2)) and gz == pytest.approx(np.sqrt(2))
    assert w == pytest.approx(np.sqrt(8))
    with pytest.raises(DomainError):
        mixing_angle(0.0, 0.0, 1.0)
