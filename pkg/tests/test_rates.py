import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from dqdcool.constants import HBAR, KB, TWO_PI
from dqdcool.errors import DomainError, ValidationError
from dqdcool.rates import (CavityParams, EmitterParams, ResetParams, bose_occupation,
                           bright_channel, collision_strength, exchange_rate,
                           filtered_photon_number, lorentzian_filter, per_emitter_rate,
                           phonon_rates, thermal_tls_population, voigt_overlap,
                           voigt_rate_factor)

W = TWO_PI * 5e9


def test_bose_occupation_reference_values():
    assert bose_occupation(W, 1.0) == pytest.approx(3.69, abs=0.02)
    assert bose_occupation(W, 10.0) == pytest.approx(41.2, abs=0.5)
    assert bose_occupation(W, 1e-4) == 0.0


def test_bose_occupation_domain():
    with pytest.raises(DomainError):
        bose_occupation(W, 0.0)
    with pytest.raises(DomainError):
        bose_occupation(-W, 1.0)


def test_bose_occupation_vectorized():
    n = bose_occupation(W, np.array([0.5, 1.0, 2.0]))
    assert n.shape == (3,) and np.all(np.diff(n) > 0)


def test_tls_population_limits():
    assert thermal_tls_population(W, 1e6) == pytest.approx(0.5, abs=1e-5)
    assert thermal_tls_population(W, 1e-4) == 0.0
    assert thermal_tls_population(W, 1.0) == pytest.approx(0.440, abs=1e-3)


def test_phonon_rate_cases():
    assert phonon_rates(2.0, W, 1e-4) == (0.0, 2.0, 2.0)
    T1 = HBAR * W / (KB * np.log(2.0))  # n_B = 1
    up, down, g1 = phonon_rates(2.0, W, T1)
    assert (up, down, g1) == pytest.approx((2.0, 4.0, 6.0))
    up, down, _ = phonon_rates(1.0, W, 1.0)
    assert up / down == pytest.approx(np.exp(-0.2399), rel=1e-3)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e3, 1e9), st.floats(TWO_PI * 1e8, TWO_PI * 2e10), st.floats(0.01, 20.0))
def test_detailed_balance(g0, w, T):
    up, down, _ = phonon_rates(g0, w, T)
    assert up / down == pytest.approx(np.exp(-HBAR * w / (KB * T)), rel=1e-12)


def test_exchange_rate_reference_value():
    G = exchange_rate(TWO_PI * 0.5e6, TWO_PI * 1e4, TWO_PI * 0.305e6, 0.0)
    assert G == pytest.approx(2.0e7, rel=0.01)


def test_exchange_rate_half_width_and_tail():
    g, k, gp = TWO_PI * 0.5e6, TWO_PI * 1e4, TWO_PI * 0.3e6
    G0 = exchange_rate(g, k, gp, 0.0)
    assert exchange_rate(g, k, gp, 0.5 * (k + gp)) == pytest.approx(G0 / 2, rel=1e-12)
    assert exchange_rate(g, k, gp, 1e30) < 1e-20 * G0


def test_exchange_rate_singular_linewidth():
    with pytest.raises(DomainError):
        exchange_rate(1.0, 0.0, 0.0, 0.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e3, 1e7), st.floats(1e3, 1e7), st.floats(0, 1e7), st.floats(0, 1e7))
def test_exchange_rate_even_and_monotone(g, w, d1, d2):
    a = exchange_rate(g, w, 0.0, d1)
    assert a == exchange_rate(g, w, 0.0, -d1)
    lo, hi = sorted((d1, d2))
    assert exchange_rate(g, w, 0.0, hi) <= exchange_rate(g, w, 0.0, lo)


def test_filtered_photon_number_cases():
    assert filtered_photon_number(3.0, 0.0, 1.0) == 3.0
    assert filtered_photon_number(3.0, 2.0, 2.0) == pytest.approx(1.5)
    assert filtered_photon_number(10.0, 3.0, 1.0) == pytest.approx(1.0)
    with pytest.raises(ValidationError):
        filtered_photon_number(-1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        lorentzian_filter(0.0, 0.0)


def test_collision_strength_baseline():
    cp = collision_strength(TWO_PI * 0.5e6, 50e-9, 5e6)
    assert cp.phi == pytest.approx(0.157, abs=1e-3)
    assert cp.pump_rate == pytest.approx(1.23e5, rel=0.01)
    assert collision_strength(TWO_PI * 0.5e6, 50e-9, 0.0).pump_rate == 0.0


def test_collision_strength_warns_and_validates():
    with pytest.warns(RuntimeWarning):
        collision_strength(TWO_PI * 2e6, 50e-9, 1e6)
    with pytest.raises(ValidationError):
        collision_strength(1.0, 0.0, 1.0)


def test_bright_channel_factor_two():
    g, k, gp = TWO_PI * 0.5e6, TWO_PI * 1e4, TWO_PI * 0.3e6
    _, _, GB = bright_channel(g, g, k, gp, gp, 0.0, 0.0, 0.0)
    assert GB == pytest.approx(2.0 * exchange_rate(g, k, gp, 0.0), rel=1e-14)


def test_bright_channel_dark_coupling():
    gB, _, GB = bright_channel(1e5, -1e5, 1e3, 1e5, 1e5, 0.0, 0.0)
    assert gB == 0.0 and GB == 0.0


def test_bright_channel_mismatch_broadening():
    g, k, gp = TWO_PI * 0.5e6, TWO_PI * 1e4, TWO_PI * 0.3e6
    _, _, G0 = bright_channel(g, g, k, gp, gp, 0.0, 0.0, 0.0)
    d12 = k + gp
    _, _, G1 = bright_channel(g, g, k, gp, gp, 0.5 * d12, -0.5 * d12, d12)
    # at Delta_B = 0 the rate scales as 1/G, and G doubles
    assert G1 == pytest.approx(0.5 * G0, rel=1e-12)


def test_per_emitter_rate_consistency():
    g, k, gp = TWO_PI * 0.5e6, TWO_PI * 1e4, TWO_PI * 0.3e6
    assert per_emitter_rate(g, k, gp, 0.0) == pytest.approx(exchange_rate(g, k, gp, 0.0),
                                                              rel=1e-12)
    half = 0.5 * (k + gp)
    assert per_emitter_rate(g, k, gp, half) == pytest.approx(
        0.5 * per_emitter_rate(g, k, gp, 0.0), rel=1e-12)
    for D in (-3e6, 2e5, 7e6):
        assert per_emitter_rate(g, k, gp, D) == pytest.approx(exchange_rate(g, k, gp, D),
                                                                rel=1e-12)


def test_voigt_limits():
    assert voigt_overlap(0.0, 2.0, 0.0) == pytest.approx(1 / (np.pi * 2.0))
    assert voigt_overlap(0.0, 1e-12, 3.0) == pytest.approx(1 / (3.0 * np.sqrt(2 * np.pi)),
                                                           rel=1e-9)
    with pytest.raises(DomainError):
        voigt_overlap(0.0, 0.0, 0.0)


def test_voigt_convolution_oracle():
    def integrand(x):
        lor = (1 / np.pi) / ((1.0 - x) ** 2 + 1.0)
        return lor * np.exp(-0.5 * x * x) / np.sqrt(2 * np.pi)

    ref, _ = quad(integrand, -np.inf, np.inf, epsabs=1e-13, epsrel=1e-12)
    assert voigt_overlap(1.0, 1.0, 1.0) == pytest.approx(ref, rel=1e-6)


def test_voigt_normalized():
    total, _ = quad(lambda x: voigt_overlap(x, 0.7, 1.3), -np.inf, np.inf, limit=200)
    assert total == pytest.approx(1.0, abs=1e-4)


def test_voigt_rate_factor_lorentzian_limit():
    assert voigt_rate_factor(0.4, 1.0, 1e-9) == pytest.approx(1.0, rel=1e-6)


def test_parameter_validation():
    with pytest.raises(ValidationError):
        CavityParams(W, -1.0, 1.0)
    with pytest.raises(ValidationError):
        CavityParams(W, 1.0, 0.0)
    with pytest.raises(ValidationError):
        EmitterParams(W, g=1.0, gamma_1=1.0, gamma_phi=1.0, p_th=0.7)
    with pytest.raises(ValidationError):
        ResetParams(1.0, 0.0, 1.5)
    em = EmitterParams(W, g=1.0, gamma_1=2.0, gamma_phi=3.0, p_th=0.25)
    assert em.gamma_perp == 4.0 and em.gamma_up == 0.5 and em.gamma_down == 1.5
    assert CavityParams(W, 1.0, 1.0).n_bath == pytest.approx(bose_occupation(W, 1.0))
