import numpy as np

from dqdcool.rates import exchange_rate
from dqdcool.validate import (Check, analytic_checks, clamp_cases, format_report,
                              lindblad_checks, run_checks, weak_coupling_cases)


def _by_name(checks):
    return {c.name: c for c in checks}


def test_check_verdicts():
    assert Check("a", 1e-3, 1e-2).passed
    assert not Check("b", 1.0, 1e-2).passed
    assert not Check("c", float("nan"), 1.0).passed
    assert Check("d", 2.0, 1.0).verdict == "fail"


def test_analytic_checks_pass():
    checks = analytic_checks()
    failed = [c.name for c in checks if not c.passed]
    assert failed == []


def test_mapping_identity_detects_corrupted_rate():
    def broken(g, kappa, gamma_perp, Delta=0.0):
        w = kappa + gamma_perp
        return 4.0 * g**2 * w / (w**2 + np.asarray(Delta) ** 2)  # lost the 4 on Delta^2

    checks = _by_name(analytic_checks(rate_fn=broken))
    assert not checks["collision_clamped_mapping_identity"].passed
    assert _by_name(run_checks("analytic", exchange_rate))[
        "collision_clamped_mapping_identity"].passed


def test_case_generators_respect_limits():
    for cav, em in weak_coupling_cases(20):
        assert em.g <= 0.1 * (cav.kappa + em.gamma_perp)
        assert cav.n_bath <= 0.5 + 1e-12
    for cav, em, gres, r1, G in clamp_cases(10, factor=10):
        assert gres >= 10 * max(cav.kappa, G) * (1 - 1e-12)
        assert 0 <= r1 < 0.5


def test_lindblad_checks_report():
    checks = _by_name(lindblad_checks(n_cases=3))
    for name in ("liouvillian_action_consistency", "weak_coupling_vs_persistent",
                 "steady_trace", "steady_positivity", "dark_state_protection",
                 "conserved_excitation"):
        assert checks[name].passed, name
    assert "clamp_vs_reset_lindblad_factor10" in checks


def test_format_report():
    text = format_report([Check("x", 1.5e-3, 1e-2)])
    assert text == "name,measured,bound,verdict\nx,1.500000e-03,1.0e-02,pass\n"
