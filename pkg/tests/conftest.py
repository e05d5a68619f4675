"""Acceptance-criterion reporting.

Tests marked ``@pytest.mark.criterion(n)`` are grouped by criterion and a
one-line PASS/FAIL verdict per criterion is printed in the terminal
summary. A criterion fails if any of its checks fails, including checks
marked as expected failures (known, documented shortfalls).
"""

import pytest

CRITERIA = {
    1: "bath occupations at 5 GHz (1 K, 10 K)",
    2: "collision phase at the baseline",
    3: "Fig. 2 small-kappa asymptotes and monotone approach",
    4: "Fig. 6 clamp to the 50 mK setpoint",
    5: "Fig. 1 minimum, evenness and depth ordering",
    6: "Fig. 4 memory plateau vs clamped refrigeration",
    7: "Fig. 5 symmetry (two-dot even, one-dot asymmetric)",
    8: "analytic vs Lindblad steady states",
    9: "Hamiltonian layer oracles",
    10: "property suites",
}

_outcomes: dict[int, list[tuple[str, bool, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        if hasattr(report, "wasxfail"):
            ok = report.passed  # non-strict xpass
        elif report.failed and "XPASS(strict)" in str(report.longrepr):
            ok = True
        else:
            ok = report.passed
        detail = "; ".join(str(v) for k, v in report.user_properties if k == "detail")
        _outcomes.setdefault(marker.args[0], []).append((item.name, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(CRITERIA):
        if n not in _outcomes:
            continue
        ok = all(o for _, o, _ in _outcomes[n])
        tr.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {CRITERIA[n]}")
        for name, o, detail in _outcomes[n]:
            if detail or not o:
                tr.write_line(f"    {'ok  ' if o else 'FAIL'} {name}: {detail}")
