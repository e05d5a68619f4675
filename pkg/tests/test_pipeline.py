import csv
import io
import math

import numpy as np
import pytest

from dqdcool import __version__
from dqdcool.config import load_config
from dqdcool.pipeline import (PointResult, collective_exchange_rate, evaluate, pair_statistics,
                              single_exchange_rate)
from dqdcool.presets import PRESET_NAMES, build_preset
from dqdcool.rates import exchange_rate
from dqdcool.sweep import (RESULT_COLUMNS, SCHEMA_VERSION, evaluate_all, format_value,
                           render_csv, run_preset, run_single, run_sweep)


def _rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


# --- pipeline -------------------------------------------------------------

def test_pair_statistics_variants():
    one = pair_statistics(load_config())
    two = pair_statistics(load_config(overrides=["variant=two_dot"]))
    assert one.r1 + one.r2 == pytest.approx(1.0)
    assert one.r2 > one.r1 and two.r2 > two.r1
    assert two.r2 == pytest.approx(0.5, abs=1e-3)


def test_exchange_rate_helpers():
    cfg = load_config(overrides=["Delta_hz=1e5"])
    gp = 0.5 * cfg["gamma_1"] + cfg["gamma_phi"]
    assert single_exchange_rate(cfg) == pytest.approx(
        float(exchange_rate(cfg["g"], cfg["kappa"], gp, cfg["Delta"])))
    matched = load_config()
    assert collective_exchange_rate(matched) == pytest.approx(2 * single_exchange_rate(matched))


@pytest.mark.parametrize("variant", ["one_dot", "two_dot"])
@pytest.mark.parametrize("model", ["clamped", "persistent", "collision"])
def test_evaluate_models(variant, model):
    res = evaluate(load_config(overrides=[f"variant={variant}", f"model={model}"]))
    assert not res.error
    assert 0 < res.T_cav < 1.0 and res.T_dot == 0.05
    assert res.ratio == pytest.approx(res.T_cav / 0.05)


@pytest.mark.parametrize("variant", ["one_dot", "two_dot"])
def test_evaluate_lindblad_matches_persistent(variant):
    over = [f"variant={variant}", "T_bath=0.15", "g_hz=2e3", "kappa_hz=1e4", "gamma_1_hz=2e4",
            "gamma_phi_hz=1e4", "T_set=0.1"]
    lind = evaluate(load_config(overrides=over + ["model=lindblad"]))
    assert not lind.error and lind.cutoff >= 2
    assert lind.extra["positivity_floor"] > -1e-8
    assert abs(lind.extra["trace"] - 1.0) < 1e-10
    if variant == "one_dot":
        per = evaluate(load_config(overrides=over + ["model=persistent"]))
        assert lind.n_star == pytest.approx(per.n_star, rel=0.05)


def test_evaluate_lindblad_fixed_cutoff():
    res = evaluate(load_config(overrides=["model=lindblad", "n_cutoff=3", "T_bath=0.1"]))
    assert res.cutoff == 3 and not res.error


def test_evaluate_captures_warnings():
    res = evaluate(load_config(overrides=["model=collision", "g_hz=2e6"]))
    assert "collision phase" in res.warning


def test_evaluate_instability_sets_gain():
    from dqdcool import pipeline
    cfg = load_config(overrides=["model=clamped"])

    def boom(cfg, n_bath):
        from dqdcool.errors import InstabilityError
        raise InstabilityError("runaway")

    orig = pipeline._MODELS["clamped"]
    pipeline._MODELS["clamped"] = boom
    try:
        res = evaluate(cfg)
    finally:
        pipeline._MODELS["clamped"] = orig
    assert res.gain and not res.error and "unstable" in res.warning


# --- CSV ------------------------------------------------------------------

def test_format_value():
    assert format_value(None) == "" and format_value(math.nan) == ""
    assert format_value(math.inf) == "inf" and format_value(-math.inf) == "-inf"
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(3) == "3" and format_value(True) == "true"
    assert format_value("x") == "x"


def test_render_csv_layout_and_sentinels():
    rows = [("s", (1.0,), PointResult(n_star=math.inf, T_cav=math.inf, ratio=math.nan,
                                      T_dqd=-0.1, gain=True)),
            ("s", (2.0,), PointResult(error="SolverError: x"))]
    text = render_csv({"b": "2", "a": {"k": 1}}, ("x",), rows)
    lines = text.splitlines()
    assert lines[0] == f"# dqdcool {__version__} csv-schema {SCHEMA_VERSION}"
    assert lines[1] == '# a: {"k":1}' and lines[2] == "# b: 2"
    assert lines[3] == ",".join(["index", "series", "x"] + [c for c, _ in RESULT_COLUMNS])
    r = _rows(text)
    assert r[0]["n_star"] == "gain" and r[0]["ratio_T_cav_over_T_dot"] == "gain"
    assert r[0]["T_dqd_k"] == "gain"
    assert r[1]["n_star"] == "" and r[1]["error"] == "SolverError: x"
    assert "nan" not in text.lower()


def test_run_single_echo():
    cfg = load_config(overrides=["model=persistent"])
    text, bad = run_single(cfg)
    assert bad == 0
    assert f"# config: {cfg.echo_json()}" in text
    assert _rows(text)[0]["solver"] == "persistent_quadratic"


def test_run_sweep_order_and_values():
    cfg = load_config(overrides=["sweep_axis=g_hz", "sweep_min=1e5", "sweep_max=1e6",
                                 "sweep_points=4", "sweep_scale=log"])
    text, bad = run_sweep(cfg)
    rows = _rows(text)
    assert bad == 0 and [float(r["g_hz"]) for r in rows] == pytest.approx(
        np.geomspace(1e5, 1e6, 4))
    T = [float(r["T_cav_k"]) for r in rows]
    assert all(np.diff(T) < 0)


def test_run_sweep_requires_grid():
    from dqdcool.errors import ValidationError
    with pytest.raises(ValidationError):
        run_sweep(load_config())


def test_parallel_matches_serial():
    cfgs = [c for _, _, c in build_preset("fig5b").configs()][:40]
    a = evaluate_all(cfgs, jobs=1)
    b = evaluate_all(cfgs, jobs=2)
    assert a == b


# --- presets --------------------------------------------------------------

@pytest.mark.parametrize("name", PRESET_NAMES)
def test_presets_run_clean(name):
    preset = build_preset(name)
    text, bad = run_preset(preset)
    assert bad == 0
    assert f"# preset: {name}" in text
    variant = "one_dot" if name[-1] in "ac" else "two_dot"
    assert preset.notes["variant"] == variant
    rows = _rows(text)
    assert len(rows) == len(preset.points)
    assert all(r["error"] == "" for r in rows)


def test_unknown_preset():
    with pytest.raises(KeyError):
        build_preset("fig9z")


def test_preset_base_override():
    base = load_config(overrides=["T_bath=2.0"])
    preset = build_preset("fig2a", base)
    assert all(c["T_bath"] == 2.0 for _, _, c in preset.configs())


def test_fig4_axis_is_gamma_ratio():
    preset = build_preset("fig4a")
    for series, (x,), cfg in preset.configs():
        gp = 0.5 * cfg["gamma_1"] + cfg["gamma_phi"]
        G0 = float(exchange_rate(cfg["g"], cfg["kappa"], gp, 0.0))
        assert G0 / cfg["kappa"] == pytest.approx(x, rel=1e-12)
        if series == "stream":
            assert cfg["R"] * (cfg["g"] * cfg["tau"]) ** 2 == pytest.approx(G0, rel=1e-12)



def test_fig4_two_dot_memory_plateau():
    preset = build_preset("fig4b")
    items = list(preset.configs())
    res = evaluate_all([c for _, _, c in items])
    by = {}
    for (series, (x,), _), r in zip(items, res):
        assert not r.error
        by.setdefault(series, []).append((x, r.T_cav))
    slow = dict(by["persistent_gamma1_hz=10000"])
    clamped = dict(by["clamped"])
    fast = dict(by["persistent_gamma1_hz=1e+06"])
    x_max = max(slow)
    assert 0.070 <= slow[x_max] <= 0.095
    assert clamped[x_max] <= 0.055
    assert max(abs(fast[x] / clamped[x] - 1) for x in clamped) <= 0.10
