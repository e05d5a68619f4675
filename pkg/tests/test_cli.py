import json
import subprocess
import sys

import pytest

from dqdcool.cli import build_parser, main
from dqdcool.presets import PRESET_NAMES


def test_steady_to_stdout(capsys):
    assert main(["steady", "--set", "model=persistent"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# dqdcool ") and "persistent_quadratic" in out


def test_steady_rerun_from_emitted_csv(tmp_path):
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    assert main(["steady", "--set", "g_hz=3e5", "--set", "variant=two_dot", "--out",
                 str(first)]) == 0
    assert main(["steady", "--config", str(first), "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_output_key_in_config(tmp_path):
    target = tmp_path / "sub" / "out.csv"
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"output": str(target), "model": "collision"}))
    assert main(["steady", "--config", str(cfg)]) == 0
    assert "collision_stream" in target.read_text()


@pytest.mark.parametrize("args, message", [
    (["--set", "kappa=-1"], "must be >= 0"),
    (["--set", "T_bath_hz=1"], "unit mismatch"),
    (["--set", "foo=1"], "unknown configuration key"),
    (["--config", "/nonexistent/file.json"], "does not exist"),
])
def test_invalid_input_exit_code(args, message, capsys):
    assert main(["steady", *args]) == 2
    err = capsys.readouterr().err
    assert err.startswith("dqdcool: error: ") and message in err


def test_sweep(tmp_path):
    out = tmp_path / "s.csv"
    args = ["sweep", "--set", "sweep_axis=Delta_hz", "--set", "sweep_min=-1e6", "--set",
            "sweep_max=1e6", "--set", "sweep_points=5", "--out", str(out)]
    assert main(args) == 0
    lines = [line for line in out.read_text().splitlines() if not line.startswith("#")]
    assert lines[0].startswith("index,series,Delta_hz,") and len(lines) == 6


def test_sweep_parallel_identical(tmp_path):
    args = ["sweep", "--set", "sweep_axis=g_hz", "--set", "sweep_min=1e5", "--set",
            "sweep_max=1e6", "--set", "sweep_points=9", "--set", "model=persistent"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b), "--jobs", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep_without_grid_is_invalid(capsys):
    assert main(["sweep"]) == 2
    assert "no sweep configured" in capsys.readouterr().err


def test_figures_single_and_all(tmp_path):
    single = tmp_path / "f.csv"
    assert main(["figures", "fig2a", "--out", str(single)]) == 0
    assert "# preset: fig2a" in single.read_text()
    outdir = tmp_path / "figs"
    assert main(["figures", "all", "--out", str(outdir)]) == 0
    assert sorted(p.stem for p in outdir.glob("*.csv")) == sorted(PRESET_NAMES)
    assert (outdir / "fig2a.csv").read_bytes() == single.read_bytes()


def test_figures_base_override(tmp_path):
    out = tmp_path / "f.csv"
    assert main(["figures", "fig6a", "--set", "T_set=0.08", "--out", str(out)]) == 0
    assert '"T_set":0.08' in out.read_text()


def test_lindblad_subcommand(tmp_path):
    out = tmp_path / "l.csv"
    assert main(["lindblad", "--set", "T_bath=0.15", "--set", "n_cutoff=4", "--out",
                 str(out)]) == 0
    text = out.read_text()
    assert ",lindblad," in text and "# preset: lindblad" in text


def test_validate_analytic(tmp_path):
    out = tmp_path / "v.csv"
    assert main(["validate", "--scope", "analytic", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "name,measured,bound,verdict"
    assert all(line.endswith(",pass") for line in lines[1:])


def test_parser_rejects_unknown_preset():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["figures", "fig99"])


def test_console_script_version():
    out = subprocess.run([sys.executable, "-m", "dqdcool.cli", "--version"],
                         capture_output=True, text=True, check=True).stdout
    assert out.startswith("dqdcool ")
