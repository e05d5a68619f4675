"""
Parameter sweeps and deterministic CSV emission.

Numbers are written with 17 significant digits; infinities as ``inf`` /
``-inf``. Points whose dynamics run away (or whose emitter is inverted) are
marked with the ``gain`` sentinel. NaN is never written: an unavailable
value is left empty and the ``error`` column says why.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Sequence

from . import __version__
from .config import RunConfig
from .errors import ValidationError
from .pipeline import PointResult, evaluate
from .presets import Preset

__all__ = ["SCHEMA_VERSION", "RESULT_COLUMNS", "format_value", "evaluate_all", "sweep_points",
           "render_csv", "run_sweep", "run_preset", "run_single"]

SCHEMA_VERSION = 1

# (column header, PointResult attribute)
RESULT_COLUMNS = (
    ("n_star", "n_star"),
    ("p_e", "p_e"),
    ("T_cav_k", "T_cav"),
    ("T_dot_k", "T_dot"),
    ("ratio_T_cav_over_T_dot", "ratio"),
    ("T_dqd_k", "T_dqd"),
    ("regime", "regime"),
    ("solver", "solver"),
    ("residual", "residual"),
    ("cutoff", "cutoff"),
    ("warning", "warning"),
    ("error", "error"),
)
_GAIN_FIELDS = {"n_star", "T_cav", "ratio"}


def format_value(v) -> str:
    """17-significant-digit text; ``inf``/``-inf``; empty for None/NaN."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return ""
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(v)


def _result_cells(r: PointResult) -> list[str]:
    cells = []
    for _, attr in RESULT_COLUMNS:
        v = getattr(r, attr)
        if r.gain and not r.error and attr in _GAIN_FIELDS and not (
                isinstance(v, float) and math.isfinite(v)):
            cells.append("gain")
        elif attr == "T_dqd" and isinstance(v, float) and v < 0:
            cells.append("gain")  # inverted emitter: negative temperature
        else:
            cells.append(format_value(v))
    return cells


def evaluate_all(configs: Sequence[RunConfig], jobs: int = 1) -> list[PointResult]:
    """Evaluate `configs`; results come back in input order for any `jobs`."""
    if jobs <= 1 or len(configs) < 2:
        return [evaluate(c) for c in configs]
    chunk = max(1, len(configs) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(evaluate, configs, chunksize=chunk))


def sweep_points(cfg: RunConfig):
    """``(axis column, [(value, RunConfig)])`` for the configured sweep."""
    if cfg.sweep is None:
        raise ValidationError("no sweep configured: set sweep_axis, sweep_min, sweep_max, "
                              "sweep_points")
    name = cfg.sweep.parameter
    base = cfg.with_params(sweep=None)
    pts = [(float(v), base.with_params(**{name: float(si)}))
           for v, si in zip(cfg.sweep.values(), cfg.sweep.si_values())]
    return cfg.sweep.key, pts


def render_csv(meta: dict, axes: Sequence[str], rows: Iterable[tuple[str, Sequence[float],
               PointResult]]) -> str:
    """CSV text: ``#`` metadata lines, header, then one line per row."""
    buf = io.StringIO()
    buf.write(f"# dqdcool {__version__} csv-schema {SCHEMA_VERSION}\n")
    for key in sorted(meta):
        val = meta[key]
        text = val if isinstance(val, str) else json.dumps(val, sort_keys=True,
                                                           separators=(",", ":"))
        buf.write(f"# {key}: {text}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "series", *axes, *(c for c, _ in RESULT_COLUMNS)])
    for i, (series, axis, res) in enumerate(rows):
        w.writerow([i, series, *(format_value(float(a)) for a in axis), *_result_cells(res)])
    return buf.getvalue()


def run_single(cfg: RunConfig, label: str = "steady"):
    """Single-point CSV text and its number of failed rows."""
    res = evaluate(cfg)
    meta = {"config": cfg.echo_json(), "preset": label}
    return render_csv(meta, (), [(cfg.model, (), res)]), int(bool(res.error))


def run_sweep(cfg: RunConfig, jobs: int = 1):
    """CSV text of the configured one-parameter sweep and its number of failed rows."""
    axis, pts = sweep_points(cfg)
    results = evaluate_all([c for _, c in pts], jobs)
    rows = [(cfg.model, (v,), r) for (v, _), r in zip(pts, results)]
    meta = {"config": cfg.echo_json(), "preset": "sweep"}
    return render_csv(meta, (axis,), rows), sum(bool(r.error) for r in results)


def run_preset(preset: Preset, jobs: int = 1):
    """CSV text of a figure preset and its number of failed rows."""
    items = list(preset.configs())
    results = evaluate_all([c for _, _, c in items], jobs)
    rows = [(s, a, r) for (s, a, _), r in zip(items, results)]
    meta = {"config": preset.base.echo_json(), "preset": preset.name,
            "description": preset.description, "notes": preset.notes}
    return render_csv(meta, preset.axes, rows), sum(bool(r.error) for r in results)
