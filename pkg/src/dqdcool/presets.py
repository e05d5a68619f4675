"""
Figure-reproduction presets.

Each preset is a list of points ``(series, axis values, config updates)``
evaluated on top of the Table-1 baseline. Axis columns are written in the
unit named by their suffix (``*_hz`` means cycles/s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import RunConfig, load_config
from .constants import TWO_PI

__all__ = ["Preset", "PRESET_NAMES", "build_preset", "FIG1_COUPLINGS_HZ", "FIG4_RATIOS",
           "FIG6_BATH_TEMPERATURES_K"]

FIG1_COUPLINGS_HZ = (0.25e6, 0.5e6, 1.0e6)
FIG1_DELTA_HZ = np.linspace(-2e6, 2e6, 201)
FIG2_KAPPA_HZ = np.geomspace(1e-4, 1e7, 111)
FIG2_G_HZ = np.geomspace(1e3, 1e6, 61)
FIG3_DELTA_HZ = np.linspace(-2e6, 2e6, 81)
FIG3_G_HZ = np.linspace(0.05e6, 1.0e6, 39)
FIG4_RATIOS = np.geomspace(1e-2, 1e4, 61)
FIG4_GAMMA1_HZ = (1e6, 1e4)
FIG5_DELTA12_HZ = np.linspace(-2e6, 2e6, 201)
FIG6_KAPPA_HZ = np.geomspace(1e-4, 1e7, 111)
FIG6_BATH_TEMPERATURES_K = (0.5, 1.0, 2.0, 4.0)

PRESET_NAMES = (
    "fig1a", "fig1b", "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b",
    "fig4a", "fig4b", "fig5a", "fig5b", "fig6a", "fig6b",
)


@dataclass(frozen=True)
class Preset:
    """Points of one figure panel and the metadata recorded with them."""

    name: str
    description: str
    axes: tuple[str, ...]
    points: list[tuple[str, tuple[float, ...], dict]]
    base: RunConfig
    notes: dict = field(default_factory=dict)

    def configs(self):
        """Yield ``(series, axis values, RunConfig)`` in output order."""
        for series, axis, upd in self.points:
            yield series, axis, self.base.with_params(**upd)


def _fig1(name, base):
    pts = []
    for g in FIG1_COUPLINGS_HZ:
        for d in FIG1_DELTA_HZ:
            pts.append((f"g_hz={g:g}", (float(d),), {"g": TWO_PI * g, "Delta": TWO_PI * d}))
    return ("T_cav/T_dot and n* versus detuning for three couplings (collision stream)",
            ("Delta_hz",), pts, {"g_hz": list(FIG1_COUPLINGS_HZ)})


def _fig2_kappa(name, base):
    pts = [("collision", (float(k),), {"kappa": TWO_PI * k}) for k in FIG2_KAPPA_HZ]
    return ("T_cav/T_dot versus cavity damping (collision stream)", ("kappa_hz",), pts, {})


def _fig2_g(name, base):
    pts = [("collision", (float(g),), {"g": TWO_PI * g}) for g in FIG2_G_HZ]
    return ("T_cav/T_dot versus coupling (collision stream)", ("g_hz",), pts, {})


def _fig3(name, base):
    pts = []
    for g in FIG3_G_HZ:
        for d in FIG3_DELTA_HZ:
            pts.append(("collision", (float(d), float(g)), {"g": TWO_PI * g, "Delta": TWO_PI * d}))
    return ("T_cav/T_dot over the (Delta, g) plane (collision stream)", ("Delta_hz", "g_hz"),
            pts, {})


def _fig4(name, base):
    kappa = base["kappa"]
    tau = base["tau"]
    pts = []
    series = [("stream", "collision", {}), ("clamped", "clamped", {})]
    series += [(f"persistent_gamma1_hz={g1:g}", "persistent", {"gamma_1": TWO_PI * g1})
               for g1 in FIG4_GAMMA1_HZ]
    for label, model, extra in series:
        gp = 0.5 * extra.get("gamma_1", base["gamma_1"]) + base["gamma_phi"]
        for x in FIG4_RATIOS:
            Gc = x * kappa
            # Gamma_c(0) = 4 g^2/(kappa + gamma_perp) with this series' linewidth
            g = math.sqrt(Gc * (kappa + gp) / 4.0)
            upd = {"model": model, "g": g, **extra}
            if model == "collision":
                upd["R"] = Gc / (g * tau) ** 2  # R phi^2 = Gamma_c(0)
            pts.append((label, (float(x),), upd))
    return ("T_cav versus Gamma_c(0)/kappa: stream, clamped and persistent emitters",
            ("Gamma_c_over_kappa",), pts,
            {"x_axis": "g varied at fixed kappa and per-series gamma_perp",
             "persistent_gamma_1_hz": list(FIG4_GAMMA1_HZ)})


def _fig5(name, base):
    pts = [("collision", (float(d),), {"Delta_12": TWO_PI * d}) for d in FIG5_DELTA12_HZ]
    return ("T_cav versus signed inter-dot mismatch (collision stream)", ("Delta_12_hz",), pts,
            {"dot_frequencies": "omega_c +/- Delta_12/2"})


def _fig6(name, base):
    pts = []
    for T in FIG6_BATH_TEMPERATURES_K:
        for k in FIG6_KAPPA_HZ:
            pts.append((f"T_bath_k={T:g}", (float(k),), {"T_bath": T, "kappa": TWO_PI * k}))
    return ("T_cav versus cavity damping for several bath temperatures (clamped)",
            ("kappa_hz",), pts, {"T_bath_k": list(FIG6_BATH_TEMPERATURES_K)})


_BUILDERS = {
    "fig1": (_fig1, "collision"), "fig2a": (_fig2_kappa, "collision"),
    "fig2b": (_fig2_kappa, "collision"), "fig2c": (_fig2_g, "collision"),
    "fig2d": (_fig2_g, "collision"), "fig3": (_fig3, "collision"),
    "fig4": (_fig4, "clamped"), "fig5": (_fig5, "collision"), "fig6": (_fig6, "clamped"),
}


def build_preset(name: str, base: RunConfig | None = None) -> Preset:
    """Assemble the named preset on top of `base` (default: Table-1 baseline)."""
    if name not in PRESET_NAMES:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")
    key = name if name in _BUILDERS else name[:-1]
    builder, model = _BUILDERS[key]
    variant = "one_dot" if name[-1] in "ac" else "two_dot"
    if base is None:
        base = load_config()
    base = base.with_params(variant=variant, model=model, sweep=None)
    desc, axes, pts, notes = builder(name, base)
    return Preset(name=name, description=desc, axes=axes, points=pts, base=base,
                  notes={"variant": variant, **notes})
