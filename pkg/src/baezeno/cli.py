"""``zenoctl``: run the belief/Zeno experiments and write CSV output.

Exit status: 0 success, 1 configuration error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import engine, model, qlin
from .errors import NumericalError, SizingError, ValidationError
from .engine import ExperimentSpec, Interaction, Mode

EXPERIMENTS = ("fig1", "fig2", "sweep", "zeno", "rate", "validate")
SWEEP_HEADER = "B,p_free,p_interaction,phase"
ZENO_HEADER = "n,survival,entropy_mean,mode"
RATE_HEADER = "b_first,overlap,rate_analytic,rate_numeric"

PRESETS = {
    "fig1": {
        "model": {"mu0": 0.3, "mu1": 0.6, "gamma": 0.0, "t_prime": math.pi / 2},
        "b_first": 0.2,
        "b_total": 0.6,
    },
    "fig2": {
        "model": {"mu0": 1.4, "mu1": 1.4, "gamma": 2.09, "t_prime": math.pi / 2},
        "b_first": 0.2,
        "b_total": 0.8,
    },
}

MODEL_KEYS = ("mu0", "mu1", "gamma", "t_prime")
TOP_KEYS = (
    "experiment", "model", "b_first", "b_total", "grid_points", "n_interactions",
    "mode", "output_path", "emit_plot_script", "interaction", "h_alpha_form",
)


class ConfigError(Exception):
    def __init__(self, key: str, message: str):
        super().__init__(f"config error in '{key}': {message}")
        self.key = key


@dataclass
class RunConfig:
    experiment: str = "sweep"
    model: model.ModelParams = field(default_factory=lambda: model.ModelParams(**PRESETS["fig1"]["model"]))
    b_first: float = 0.2
    b_total: float = 0.6
    grid_points: int = 400
    n_interactions: tuple[int, ...] = (1,)
    mode: str = "channel"
    output_path: Optional[str] = None
    emit_plot_script: bool = False
    interaction: str = "bae"
    h_alpha_form: str = "symmetric"

    def spec(self, n: int = 1) -> ExperimentSpec:
        return ExperimentSpec(
            params=self.model,
            b_first=self.b_first,
            b_total=self.b_total,
            grid_points=self.grid_points,
            n_interactions=n,
            mode=Mode(self.mode),
            interaction=Interaction(self.interaction),
            h_alpha_form=self.h_alpha_form,
        )


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _number(key, value, kind=float):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key, f"expected a number, got {value!r}")
    if kind is int:
        if float(value) != int(value):
            raise ConfigError(key, f"expected an integer, got {value!r}")
        return int(value)
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(key, "must be finite")
    return value


def _n_list(value) -> tuple[int, ...]:
    values = value if isinstance(value, (list, tuple)) else [value]
    out = tuple(_number("n_interactions", v, int) for v in values)
    if not out or any(v < 0 for v in out):
        raise ConfigError("n_interactions", "must be one or more integers >= 0")
    return out


def build_config(experiment: str, file_values: dict, overrides: dict) -> RunConfig:
    """Merge preset, config-file and flag values (later wins) and validate."""
    merged: dict = {"model": {}}
    for layer in (PRESETS.get(experiment, {}), file_values, overrides):
        for key, value in layer.items():
            if key not in TOP_KEYS and key not in MODEL_KEYS:
                raise ConfigError(key, "unknown key")
            if key == "model":
                if not isinstance(value, dict):
                    raise ConfigError("model", "expected an object")
                for mk, mv in value.items():
                    if mk not in MODEL_KEYS:
                        raise ConfigError(mk, "unknown model key")
                    merged["model"][mk] = mv
            elif key in MODEL_KEYS:
                merged["model"][key] = value
            else:
                merged[key] = value
    if merged.get("experiment", experiment) != experiment:
        raise ConfigError("experiment", f"file says {merged['experiment']!r}, command is {experiment!r}")

    cfg = RunConfig(experiment=experiment)
    m = {k: _number(k, v) for k, v in merged["model"].items()}
    if m.get("t_prime", 0.0) < 0:
        raise ConfigError("t_prime", "must be >= 0")
    cfg.model = replace(cfg.model, **m)
    if "b_first" in merged:
        cfg.b_first = _number("b_first", merged["b_first"])
    if "b_total" in merged:
        cfg.b_total = _number("b_total", merged["b_total"])
    if "grid_points" in merged:
        cfg.grid_points = _number("grid_points", merged["grid_points"], int)
    if "n_interactions" in merged:
        cfg.n_interactions = _n_list(merged["n_interactions"])
    for key, choices in (
        ("mode", [m.value for m in Mode]),
        ("interaction", [i.value for i in Interaction]),
        ("h_alpha_form", ["symmetric", "printed"]),
    ):
        if key in merged:
            if merged[key] not in choices:
                raise ConfigError(key, f"expected one of {choices}, got {merged[key]!r}")
            setattr(cfg, key, merged[key])
    if "output_path" in merged:
        cfg.output_path = merged["output_path"] and str(merged["output_path"])
    if "emit_plot_script" in merged:
        if not isinstance(merged["emit_plot_script"], bool):
            raise ConfigError("emit_plot_script", "expected true or false")
        cfg.emit_plot_script = merged["emit_plot_script"]

    if cfg.b_first < 0:
        raise ConfigError("b_first", "must be >= 0")
    if cfg.b_total < cfg.b_first:
        raise ConfigError("b_total", "must be >= b_first")
    if cfg.grid_points < 2:
        raise ConfigError("grid_points", "must be >= 2")
    if cfg.emit_plot_script and not cfg.output_path:
        raise ConfigError("emit_plot_script", "needs output_path")
    if cfg.output_path:
        parent = Path(cfg.output_path).resolve().parent
        if not parent.is_dir() or not os.access(parent, os.W_OK):
            raise ConfigError("output_path", f"directory {parent} is not writable")
    return cfg


def sweep_rows(cfg: RunConfig) -> list[str]:
    rows = [SWEEP_HEADER]
    for s in engine.curve_sweep(cfg.spec(1)):
        for p in (s.p_free, s.p_interaction):
            if not -qlin.TRACE_TOL <= p <= 1 + qlin.TRACE_TOL:
                raise NumericalError(f"probability {p} outside [0, 1]")
        rows.append(",".join((fmt(s.b), fmt(s.p_free), fmt(s.p_interaction), s.phase.value)))
    return rows


def zeno_rows(cfg: RunConfig) -> list[str]:
    rows = [ZENO_HEADER]
    for n in cfg.n_interactions:
        res = engine.zeno_sequence(cfg.spec(n))
        rows.append(",".join((str(n), fmt(res.survival), fmt(res.entropy_mean), res.mode.value)))
    return rows


def rate_rows(cfg: RunConfig) -> list[str]:
    rows = [RATE_HEADER]
    spec = cfg.spec(1)
    if spec.interaction is Interaction.DEPHASING:
        overlap = 0.0
    elif cfg.model.gamma == 0:
        overlap = model.pointer_overlap(cfg.model)
    else:
        overlap = None
    numeric = engine.transition_rate_numeric(spec, h=1e-5)
    if overlap is None:
        rows.append(",".join((fmt(cfg.b_first), "", "", fmt(numeric))))
    else:
        analytic = engine.transition_rate_analytic(cfg.b_first, overlap)
        rows.append(",".join((fmt(cfg.b_first), fmt(overlap), fmt(analytic), fmt(numeric))))
    return rows


def validation_checks(cfg: RunConfig) -> list[tuple[str, bool, str]]:
    """Run the diagnostic suite at the configured parameters."""
    spec = cfg.spec(1)
    p = cfg.model
    checks: list[tuple[str, bool, str]] = []

    def check(name, fn):
        try:
            ok, detail = fn()
        except (NumericalError, ValidationError) as exc:
            ok, detail = False, str(exc)
        checks.append((name, bool(ok), detail))

    def generator():
        ha = model.h_alpha_as_printed if cfg.h_alpha_form == "printed" else model.h_alpha
        return ha(p.mu0, p.mu1) + model.h_beta(p.gamma)

    def hermitian():
        h = generator()
        err = float(np.max(np.abs(h - h.conj().T)))
        return err <= qlin.HERMITIAN_TOL, f"max |H - H^dag| = {err:.3g}"

    def unitary():
        u = engine.interaction_unitary(spec)
        err = float(np.max(np.abs(u.conj().T @ u - np.eye(4))))
        return err <= qlin.UNITARY_TOL, f"max |U^dag U - I| = {err:.3g}"

    def rotation():
        u = model.u_free(cfg.b_total - cfg.b_first)
        return qlin.is_unitary(u), "free rotation"

    def normalization():
        psi = engine.evolve_single_interaction(spec)
        err = abs(np.vdot(psi, psi).real - 1)
        return err <= engine.NORM_TOL, f"| |psi|^2 - 1 | = {err:.3g}"

    def closed_form_states():
        if p.gamma != 0 or spec.interaction is not Interaction.BAE:
            return True, "skipped: gamma != 0 or non-BAE interaction"
        nu, eta = model.ancilla_states_closed_form(p)
        nu_n, eta_n = model.ancilla_states_numeric(p)
        err = float(max(np.max(np.abs(nu - nu_n)), np.max(np.abs(eta - eta_n))))
        return err <= 1e-10, f"max deviation {err:.3g}"

    def closed_form_prob():
        if p.gamma != 0 or spec.interaction is not Interaction.BAE:
            return True, "skipped: gamma != 0 or non-BAE interaction"
        r = model.pointer_overlap(p)
        a = engine.prob_innocent_closed_form(cfg.b_first, cfg.b_total - cfg.b_first, r)
        b = engine.prob_innocent_with_interaction(spec)
        return abs(a - b) <= 1e-10, f"|closed - numeric| = {abs(a - b):.3g}"

    def rate():
        if p.gamma != 0 or spec.interaction is not Interaction.BAE:
            return True, "skipped: gamma != 0 or non-BAE interaction"
        a = engine.transition_rate_analytic(cfg.b_first, model.pointer_overlap(p))
        b = engine.transition_rate_numeric(spec, h=1e-5)
        return abs(a - b) <= 1e-6, f"|analytic - numeric| = {abs(a - b):.3g}"

    def modes():
        n = min(max(cfg.n_interactions), 8)
        base = cfg.spec(n)
        r1 = engine.zeno_sequence(replace(base, mode=Mode.PURE_STATE)).rho_belief
        r2 = engine.zeno_sequence(replace(base, mode=Mode.CHANNEL)).rho_belief
        d = qlin.trace_distance(r1, r2)
        return d <= 1e-10, f"n={n}, trace distance {d:.3g}"

    check("generator_hermitian", hermitian)
    check("interaction_unitary", unitary)
    check("free_rotation_unitary", rotation)
    check("state_normalized", normalization)
    check("closed_form_ancilla_states", closed_form_states)
    check("closed_form_survival", closed_form_prob)
    check("transition_rate", rate)
    check("mode_equivalence", modes)
    return checks


PLOT_TEMPLATE = '''"""Plot {csv_name} (written by zenoctl)."""
import csv

import matplotlib.pyplot as plt

with open({csv_path!r}, newline="") as fh:
    rows = list(csv.DictReader(fh))

fig, ax = plt.subplots()
{body}
ax.legend()
fig.savefig({png_path!r}, dpi=150)
'''

SWEEP_PLOT = '''b = [float(r["B"]) for r in rows]
ax.plot(b, [float(r["p_free"]) for r in rows], "-", label="no evaluation")
ax.plot(b, [float(r["p_interaction"]) for r in rows], "--", label="one evaluation")
ax.set_xlabel("B")
ax.set_ylabel("P(innocent)")'''

ZENO_PLOT = '''n = [int(r["n"]) for r in rows]
ax.plot(n, [float(r["survival"]) for r in rows], "o-", label="survival")
ax.set_xscale("symlog")
ax.set_xlabel("evaluations n")
ax.set_ylabel("P(innocent)")'''


def write_plot_script(cfg: RunConfig) -> Path:
    out = Path(cfg.output_path)
    script = out.with_name(out.stem + "_plot.py")
    body = ZENO_PLOT if cfg.experiment == "zeno" else SWEEP_PLOT
    text = PLOT_TEMPLATE.format(
        csv_name=out.name, csv_path=str(out), png_path=str(out.with_suffix(".png")), body=body
    )
    with open(script, "w", newline="\n") as fh:
        fh.write(text)
    return script


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    if cfg.experiment == "validate":
        checks = validation_checks(cfg)
        for name, ok, detail in checks:
            print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}", file=stdout)
        return 0 if all(ok for _, ok, _ in checks) else 2
    if cfg.experiment in ("fig1", "fig2", "sweep"):
        rows = sweep_rows(cfg)
    elif cfg.experiment == "zeno":
        rows = zeno_rows(cfg)
    else:
        rows = rate_rows(cfg)
    text = "\n".join(rows) + "\n"
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="\n") as fh:
            fh.write(text)
        if cfg.emit_plot_script and cfg.experiment != "rate":
            write_plot_script(cfg)
    else:
        stdout.write(text)
    return 0


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zenoctl", description=__doc__.splitlines()[0])
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--config", help="JSON file with RunConfig keys")
    p.add_argument("--mu0", type=float)
    p.add_argument("--mu1", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--t-prime", dest="t_prime", type=float)
    p.add_argument("--b-first", dest="b_first", type=float)
    p.add_argument("--b-total", dest="b_total", type=float)
    p.add_argument("--grid-points", dest="grid_points", type=int)
    p.add_argument("--n", dest="n_interactions", help="interaction count, or comma-separated list")
    p.add_argument("--mode", choices=[m.value for m in Mode])
    p.add_argument("--interaction", choices=[i.value for i in Interaction])
    p.add_argument("--out", dest="output_path")
    p.add_argument("--emit-plot-script", dest="emit_plot_script", action="store_true", default=None)
    return p


def main(argv=None, stdout=None) -> int:
    args = _parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if v is not None and k not in ("experiment", "config")}
    try:
        if "n_interactions" in overrides:
            try:
                overrides["n_interactions"] = [int(x) for x in overrides["n_interactions"].split(",")]
            except ValueError:
                raise ConfigError("n_interactions", f"cannot parse {overrides['n_interactions']!r}")
        file_values = {}
        if args.config:
            try:
                with open(args.config) as fh:
                    file_values = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError("config", str(exc))
            if not isinstance(file_values, dict):
                raise ConfigError("config", "top level must be a JSON object")
        cfg = build_config(args.experiment, file_values, overrides)
    except ConfigError as exc:
        print(f"zenoctl: {exc}", file=sys.stderr)
        return 1
    try:
        return run(cfg, stdout=stdout)
    except SizingError as exc:
        print(f"zenoctl: config error in 'n_interactions': {exc}", file=sys.stderr)
        return 1
    except (NumericalError, ValidationError) as exc:
        print(f"zenoctl: numerical failure: {exc}", file=sys.stderr)
        return 2


def console() -> None:
    sys.exit(main())
