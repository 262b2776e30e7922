"""Experiment orchestration: single runs, sweeps, deterministic output.

run_experiment executes a simulation plus the analyses requested in the
config and writes CSV/JSON artifacts with a manifest (config echo,
versions, warnings, file checksums).  Identical configs produce identical
bytes for every data file.  sweep patches a template config over a
parameter lattice, executes rows concurrently and aggregates key scalars
into one CSV, recording per-row failures without aborting the sweep.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .config import ExperimentConfig, parse_config
from .model import canonical_speeds, predict_front_sign, char_roots
from .sim import simulate, make_initial
from .waves import solve_bistable_wave, WaveSolveError
from .fronts import (track_front, estimate_speed, fit_bramson, estimate_shift,
                     segregation_metric, detect_terrace)
from .pairs import (SuperSubParams, build_pair, check_constraints,
                    evaluate_residuals, invasion_certificate)

__all__ = ["RunManifest", "run_experiment", "sweep", "default_lower_pair"]


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True,
                               default=_jsonable) + "\n")


def _jsonable(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, float) and math.isinf(o):
        return "inf"
    raise TypeError(type(o))


def _checksum(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


@dataclass
class RunManifest:
    config: dict
    version: str
    wall_seconds: float
    warnings: list
    errors: list
    files: dict  # name -> sha256

    def to_dict(self) -> dict:
        return {
            "config": self.config, "version": self.version,
            "wall_seconds": self.wall_seconds, "warnings": self.warnings,
            "errors": self.errors, "files": self.files,
        }


def default_lower_pair(params, wave):
    """A documented lower-two-sided parameter set used by the invasion
    certificate when none is supplied: small sagging amplitude, slow decay,
    fronts glued well inside the support."""
    q0 = 0.3
    p0 = 0.02
    bound = min(0.25, max(wave.speed, 0.0))
    alpha = min(0.05, 0.5 * bound) if bound > 0 else 0.05
    ssp = SuperSubParams("lower-two-sided", p0=p0, q0=q0, alpha=alpha,
                         shift0=-10.0, shift1=1.0)
    return build_pair(params, ssp, wave)


def run_experiment(cfg: ExperimentConfig, out_dir: str | Path) -> RunManifest:
    """Run the configured simulation and analyses; write files + manifest."""
    t_start = time.perf_counter()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    warnings: list[str] = []
    errors: list[str] = []
    files: dict[str, str] = {}

    params = cfg.model_params()
    grid = cfg.grid_obj()
    ic = cfg.initial_condition()
    an = cfg.analysis
    t_end = an.get("t_end", 100.0)
    dt = an.get("dt")
    every = an.get("output_every", max(t_end / 50.0, 1.0))
    output_times = np.arange(0.0, t_end + every / 2, every)
    ops = an.get("ops", ["track-front"])
    if dt is None:
        # round down so the output interval is an integer number of steps
        from .sim import default_dt
        dt = every / math.ceil(every / default_dt(params, grid))

    traj = simulate(params, grid, ic, t_end, output_times=output_times, dt=dt)
    if traj.boundary_warning:
        warnings.append("front within 20 dx of a boundary")

    # snapshots
    rows = []
    x = grid.x
    for s in traj.snapshots:
        for i in range(grid.n):
            rows.append((s.t, x[i], s.u[i], s.v[i]))
    write_csv(out / "snapshots.csv", ["t", "x", "u", "v"], rows)

    sp = canonical_speeds(params)
    meta = {
        "params": cfg.model, "grid": cfg.grid, "ic": cfg.ic,
        "scheme": {"dt": traj.dt, "dx": grid.dx, "type": "explicit-euler"},
        "speeds": {"c_u": sp.c_u, "c_v": sp.c_v},
        "version": __version__,
    }
    write_json(out / "run.json", meta)

    wave = None

    def get_wave():
        nonlocal wave
        if wave is None:
            wave = solve_bistable_wave(params)
            meta["speeds"]["c_uv"] = wave.speed
        return wave

    window = (an.get("window_start", 0.5 * t_end),
              an.get("window_end", t_end))
    level = an.get("level", 0.5)

    for op in ops:
        try:
            if op == "track-front":
                for species in ("u", "v"):
                    tr = track_front(traj, species, level, "max")
                    write_csv(out / f"front_{species}.csv",
                              ["t", "position"],
                              zip(tr.times, tr.positions))
            elif op == "speed":
                res = {}
                for species in ("u", "v"):
                    tr = track_front(traj, species, level, "max")
                    try:
                        est = estimate_speed(tr, window)
                        res[species] = {"speed": est.speed,
                                        "halfwidth": est.halfwidth,
                                        "n": est.n_points}
                    except ValueError as exc:
                        res[species] = {"error": str(exc)}
                write_json(out / "speed.json", res)
            elif op == "bramson":
                tr = track_front(traj, "u", level, "max")
                c = an.get("assumed_speed", sp.c_u)
                fit = fit_bramson(tr, c, window)
                write_csv(out / "bramson.csv", ["t", "omega"],
                          zip(fit.times, fit.omega))
                write_json(out / "bramson.json", {
                    "c": fit.c, "kappa": fit.kappa, "t0": fit.t0,
                    "offset": fit.offset, "sup_omega": fit.sup_omega,
                    "rmse": fit.rmse, "window": fit.window,
                    "target_kappa": 3.0 * params.d / sp.c_u,
                })
            elif op == "shift":
                w = get_wave()
                series = []
                for s in traj.snapshots:
                    if s.t < window[0] or s.t > window[1]:
                        continue
                    center = an.get("expected_center", w.speed * s.t)
                    est = estimate_shift(s, grid, w, center)
                    series.append({"t": s.t, "shift": est.shift,
                                   "distance": est.distance,
                                   "unimodal": est.unimodal})
                gap = (max(e["shift"] for e in series)
                       - min(e["shift"] for e in series)) if series else None
                write_json(out / "shift.json",
                           {"series": series, "max_pairwise_gap": gap})
            elif op == "segregation":
                w = get_wave()
                c = an.get("cone_speed", 0.5 * w.speed)
                seg = segregation_metric(traj, c)
                if seg.truncated:
                    warnings.append("segregation cone exceeded the grid")
                write_csv(out / "segregation.csv", ["t", "value"],
                          zip(seg.times, seg.values))
                write_json(out / "segregation.json", {
                    "c": seg.c, "decay_rate": seg.decay_rate,
                    "r_squared": seg.r_squared, "truncated": seg.truncated,
                })
            elif op == "terrace":
                w = get_wave()
                rep = detect_terrace(traj, w.speed, wave=w)
                write_json(out / "terrace.json", {
                    "detected": rep.detected,
                    "u_front_speed": rep.u_front_speed,
                    "v_front_speed": rep.v_front_speed,
                    "c_mid": rep.c_mid, "u_beyond_mid": rep.u_beyond_mid,
                    "behind_distance": rep.behind_distance,
                    "notes": rep.notes,
                })
            elif op == "certify-invasion":
                w = get_wave()
                pair = default_lower_pair(params, w)
                rep = evaluate_residuals(pair)
                # the pair is autonomous in time, so any solution snapshot
                # may be compared against the pair at its validated start
                state0 = make_initial(grid, ic)
                cert0 = invasion_certificate(state0.u, state0.v, grid.x,
                                             pair, rep.t_star)
                last = traj.snapshots[-1]
                cert1 = invasion_certificate(last.u, last.v, grid.x,
                                             pair, rep.t_star)
                write_json(out / "certificate.json", {
                    "certified": cert0.ok or cert1.ok,
                    "initial": {"certified": cert0.ok,
                                "margin_u": cert0.margin_u,
                                "margin_v": cert0.margin_v},
                    "final_snapshot": {"t": last.t, "certified": cert1.ok,
                                       "margin_u": cert1.margin_u,
                                       "margin_v": cert1.margin_v},
                    "pair_clean": rep.clean, "t_star": rep.t_star,
                })
            else:
                errors.append(f"unknown op {op!r}")
        except (ValueError, WaveSolveError) as exc:
            errors.append(f"{op}: {exc}")

    for f in sorted(out.iterdir()):
        if f.name != "manifest.json" and f.is_file():
            files[f.name] = _checksum(f)

    manifest = RunManifest(
        config=cfg.echo(), version=__version__,
        wall_seconds=time.perf_counter() - t_start,
        warnings=warnings, errors=errors, files=files,
    )
    write_json(out / "manifest.json", manifest.to_dict())
    return manifest


def _patch(cfg_text: str, assignments: dict) -> ExperimentConfig:
    cfg = parse_config(cfg_text)
    for dotted, value in assignments.items():
        section, key = dotted.split(".", 1)
        getattr(cfg, section)[key] = value
    return cfg


def _sweep_row(cfg_text, assignments):
    row = dict(assignments)
    try:
        cfg = _patch(cfg_text, assignments)
        params = cfg.model_params()
        pred = predict_front_sign(params)
        wave = solve_bistable_wave(params)
        roots = char_roots(params, wave.speed)
        row.update(c_uv=wave.speed, prediction=pred.sign.value,
                   lam1=roots.lam1, lam4=roots.lam4,
                   residual=wave.residual, error="")
    except Exception as exc:  # per-row failures must not kill the sweep
        row.update(c_uv=math.nan, prediction="", lam1=math.nan,
                   lam4=math.nan, residual=math.nan, error=str(exc))
    return row


def sweep(cfg_text: str, varying: dict[str, list], out_path: str | Path,
          threads: int = 1) -> list[dict]:
    """Cartesian sweep over `varying` ({"model.b": [...], ...}).

    Each row solves the bistable wave and records c_uv, the sign
    prediction and tail rates; failures are recorded per-row.  Rows run
    concurrently with `threads` workers; the aggregate CSV row order is
    the deterministic lattice order regardless of completion order.
    """
    keys = list(varying)
    lattice: list[dict] = [{}]
    for key in keys:
        lattice = [dict(pt, **{key: v}) for pt in lattice for v in varying[key]]
    if len(lattice) > 10_000:
        raise ValueError("sweep lattice exceeds 10^4 points")

    if lattice == [{}]:
        rows = []
    elif threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda a: _sweep_row(cfg_text, a), lattice))
    else:
        rows = [_sweep_row(cfg_text, a) for a in lattice]

    header = keys + ["c_uv", "prediction", "lam1", "lam4", "residual", "error"]
    write_csv(Path(out_path), header,
              ([row[k] for k in header] for row in rows))
    return rows
