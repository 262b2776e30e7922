"""Command-line interface.

Subcommands
    simulate          run a configured simulation + analyses, write artifacts
    wave              solve the bistable (or habitat-perturbed) front
    roots             characteristic tail rates and the sign prediction
    supersub-verify   build a comparison pair and verify residual signs
    bramson           logarithmic-delay fit of a tracked front
    terrace           two-front (terrace) detection run
    sweep             parameter sweep aggregating front speeds
    certify-invasion  pointwise-domination certificate from a lower pair

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 verification/certificate failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from .config import ConfigError, parse_config
from .model import ModelParams, canonical_speeds, char_roots, predict_front_sign
from .pairs import (SuperSubParams, build_pair, check_constraints,
                    evaluate_residuals, invasion_certificate)
from .runner import default_lower_pair, run_experiment, sweep, write_json
from .waves import (WaveSolveError, fit_tail_decay, solve_bistable_wave,
                    solve_perturbed_wave)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICS = 2
EXIT_VERIFY = 3

PRESETS = ("theorem1", "theorem2", "theorem3", "appendix")


def _load_config_text(args) -> str:
    if getattr(args, "preset", None):
        if args.preset not in PRESETS:
            raise ConfigError([f"unknown preset {args.preset!r}; "
                               f"choose from {', '.join(PRESETS)}"])
        ref = resources.files("lvfronts").joinpath(
            f"presets/{args.preset}.ini")
        return ref.read_text()
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.is_file():
            raise ConfigError([f"config file not found: {path}"])
        return path.read_text()
    raise ConfigError(["either --config or --preset is required"])


def _model_from_args(args) -> ModelParams:
    if getattr(args, "config", None) or getattr(args, "preset", None):
        cfg = parse_config(_load_config_text(args))
        return cfg.model_params()
    return ModelParams(d=args.d, r=args.r, a=args.a, b=args.b)


def _out_dir(args) -> Path:
    out = Path(args.out or "out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _add_model_flags(p):
    p.add_argument("--d", type=float, default=1.0)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--a", type=float, default=2.0)
    p.add_argument("--b", type=float, default=3.0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lvfronts",
        description="Fronts and spreading in the strong-competition "
                    "two-species reaction-diffusion system.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0,
                        help="seed for any randomized auxiliary sampling")
    common.add_argument("--threads", type=int, default=1)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_parser(name):
        return sub.add_parser(name, parents=[common])

    for name in ("simulate", "bramson", "terrace", "certify-invasion"):
        p = add_parser(name)
        p.add_argument("--config")
        p.add_argument("--preset", choices=PRESETS)
        p.add_argument("--out")

    p = add_parser("wave")
    _add_model_flags(p)
    p.add_argument("--config")
    p.add_argument("--preset", choices=PRESETS)
    p.add_argument("--eps", type=float, default=0.0,
                   help="habitat perturbation (solves the perturbed front)")
    p.add_argument("--domain-half-length", type=float, default=60.0)
    p.add_argument("--out")

    p = add_parser("roots")
    _add_model_flags(p)
    p.add_argument("--config")
    p.add_argument("--preset", choices=PRESETS)
    p.add_argument("--speed", type=float, default=None,
                   help="front speed; solved numerically when omitted")
    p.add_argument("--out")

    p = add_parser("supersub-verify")
    _add_model_flags(p)
    p.add_argument("--config")
    p.add_argument("--preset", choices=PRESETS)
    p.add_argument("--family", required=True,
                   choices=("lower-simple", "upper-simple",
                            "upper-two-sided", "lower-two-sided",
                            "appendix-lower"))
    p.add_argument("--p0", type=float, default=None)
    p.add_argument("--q0", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--shift0", type=float, default=None)
    p.add_argument("--shift1", type=float, default=None)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--t-end", type=float, default=200.0)
    p.add_argument("--out")

    p = add_parser("sweep")
    p.add_argument("--config")
    p.add_argument("--preset", choices=PRESETS)
    p.add_argument("--vary", action="append", default=[],
                   metavar="SECTION.KEY=V1,V2,...",
                   help="repeatable; cartesian product over all --vary flags")
    p.add_argument("--out")
    return ap


# documented defaults that satisfy each family's constraints at the
# reference parameters (d=r=1, a=2, b=3)
_FAMILY_DEFAULTS = {
    "lower-simple": dict(p0=0.05, q0=0.5, alpha=0.2, shift0=0.0, shift1=1.0),
    "upper-simple": dict(p0=0.05, q0=0.5, alpha=0.2, shift0=0.0, shift1=-1.0),
    "upper-two-sided": dict(p0=0.02, q0=0.2, alpha=0.05,
                            shift0=-20.0, shift1=-1.0),
    "lower-two-sided": dict(p0=0.02, q0=0.3, alpha=0.05,
                            shift0=-10.0, shift1=1.0),
    "appendix-lower": dict(p0=0.04, q0=0.02, alpha=0.02,
                           shift0=10.0, shift1=1.0),
}


def _cmd_wave(args) -> int:
    params = _model_from_args(args)
    if args.eps:
        wave = solve_perturbed_wave(params, args.eps,
                                    L=args.domain_half_length)
    else:
        wave = solve_bistable_wave(params, L=args.domain_half_length)
    roots = char_roots(params, wave.speed)
    fits = {}
    for side in ("-inf", "+inf"):
        for species in ("u", "v"):
            try:
                f = fit_tail_decay(wave, roots, side, species)
                fits[f"{species}_at_{side}"] = {
                    "measured": f.measured_rate, "predicted": f.predicted_rate,
                    "relative_error": f.relative_error, "gamma": f.gamma}
            except ValueError as exc:
                fits[f"{species}_at_{side}"] = {"error": str(exc)}
    report = {
        "kind": wave.kind, "speed": wave.speed, "residual": wave.residual,
        "eps": wave.eps, "limits_left": list(wave.limits_left),
        "limits_right": list(wave.limits_right), "tail_fits": fits,
    }
    out = _out_dir(args)
    write_json(out / "wave.json", report)
    from .runner import write_csv
    write_csv(out / "wave_profile.csv", ["xi", "u", "v"],
              zip(wave.xi, wave.U, wave.V))
    print(f"speed = {wave.speed:.12g}  (residual {wave.residual:.3g})")
    return EXIT_OK


def _cmd_roots(args) -> int:
    params = _model_from_args(args)
    sp = canonical_speeds(params)
    pred = predict_front_sign(params)
    c = args.speed
    if c is None:
        c = solve_bistable_wave(params).speed
    roots = char_roots(params, c)
    report = {
        "c": c, "c_u": sp.c_u, "c_v": sp.c_v,
        "lam1": roots.lam1, "lam2": roots.lam2,
        "lam3": roots.lam3, "lam4": roots.lam4,
        "Lam_plus": roots.Lam_plus, "Lam_minus": roots.Lam_minus,
        "gamma_plus": roots.gamma_plus, "gamma_minus": roots.gamma_minus,
        "sign_prediction": pred.sign.value, "clause": pred.clause,
    }
    write_json(_out_dir(args) / "roots.json", report)
    print(f"c = {c:.12g}  prediction: {pred.sign.value} ({pred.clause})")
    return EXIT_OK


def _cmd_supersub(args) -> int:
    params = _model_from_args(args)
    defaults = dict(_FAMILY_DEFAULTS[args.family])
    for key in ("p0", "q0", "alpha", "shift0", "shift1"):
        val = getattr(args, key)
        if val is not None:
            defaults[key] = val
    ssp = SuperSubParams(args.family, eps=(args.eps if
                         args.family == "appendix-lower" else 0.0), **defaults)
    if args.family == "appendix-lower":
        wave = solve_perturbed_wave(params, ssp.eps)
    else:
        wave = solve_bistable_wave(params)
    constraints = check_constraints(params, ssp, wave.speed)
    pair = build_pair(params, ssp, wave)
    rep = evaluate_residuals(pair, t_range=(0.0, args.t_end, 0.5))
    report = {
        "family": rep.family, "kind": rep.kind,
        "constraints_ok": constraints.ok,
        "constraints": constraints.clauses,
        "clean": rep.clean, "t_star": rep.t_star,
        "worst_n1": rep.worst_n1, "worst_n2": rep.worst_n2,
        "kink_fraction": rep.kink_fraction, "tolerance": rep.tol,
        "wave_speed": wave.speed,
    }
    write_json(_out_dir(args) / "supersub.json", report)
    status = "clean" if rep.clean else "violations"
    print(f"{args.family} ({rep.kind}): {status}, "
          f"valid from t = {rep.t_star}")
    return EXIT_OK if (constraints.ok and rep.clean) else EXIT_VERIFY


def _run_config_command(args, ops_override=None) -> int:
    cfg = parse_config(_load_config_text(args))
    if ops_override is not None:
        cfg.analysis["ops"] = ops_override
    out = args.out or cfg.output.get("dir", "out")
    manifest = run_experiment(cfg, out)
    for w in manifest.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if manifest.errors:
        for e in manifest.errors:
            print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERICS
    print(f"wrote {len(manifest.files)} files to {out} "
          f"({manifest.wall_seconds:.1f} s)")
    return EXIT_OK


def _cmd_bramson(args) -> int:
    code = _run_config_command(args, ops_override=["track-front", "bramson"])
    if code:
        return code
    out = Path(args.out or parse_config(
        _load_config_text(args)).output.get("dir", "out"))
    rep = json.loads((out / "bramson.json").read_text())
    print(f"kappa = {rep['kappa']:.4f} (target {rep['target_kappa']:.4f}), "
          f"sup|omega| = {rep['sup_omega']:.4f}")
    return EXIT_OK


def _cmd_terrace(args) -> int:
    code = _run_config_command(args, ops_override=["track-front", "terrace"])
    if code:
        return code
    out = Path(args.out or parse_config(
        _load_config_text(args)).output.get("dir", "out"))
    rep = json.loads((out / "terrace.json").read_text())
    print(f"terrace detected: {rep['detected']} "
          f"(u @ {rep['u_front_speed']:.4f}, v @ {rep['v_front_speed']:.4f})")
    return EXIT_OK if rep["detected"] else EXIT_VERIFY


def _cmd_certify(args) -> int:
    code = _run_config_command(args, ops_override=["certify-invasion"])
    if code:
        return code
    out = Path(args.out or parse_config(
        _load_config_text(args)).output.get("dir", "out"))
    rep = json.loads((out / "certificate.json").read_text())
    print(f"certified: {rep['certified']} (pair valid from t = "
          f"{rep['t_star']})")
    return EXIT_OK if rep["certified"] else EXIT_VERIFY


def _cmd_sweep(args) -> int:
    text = _load_config_text(args)
    if not args.vary:
        raise ConfigError(["sweep needs at least one --vary flag"])
    varying = {}
    for spec in args.vary:
        if "=" not in spec or "." not in spec.split("=", 1)[0]:
            raise ConfigError([f"--vary must look like section.key=v1,v2 "
                               f"(got {spec!r})"])
        dotted, values = spec.split("=", 1)
        varying[dotted] = [float(v) for v in values.split(",")]
    out = _out_dir(args)
    rows = sweep(text, varying, out / "sweep.csv", threads=args.threads)
    failures = sum(1 for row in rows if row["error"])
    print(f"{len(rows)} rows ({failures} failed) -> {out / 'sweep.csv'}")
    return EXIT_OK if failures == 0 else EXIT_NUMERICS


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    np.random.seed(args.seed)
    try:
        if args.command == "simulate":
            return _run_config_command(args)
        if args.command == "wave":
            return _cmd_wave(args)
        if args.command == "roots":
            return _cmd_roots(args)
        if args.command == "supersub-verify":
            return _cmd_supersub(args)
        if args.command == "bramson":
            return _cmd_bramson(args)
        if args.command == "terrace":
            return _cmd_terrace(args)
        if args.command == "certify-invasion":
            return _cmd_certify(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        raise AssertionError(args.command)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, TypeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except WaveSolveError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    except (np.linalg.LinAlgError, FloatingPointError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICS


if __name__ == "__main__":
    sys.exit(main())
