"""Command-line front end.

Subcommands: pair-energy, self-energy, force, sweep, validate. Scenes are
JSON documents (see docs/scene_schema.json); results are single-line JSON
records or CSV sweeps with '.' decimals, byte-stable across runs.

Exit codes: 0 success, 1 validation failure, 2 bad input (schema, sweep
path, geometry domain), 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor

from . import interactions, validate
from .core import ConvergenceError, CoulombError, SceneError
from .scene import Scene, load_scene, parse_scene, set_scene_value

_THREADS_ENV = "GREENS_COULOMB_THREADS"


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _scene_from_args(args) -> Scene:
    scene = load_scene(args.scene)
    opts = scene.options
    changed = {}
    if getattr(args, "local_field", False):
        changed["local_field"] = True
    if getattr(args, "units", None):
        changed["units"] = args.units
    if getattr(args, "rel_tol", None) is not None:
        changed["rel_tol"] = args.rel_tol
    if changed:
        from dataclasses import replace
        opts = replace(opts, **changed)
    return Scene(scene.geometry, scene.charges, opts)


def _threads(args, scene: Scene) -> int:
    if getattr(args, "threads", None):
        return args.threads
    if scene.options.threads:
        return scene.options.threads
    env = os.environ.get(_THREADS_ENV)
    if env:
        try:
            n = int(env)
            if n >= 1:
                return n
        except ValueError:
            pass
    return 1


def _energy_record(scene: Scene) -> dict:
    spec = scene.options.quad_spec()
    if len(scene.charges) == 2:
        res = interactions.pair_energy(scene.geometry, scene.charges[0],
                                       scene.charges[1], spec)
    else:
        res = interactions.self_energy(scene.geometry, scene.charges[0], spec)
    return {"U_joules": res.energy, "ratio_to_free": res.ratio_to_free,
            "abs_err": res.abs_err}


def cmd_pair_energy(args) -> int:
    scene = _scene_from_args(args)
    if len(scene.charges) != 2:
        raise SceneError("pair-energy needs a scene with exactly 2 charges")
    rec = _energy_record(scene)
    rec["units"] = scene.options.units
    _emit(json.dumps(rec), args.out)
    return 0


def cmd_self_energy(args) -> int:
    scene = _scene_from_args(args)
    if len(scene.charges) != 1:
        raise SceneError("self-energy needs a scene with exactly 1 charge")
    rec = _energy_record(scene)
    rec["units"] = scene.options.units
    _emit(json.dumps(rec), args.out)
    return 0


def cmd_force(args) -> int:
    scene = _scene_from_args(args)
    spec = scene.options.quad_spec()
    b = scene.charges[1] if len(scene.charges) == 2 else None
    res = interactions.force_on_A(scene.geometry, scene.charges[0], b,
                                  apply_local_field=scene.options.local_field,
                                  spec=spec)
    rec = {"F_newtons": [float(c) for c in res.force],
           "local_field_factor": res.local_field_factor_applied,
           "units": scene.options.units}
    _emit(json.dumps(rec), args.out)
    return 0


def cmd_sweep(args) -> int:
    try:
        with open(args.scene) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SceneError(f"cannot read scene file: {exc}") from exc
    base_scene = parse_scene(doc)  # validate before sweeping

    if args.num < 1:
        raise SceneError("sweep needs --num >= 1")
    if args.num == 1:
        values = [args.min]
    elif args.log:
        if args.min <= 0 or args.max <= 0:
            raise SceneError("--log sweep needs positive bounds")
        step = (math.log(args.max) - math.log(args.min)) / (args.num - 1)
        values = [math.exp(math.log(args.min) + i * step) for i in range(args.num)]
    else:
        step = (args.max - args.min) / (args.num - 1)
        values = [args.min + i * step for i in range(args.num)]
    values.sort()

    # fail fast on a bad path before any work
    set_scene_value(doc, args.param, values[0])

    def run_one(v: float):
        scene = parse_scene(set_scene_value(doc, args.param, v))
        if getattr(args, "rel_tol", None) is not None:
            from dataclasses import replace
            scene = Scene(scene.geometry, scene.charges,
                          replace(scene.options, rel_tol=args.rel_tol))
        rec = _energy_record(scene)
        return rec

    n_threads = _threads(args, base_scene)
    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            records = list(pool.map(run_one, values))
    else:
        records = [run_one(v) for v in values]

    lines = ["param,U,ratio_to_free,abs_err"]
    for v, rec in zip(values, records):
        ratio = "" if rec["ratio_to_free"] is None else repr(rec["ratio_to_free"])
        lines.append(f"{v!r},{rec['U_joules']!r},{ratio},{rec['abs_err']!r}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_validate(args) -> int:
    try:
        results = validate.run_suite(args.suite)
    except ValueError as exc:
        raise SceneError(str(exc)) from exc
    text = "\n".join(r.line() for r in results) + "\n"
    n_fail = sum(not r.passed for r in results)
    text += f"{len(results) - n_fail}/{len(results)} checks passed\n"
    _emit(text, args.out)
    return 0 if n_fail == 0 else 1


# argparse's stock negative-number detection misses scientific notation, so
# `sweep --min -5e-6` would be read as an unknown option; widen the matcher
_NEGATIVE_NUMBER = re.compile(r"^-(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?$")


def _accept_negative_numbers(parser: argparse.ArgumentParser) -> None:
    parser._negative_number_matcher = _NEGATIVE_NUMBER


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="greens-coulomb",
        description="Environment-modified Coulomb interactions from static "
                    "electrostatic Green's functions")
    _accept_negative_numbers(ap)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, scene=True):
        if scene:
            p.add_argument("--scene", required=True, help="scene JSON file")
        p.add_argument("--out", default=None, help="write the result here")
        p.add_argument("--units", choices=("si", "ratio"), default=None)
        p.add_argument("--local-field", dest="local_field", action="store_true")
        p.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)
        p.add_argument("--threads", type=int, default=None,
                       help=f"worker threads (or ${_THREADS_ENV})")

    p = sub.add_parser("pair-energy", help="interaction energy of two charges")
    common(p)
    p.set_defaults(fn=cmd_pair_energy)

    p = sub.add_parser("self-energy", help="single-charge surface interaction")
    common(p)
    p.set_defaults(fn=cmd_self_energy)

    p = sub.add_parser("force", help="force on the first charge")
    common(p)
    p.set_defaults(fn=cmd_force)

    p = sub.add_parser("sweep", help="sweep one numeric scene parameter to CSV")
    _accept_negative_numbers(p)
    common(p)
    p.add_argument("--param", required=True,
                   help="dotted path, e.g. geometry.R or charges.1.position.2")
    p.add_argument("--min", type=float, required=True)
    p.add_argument("--max", type=float, required=True)
    p.add_argument("--num", type=int, required=True)
    p.add_argument("--log", action="store_true", help="logarithmic spacing")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("validate", help="run a validation suite")
    p.add_argument("suite", choices=("limits", "oracle", "quadrature", "all"))
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_validate)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConvergenceError as exc:
        print(f"error (numerical non-convergence): {exc}", file=sys.stderr)
        return 3
    except SceneError as exc:
        print(f"error (scene): {exc}", file=sys.stderr)
        return 2
    except CoulombError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
