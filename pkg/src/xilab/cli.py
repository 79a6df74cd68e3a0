"""Command-line front end.

Subcommands:

* ``estimate``      one survival experiment -> curve CSV + fit JSON
* ``table1``        the built-in benchmark suite of four multiplier sets,
                    compared against their conjectured and reference values
* ``pivots``        pivot-time scan on a sampled walk
* ``dim``           exceptional-time box-dimension estimate
* ``bounds``        closed-form exponent table over an angle grid
* ``algebra-check`` simulated check that conjugate sets estimate equally

Exit codes: 0 success, 2 validation error, 3 statistical abort (no usable
statistics), 4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import bounds as bounds_mod
from .engine import (ExperimentConfig, run_experiment, write_curve_csv,
                     write_curve_sidecar)
from .errors import (FitError, StatisticalAbortError, ValidationError, XilabError)
from .exceptional import (box_counts, box_dimension, default_box_scales,
                          find_exceptional_times, pivot_scan)
from .fitting import fit_corrected, fit_exponent, fit_report, transient_window
from .lattice import random_walk
from .multiplier import MultiplierSet, parse_set_spec
from .reports import RunManifest, get_version, write_json

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_STATISTICAL = 3
EXIT_IO = 4

# benchmark rows: (set spec, conjectured value, status, reference uncorrected,
#                  reference corrected, full-scale sample count)
TABLE1_ROWS = [
    ("points:1,-1", 2.5, bounds_mod.THEOREM, 2.501293, None, 2.6e9),
    ("points:1,0+1i", 5.0 / 3.0, bounds_mod.CONJECTURE, 1.662239, 1.668242, 3.0e8),
    ("points:5,4+3i", bounds_mod.weak_pivot_conjecture(math.atan2(3, 4)),
     bounds_mod.CONJECTURE, 1.382311, 1.394610, 1.2e6),
    ("points:5,4+3i,5i", 5.0 / 3.0, bounds_mod.CONJECTURE, 1.662964, 1.665650, 1.6e7),
]
TABLE1_STEPS = 10_000
TABLE1_FULL_STEPS = 100_000
TABLE1_OFFSET = 2


def _count(text: str) -> int:
    """Parse a sample/step count, accepting scientific notation like 1e7."""
    try:
        val = float(text)
    except ValueError as exc:
        raise ValidationError(f"not a count: {text!r}") from exc
    if val < 1 or val != int(val) and val > 1e15:
        raise ValidationError(f"count must be a positive integer: {text!r}")
    return int(round(val))


def _scale_pair(text: str) -> tuple[int, int]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ValidationError(f"scale must look like EPS:R, got {text!r}")
    eps, r = (_count(p) for p in parts)
    if not eps < r:
        raise ValidationError("scale requires epsilon < R")
    return eps, r


def _alpha_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(f"alpha grid must look like START:STOP:STEP, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise ValidationError(f"bad alpha grid {text!r}") from exc
    if step <= 0 or stop < start:
        raise ValidationError("alpha grid needs step > 0 and stop >= start")
    out = []
    k = 0
    while True:
        a = start + k * step
        if a > stop + 1e-12:
            break
        out.append(round(a, 12))
        k += 1
    return out


def _window(text: str) -> tuple[int, int]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ValidationError(f"window must look like TMIN:TMAX, got {text!r}")
    lo, hi = (_count(p) for p in parts)
    if lo >= hi:
        raise ValidationError("window requires TMIN < TMAX")
    return lo, hi


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _run_and_fit(cfg: ExperimentConfig, window):
    t0 = time.perf_counter()
    curve = run_experiment(cfg)
    wall = time.perf_counter() - t0
    if curve.survivors[0] == 0:
        raise StatisticalAbortError(
            "zero survivors at the smallest horizon; increase the start offset "
            "or shrink the multiplier set"
        )
    plain = fit_exponent(curve, window)
    try:
        corrected = fit_corrected(curve, window)
    except FitError as exc:
        corrected = exc
    return curve, wall, plain, corrected


def cmd_estimate(args) -> int:
    multiplier = parse_set_spec(args.set)
    cfg = ExperimentConfig(
        multiplier=multiplier,
        max_steps=_count(args.steps),
        n_samples=_count(args.samples),
        seed=args.seed,
        offset=args.offset,
        workers=args.workers,
    )
    manifest = RunManifest(
        command="estimate",
        params={"set": multiplier.descriptor(), "samples": cfg.n_samples,
                "steps": cfg.max_steps, "offset": cfg.offset,
                "workers": cfg.workers,
                "window": list(args.window) if args.window else None},
        seed=args.seed,
    )
    out = _outdir(args)
    window = args.window if args.window else transient_window(multiplier)
    curve, wall, plain, corrected = _run_and_fit(cfg, window)

    curve_path = manifest.add_output(out / "curve.csv")
    write_curve_csv(curve, curve_path)
    sidecar_path = manifest.add_output(out / "curve.json")
    write_curve_sidecar(curve, cfg, wall, get_version(), sidecar_path)
    fit_payload = {
        "set": curve.set_descriptor,
        "plain": fit_report(plain),
        "corrected": (fit_report(corrected)
                      if not isinstance(corrected, FitError)
                      else {"error": str(corrected)}),
    }
    fit_path = manifest.add_output(out / "fit.json")
    write_json(fit_payload, fit_path)
    manifest.write(out / "manifest.json")
    print(f"xi_hat = {plain.xi_hat:.6f} +- {plain.stderr:.6f} "
          f"(window {plain.window[0]}..{plain.window[1]}, {wall:.1f}s)")
    if not isinstance(corrected, FitError):
        print(f"xi_hat_corrected = {corrected.xi_hat:.6f} "
              f"+- {corrected.stderr:.6f} (b = {corrected.correction_coeff:.4f})")
    return EXIT_OK


def cmd_table1(args) -> int:
    if not 0 < args.scale <= 1:
        raise ValidationError("scale factor must lie in (0, 1]")
    if args.full_scale and not args.yes:
        print("full-scale benchmark configuration (NOT run without --yes):")
        for spec, conj, status, ref, ref_corr, full in TABLE1_ROWS:
            print(f"  {spec:22s} samples={full:.3g} steps={TABLE1_FULL_STEPS} "
                  f"offset={TABLE1_OFFSET}")
        print("expect days of compute at this scale; rerun with --yes to launch")
        return EXIT_OK
    steps = TABLE1_FULL_STEPS if args.full_scale else TABLE1_STEPS
    out = _outdir(args)
    manifest = RunManifest(
        command="table1",
        params={"scale": args.scale, "steps": steps, "workers": args.workers,
                "full_scale": bool(args.full_scale)},
        seed=args.seed,
    )
    rows = []
    for i, (spec, conj, status, ref, ref_corr, full) in enumerate(TABLE1_ROWS):
        n = max(1, int(round(full * args.scale)))
        row = {
            "set": spec,
            "conjectured": conj,
            "conjectured_status": status,
            "reference": ref,
            "reference_corrected": ref_corr,
            "samples": n,
        }
        try:
            cfg = ExperimentConfig(
                multiplier=parse_set_spec(spec),
                max_steps=steps,
                n_samples=n,
                seed=args.seed + i,
                offset=TABLE1_OFFSET,
                workers=args.workers,
            )
            curve, wall, plain, corrected = _run_and_fit(
                cfg, transient_window(cfg.multiplier))
            row.update({
                "computed": plain.xi_hat,
                "computed_stderr": plain.stderr,
                "rel_err": plain.xi_hat / conj - 1.0,
                "wall_time_s": wall,
            })
            if not isinstance(corrected, FitError):
                row.update({
                    "corrected": corrected.xi_hat,
                    "corrected_stderr": corrected.stderr,
                    "rel_err_corrected": corrected.xi_hat / conj - 1.0,
                })
            else:
                row["corrected_error"] = str(corrected)
        except (XilabError, ValidationError) as exc:
            row["error"] = str(exc)
        rows.append(row)
        got = row.get("computed")
        print(f"{spec:22s} conj={conj:.6f} [{status}] "
              + (f"computed={got:.6f}" if got is not None
                 else f"FAILED: {row.get('error')}"))

    table_path = manifest.add_output(out / "table1.csv")
    cols = ["set", "conjectured", "conjectured_status", "reference",
            "reference_corrected", "samples", "computed", "computed_stderr",
            "corrected", "corrected_stderr", "rel_err", "rel_err_corrected",
            "error"]
    import csv as _csv
    with open(table_path, "w", newline="") as fh:
        writer = _csv.DictWriter(fh, fieldnames=cols, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    write_json({"rows": rows}, manifest.add_output(out / "table1.json"))
    manifest.write(out / "manifest.json")
    return EXIT_OK


def cmd_pivots(args) -> int:
    eps, big_r = args.scale
    steps = _count(args.steps)
    resolution = args.resolution
    if args.angle <= 0:
        raise ValidationError("target angle must be positive")
    out = _outdir(args)
    manifest = RunManifest(
        command="pivots",
        params={"angle": args.angle, "steps": steps, "scale": [eps, big_r],
                "resolution": resolution, "stride": args.stride,
                "full_angles": bool(args.full_angles)},
        seed=args.seed,
    )
    path = random_walk(steps, args.seed)
    cut = find_exceptional_times(path, MultiplierSet.from_points(1),
                                 eps, big_r, args.stride)
    cap = None if args.full_angles else max(args.angle, resolution)
    reports = pivot_scan(path, cut.times, eps, big_r, resolution, theta_cap=cap)
    pivots = [r for r in reports if r.max_angle >= args.angle]

    import csv as _csv
    csv_path = manifest.add_output(out / "pivots.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(["t", "max_angle", "truncated", "revisited"])
        for r in reports:
            writer.writerow([r.t, f"{r.max_angle:.10g}", int(r.truncated),
                             int(r.revisited)])
    payload = {
        "status": "simulation",
        "steps": steps,
        "scale": [eps, big_r],
        "stride": cut.stride,
        "candidate_cut_times": int(len(cut.times)),
        "skipped_positions": cut.skipped,
        "angle": args.angle,
        "angular_resolution": resolution,
        "pivot_count": len(pivots),
        "pivot_times": [r.t for r in pivots],
        "provable_angle_threshold": bounds_mod.PIVOT_ANGLE_THRESHOLD,
        "realized_eps_radius": cut.realized_eps_radius,
        "realized_R_radius": cut.realized_r_radius,
    }
    write_json(payload, manifest.add_output(out / "pivots.json"))
    manifest.write(out / "manifest.json")
    print(f"{len(pivots)} pivot times of angle >= {args.angle:.4f} "
          f"among {len(cut.times)} cut-time candidates")
    return EXIT_OK


def cmd_dim(args) -> int:
    eps, big_r = args.scale
    steps = _count(args.steps)
    multiplier = parse_set_spec(args.set)
    out = _outdir(args)
    manifest = RunManifest(
        command="dim",
        params={"set": multiplier.descriptor(), "steps": steps,
                "scale": [eps, big_r], "stride": args.stride},
        seed=args.seed,
    )
    path = random_walk(steps, args.seed)
    scan = find_exceptional_times(path, multiplier, eps, big_r, args.stride)
    if len(scan.times) == 0:
        raise StatisticalAbortError("no exceptional times found; nothing to measure")
    scales = default_box_scales(steps)
    dim = box_dimension(scan.times, steps, scales)
    counts = box_counts(scan.times, scales)
    payload = {
        "status": "simulation",
        "set": multiplier.descriptor(),
        "steps": steps,
        "scale": [eps, big_r],
        "stride": scan.stride,
        "times_found": int(len(scan.times)),
        "skipped_positions": scan.skipped,
        "box_scales": list(scales),
        "box_counts": counts,
        "dimension": dim,
        "realized_eps_radius": scan.realized_eps_radius,
        "realized_R_radius": scan.realized_r_radius,
    }
    if multiplier.descriptor() == "points:1":
        payload["predicted_dimension"] = 1.0 - bounds_mod.nfold_exact(1) / 2.0
        payload["predicted_status"] = bounds_mod.THEOREM
    write_json(payload, manifest.add_output(out / "dim.json"))
    import csv as _csv
    csv_path = manifest.add_output(out / "dim.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(["box_scale", "occupied_boxes"])
        for d, c in zip(scales, counts):
            writer.writerow([d, c])
    manifest.write(out / "manifest.json")
    print(f"box dimension = {dim:.4f} from {len(scan.times)} times")
    return EXIT_OK


def cmd_bounds(args) -> int:
    alphas = _alpha_grid(args.alpha_grid)
    bad = [a for a in alphas if not 0 <= a < 2 * math.pi]
    if bad:
        raise ValidationError("alpha grid must stay inside [0, 2*pi)")
    rows = bounds_mod.bounds_rows(alphas)
    out = _outdir(args)
    manifest = RunManifest(command="bounds",
                           params={"alpha_grid": args.alpha_grid,
                                   "format": args.format},
                           seed=None)
    if args.format == "json":
        write_json({"rows": rows}, manifest.add_output(out / "bounds.json"))
    else:
        import csv as _csv
        csv_path = manifest.add_output(out / "bounds.csv")
        with open(csv_path, "w", newline="") as fh:
            writer = _csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            for row in rows:
                writer.writerow(row)
    manifest.write(out / "manifest.json")
    for row in rows:
        wp = row["weak_pivot"]
        wp_text = f"{wp:.6f} [{row['weak_pivot_status']}]" if wp is not None else "-"
        print(f"alpha={row['alpha']:.4f}  wedge={row['wedge_exact']:.6f} "
              f"[{row['wedge_status']}]  pivot_bound={row['pivot_upper_bound']:.6f} "
              f"[{row['pivot_upper_status']}]  weak_pivot={wp_text}")
    return EXIT_OK


def cmd_algebra_check(args) -> int:
    multiplier = parse_set_spec(args.set)
    conj = multiplier.conjugated()
    n = _count(args.samples)
    steps = _count(args.steps)
    out = _outdir(args)
    manifest = RunManifest(
        command="algebra-check",
        params={"set": multiplier.descriptor(), "samples": n, "steps": steps,
                "workers": args.workers},
        seed=args.seed,
    )
    results = {}
    for tag, mset, offset in (("set", multiplier, 0), ("conjugate", conj, n)):
        cfg = ExperimentConfig(multiplier=mset, max_steps=steps, n_samples=n,
                               seed=args.seed, workers=args.workers,
                               sample_offset=offset)
        _, _, plain, _ = _run_and_fit(cfg, transient_window(mset))
        results[tag] = plain
    a, b = results["set"], results["conjugate"]
    joint = math.hypot(a.stderr, b.stderr)
    agree = abs(a.xi_hat - b.xi_hat) <= 2 * joint
    payload = {
        "status": "simulation",
        "set": multiplier.descriptor(),
        "conjugate": conj.descriptor(),
        "xi_set": a.xi_hat, "stderr_set": a.stderr,
        "xi_conjugate": b.xi_hat, "stderr_conjugate": b.stderr,
        "difference": a.xi_hat - b.xi_hat,
        "joint_stderr": joint,
        "agree_within_2se": bool(agree),
    }
    write_json(payload, manifest.add_output(out / "algebra_check.json"))
    manifest.write(out / "manifest.json")
    print(f"xi({multiplier.descriptor()}) = {a.xi_hat:.5f} +- {a.stderr:.5f}")
    print(f"xi({conj.descriptor()}) = {b.xi_hat:.5f} +- {b.stderr:.5f}")
    print("agreement within 2 joint stderr: " + ("yes" if agree else "NO"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xilab",
        description="Monte Carlo laboratory for non-intersection exponents "
                    "of planar random walks",
    )
    parser.add_argument("--version", action="version", version=get_version())
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        if seed:
            p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default="xilab-out", help="output directory")
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("estimate", help="estimate one exponent by simulation")
    p.add_argument("--set", required=True, help="multiplier set spec, e.g. points:1,-1")
    p.add_argument("--samples", required=True)
    p.add_argument("--steps", required=True)
    p.add_argument("--offset", type=int, default=None, help="start offset a of S2")
    p.add_argument("--window", type=_window, default=None,
                   help="fit window TMIN:TMAX in steps")
    common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("table1", help="run the built-in benchmark suite")
    p.add_argument("--scale", type=float, default=0.01,
                   help="fraction of the full-scale sample counts to run")
    p.add_argument("--full-scale", action="store_true",
                   help="show (and with --yes, run) the full-scale configuration")
    p.add_argument("--yes", action="store_true",
                   help="confirm running the full-scale configuration")
    common(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("pivots", help="scan a walk for pivoting points")
    p.add_argument("--angle", type=float, required=True,
                   help="target pivot angle in radians")
    p.add_argument("--steps", default="1e5")
    p.add_argument("--scale", type=_scale_pair, default=(10, 1000),
                   help="window scales EPS:R in steps")
    p.add_argument("--resolution", type=float, default=2 * math.pi / 512)
    p.add_argument("--stride", type=int, default=None)
    p.add_argument("--full-angles", action="store_true",
                   help="scan each candidate to its true maximal angle")
    common(p)
    p.set_defaults(func=cmd_pivots)

    p = sub.add_parser("dim", help="box dimension of the exceptional-time set")
    p.add_argument("--set", default="points:1")
    p.add_argument("--steps", default="1e6")
    p.add_argument("--scale", type=_scale_pair, default=(16, 4096))
    p.add_argument("--stride", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("bounds", help="closed-form exponent table")
    p.add_argument("--alpha-grid", default="0:3.0:0.1")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default="xilab-out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("algebra-check",
                       help="check that a set and its conjugate estimate equally")
    p.add_argument("--set", required=True)
    p.add_argument("--samples", default="1e6")
    p.add_argument("--steps", default="1e4")
    common(p)
    p.set_defaults(func=cmd_algebra_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (StatisticalAbortError, FitError) as exc:
        print(f"statistical abort: {exc}", file=sys.stderr)
        return EXIT_STATISTICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
