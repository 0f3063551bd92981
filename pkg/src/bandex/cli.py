"""Command-line interface for the benchmark harness.

Subcommands: ``run`` executes a sweep config and writes CSV + metadata,
``coherence`` dumps a coherence profile CSV, ``list-algorithms`` prints the
registry, ``validate`` checks a config file.  Worker count falls back to the
BANDEX_WORKERS environment variable.
"""

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from . import bench
from .bench import ConfigError, ExperimentConfig
from .coherence import coherence_profile
from .models import GridSpec, spectral_matrix


def _load_config(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    raw.setdefault("name", os.path.splitext(os.path.basename(path))[0])
    return ExperimentConfig.from_dict(raw)


def _resolve_workers(args):
    if args.workers is not None:
        return args.workers
    env = os.environ.get("BANDEX_WORKERS")
    if env:
        try:
            return max(int(env), 1)
        except ValueError:
            raise ConfigError(f"BANDEX_WORKERS must be an integer, got {env!r}")
    return 1


def _cmd_run(args):
    cfg = _load_config(args.config)
    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["base_seed"] = args.seed
    if args.full_range:
        overrides["full_range"] = True
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides).validate()
    workers = _resolve_workers(args)
    result = bench.run_sweep(cfg, workers=workers)
    stem = os.path.splitext(os.path.basename(args.config))[0]
    csv_path, meta_path = bench.write_outputs(result, args.out, stem)
    extras = []
    if cfg.ensemble == "frame":
        extras.append(_write_frame_coefficients(cfg, args.out, stem))
    for warning in result.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(f"wrote {csv_path}, {meta_path}" + "".join(f", {p}" for p in extras))
    return 0


def _write_frame_coefficients(cfg, out_dir, stem):
    # Analysis-coefficient decay of the first instance (rank vs magnitude).
    from .models import frame_model, make_objects
    import math

    c = bench._substituted(cfg, 0)
    rng = np.random.default_rng(bench.trial_seed(cfg, 0, 0))
    fm = frame_model(
        c.n_samples, c.span_rl, c.refinement,
        sigma=1.0 / math.sqrt(c.n_samples), rng=rng,
    )
    grid = fm.sensing.grid
    sig = make_objects(c.sparsity, c.dynamic_range, c.min_sep_rl, grid, rng)
    profile = bench.analysis_coefficient_profile(fm, sig)
    path = os.path.join(out_dir, f"{stem}.coeffs.csv")
    with open(path, "w") as fh:
        fh.write("rank,magnitude\n")
        for rank, mag in enumerate(profile):
            fh.write(f"{rank},{format(float(mag), '.17g')}\n")
    return path


def _cmd_coherence(args):
    cfg = _load_config(args.config)
    grid = GridSpec(cfg.refinement, cfg.span_rl)
    sensing = spectral_matrix(cfg.n_samples, grid, cfg.base_seed)
    sep, mean = coherence_profile(sensing, max_separation_rl=args.max_rl)
    os.makedirs(args.out, exist_ok=True)
    stem = os.path.splitext(os.path.basename(args.config))[0]
    path = os.path.join(args.out, f"{stem}.coherence.csv")
    with open(path, "w") as fh:
        fh.write("separation_rl,mean_coherence\n")
        for s_rl, mu in zip(sep, mean):
            fh.write(
                f"{format(float(s_rl), '.17g')},{format(float(mu), '.17g')}\n"
            )
    print(f"wrote {path}")
    return 0


def _cmd_list_algorithms(_args):
    for name, description in bench.list_algorithms():
        print(f"{name:18s} {description}")
    return 0


def _cmd_validate(args):
    cfg = _load_config(args.config)
    print(f"config ok: {cfg.name} ({len(cfg.sweep_values)} sweep values, "
          f"{len(cfg.algorithms)} algorithms, {cfg.trials} trials)")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bandex",
        description="Monte-Carlo benchmarks for band-excluded sparse recovery",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a sweep config")
    run_p.add_argument("config")
    run_p.add_argument("--out", default="results", help="output directory")
    run_p.add_argument("--trials", type=int, default=None)
    run_p.add_argument("--seed", type=int, default=None)
    run_p.add_argument("--workers", type=int, default=None)
    run_p.add_argument("--full-range", action="store_true",
                       help="allow dynamic ranges beyond 1e8")
    run_p.set_defaults(func=_cmd_run)

    coh_p = sub.add_parser("coherence", help="dump a coherence profile CSV")
    coh_p.add_argument("config")
    coh_p.add_argument("--out", default="results")
    coh_p.add_argument("--max-rl", type=float, default=3.0,
                       help="profile extent in Rayleigh lengths")
    coh_p.set_defaults(func=_cmd_coherence)

    list_p = sub.add_parser("list-algorithms", help="print the algorithm registry")
    list_p.set_defaults(func=_cmd_list_algorithms)

    val_p = sub.add_parser("validate", help="check a config file")
    val_p.add_argument("config")
    val_p.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
