"""Command-line front end.

Three verbs share a TOML config file and an output directory:

  run:    Monte-Carlo trials over the configured arms and power levels;
          writes trials.csv and aggregate.csv.
  trace:  one trial of one arm, per-iteration history; writes trace.csv.
  sweep:  run across a list of power levels (defaults to 0/10/20/30 dBm).

Config sections [scene], [ao], [pso], [experiment] map one-to-one onto
SceneConfig, AoConfig, PsoParams, ExperimentConfig fields; every key is
optional and falls back to the field default.
"""

import argparse
import dataclasses
import os
import sys

try:
    import tomllib
except ModuleNotFoundError:  # 3.10: stdlib tomllib arrived in 3.11
    import tomli as tomllib

from .channel import generate_channels
from .driver import AoConfig, run_ao
from .harness import (ExperimentConfig, run_experiment, summarize,
                      trial_seeds, write_aggregate_csv, write_trace_csv,
                      write_trials_csv)
from .orientation import PsoParams
from .scene import SceneConfig, dbm_to_watt, generate_scene


def _fill(cls, table, **extra):
    """Instantiate a config dataclass from a TOML table, rejecting
    unknown keys so typos fail loudly."""
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(table) - names
    if unknown:
        raise SystemExit(f"unknown {cls.__name__} keys: {sorted(unknown)}")
    merged = {**table, **extra}
    for key in ("pmax_dbm", "arms"):
        if key in merged and isinstance(merged[key], list):
            merged[key] = tuple(merged[key])
    return cls(**merged)


def load_config(path):
    """Parse a TOML file into an ExperimentConfig."""
    if path is None:
        raw = {}
    else:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    known = {"scene", "ao", "pso", "experiment"}
    unknown = set(raw) - known
    if unknown:
        raise SystemExit(f"unknown config sections: {sorted(unknown)}")
    scene = _fill(SceneConfig, raw.get("scene", {}))
    pso = _fill(PsoParams, raw.get("pso", {}))
    ao = _fill(AoConfig, raw.get("ao", {}), pso=pso)
    return _fill(ExperimentConfig, raw.get("experiment", {}), scene=scene, ao=ao)


def _apply_overrides(config, args):
    updates = {}
    if args.trials is not None:
        updates["n_trials"] = args.trials
    if args.seed_base is not None:
        updates["seed_base"] = args.seed_base
    if args.jobs is not None:
        updates["jobs"] = args.jobs
    if getattr(args, "pmax_dbm", None):
        updates["pmax_dbm"] = tuple(args.pmax_dbm)
    if getattr(args, "arms", None):
        updates["arms"] = tuple(args.arms)
    return dataclasses.replace(config, **updates) if updates else config


def _cmd_run(args):
    config = _apply_overrides(load_config(args.config), args)
    os.makedirs(args.out, exist_ok=True)
    records = run_experiment(config)
    write_trials_csv(os.path.join(args.out, "trials.csv"), records)
    write_aggregate_csv(os.path.join(args.out, "aggregate.csv"), summarize(records))
    n_failed = sum(1 for r in records if r.status != "ok")
    print(f"wrote {len(records)} records to {args.out} ({n_failed} failed)")
    return 0


def _cmd_sweep(args):
    if not args.pmax_dbm:
        args.pmax_dbm = [0.0, 10.0, 20.0, 30.0]
    return _cmd_run(args)


def _cmd_trace(args):
    config = load_config(args.config)
    scene_seed, chan_seed, ao_seed = trial_seeds(
        args.seed_base if args.seed_base is not None else config.seed_base,
        args.trial)
    scene = generate_scene(config.scene, scene_seed)
    channels = generate_channels(scene, chan_seed)
    ao_cfg = dataclasses.replace(config.ao, rotation_method=args.arm,
                                 p_max=float(dbm_to_watt(args.pmax_dbm)))
    _, trace = run_ao(scene, channels, ao_cfg, ao_seed)
    os.makedirs(args.out, exist_ok=True)
    write_trace_csv(os.path.join(args.out, "trace.csv"), trace)
    print(f"wrote {len(trace.objective)} iterations to {args.out} "
          f"(best {trace.best_objective:.4f} at iteration {trace.best_iteration})")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="risrot", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", default=None, help="TOML config path")
    common.add_argument("-o", "--out", required=True, help="output directory")
    common.add_argument("--seed-base", type=int, default=None)

    runner = argparse.ArgumentParser(add_help=False, parents=[common])
    runner.add_argument("--trials", type=int, default=None)
    runner.add_argument("--jobs", type=int, default=None)
    runner.add_argument("--pmax-dbm", type=float, nargs="+", default=None)
    runner.add_argument("--arms", nargs="+", default=None,
                        choices=["fixed", "pso", "exhaustive"])

    p_run = sub.add_parser("run", parents=[runner], help="full experiment")
    p_run.set_defaults(func=_cmd_run)
    p_sweep = sub.add_parser("sweep", parents=[runner],
                             help="power sweep (default 0/10/20/30 dBm)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_trace = sub.add_parser("trace", parents=[common],
                             help="per-iteration history of one trial")
    p_trace.add_argument("--arm", default="exhaustive",
                         choices=["fixed", "pso", "exhaustive"])
    p_trace.add_argument("--pmax-dbm", type=float, default=20.0)
    p_trace.add_argument("--trial", type=int, default=0)
    p_trace.set_defaults(func=_cmd_trace)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
