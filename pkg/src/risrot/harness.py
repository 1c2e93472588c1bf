"""Monte-Carlo experiment runner and CSV persistence.

A trial draws one scene and one channel realization, then every method
arm and power level reuses them, so arm comparisons are paired.  Output
is deterministic for a fixed config and seed base: records are sorted
before writing and floats are printed with a fixed format.  Wall-clock
columns are the one sanctioned nondeterminism.
"""

import csv
import io
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import generate_channels
from .driver import AoConfig, run_ao
from .scene import SceneConfig, dbm_to_watt, generate_scene

TRIALS_SCHEMA = "trials-v1"
AGGREGATE_SCHEMA = "aggregate-v1"
TRACE_SCHEMA = "trace-v1"

_FMT = "%.12g"


@dataclass
class ExperimentConfig:
    """Full description of one experiment run."""

    scene: SceneConfig = field(default_factory=SceneConfig)
    ao: AoConfig = field(default_factory=AoConfig)
    n_trials: int = 100
    seed_base: int = 0
    pmax_dbm: tuple = (20.0,)
    arms: tuple = ("fixed", "pso", "exhaustive")
    jobs: int = 1


@dataclass
class TrialRecord:
    """One (trial, arm, power) outcome."""

    trial: int
    arm: str
    pmax_dbm: float
    seed: int
    status: str               # ok | failed:<step>
    objective: float          # nan when failed
    iterations: int
    rotation: float
    group_min: tuple          # per-group minimum rates
    wall_ms: float


def trial_seeds(seed_base, trial):
    """Disjoint (scene, channel, optimizer) seed triple per trial."""
    base = 3 * (seed_base + trial)
    return base, base + 1, base + 2


def run_trial(config, trial):
    """All (arm, power) runs of one trial on a shared scene and fading
    draw; a failed solve yields a failed record, not an exception."""
    scene_seed, chan_seed, ao_seed = trial_seeds(config.seed_base, trial)
    scene = generate_scene(config.scene, scene_seed)
    channels = generate_channels(scene, chan_seed)
    records = []
    for pmax_dbm in config.pmax_dbm:
        for arm in config.arms:
            ao_cfg = replace(config.ao, rotation_method=arm,
                             p_max=float(dbm_to_watt(pmax_dbm)))
            try:
                best, trace = run_ao(scene, channels, ao_cfg, ao_seed)
                records.append(TrialRecord(
                    trial=trial, arm=arm, pmax_dbm=float(pmax_dbm),
                    seed=ao_seed, status="ok",
                    objective=trace.best_objective,
                    iterations=trace.n_iterations,
                    rotation=float(best.rotation),
                    group_min=tuple(float(v) for v in trace.group_min[trace.best_iteration]),
                    wall_ms=float(sum(trace.wall_ms)),
                ))
            except Exception as err:  # noqa: BLE001 - a trial must not kill the run
                records.append(TrialRecord(
                    trial=trial, arm=arm, pmax_dbm=float(pmax_dbm),
                    seed=ao_seed, status=f"failed:{type(err).__name__}",
                    objective=float("nan"), iterations=0, rotation=float("nan"),
                    group_min=(float("nan"),) * config.scene.n_groups,
                    wall_ms=0.0,
                ))
    return records


def run_experiment(config):
    """Run every trial; returns records sorted by (trial, arm, pmax)."""
    if config.jobs > 1:
        import multiprocessing as mp

        with mp.Pool(config.jobs) as pool:
            chunks = pool.starmap(run_trial, [(config, t) for t in range(config.n_trials)])
    else:
        chunks = [run_trial(config, t) for t in range(config.n_trials)]
    records = [rec for chunk in chunks for rec in chunk]
    records.sort(key=lambda r: (r.trial, r.arm, r.pmax_dbm))
    return records


@dataclass
class AggregateRow:
    arm: str
    pmax_dbm: float
    n_ok: int
    n_failed: int
    mean_objective: float
    std_objective: float
    improvement_over_fixed_pct: float  # nan when no fixed arm to compare


def summarize(records):
    """Per (arm, power) mean and spread over the ok trials, plus each
    arm's relative mean improvement over the fixed arm at that power."""
    if not records:
        raise ValueError("no records to summarize")
    keys = sorted({(r.arm, r.pmax_dbm) for r in records}, key=lambda k: (k[1], k[0]))
    means = {}
    rows = []
    for arm, pmax in keys:
        ok = [r.objective for r in records
              if r.arm == arm and r.pmax_dbm == pmax and r.status == "ok"]
        failed = sum(1 for r in records
                     if r.arm == arm and r.pmax_dbm == pmax and r.status != "ok")
        mean = float(np.mean(ok)) if ok else float("nan")
        std = float(np.std(ok)) if ok else float("nan")
        means[(arm, pmax)] = mean
        rows.append(AggregateRow(arm, pmax, len(ok), failed, mean, std, float("nan")))
    for row in rows:
        base = means.get(("fixed", row.pmax_dbm))
        if base is not None and base > 0.0 and np.isfinite(base):
            row.improvement_over_fixed_pct = 100.0 * (row.mean_objective - base) / base
    return rows


def _write_csv(path, schema, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(f"# schema={schema}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _fmt(value):
    if isinstance(value, float):
        return _FMT % value
    return str(value)


def write_trials_csv(path, records):
    header = ["trial", "arm", "pmax_dbm", "seed", "status", "objective",
              "iterations", "rotation"]
    n_groups = len(records[0].group_min) if records else 0
    header += [f"min_rate_g{g}" for g in range(n_groups)] + ["wall_ms"]
    rows = []
    for r in records:
        row = [r.trial, r.arm, _fmt(r.pmax_dbm), r.seed, r.status,
               _fmt(r.objective), r.iterations, _fmt(r.rotation)]
        row += [_fmt(v) for v in r.group_min] + [_fmt(r.wall_ms)]
        rows.append(row)
    _write_csv(path, TRIALS_SCHEMA, header, rows)


def write_aggregate_csv(path, rows):
    header = ["arm", "pmax_dbm", "n_ok", "n_failed", "mean_objective",
              "std_objective", "improvement_over_fixed_pct"]
    out = [[r.arm, _fmt(r.pmax_dbm), r.n_ok, r.n_failed, _fmt(r.mean_objective),
            _fmt(r.std_objective), _fmt(r.improvement_over_fixed_pct)] for r in rows]
    _write_csv(path, AGGREGATE_SCHEMA, header, out)


def write_trace_csv(path, trace):
    header = ["iteration", "objective", "rotation"]
    n_groups = len(trace.group_min[0]) if trace.group_min else 0
    header += [f"min_rate_g{g}" for g in range(n_groups)]
    header += ["surr_before_reflect", "surr_after_reflect",
               "surr_before_precoder", "surr_after_precoder", "wall_ms"]
    rows = []
    for i in range(len(trace.objective)):
        row = [i, _fmt(trace.objective[i]), _fmt(trace.rotation[i])]
        row += [_fmt(float(v)) for v in trace.group_min[i]]
        row += [_fmt(float(trace.surr_before_reflect[i])),
                _fmt(float(trace.surr_after_reflect[i])),
                _fmt(float(trace.surr_before_precoder[i])),
                _fmt(float(trace.surr_after_precoder[i])),
                _fmt(float(trace.wall_ms[i]))]
        rows.append(row)
    _write_csv(path, TRACE_SCHEMA, header, rows)


def read_csv_rows(path):
    """Read one of the schema'd CSVs back: (schema, header, rows)."""
    with open(path, newline="") as fh:
        first = fh.readline().strip()
        if not first.startswith("# schema="):
            raise ValueError(f"{path} lacks a schema header")
        schema = first.split("=", 1)[1]
        reader = csv.reader(io.StringIO(fh.read()))
        header = next(reader)
        return schema, header, list(reader)
