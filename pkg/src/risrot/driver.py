"""Alternating optimization over precoder, reflect weights, and rotation.

Each outer iteration rebuilds the minorizer at the current point, updates
the reflect weights (relaxed cone solve plus unit-modulus projection),
rebuilds, updates the precoder (cone solve), and finally re-aims the
surface.  The unit-modulus projection and the rotation step can lower the
exact objective even while the surrogate improves, so the driver tracks
the best exact-objective iterate and returns that one.
"""

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .orientation import (PsoParams, build_rotation_objective,
                          exhaustive_rotation, pso_rotation)
from .rates import Solution, group_min_rates, user_rates
from .socp import project_unit_modulus, solve_precoder, solve_reflect_relaxed
from .surrogate import (build_mm_coefficients, precoder_form, reflect_form,
                        surrogate_objective)

ROTATION_METHODS = ("fixed", "exhaustive", "pso")


@dataclass
class AoConfig:
    """Outer-loop controls.  p_max is in watts."""

    p_max: float = 0.1
    max_iterations: int = 50
    tol: float = 1e-3
    rotation_method: str = "exhaustive"
    grid_size: int = 1440
    pso: PsoParams = field(default_factory=PsoParams)
    init_mode: str = "matched"


@dataclass
class AoTrace:
    """Per-iteration history of one run.  Index 0 is the starting point;
    surrogate checkpoints are nan there (no solve happened yet)."""

    objective: list = field(default_factory=list)
    rotation: list = field(default_factory=list)
    group_min: list = field(default_factory=list)
    surr_before_reflect: list = field(default_factory=list)
    surr_after_reflect: list = field(default_factory=list)
    surr_before_precoder: list = field(default_factory=list)
    surr_after_precoder: list = field(default_factory=list)
    wall_ms: list = field(default_factory=list)
    best_objective: float = -np.inf
    best_iteration: int = 0
    converged: bool = False
    n_iterations: int = 0


class SubproblemError(RuntimeError):
    """A cone solve came back unusable; carries the iteration and step."""

    def __init__(self, step, iteration, report):
        super().__init__(
            f"{step} solve unusable at iteration {iteration}: "
            f"status={report.status}, primal={report.primal_residual:.2e}, "
            f"dual={report.dual_residual:.2e}"
        )
        self.step = step
        self.iteration = iteration
        self.report = report


def initialize(scene, channels, config, rng):
    """Starting point: uniform random reflect phases, per-group matched
    filters on each group's first member, full power, zero rotation."""
    m = scene.n_ris_elements
    weights = np.exp(2j * np.pi * rng.random(m))
    cascades = channels.cascades()
    eff_rows = np.einsum("m,kmn->kn", weights.conj(), cascades)  # w^H H_k
    cols = []
    for g in range(scene.n_groups):
        anchor = scene.group_members(g)[0]
        direction = eff_rows[anchor].conj()
        norm = np.linalg.norm(direction)
        if norm < 1e-30:
            direction = np.ones(scene.n_bs_antennas, dtype=complex)
            norm = np.linalg.norm(direction)
        cols.append(direction / norm)
    precoder = np.stack(cols, axis=1)
    if config.init_mode == "random":
        raw = rng.standard_normal((scene.n_bs_antennas, scene.n_groups, 2))
        precoder = (raw[..., 0] + 1j * raw[..., 1])
        precoder /= np.linalg.norm(precoder)
    precoder = precoder * np.sqrt(config.p_max / scene.n_groups /
                                  np.sum(np.abs(precoder) ** 2, axis=0))
    return Solution(precoder=precoder, ris_weights=weights, rotation=0.0)


def convergence_check(objective_history, tol):
    """True when the last exact-objective step moved less than tol."""
    if len(objective_history) < 2:
        return False
    return abs(objective_history[-1] - objective_history[-2]) < tol


def _record(trace, scene, channels, sol, surr, wall_ms):
    rates = user_rates(sol, scene, channels)
    mins = group_min_rates(rates, scene)
    obj = float(mins.sum())
    trace.objective.append(obj)
    trace.rotation.append(sol.rotation)
    trace.group_min.append(mins)
    trace.surr_before_reflect.append(surr[0])
    trace.surr_after_reflect.append(surr[1])
    trace.surr_before_precoder.append(surr[2])
    trace.surr_after_precoder.append(surr[3])
    trace.wall_ms.append(wall_ms)
    return obj


def run_ao(scene, channels, config, seed):
    """One full alternating-optimization run.

    Deterministic for fixed inputs and seed.  Returns (best Solution seen
    by exact objective, AoTrace).  Raises SubproblemError when a cone
    solve fails beyond use.
    """
    if config.rotation_method not in ROTATION_METHODS:
        raise ValueError(f"unknown rotation method {config.rotation_method!r}")
    rng = np.random.default_rng(seed)
    sol = initialize(scene, channels, config, rng)

    trace = AoTrace()
    nan4 = (np.nan,) * 4
    obj = _record(trace, scene, channels, sol, nan4, 0.0)
    best = sol.copy()
    trace.best_objective = obj
    trace.best_iteration = 0

    for it in range(1, config.max_iterations + 1):
        tic = time.perf_counter()

        coeffs = build_mm_coefficients(sol, scene, channels)
        surr_before_reflect = surrogate_objective(coeffs, sol)
        relaxed, kappas, report = solve_reflect_relaxed(reflect_form(coeffs))
        if relaxed is None or not report.usable:
            raise SubproblemError("reflect", it, report)
        surr_after_reflect = float(kappas.sum())
        sol = replace(sol, ris_weights=project_unit_modulus(relaxed))

        coeffs = build_mm_coefficients(sol, scene, channels)
        surr_before_precoder = surrogate_objective(coeffs, sol)
        precoder, gammas, report = solve_precoder(precoder_form(coeffs), config.p_max)
        if precoder is None or not report.usable:
            raise SubproblemError("precoder", it, report)
        surr_after_precoder = float(gammas.sum())
        sol = replace(sol, precoder=precoder)

        if config.rotation_method != "fixed":
            coeffs = build_mm_coefficients(sol, scene, channels)
            robj = build_rotation_objective(coeffs, sol)
            if config.rotation_method == "exhaustive":
                delta, _ = exhaustive_rotation(robj, config.grid_size)
            else:
                delta, _, _ = pso_rotation(robj, config.pso, rng)
            sol = replace(sol, rotation=float(delta))

        wall_ms = (time.perf_counter() - tic) * 1e3
        obj = _record(trace, scene, channels, sol,
                      (surr_before_reflect, surr_after_reflect,
                       surr_before_precoder, surr_after_precoder), wall_ms)
        trace.n_iterations = it
        if obj > trace.best_objective:
            trace.best_objective = obj
            trace.best_iteration = it
            best = sol.copy()
        if convergence_check(trace.objective, config.tol):
            trace.converged = True
            break

    return best, trace
