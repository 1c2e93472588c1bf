"""Rotation-angle search at fixed precoder and reflect weights.

With both of those frozen, every per-user surrogate value depends on the
rotation only through the scalar pattern-gain product p(delta):

    value_k(delta) = offset_k + 2 p Re{match_k} - p^2 spread_k

so the whole landscape costs O(K) per angle and vectorizes over a grid.
Two searchers are provided: an exhaustive scan over equidistant
candidates and a particle swarm with linearly decaying inertia.
"""

from dataclasses import dataclass

import numpy as np

from .rates import beam_amplitudes
from .scene import bs_azimuth, group_azimuths, pattern_gain

HALF_PI = 0.5 * np.pi

# keeps every candidate strictly inside the open interval
EDGE_MARGIN = 1e-9
PSO_MARGIN = 1e-6


@dataclass
class RotationObjective:
    """Frozen landscape of the rotation subproblem."""

    offset: np.ndarray          # (K,)
    match: np.ndarray           # (K,) complex, independent of rotation
    spread: np.ndarray          # (K,) real, >= 0
    group_of_user: np.ndarray   # (K,)
    n_groups: int
    bs_azimuth: float
    group_azimuths: np.ndarray  # (G,)
    pattern_exponent: float
    max_directivity: float


def build_rotation_objective(coeffs, cand):
    """Collapse the minorizer onto the rotation axis at a candidate
    (precoder, reflect weights) pair."""
    scene = coeffs.scene
    s = beam_amplitudes(coeffs.cascades, cand.ris_weights, cand.precoder)
    k_idx = np.arange(scene.n_users)
    signal_amp = s[k_idx, scene.group_of_user]
    return RotationObjective(
        offset=coeffs.offset.copy(),
        match=coeffs.lin * signal_amp,
        spread=coeffs.curv * (np.abs(s) ** 2).sum(axis=1),
        group_of_user=scene.group_of_user,
        n_groups=scene.n_groups,
        bs_azimuth=bs_azimuth(scene),
        group_azimuths=group_azimuths(scene),
        pattern_exponent=scene.pattern_exponent,
        max_directivity=scene.max_directivity,
    )


def rotation_value(robj, deltas):
    """Surrogate sum of per-group minima at one angle or a grid of them."""
    scalar = np.ndim(deltas) == 0
    deltas = np.atleast_1d(np.asarray(deltas, dtype=float))
    g_t = pattern_gain(np.abs(robj.bs_azimuth - deltas),
                       robj.pattern_exponent, robj.max_directivity)      # (D,)
    g_g = pattern_gain(np.abs(robj.group_azimuths[None, :] - deltas[:, None]),
                       robj.pattern_exponent, robj.max_directivity)      # (D, G)
    p = g_t[:, None] * g_g[:, robj.group_of_user]                        # (D, K)
    vals = robj.offset + 2.0 * p * robj.match.real - p ** 2 * robj.spread
    mins = np.full((robj.n_groups, len(deltas)), np.inf)
    np.minimum.at(mins, robj.group_of_user, vals.T)
    total = mins.sum(axis=0)
    return float(total[0]) if scalar else total


def candidate_grid(n_candidates):
    """Equidistant rotation candidates -pi/2 + i*pi/D for i = 0..D-1, the
    left endpoint nudged inside the open interval.  Refining by an integer
    factor keeps every coarse candidate in the fine grid."""
    if n_candidates < 2:
        raise ValueError("need at least 2 candidates")
    grid = -HALF_PI + np.arange(n_candidates) * (np.pi / n_candidates)
    grid[0] = -HALF_PI + EDGE_MARGIN
    return grid


def exhaustive_rotation(robj, n_candidates):
    """Grid maximum; exact ties resolve toward the smallest |delta|."""
    grid = candidate_grid(n_candidates)
    vals = rotation_value(robj, grid)
    tied = np.flatnonzero(vals == vals.max())
    best = tied[np.argmin(np.abs(grid[tied]))]
    return float(grid[best]), float(vals[best])


@dataclass
class PsoParams:
    """Swarm hyperparameters; inertia decays linearly over the run."""

    n_particles: int = 20
    cognitive: float = 2.0
    social: float = 2.0
    inertia_max: float = 0.9
    inertia_min: float = 0.4
    n_steps: int = 50


def inertia_weight(step, params):
    """Linear schedule: inertia_max at step 0, inertia_min at n_steps."""
    frac = step / params.n_steps
    return params.inertia_max - (params.inertia_max - params.inertia_min) * frac


@dataclass
class PsoState:
    positions: np.ndarray   # (Y,)
    velocities: np.ndarray  # (Y,)
    best_positions: np.ndarray
    best_values: np.ndarray
    global_position: float
    global_value: float
    step: int = 0


def pso_init(robj, params, rng):
    """Particles uniform over the open interval, velocities zero."""
    bound = HALF_PI - PSO_MARGIN
    positions = rng.uniform(-bound, bound, params.n_particles)
    values = rotation_value(robj, positions)
    top = int(np.argmax(values))
    return PsoState(
        positions=positions,
        velocities=np.zeros(params.n_particles),
        best_positions=positions.copy(),
        best_values=values.copy(),
        global_position=float(positions[top]),
        global_value=float(values[top]),
    )


def pso_step(state, robj, params, rng):
    """One velocity/position update with personal- and global-best pulls.

    Random accelerations are drawn per particle per step, in particle
    order; positions clamp to the interval edge with the velocity zeroed
    there.  Mutates and returns the state."""
    state.step += 1
    w = inertia_weight(state.step, params)
    r = rng.random((params.n_particles, 2))
    state.velocities = (
        w * state.velocities
        + params.cognitive * r[:, 0] * (state.best_positions - state.positions)
        + params.social * r[:, 1] * (state.global_position - state.positions)
    )
    state.positions = state.positions + state.velocities
    bound = HALF_PI - PSO_MARGIN
    clamped = np.abs(state.positions) > bound
    state.positions = np.clip(state.positions, -bound, bound)
    state.velocities[clamped] = 0.0

    values = rotation_value(robj, state.positions)
    improved = values > state.best_values
    state.best_positions[improved] = state.positions[improved]
    state.best_values[improved] = values[improved]
    top = int(np.argmax(state.best_values))
    if state.best_values[top] > state.global_value:
        state.global_value = float(state.best_values[top])
        state.global_position = float(state.best_positions[top])
    return state


def pso_rotation(robj, params, rng):
    """Full swarm run; returns (angle, value, per-step global-best trace).

    The trace starts with the initial swarm's best, so its length is
    n_steps + 1 and it is non-decreasing by construction.
    """
    state = pso_init(robj, params, rng)
    history = [state.global_value]
    for _ in range(params.n_steps):
        pso_step(state, robj, params, rng)
        history.append(state.global_value)
    return state.global_position, state.global_value, np.array(history)
