"""Exact per-user rates and the sum of per-group minimum rates.

The operating point bundles the BS precoder (one beam per group), the
unit-modulus reflect weights, and the surface rotation.  Rotation enters
the SINR only through the squared product of the incidence-side and
departure-side pattern gains; the gain product multiplies both the
wanted beam and the interfering beams seen by a user, but not the noise.
"""

from dataclasses import dataclass, replace

import numpy as np

from .scene import effective_angles, pattern_gain

LN2 = np.log(2.0)


@dataclass
class Solution:
    """One candidate operating point."""

    precoder: np.ndarray    # (N, G) complex, column g is the group-g beam
    ris_weights: np.ndarray  # (M,) complex, unit modulus per entry
    rotation: float = 0.0   # radians in (-pi/2, pi/2)

    def copy(self):
        return replace(self, precoder=self.precoder.copy(),
                       ris_weights=self.ris_weights.copy())


def transmit_power(sol):
    """trace(F^H F)."""
    return float(np.sum(np.abs(sol.precoder) ** 2))


def check_solution(sol, scene, p_max, tol=1e-9):
    """Raise if the point violates power, modulus, or rotation limits."""
    if sol.precoder.shape != (scene.n_bs_antennas, scene.n_groups):
        raise ValueError("precoder shape mismatch")
    if sol.ris_weights.shape != (scene.n_ris_elements,):
        raise ValueError("reflect weight shape mismatch")
    if np.max(np.abs(np.abs(sol.ris_weights) - 1.0)) > tol:
        raise ValueError("reflect weights must be unit modulus")
    if transmit_power(sol) > p_max + tol:
        raise ValueError("transmit power exceeds the budget")
    if not -np.pi / 2 < sol.rotation < np.pi / 2:
        raise ValueError("rotation outside (-pi/2, pi/2)")


def gain_products(scene, delta):
    """Per-user product of incidence- and departure-side pattern gains at
    rotation delta, shape (K,)."""
    theta_t, theta_g = effective_angles(scene, delta)
    g_t = pattern_gain(theta_t, scene.pattern_exponent, scene.max_directivity)
    g_g = pattern_gain(theta_g, scene.pattern_exponent, scene.max_directivity)
    return g_t * g_g[scene.group_of_user]


def beam_amplitudes(cascades, ris_weights, precoder):
    """s[k, i] = w^H H_k f_i for every user k and beam i, shape (K, G)."""
    return np.einsum("m,kmn,ni->ki", ris_weights.conj(), cascades, precoder)


def user_rates(sol, scene, channels):
    """Per-user rate in bits/s/Hz, shape (K,)."""
    p = gain_products(scene, sol.rotation)
    s = beam_amplitudes(channels.cascades(), sol.ris_weights, sol.precoder)
    powers = np.abs(s) ** 2
    k_idx = np.arange(scene.n_users)
    signal = powers[k_idx, scene.group_of_user]
    interference = powers.sum(axis=1) - signal
    sinr = p ** 2 * signal / (p ** 2 * interference + scene.noise_power)
    return np.log2(1.0 + sinr)


def group_min_rates(rates, scene):
    """Minimum member rate of each group, shape (G,)."""
    mins = np.full(scene.n_groups, np.inf)
    np.minimum.at(mins, scene.group_of_user, rates)
    return mins


def objective(sol, scene, channels):
    """Sum over groups of the minimum member rate."""
    return float(group_min_rates(user_rates(sol, scene, channels), scene).sum())
