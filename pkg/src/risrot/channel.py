"""Rician channel synthesis for the BS-RIS and RIS-user links.

Arrays are half-wavelength spaced: a line array along the y axis at the
BS and a planar array in the y-z plane at the surface.  LoS components
are outer products of the two steering vectors; NLoS components are
i.i.d. unit-variance circularly symmetric Gaussians.  Rotating the
surface changes only the pattern gains, never these matrices.
"""

from dataclasses import dataclass

import numpy as np


def complex_gaussian(rng, shape):
    """i.i.d. CN(0, 1) draws."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def planar_shape(m):
    """Split m elements into the most-square (n_y, n_z) grid, wide side
    along y.  m = 32 gives (8, 4)."""
    d = int(np.floor(np.sqrt(m)))
    while m % d:
        d -= 1
    return m // d, d


def line_response(n, cos_y):
    """Half-wavelength line array response for a direction cosine along
    the array axis."""
    return np.exp(1j * np.pi * np.arange(n) * cos_y)


def planar_response(shape, cos_y, cos_z):
    """Half-wavelength planar array response in the y-z plane.

    Element (i_y, i_z) sits at (0, i_y, i_z) * lambda/2; the phase is the
    projection of the arrival direction on the element position.  The
    flattened order is y-major to match planar_shape.
    """
    n_y, n_z = shape
    a_y = np.exp(1j * np.pi * np.arange(n_y) * cos_y)
    a_z = np.exp(1j * np.pi * np.arange(n_z) * cos_z)
    return np.kron(a_y, a_z)


def pathloss(dist, ref, exponent):
    """ref * d^(-exponent) with the distance clamped to the 1 m reference."""
    return ref * np.maximum(np.asarray(dist, dtype=float), 1.0) ** (-exponent)


@dataclass
class ChannelRealization:
    """One fading draw, fixed for a whole optimization run."""

    bs_ris: np.ndarray    # (M, N)
    ris_user: np.ndarray  # (K, M)

    def cascades(self):
        """Per-user effective matrix diag(conj(h_k)) @ H, shape (K, M, N);
        the reflect weights hit it from the left as w^H."""
        return self.ris_user.conj()[:, :, None] * self.bs_ris[None, :, :]


def _unit(vec):
    return vec / np.linalg.norm(vec)


def generate_channels(scene, seed):
    """Draw one Rician realization of every link; bitwise-reproducible
    for a fixed seed (BS-RIS scatter first, then users in order)."""
    rng = np.random.default_rng(seed)
    m, n = scene.n_ris_elements, scene.n_bs_antennas
    shape = planar_shape(m)

    to_bs = _unit(scene.bs_position - scene.ris_position)
    a_ris_bs = planar_response(shape, to_bs[1], to_bs[2])
    to_ris = _unit(scene.ris_position - scene.bs_position)
    a_bs = line_response(n, to_ris[1])
    los_bi = np.outer(a_ris_bs, a_bs.conj())

    kap = scene.rician_bs_ris
    d_bi = np.linalg.norm(scene.bs_position - scene.ris_position)
    pl_bi = pathloss(d_bi, scene.pathloss_ref, scene.pathloss_exp_bs_ris)
    bs_ris = np.sqrt(pl_bi) * (
        np.sqrt(kap / (kap + 1.0)) * los_bi
        + np.sqrt(1.0 / (kap + 1.0)) * complex_gaussian(rng, (m, n))
    )

    ris_user = np.empty((scene.n_users, m), dtype=complex)
    for k in range(scene.n_users):
        to_user = _unit(scene.user_positions[k] - scene.ris_position)
        los_k = planar_response(shape, to_user[1], to_user[2])
        kap_k = scene.rician_ris_user[k]
        d_k = np.linalg.norm(scene.user_positions[k] - scene.ris_position)
        pl_k = pathloss(d_k, scene.pathloss_ref, scene.pathloss_exp_ris_user)
        ris_user[k] = np.sqrt(pl_k) * (
            np.sqrt(kap_k / (kap_k + 1.0)) * los_k
            + np.sqrt(1.0 / (kap_k + 1.0)) * complex_gaussian(rng, m)
        )
    return ChannelRealization(bs_ris=bs_ris, ris_user=ris_user)
