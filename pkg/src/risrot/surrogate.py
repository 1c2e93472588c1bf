"""Concave minorizer of the per-user rate at an expansion point.

Each rate log2(1 + |x|^2 / y), with x the gain-weighted wanted-beam
amplitude and y interference plus noise, is lower-bounded by the tight
concave quadratic

    offset + 2 Re{lin * x} - curv * (|x|^2 + y)

built at the expansion point.  Packaged per user, the bound is quadratic
in the precoder at fixed reflect weights and vice versa, which is what
the cone solves consume.  The bound is valid for candidates that keep
the expansion rotation; the rotation step re-evaluates the gains
directly instead (see orientation).
"""

from dataclasses import dataclass

import numpy as np

from .rates import LN2, beam_amplitudes, gain_products, group_min_rates

_EPS = 1e-300  # guards 0/0 when a user's signal amplitude is exactly zero


@dataclass
class MmCoefficients:
    """Per-user minorizer pieces at one expansion point.

    matched_amp is the gain-weighted conjugate signal amplitude at the
    point; load is the interference-plus-noise power there.  lin and curv
    already carry the nat-to-bit factor, so surrogate values are in
    bits/s/Hz and comparable to the exact rates.
    """

    lin: np.ndarray          # (K,) complex
    curv: np.ndarray         # (K,) real, >= 0
    offset: np.ndarray       # (K,) real
    matched_amp: np.ndarray  # (K,) complex
    load: np.ndarray         # (K,) real, >= noise
    gain_prod: np.ndarray    # (K,) pattern-gain products at the point
    cascades: np.ndarray     # (K, M, N)
    expansion: object        # Solution the expansion was taken at
    scene: object            # geometry handle for candidate gain lookups


def build_mm_coefficients(point, scene, channels):
    """Expand the minorizer at `point`; pure and deterministic."""
    cascades = channels.cascades()
    p = gain_products(scene, point.rotation)
    s = beam_amplitudes(cascades, point.ris_weights, point.precoder)
    k_idx = np.arange(scene.n_users)
    signal_amp = s[k_idx, scene.group_of_user]
    matched_amp = p * signal_amp.conj()
    matched_pow = np.abs(matched_amp) ** 2
    load = p ** 2 * (np.abs(s) ** 2).sum(axis=1) - matched_pow + scene.noise_power
    rate = np.log2(1.0 + matched_pow / load)
    lin = matched_amp / (load * LN2)
    curv = matched_pow / (load * (matched_pow + load) * LN2 + _EPS)
    # subtracting the matched term and the noise share keeps the bound
    # tight: surrogate(point) == rate(point)
    offset = rate - matched_pow / (load * LN2) - curv * scene.noise_power
    return MmCoefficients(
        lin=lin, curv=curv, offset=offset, matched_amp=matched_amp,
        load=load, gain_prod=p, cascades=cascades, expansion=point.copy(),
        scene=scene,
    )


def surrogate_rates(coeffs, cand):
    """Minorizer value per user at a candidate point, shape (K,)."""
    scene = coeffs.scene
    p = gain_products(scene, cand.rotation)
    s = beam_amplitudes(coeffs.cascades, cand.ris_weights, cand.precoder)
    k_idx = np.arange(scene.n_users)
    signal_amp = s[k_idx, scene.group_of_user]
    lin_term = 2.0 * (coeffs.lin * p * signal_amp).real
    quad_term = coeffs.curv * p ** 2 * (np.abs(s) ** 2).sum(axis=1)
    return coeffs.offset + lin_term - quad_term


def surrogate_objective(coeffs, cand):
    """Sum over groups of the minimum member minorizer value."""
    return float(group_min_rates(surrogate_rates(coeffs, cand), coeffs.scene).sum())


@dataclass
class PrecoderForm:
    """Minorizer as a quadratic in the precoder at fixed reflect weights.

    Per user: offset + 2 Re{lin_row @ f_g} - sum_i |quad_vec^H f_i|^2,
    with g the user's group.  quad_vec is the rank-1 curvature factor.
    """

    quad_vec: np.ndarray  # (K, N) complex
    lin_row: np.ndarray   # (K, N) complex
    offset: np.ndarray    # (K,)
    group_of_user: np.ndarray
    n_groups: int


def precoder_form(coeffs):
    """Quadratic-in-F view of the minorizer, reflect weights pinned to the
    expansion point's."""
    w = coeffs.expansion.ris_weights
    eff_row = np.einsum("m,kmn->kn", w.conj(), coeffs.cascades)  # w^H H_k
    p = coeffs.gain_prod[:, None]
    return PrecoderForm(
        quad_vec=np.sqrt(coeffs.curv)[:, None] * p * eff_row.conj(),
        lin_row=coeffs.lin[:, None] * p * eff_row,
        offset=coeffs.offset.copy(),
        group_of_user=coeffs.scene.group_of_user,
        n_groups=coeffs.scene.n_groups,
    )


def precoder_form_rates(form, precoder):
    """Evaluate the quadratic form at a precoder, shape (K,)."""
    cross = form.quad_vec.conj() @ precoder  # (K, G), entries quad_vec_k^H f_i
    own_beam = precoder[:, form.group_of_user]  # (N, K)
    lin_term = 2.0 * np.einsum("kn,nk->k", form.lin_row, own_beam).real
    return form.offset + lin_term - (np.abs(cross) ** 2).sum(axis=1)


@dataclass
class ReflectForm:
    """Minorizer as a quadratic in the reflect weights at fixed precoder.

    Per user: offset + 2 Re{lin_vec^H w} - ||quad_fac^H w||^2 with
    quad_fac of rank at most G.
    """

    quad_fac: np.ndarray  # (K, M, G) complex
    lin_vec: np.ndarray   # (K, M) complex
    offset: np.ndarray    # (K,)
    group_of_user: np.ndarray
    n_groups: int


def reflect_form(coeffs):
    """Quadratic-in-w view of the minorizer, precoder pinned to the
    expansion point's."""
    beams = np.einsum("kmn,ng->kmg", coeffs.cascades, coeffs.expansion.precoder)
    k_idx = np.arange(len(coeffs.offset))
    p = coeffs.gain_prod
    return ReflectForm(
        quad_fac=np.sqrt(coeffs.curv)[:, None, None] * p[:, None, None] * beams,
        lin_vec=coeffs.lin[:, None] * p[:, None] * beams[k_idx, :, coeffs.scene.group_of_user],
        offset=coeffs.offset.copy(),
        group_of_user=coeffs.scene.group_of_user,
        n_groups=coeffs.scene.n_groups,
    )


def reflect_form_rates(form, ris_weights):
    """Evaluate the quadratic form at a reflect-weight vector, shape (K,)."""
    cross = np.einsum("kmg,m->kg", form.quad_fac.conj(), ris_weights)
    lin_term = 2.0 * (form.lin_vec.conj() @ ris_weights).real
    return form.offset + lin_term - (np.abs(cross) ** 2).sum(axis=1)
