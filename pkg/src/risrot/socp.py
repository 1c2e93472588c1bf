"""Cone-program solves for the precoder and reflect-weight updates.

Both subproblems maximize a sum of per-group epigraph variables under
concave quadratic per-user constraints.  The rank factors exposed by the
quadratic forms turn each constraint into one second-order cone via the
standard rotated-cone identity ||u||^2 <= t  <=>  ||[2u; t-1]|| <= t+1,
and cvxopt's primal-dual interior-point method solves the realified
program in-process.  Complex quantities are stacked [Re; Im].
"""

from dataclasses import dataclass

import numpy as np
from cvxopt import matrix as cvxmat
from cvxopt import solvers

SOLVER_OPTIONS = {
    "show_progress": False,
    "abstol": 1e-8,
    "reltol": 1e-8,
    "feastol": 1e-8,
    "maxiters": 200,
}

# residuals at or below this make a non-"optimal" answer still usable
USABLE_RESIDUAL = 1e-6

_STATUS_MAP = {
    "optimal": "optimal",
    "unknown": "max_iter",
    "primal infeasible": "infeasible",
    "dual infeasible": "infeasible",
}


@dataclass
class SolveReport:
    """Outcome of one cone solve."""

    status: str  # optimal | max_iter | infeasible
    objective: float
    iterations: int
    primal_residual: float
    dual_residual: float

    @property
    def usable(self):
        if self.status == "optimal":
            return True
        return (self.status == "max_iter"
                and max(self.primal_residual, self.dual_residual) <= USABLE_RESIDUAL)


def _solve_once(c, Gq, hq, kktsolver):
    old = dict(solvers.options)
    solvers.options.update(SOLVER_OPTIONS)
    try:
        kwargs = {"kktsolver": kktsolver} if kktsolver else {}
        sol = solvers.socp(cvxmat(c), Gq=Gq, hq=hq, **kwargs)
    except (ValueError, ZeroDivisionError, ArithmeticError):
        # the interior-point scaling update can fail outright on badly
        # conditioned data; surface that as an unusable report
        return None, SolveReport("max_iter", np.nan, 0, np.inf, np.inf)
    finally:
        solvers.options.clear()
        solvers.options.update(old)
    z = np.array(sol["x"]).ravel() if sol["x"] is not None else None
    report = SolveReport(
        status=_STATUS_MAP.get(sol["status"], "max_iter"),
        objective=float(-sol["primal objective"]) if sol["primal objective"] is not None else np.nan,
        iterations=int(sol.get("iterations", 0)),
        primal_residual=float(sol["primal infeasibility"]) if sol["primal infeasibility"] is not None else np.inf,
        dual_residual=float(sol["dual infeasibility"]) if sol["dual infeasibility"] is not None else np.inf,
    )
    return z, report


def _solve(c, cone_rows, cone_offsets, dump_path=None):
    """Run the interior-point solver on min c^T z with (h - G z) in a
    product of second-order cones.  The default Cholesky-based KKT path
    is fastest but brittle; an indefinite-LDL retry covers its failures.
    """
    Gq = [cvxmat(rows) for rows in cone_rows]
    hq = [cvxmat(offs) for offs in cone_offsets]
    if dump_path is not None:
        write_problem_dump(dump_path, c, cone_rows, cone_offsets)
    z, report = _solve_once(c, Gq, hq, None)
    if z is None or not report.usable:
        z_retry, report_retry = _solve_once(c, Gq, hq, "ldl")
        if z_retry is not None and (z is None or report_retry.usable):
            return z_retry, report_retry
    return z, report


def write_problem_dump(path, c, cone_rows, cone_offsets):
    """Plain-text dump of one cone program for external cross-checking:
    objective vector, then per cone its size and dense G, h entries."""
    with open(path, "w") as fh:
        fh.write(f"variables {len(c)}\ncones {len(cone_rows)}\n")
        fh.write("c " + " ".join(f"{v:.17g}" for v in c) + "\n")
        for rows, offs in zip(cone_rows, cone_offsets):
            fh.write(f"cone dim {len(offs)}\n")
            fh.write("h " + " ".join(f"{v:.17g}" for v in offs) + "\n")
            for r in rows:
                fh.write("g " + " ".join(f"{v:.17g}" for v in r) + "\n")


def _epigraph_cone(t_row, t_offset, u_rows, u_offsets):
    """Cone rows for ||u||^2 <= t with affine t = t_offset - t_row @ z and
    affine u = u_offsets - u_rows @ z, via ||[2u; t-1]|| <= t+1."""
    dim = len(u_offsets) + 2
    rows = np.empty((dim, t_row.shape[-1]))
    offs = np.empty(dim)
    rows[0] = t_row
    offs[0] = t_offset + 1.0
    rows[1:-1] = 2.0 * u_rows
    offs[1:-1] = 2.0 * u_offsets
    rows[-1] = t_row
    offs[-1] = t_offset - 1.0
    return rows, offs


def _inner_rows(w, n_cols, col, n_vars):
    """Realified rows picking Re and Im of w^H x_col from a variable
    vector that stacks [Re vec(X); Im vec(X); extras], X holding n_cols
    columns of the same length as w."""
    n = len(w)
    lo = col * n
    im_block = n_cols * n
    re_row = np.zeros(n_vars)
    im_row = np.zeros(n_vars)
    re_row[lo:lo + n] = w.real
    re_row[im_block + lo:im_block + lo + n] = w.imag
    im_row[lo:lo + n] = -w.imag
    im_row[im_block + lo:im_block + lo + n] = w.real
    return re_row, im_row


def solve_precoder(form, p_max, dump_path=None):
    """Maximize sum_g gamma_g over the total-power ball.

    Constraints per user k in group g:
        offset_k + 2 Re{lin_row_k @ f_g} - sum_i |quad_vec_k^H f_i|^2 >= gamma_g
    Returns (precoder, gammas, report); on p_max == 0 the answer is exact
    without a solve.
    """
    n = form.quad_vec.shape[1]
    n_groups = form.n_groups
    k_users = len(form.offset)
    if p_max <= 0.0:
        gammas = np.full(n_groups, np.inf)
        np.minimum.at(gammas, form.group_of_user, form.offset)
        report = SolveReport("optimal", float(gammas.sum()), 0, 0.0, 0.0)
        return np.zeros((n, n_groups), dtype=complex), gammas, report

    nf = 2 * n * n_groups          # realified precoder block
    n_vars = nf + n_groups

    # solve for f / sqrt(p_max) so the power ball is the unit ball; this
    # keeps the KKT system well scaled across power levels
    amp = np.sqrt(p_max)

    # per-user equilibration: dividing the whole inequality by its
    # largest natural magnitude leaves the feasible set unchanged but
    # keeps the cone coefficients O(1) even when one user's load sits
    # at the noise floor and its linearization blows up
    mags = np.empty(k_users)
    for k in range(k_users):
        lin_mag = 2.0 * amp * np.linalg.norm(form.lin_row[k])
        quad_mag = (amp * np.linalg.norm(form.quad_vec[k])) ** 2
        mags[k] = max(1.0, abs(form.offset[k]), lin_mag, quad_mag)
    # when every member of a group is hot the epigraph variable itself
    # lives at that magnitude; substituting gamma = s_g * gamma~ brings
    # it back to O(1) without touching the feasible set
    group_scale = np.array([
        max(1.0, mags[form.group_of_user == g].min()) for g in range(n_groups)
    ])
    c = np.zeros(n_vars)
    c[nf:] = -group_scale / group_scale.max()

    cone_rows, cone_offsets = [], []
    rows = np.zeros((nf + 1, n_vars))
    rows[1:, :nf] = -np.eye(nf)
    offs = np.zeros(nf + 1)
    offs[0] = 1.0
    cone_rows.append(rows)
    cone_offsets.append(offs)

    for k in range(k_users):
        g = form.group_of_user[k]
        scale = 1.0 / mags[k]
        # t = offset + 2 Re{lin_row @ f_g} - gamma_g, as t_offset - t_row z
        t_row = np.zeros(n_vars)
        lin_re, _ = _inner_rows(amp * form.lin_row[k].conj(), n_groups, g, n_vars)
        t_row -= 2.0 * lin_re
        t_row[nf + g] = group_scale[g]
        u_rows = np.zeros((2 * n_groups, n_vars))
        for i in range(n_groups):
            u_rows[i], u_rows[n_groups + i] = _inner_rows(amp * form.quad_vec[k], n_groups, i, n_vars)
        rows, offs = _epigraph_cone(scale * t_row, scale * form.offset[k],
                                    -np.sqrt(scale) * u_rows, np.zeros(2 * n_groups))
        cone_rows.append(rows)
        cone_offsets.append(offs)

    z, report = _solve(c, cone_rows, cone_offsets, dump_path)
    if z is None:
        return None, None, report
    precoder = amp * (z[:n * n_groups] + 1j * z[n * n_groups:nf]).reshape(n_groups, n).T
    gammas = group_scale * z[nf:]
    report.objective = float(gammas.sum())
    return precoder, gammas, report


def solve_reflect_relaxed(form, dump_path=None):
    """Maximize sum_g kappa_g with every reflect weight inside the unit
    disk (the unit-modulus set relaxed to its convex hull elementwise).

    Constraints per user k in group g:
        offset_k + 2 Re{lin_vec_k^H w} - ||quad_fac_k^H w||^2 >= kappa_g
    Returns (weights, kappas, report); weights need the unit-modulus
    projection before use in a Solution.
    """
    k_users, m, n_beams = form.quad_fac.shape
    n_groups = form.n_groups
    nw = 2 * m
    n_vars = nw + n_groups

    root_m = np.sqrt(m)
    # same equilibration as the precoder solve; the weight box gives
    # ||w||_2 <= sqrt(m), which bounds the natural row magnitudes
    mags = np.empty(k_users)
    for k in range(k_users):
        lin_mag = 2.0 * root_m * np.linalg.norm(form.lin_vec[k])
        quad_mag = m * (np.linalg.norm(form.quad_fac[k], axis=0) ** 2).sum()
        mags[k] = max(1.0, abs(form.offset[k]), lin_mag, quad_mag)
    group_scale = np.array([
        max(1.0, mags[form.group_of_user == g].min()) for g in range(n_groups)
    ])
    c = np.zeros(n_vars)
    c[nw:] = -group_scale / group_scale.max()

    cone_rows, cone_offsets = [], []
    # elementwise |w_m| <= 1
    for j in range(m):
        rows = np.zeros((3, n_vars))
        rows[1, j] = -1.0
        rows[2, m + j] = -1.0
        offs = np.array([1.0, 0.0, 0.0])
        cone_rows.append(rows)
        cone_offsets.append(offs)

    for k in range(k_users):
        g = form.group_of_user[k]
        scale = 1.0 / mags[k]
        t_row = np.zeros(n_vars)
        lin_re, _ = _inner_rows(form.lin_vec[k], 1, 0, n_vars)
        t_row -= 2.0 * lin_re
        t_row[nw + g] = group_scale[g]
        u_rows = np.zeros((2 * n_beams, n_vars))
        for i in range(n_beams):
            u_rows[i], u_rows[n_beams + i] = _inner_rows(form.quad_fac[k, :, i], 1, 0, n_vars)
        rows, offs = _epigraph_cone(scale * t_row, scale * form.offset[k],
                                    -np.sqrt(scale) * u_rows, np.zeros(2 * n_beams))
        cone_rows.append(rows)
        cone_offsets.append(offs)

    z, report = _solve(c, cone_rows, cone_offsets, dump_path)
    if z is None:
        return None, None, report
    weights = z[:m] + 1j * z[m:nw]
    kappas = group_scale * z[nw:]
    report.objective = float(kappas.sum())
    return weights, kappas, report


DEGENERATE_WEIGHT = 1e-12


def project_unit_modulus(weights):
    """Snap relaxed reflect weights to the unit circle, phase-referenced
    to the last element (which becomes exactly 1).  Entries with magnitude
    under 1e-12 carry no usable phase and are assigned phase zero."""
    weights = np.asarray(weights, dtype=complex)
    ref = weights[-1]
    if abs(ref) < DEGENERATE_WEIGHT:
        ref = 1.0
    angles = np.where(np.abs(weights) < DEGENERATE_WEIGHT, 0.0, np.angle(weights / ref))
    return np.exp(1j * angles)
