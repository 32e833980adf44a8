"""Discrete obstacle problem solvers.

The production path is a primal active-set iteration: with a trial
contact set the state is fixed to the obstacle there and to the boundary
data on the circle, the remaining SPD system is solved directly, and the
set is updated by swapping in all violated nodes and releasing all nodes
with negative multiplier.  A projected SOR sweep serves as an
independent oracle for cross-validation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse.linalg as spla

from .fem import DiscreteObstacleProblem

TOL_R = 1e-10
TOL_C = 1e-12


class ObstacleSolveError(RuntimeError):
    """Solver failed; carries the last iterate for post-mortem."""

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


@dataclass(eq=False)
class StateSolution:
    """Solution of the discrete obstacle problem with KKT diagnostics."""

    q: np.ndarray
    contact_set: np.ndarray
    lam: np.ndarray
    iterations: int
    kkt_residual: float
    pi_history: list = field(default_factory=list)
    free_nodes: np.ndarray | None = field(default=None, repr=False)
    free_factor: object = field(default=None, repr=False)


def energy(problem: DiscreteObstacleProblem, q: np.ndarray) -> float:
    """Quadratic energy 0.5 q'Kq - f'q."""
    return float(0.5 * q @ (problem.K @ q) - problem.f_vec @ q)


def contact_nodes(problem: DiscreteObstacleProblem, q: np.ndarray,
                  tol_c: float = TOL_C) -> np.ndarray:
    """Interior nodes where the state sits on the obstacle."""
    interior = problem.interior
    gap = q[interior] - problem.psi_vec[interior]
    scale = np.maximum(1.0, np.abs(problem.psi_vec[interior]))
    return interior[gap <= tol_c * scale]


def _kkt_residual(problem, q, contact, scale):
    interior = problem.interior
    lam = problem.K @ q - problem.f_vec
    free_mask = np.ones(problem.mesh.num_nodes, dtype=bool)
    free_mask[problem.dirichlet_nodes] = False
    free_mask[contact] = False
    r_stat = np.abs(lam[free_mask]).max(initial=0.0)
    r_dual = max(0.0, -(lam[contact].min(initial=0.0)))
    gap = q[interior] - problem.psi_vec[interior]
    r_feas = max(0.0, -(gap.min(initial=0.0)))
    r_comp = np.abs(lam[interior] * gap).max(initial=0.0)
    return max(r_stat, r_dual, r_comp) / scale + r_feas


def solve_obstacle(problem: DiscreteObstacleProblem, u_d: np.ndarray,
                   warm_start: np.ndarray | None = None,
                   tol_r: float = TOL_R, tol_c: float = TOL_C,
                   max_iter: int = 200) -> StateSolution:
    """Primal active-set solve of the obstacle QP.

    ``warm_start`` is an optional initial contact set (interior node
    indices).  Raises ObstacleSolveError on the iteration cap or when a
    contact set repeats without converging.
    """
    u_d = np.asarray(u_d, dtype=float)
    if not np.all(np.isfinite(u_d)):
        raise ValueError("boundary values must be finite")
    n = problem.mesh.num_nodes
    dirichlet = problem.dirichlet_nodes
    interior_mask = np.ones(n, dtype=bool)
    interior_mask[dirichlet] = False
    psi = problem.psi_vec
    Kc = problem.K.tocsc()

    if warm_start is None:
        contact_mask = np.zeros(n, dtype=bool)
    else:
        contact_mask = np.zeros(n, dtype=bool)
        contact_mask[np.asarray(warm_start, dtype=np.int64)] = True
        contact_mask &= interior_mask

    seen: set[bytes] = set()
    pi_history: list[float] = []
    q = np.zeros(n)
    lu = None
    free = None
    for it in range(1, max_iter + 1):
        key = np.flatnonzero(contact_mask).tobytes()
        if key in seen:
            raise ObstacleSolveError(
                "active-set cycling detected",
                StateSolution(q, np.flatnonzero(contact_mask), problem.K @ q - problem.f_vec,
                              it, np.inf, pi_history))
        seen.add(key)

        free = np.flatnonzero(interior_mask & ~contact_mask)
        fixed = np.concatenate([dirichlet, np.flatnonzero(contact_mask)])
        fixed_vals = np.concatenate([u_d, psi[contact_mask]])
        q = np.zeros(n)
        q[fixed] = fixed_vals
        lu = spla.splu(Kc[free][:, free])
        rhs = problem.f_vec[free] - Kc[free][:, fixed] @ fixed_vals
        q[free] = lu.solve(rhs)
        pi_history.append(energy(problem, q))

        lam = problem.K @ q - problem.f_vec
        scale = max(1.0, np.abs(problem.f_vec).max(initial=0.0),
                    np.abs(problem.K).max() * np.abs(q).max(initial=0.0))
        violated = free[q[free] < psi[free] - tol_c]
        contact_idx = np.flatnonzero(contact_mask)
        released = contact_idx[lam[contact_idx] < -tol_r * scale]
        if violated.size == 0 and released.size == 0:
            contact = contact_idx
            sol = StateSolution(
                q=q, contact_set=contact, lam=lam, iterations=it,
                kkt_residual=_kkt_residual(problem, q, contact, scale),
                pi_history=pi_history, free_nodes=free, free_factor=lu)
            return sol
        contact_mask[violated] = True
        contact_mask[released] = False

    raise ObstacleSolveError(
        f"active-set iteration cap {max_iter} exceeded",
        StateSolution(q, np.flatnonzero(contact_mask), problem.K @ q - problem.f_vec,
                      max_iter, np.inf, pi_history))


def psor_oracle(problem: DiscreteObstacleProblem, u_d: np.ndarray,
                omega: float = 1.5, tol: float = 1e-12,
                max_iter: int = 100_000) -> StateSolution:
    """Projected SOR sweeps until the successive-iterate sup norm <= tol.

    Independent of the active-set path; used to cross-validate it.
    """
    if not 0.0 < omega < 2.0:
        raise ValueError("relaxation must satisfy 0 < omega < 2")
    u_d = np.asarray(u_d, dtype=float)
    n = problem.mesh.num_nodes
    psi = problem.psi_vec
    interior = problem.interior
    K = problem.K.tocsr()

    cols, vals, diag = [], [], np.empty(len(interior))
    for pos, i in enumerate(interior):
        lo, hi = K.indptr[i], K.indptr[i + 1]
        c = K.indices[lo:hi]
        v = K.data[lo:hi]
        m = c != i
        cols.append(c[m])
        vals.append(v[m])
        diag[pos] = v[~m][0]

    q = np.zeros(n)
    q[problem.dirichlet_nodes] = u_d
    q[interior] = np.maximum(psi[interior], 0.0)
    f = problem.f_vec
    for sweep in range(1, max_iter + 1):
        diff = 0.0
        for pos, i in enumerate(interior):
            z = (f[i] - vals[pos] @ q[cols[pos]]) / diag[pos]
            qn = q[i] + omega * (z - q[i])
            if qn < psi[i]:
                qn = psi[i]
            step = abs(qn - q[i])
            if step > diff:
                diff = step
            q[i] = qn
        if diff <= tol:
            lam = K @ q - f
            scale = max(1.0, np.abs(f).max(initial=0.0),
                        np.abs(K).max() * np.abs(q).max(initial=0.0))
            contact = contact_nodes(problem, q)
            return StateSolution(
                q=q, contact_set=contact, lam=lam, iterations=sweep,
                kkt_residual=_kkt_residual(problem, q, contact, scale))
    raise ObstacleSolveError(
        f"projected SOR did not reach tol={tol} within {max_iter} sweeps "
        f"(last update {diff:.3e})",
        StateSolution(q, contact_nodes(problem, q), K @ q - f, max_iter, np.inf))
