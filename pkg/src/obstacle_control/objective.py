"""Reduced cost of the boundary-control problem and its adjoint gradient.

The cost is the smoothed-Heaviside measure of the region where the state
is negative, plus a penalty for failing to contact the obstacle over the
target polygon, plus a quadratic penalty outside the control box.  The
gradient freezes the contact set of the current state, solves one
adjoint system on the free nodes, and chains through the interpolation
Jacobian of the boundary control; where the contact set is about to
change this yields one generalized-gradient element.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fem import DiscreteObstacleProblem
from .obstacle import StateSolution, solve_obstacle
from .pchip import ControlVector, control_jacobian, control_trace
import scipy.sparse.linalg as spla


@dataclass(frozen=True)
class ObjectiveConfig:
    beta: float = 1e-3
    eps: float = 1e-3
    gamma: float = 1e-3
    u_min: float = 0.01
    u_max: float = 10.0

    def __post_init__(self):
        if self.beta <= 0 or self.eps <= 0 or self.gamma < 0:
            raise ValueError("require beta > 0, eps > 0, gamma >= 0")
        if not self.u_min < self.u_max:
            raise ValueError("u_min must be below u_max")


@dataclass(eq=False)
class EvalRecord:
    J: float
    area_term: float
    contact_term: float
    box_term: float
    contact_set: np.ndarray
    feval_index: int = 0
    grad: np.ndarray | None = None
    state: StateSolution | None = field(default=None, repr=False)


def heaviside_smooth(x, beta: float):
    """Smoothed step 0.5*tanh(x/beta) + 0.5 and its derivative.

    The derivative is computed as (1 - tanh^2)/(2 beta), which underflows
    cleanly to zero for |x/beta| large instead of overflowing cosh.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    t = np.tanh(np.asarray(x, dtype=float) / beta)
    return 0.5 * t + 0.5, (1.0 - t * t) / (2.0 * beta)


class _Quadrature:
    """Edge-midpoint rule data: y at midpoint (i + j)/2, weight area/3."""

    def __init__(self, mesh, triangle_mask=None):
        tris = mesh.triangles if triangle_mask is None else mesh.triangles[triangle_mask]
        areas = mesh.triangle_areas() if triangle_mask is None else mesh.triangle_areas()[triangle_mask]
        pairs = np.stack([tris[:, [0, 1]], tris[:, [1, 2]], tris[:, [2, 0]]], axis=1)
        self.i1 = pairs[:, :, 0].ravel()
        self.i2 = pairs[:, :, 1].ravel()
        self.w = np.repeat(areas / 3.0, 3)
        self.n = mesh.num_nodes

    def midpoint_values(self, q):
        return 0.5 * (q[self.i1] + q[self.i2])

    def integrate(self, vals_at_midpoints):
        return float(self.w @ vals_at_midpoints)

    def scatter_derivative(self, dvals_at_midpoints):
        """d(integral)/dq from d(integrand)/d(midpoint value)."""
        g = np.zeros(self.n)
        contrib = 0.5 * self.w * dvals_at_midpoints
        np.add.at(g, self.i1, contrib)
        np.add.at(g, self.i2, contrib)
        return g


def area_deficit(q, quad: _Quadrature, beta: float):
    """integral of (1 - H_beta(y_h)) and its derivative w.r.t. nodal values."""
    ym = quad.midpoint_values(q)
    H, dH = heaviside_smooth(ym, beta)
    return quad.integrate(1.0 - H), quad.scatter_derivative(-dH)


def contact_penalty(q, psi, quad0: _Quadrature, eps: float):
    """(1/eps) integral over the target polygon of (y_h - psi_h)^2."""
    gap = quad0.midpoint_values(q) - quad0.midpoint_values(psi)
    val = quad0.integrate(gap * gap) / eps
    return val, quad0.scatter_derivative(2.0 * gap / eps)


def box_penalty(a, cfg: ObjectiveConfig):
    """(gamma/2) sum of squared violations of [u_min, u_max]."""
    a = np.asarray(a, dtype=float)
    over = np.maximum(a - cfg.u_max, 0.0)
    under = np.maximum(cfg.u_min - a, 0.0)
    val = 0.5 * cfg.gamma * float(over @ over + under @ under)
    return val, cfg.gamma * (over - under)


def evaluate(a, problem: DiscreteObstacleProblem, config: ObjectiveConfig,
             warm_start=None, feval_index: int = 0) -> EvalRecord:
    """Solve the state at control ``a`` and assemble the cost terms."""
    ctrl = a if isinstance(a, ControlVector) else ControlVector(np.asarray(a, float),
                                                                config.u_min, config.u_max)
    u_d = control_trace(ctrl, problem.dirichlet_angles)
    state = solve_obstacle(problem, u_d, warm_start=warm_start)
    quad = _Quadrature(problem.mesh)
    quad0 = _Quadrature(problem.mesh, problem.mesh.omega0_triangles)
    area_term, _ = area_deficit(state.q, quad, config.beta)
    contact_term, _ = contact_penalty(state.q, problem.psi_vec, quad0, config.eps)
    box_term, _ = box_penalty(ctrl.a, config)
    return EvalRecord(J=area_term + contact_term + box_term,
                      area_term=area_term, contact_term=contact_term,
                      box_term=box_term, contact_set=state.contact_set,
                      feval_index=feval_index, state=state)


def gradient(a, problem: DiscreteObstacleProblem, config: ObjectiveConfig,
             record: EvalRecord) -> np.ndarray:
    """Adjoint gradient of the total cost under the record's contact set."""
    ctrl = a if isinstance(a, ControlVector) else ControlVector(np.asarray(a, float),
                                                                config.u_min, config.u_max)
    state = record.state
    if state is None:
        raise ValueError("record must carry its state solution")
    quad = _Quadrature(problem.mesh)
    quad0 = _Quadrature(problem.mesh, problem.mesh.omega0_triangles)
    _, g_area = area_deficit(state.q, quad, config.beta)
    _, g_contact = contact_penalty(state.q, problem.psi_vec, quad0, config.eps)
    g = g_area + g_contact

    free = state.free_nodes
    Kc = problem.K.tocsc()
    if free is None:
        mask = np.ones(problem.mesh.num_nodes, dtype=bool)
        mask[problem.dirichlet_nodes] = False
        mask[state.contact_set] = False
        free = np.flatnonzero(mask)
    factor = state.free_factor
    if factor is None:
        factor = spla.splu(Kc[free][:, free])
    p = factor.solve(g[free])
    d_nodes = problem.dirichlet_nodes
    dJ_du = g[d_nodes] - Kc[d_nodes][:, free] @ p
    B = control_jacobian(ctrl, problem.dirichlet_angles)
    _, g_box = box_penalty(ctrl.a, config)
    record.grad = B.T @ dJ_du + g_box
    return record.grad


class ReducedObjective:
    """Callable (J, grad) evaluator with warm starting and a CSV log.

    The evaluation counter is plain instance state; synchronize externally
    if calling concurrently.
    """

    LOG_HEADER = "feval,J,area_term,contact_term,box_term,grad_norm,n_contact"

    def __init__(self, problem: DiscreteObstacleProblem, config: ObjectiveConfig,
                 warm_starting: bool = True):
        self.problem = problem
        self.config = config
        self.warm_starting = warm_starting
        self.feval_count = 0
        self.log_rows: list[str] = []
        self._last_contact: np.ndarray | None = None
        self._quad = _Quadrature(problem.mesh)
        self._quad0 = _Quadrature(problem.mesh, problem.mesh.omega0_triangles)

    def evaluate(self, a, warm_start=None) -> EvalRecord:
        ctrl = ControlVector(np.asarray(a, float), self.config.u_min, self.config.u_max)
        u_d = control_trace(ctrl, self.problem.dirichlet_angles)
        if warm_start is None and self.warm_starting:
            warm_start = self._last_contact
        state = solve_obstacle(self.problem, u_d, warm_start=warm_start)
        self._last_contact = state.contact_set
        area_term, _ = area_deficit(state.q, self._quad, self.config.beta)
        contact_term, _ = contact_penalty(state.q, self.problem.psi_vec,
                                          self._quad0, self.config.eps)
        box_term, _ = box_penalty(ctrl.a, self.config)
        self.feval_count += 1
        return EvalRecord(J=area_term + contact_term + box_term,
                          area_term=area_term, contact_term=contact_term,
                          box_term=box_term, contact_set=state.contact_set,
                          feval_index=self.feval_count, state=state)

    def __call__(self, a):
        rec = self.evaluate(a)
        g = gradient(a, self.problem, self.config, rec)
        self.log_rows.append(
            f"{rec.feval_index},{rec.J:.17g},{rec.area_term:.17g},"
            f"{rec.contact_term:.17g},{rec.box_term:.17g},"
            f"{float(np.linalg.norm(g)):.17g},{len(rec.contact_set)}")
        return rec.J, g
