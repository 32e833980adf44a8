"""P1 finite element assembly on disk triangulations.

Stiffness and load assembly, nodal interpolation, and the unconstrained
Dirichlet solve used as a verification oracle when the obstacle is
inactive.  Load integration uses the 3-point edge-midpoint rule, exact
for quadratic integrands.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .mesh import TriMesh


@dataclass(frozen=True, eq=False)
class DiscreteObstacleProblem:
    """Assembled data of the discrete obstacle problem on a fixed mesh."""

    K: sp.csr_matrix
    f_vec: np.ndarray
    psi_vec: np.ndarray
    dirichlet_nodes: np.ndarray
    dirichlet_angles: np.ndarray
    mesh: TriMesh

    @property
    def dirichlet(self) -> list[tuple[int, float]]:
        return [(int(i), float(t)) for i, t in
                zip(self.dirichlet_nodes, self.dirichlet_angles)]

    @cached_property
    def interior(self) -> np.ndarray:
        mask = np.ones(self.mesh.num_nodes, dtype=bool)
        mask[self.dirichlet_nodes] = False
        return np.flatnonzero(mask)


def _element_geometry(mesh: TriMesh):
    p = mesh.nodes[mesh.triangles]
    x1, y1 = p[:, 0, 0], p[:, 0, 1]
    x2, y2 = p[:, 1, 0], p[:, 1, 1]
    x3, y3 = p[:, 2, 0], p[:, 2, 1]
    det = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)
    area = 0.5 * det
    # gradients of the three hat functions, shape (T, 3, 2)
    gx = np.stack([y2 - y3, y3 - y1, y1 - y2], axis=1) / det[:, None]
    gy = np.stack([x3 - x2, x1 - x3, x2 - x1], axis=1) / det[:, None]
    return area, gx, gy


def assemble_stiffness(mesh: TriMesh) -> sp.csr_matrix:
    """Laplacian stiffness matrix; symmetric by construction."""
    area, gx, gy = _element_geometry(mesh)
    bad = np.flatnonzero(area <= 1e-14)
    if bad.size:
        raise ValueError(f"degenerate triangle {bad[0]} (area {area[bad[0]]:.3e})")
    ke = (gx[:, :, None] * gx[:, None, :] + gy[:, :, None] * gy[:, None, :]) * area[:, None, None]
    t = mesh.triangles
    rows = np.repeat(t, 3, axis=1).ravel()
    cols = np.tile(t, (1, 3)).ravel()
    n = mesh.num_nodes
    K = sp.coo_matrix((ke.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    K = (K + K.T) * 0.5  # exact symmetry regardless of summation order
    K.sum_duplicates()
    return K.tocsr()


def _edge_midpoints(mesh: TriMesh):
    t = mesh.triangles
    pairs = np.stack([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]], axis=1)  # (T, 3, 2)
    mids = 0.5 * (mesh.nodes[pairs[:, :, 0]] + mesh.nodes[pairs[:, :, 1]])
    return pairs, mids


def assemble_load(mesh: TriMesh, f) -> np.ndarray:
    """Load vector via the 3-point edge-midpoint rule.

    ``f`` is a constant or a callable taking an (M, 2) array of points.
    """
    area = mesh.triangle_areas()
    pairs, mids = _edge_midpoints(mesh)
    if callable(f):
        fv = np.asarray(f(mids.reshape(-1, 2)), dtype=float).reshape(mids.shape[:2])
    else:
        fv = np.full(mids.shape[:2], float(f))
    # each midpoint value is shared by the two adjacent hat functions (value 1/2)
    w = (area / 3.0)[:, None] * fv * 0.5
    out = np.zeros(mesh.num_nodes)
    np.add.at(out, pairs[:, :, 0].ravel(), w.ravel())
    np.add.at(out, pairs[:, :, 1].ravel(), w.ravel())
    return out


def interpolate_nodal(mesh: TriMesh, g) -> np.ndarray:
    """Nodal values g(x_i); ``g`` a constant or callable on an (N, 2) array."""
    if callable(g):
        return np.asarray(g(mesh.nodes), dtype=float).reshape(mesh.num_nodes)
    return np.full(mesh.num_nodes, float(g))


def build_problem(mesh: TriMesh, f, psi) -> DiscreteObstacleProblem:
    return DiscreteObstacleProblem(
        K=assemble_stiffness(mesh),
        f_vec=assemble_load(mesh, f),
        psi_vec=interpolate_nodal(mesh, psi),
        dirichlet_nodes=mesh.boundary_nodes.copy(),
        dirichlet_angles=mesh.boundary_angles.copy(),
        mesh=mesh,
    )


def solve_fixed(K: sp.csr_matrix, f_vec: np.ndarray,
                fixed_idx: np.ndarray, fixed_vals: np.ndarray) -> np.ndarray:
    """Solve K q = f with q prescribed on ``fixed_idx``; returns the full vector."""
    n = K.shape[0]
    mask = np.ones(n, dtype=bool)
    mask[fixed_idx] = False
    free = np.flatnonzero(mask)
    q = np.zeros(n)
    q[fixed_idx] = fixed_vals
    Kc = K.tocsc()
    rhs = f_vec[free] - Kc[free][:, fixed_idx] @ fixed_vals
    lu = spla.splu(Kc[free][:, free])
    q[free] = lu.solve(rhs)
    return q


def unconstrained_dirichlet_solve(problem: DiscreteObstacleProblem,
                                  u_d: np.ndarray) -> np.ndarray:
    """Poisson solve with the obstacle ignored (verification oracle)."""
    u_d = np.asarray(u_d, dtype=float)
    if u_d.shape != problem.dirichlet_nodes.shape:
        raise ValueError("boundary values must cover every Dirichlet node")
    return solve_fixed(problem.K, problem.f_vec, problem.dirichlet_nodes, u_d)


def l2_error(mesh: TriMesh, q: np.ndarray, exact) -> float:
    """L2 norm of (P1 field - exact) by the edge-midpoint rule."""
    area = mesh.triangle_areas()
    pairs, mids = _edge_midpoints(mesh)
    qh = 0.5 * (q[pairs[:, :, 0]] + q[pairs[:, :, 1]])
    ex = np.asarray(exact(mids.reshape(-1, 2)), dtype=float).reshape(mids.shape[:2])
    return float(np.sqrt(np.sum((area / 3.0)[:, None] * (qh - ex) ** 2)))
