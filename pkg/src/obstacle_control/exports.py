"""File exports: state CSV, legacy VTK, trace CSV, zero level set.

All CSVs carry a header row, use '.' as the decimal separator, and print
floats with 17 significant digits so repeated runs are byte-identical.
"""

from __future__ import annotations

import numpy as np

from .bfgs import OptRunTrace
from .mesh import TriMesh
from .obstacle import StateSolution
from .pchip import ControlVector


def _g17(x: float) -> str:
    return f"{float(x):.17g}"


def write_state_csv(path, mesh: TriMesh, sol: StateSolution, psi: np.ndarray) -> None:
    contact = np.zeros(mesh.num_nodes, dtype=int)
    contact[sol.contact_set] = 1
    with open(path, "w") as fh:
        fh.write("node,x,y,q,psi,contact\n")
        for i in range(mesh.num_nodes):
            fh.write(f"{i},{_g17(mesh.nodes[i, 0])},{_g17(mesh.nodes[i, 1])},"
                     f"{_g17(sol.q[i])},{_g17(psi[i])},{contact[i]}\n")


def write_state_vtk(path, mesh: TriMesh, fields: dict, title: str = "state") -> None:
    """Legacy ASCII VTK unstructured grid with point-data scalars."""
    with open(path, "w") as fh:
        fh.write("# vtk DataFile Version 3.0\n")
        fh.write(f"{title}\n")
        fh.write("ASCII\nDATASET UNSTRUCTURED_GRID\n")
        fh.write(f"POINTS {mesh.num_nodes} double\n")
        for x, y in mesh.nodes:
            fh.write(f"{_g17(x)} {_g17(y)} 0\n")
        t = mesh.num_triangles
        fh.write(f"CELLS {t} {4 * t}\n")
        for i, j, k in mesh.triangles:
            fh.write(f"3 {i} {j} {k}\n")
        fh.write(f"CELL_TYPES {t}\n")
        fh.write("5\n" * t)
        fh.write(f"POINT_DATA {mesh.num_nodes}\n")
        for name, values in fields.items():
            fh.write(f"SCALARS {name} double 1\nLOOKUP_TABLE default\n")
            for v in values:
                fh.write(_g17(v) + "\n")


def write_mesh_vtk(path, mesh: TriMesh) -> None:
    """Mesh geometry with the target-region flag as cell data."""
    with open(path, "w") as fh:
        fh.write("# vtk DataFile Version 3.0\nmesh\nASCII\nDATASET UNSTRUCTURED_GRID\n")
        fh.write(f"POINTS {mesh.num_nodes} double\n")
        for x, y in mesh.nodes:
            fh.write(f"{_g17(x)} {_g17(y)} 0\n")
        t = mesh.num_triangles
        fh.write(f"CELLS {t} {4 * t}\n")
        for i, j, k in mesh.triangles:
            fh.write(f"3 {i} {j} {k}\n")
        fh.write(f"CELL_TYPES {t}\n")
        fh.write("5\n" * t)
        fh.write(f"CELL_DATA {t}\nSCALARS omega0 int 1\nLOOKUP_TABLE default\n")
        for f in mesh.omega0_triangles:
            fh.write(f"{1 if f else 0}\n")


def write_trace_csv(path, trace: OptRunTrace) -> None:
    with open(path, "w") as fh:
        fh.write("feval,J,bestJ,gradnorm,step\n")
        for i in range(len(trace)):
            fh.write(f"{trace.feval[i]},{_g17(trace.J[i])},{_g17(trace.bestJ[i])},"
                     f"{_g17(trace.gradnorm[i])},{_g17(trace.step[i])}\n")


def write_control_csv(path, ctrl: ControlVector) -> None:
    with open(path, "w") as fh:
        fh.write("k,theta_k,a_k\n")
        for k, (th, ak) in enumerate(zip(ctrl.knots, ctrl.a)):
            fh.write(f"{k},{_g17(th)},{_g17(ak)}\n")


def read_control_csv(path) -> np.ndarray:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if header != ["k", "theta_k", "a_k"]:
            raise ValueError(f"{path}: expected header 'k,theta_k,a_k'")
        vals = [float(line.strip().split(",")[2]) for line in fh if line.strip()]
    return np.asarray(vals)


def write_eval_log_csv(path, header: str, rows: list[str]) -> None:
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def write_compare_csv(path, header: list[str], rows: list[list[float]]) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(f"{int(row[0])}," + ",".join(_g17(v) for v in row[1:]) + "\n")


def extract_zero_levelset(mesh: TriMesh, q: np.ndarray) -> list[np.ndarray]:
    """Polylines of the zero level set of the P1 field ``q``.

    Crossing points are linear interpolations along edges whose endpoint
    values differ in sign; segments are chained into polylines.
    """
    crossings: dict[tuple[int, int], np.ndarray] = {}

    def edge_point(i, j):
        key = (min(i, j), max(i, j))
        if key not in crossings:
            qi, qj = q[key[0]], q[key[1]]
            t = qi / (qi - qj)
            crossings[key] = mesh.nodes[key[0]] + t * (mesh.nodes[key[1]] - mesh.nodes[key[0]])
        return key

    segments = []
    for tri in mesh.triangles:
        keys = []
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            if q[a] * q[b] < 0:
                keys.append(edge_point(int(a), int(b)))
        if len(keys) == 2:
            segments.append((keys[0], keys[1]))

    adj: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for a, b in segments:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)

    visited = set()
    polylines = []
    starts = [k for k, v in adj.items() if len(v) == 1] + list(adj.keys())
    for start in starts:
        if start in visited:
            continue
        chain = [start]
        visited.add(start)
        cur = start
        while True:
            nxt = [k for k in adj[cur] if k not in visited]
            if not nxt:
                break
            cur = nxt[0]
            visited.add(cur)
            chain.append(cur)
        if len(chain) >= 2:
            polylines.append(np.array([crossings[k] for k in chain]))
    return polylines


def write_levelset_csv(path, polylines: list[np.ndarray]) -> None:
    with open(path, "w") as fh:
        fh.write("segment_id,x,y\n")
        for sid, line in enumerate(polylines):
            for x, y in line:
                fh.write(f"{sid},{_g17(x)},{_g17(y)}\n")
