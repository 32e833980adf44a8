"""Triangulations of a disk with an embedded constrained polygon.

Meshes are built for the disk B(0, R): boundary nodes sit exactly on the
circle, equally spaced in angle, and the edges of a target polygon are
forced to appear as mesh edges.  Interior nodes start from a jittered
hexagonal seed and are relaxed by Laplacian smoothing over repeated
Delaunay triangulations; a protection zone around each constrained
segment keeps it a Gabriel (hence Delaunay) edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import Delaunay, cKDTree

MIN_ANGLE_DEG = 20.0

_MAGIC = "obsmesh"
_VERSION = 1

# clearances in units of the nominal mesh size h
_RING_CLEAR = 0.70      # seed points keep this distance from the circle
_RING_CAP = 0.55        # smoothing never lets a free node closer than this
_CHAIN_CLEAR = 0.70     # seed points keep this distance from the polygon chain
_PROTECT_SCALE = 1.02   # diametral-circle inflation for constrained segments


class MeshFormatError(ValueError):
    """Mesh file does not conform to the ASCII format."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True, eq=False)
class TriMesh:
    """Conforming P1 triangulation of the disk.

    nodes            (N, 2) coordinates
    triangles        (T, 3) node indices, counterclockwise
    boundary_nodes   node indices on the circle, sorted by polar angle
    boundary_angles  angle in [0, 2*pi) per boundary node
    omega0_triangles (T,) bool, True for triangles inside the target polygon
    nominal_h        target edge length the mesh was generated for
    """

    nodes: np.ndarray
    triangles: np.ndarray
    boundary_nodes: np.ndarray
    boundary_angles: np.ndarray
    omega0_triangles: np.ndarray
    nominal_h: float

    def __post_init__(self):
        object.__setattr__(self, "nodes", np.ascontiguousarray(self.nodes, dtype=float))
        object.__setattr__(self, "triangles", np.ascontiguousarray(self.triangles, dtype=np.int64))
        object.__setattr__(self, "boundary_nodes", np.ascontiguousarray(self.boundary_nodes, dtype=np.int64))
        object.__setattr__(self, "boundary_angles", np.ascontiguousarray(self.boundary_angles, dtype=float))
        object.__setattr__(self, "omega0_triangles", np.ascontiguousarray(self.omega0_triangles, dtype=bool))
        for arr in (self.nodes, self.triangles, self.boundary_nodes,
                    self.boundary_angles, self.omega0_triangles):
            arr.setflags(write=False)

    @property
    def num_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def num_triangles(self) -> int:
        return self.triangles.shape[0]

    @cached_property
    def interior_nodes(self) -> np.ndarray:
        """Node indices not on the Dirichlet boundary."""
        mask = np.ones(self.num_nodes, dtype=bool)
        mask[self.boundary_nodes] = False
        return np.flatnonzero(mask)

    @cached_property
    def edges(self) -> np.ndarray:
        """Unique undirected edges, (E, 2) with i < j."""
        t = self.triangles
        e = np.vstack([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        e.sort(axis=1)
        return np.unique(e, axis=0)

    def signed_areas(self) -> np.ndarray:
        p = self.nodes[self.triangles]
        return 0.5 * ((p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
                      - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1]))

    def triangle_areas(self) -> np.ndarray:
        return np.abs(self.signed_areas())

    def min_angle_deg(self) -> float:
        return float(_min_angles_deg(self.nodes, self.triangles).min())

    def validate(self, radius: float | None = None, omega0=None) -> None:
        """Raise ValueError on any violated structural invariant."""
        if np.any(self.signed_areas() <= 0):
            raise ValueError("found triangle with non-positive signed area")
        if radius is not None:
            r = np.hypot(*self.nodes[self.boundary_nodes].T)
            if np.any(np.abs(r - radius) > 1e-12 * radius):
                raise ValueError("boundary node off the circle")
        if np.any(np.diff(self.boundary_angles) <= 0):
            raise ValueError("boundary angles not strictly increasing")
        counts = _edge_use_counts(self.triangles)
        if counts.max() > 2:
            raise ValueError("non-conforming edge shared by more than two triangles")
        boundary_edges = [tuple(sorted((int(e[0]), int(e[1]))))
                          for e, c in counts.items() if c == 1]
        b = self.boundary_nodes
        cycle = {tuple(sorted((int(b[i]), int(b[(i + 1) % len(b)])))) for i in range(len(b))}
        if set(boundary_edges) != cycle:
            raise ValueError("boundary edges do not form the boundary-node cycle")
        n_edges = len(self.edges)
        if self.num_nodes - n_edges + self.num_triangles != 1:
            raise ValueError("Euler relation N - E + T = 1 violated")
        if omega0 is not None:
            poly = np.asarray(omega0, dtype=float)
            if not _chain_edges_present(self, poly):
                raise ValueError("polygon edge missing from the mesh edge set")
            centroids = self.nodes[self.triangles].mean(axis=1)
            inside = points_in_polygon(centroids, poly)
            if np.any(inside != self.omega0_triangles):
                raise ValueError("omega0 flags disagree with centroid-in-polygon test")


def _edge_use_counts(triangles: np.ndarray):
    e = np.vstack([triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]]])
    e.sort(axis=1)
    uniq, counts = np.unique(e, axis=0, return_counts=True)

    class _Counts:
        def __init__(self, u, c):
            self.u, self.c = u, c

        def max(self):
            return int(self.c.max())

        def items(self):
            return zip(self.u, self.c)

    return _Counts(uniq, counts)


def _chain_edges_present(mesh: TriMesh, poly: np.ndarray) -> bool:
    edge_set = {(int(a), int(b)) for a, b in mesh.edges}
    chain = _locate_chain_nodes(mesh, poly)
    if chain is None:
        return False
    for a, b in zip(chain, np.roll(chain, -1)):
        key = (min(int(a), int(b)), max(int(a), int(b)))
        if key not in edge_set:
            return False
    return True


def _locate_chain_nodes(mesh: TriMesh, poly: np.ndarray):
    """Ordered node indices along the polygon boundary, or None."""
    m = len(poly)
    tol = 1e-9 * max(1.0, np.abs(poly).max())
    on_chain = []
    for k in range(m):
        a, b = poly[k], poly[(k + 1) % m]
        ab = b - a
        L = math.hypot(*ab)
        rel = mesh.nodes - a
        t = (rel @ ab) / (L * L)
        # perpendicular distance via the cross product (cancellation-safe)
        d = np.abs(ab[0] * rel[:, 1] - ab[1] * rel[:, 0]) / L
        mask = (d < tol) & (t > -1e-12) & (t < 1 - 1e-9)
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            return None
        on_chain.append(idx[np.argsort(t[idx])])
    return np.concatenate(on_chain)


def polygon_signed_area(poly) -> float:
    p = np.asarray(poly, dtype=float)
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def points_in_polygon(pts, poly) -> np.ndarray:
    """Ray-casting point-in-polygon test, vectorized over points."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    poly = np.asarray(poly, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    inside = np.zeros(len(pts), dtype=bool)
    for k in range(len(poly)):
        x1, y1 = poly[k]
        x2, y2 = poly[(k + 1) % len(poly)]
        cond = (y1 > y) != (y2 > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xcross = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
        inside ^= cond & (x < xcross)
    return inside


def _segments_intersect(p1, p2, p3, p4) -> bool:
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return (v > 0) - (v < 0)

    o1, o2 = orient(p1, p2, p3), orient(p1, p2, p4)
    o3, o4 = orient(p3, p4, p1), orient(p3, p4, p2)
    return o1 != o2 and o3 != o4


def _check_polygon(poly: np.ndarray, R: float, h: float) -> np.ndarray:
    if poly.ndim != 2 or poly.shape[0] < 3 or poly.shape[1] != 2:
        raise ValueError("polygon must be a list of at least 3 (x, y) vertices")
    m = len(poly)
    for i in range(m):
        for j in range(i + 1, m):
            if abs(i - j) in (0, 1) or (i == 0 and j == m - 1):
                continue
            if _segments_intersect(poly[i], poly[(i + 1) % m], poly[j], poly[(j + 1) % m]):
                raise ValueError("polygon is self-intersecting")
    if polygon_signed_area(poly) < 0:
        poly = poly[::-1].copy()
    r = np.hypot(poly[:, 0], poly[:, 1])
    if r.max() >= R:
        raise ValueError("polygon touches or crosses the circle of radius R")
    if R - r.max() < 0.5 * h:
        raise ValueError(f"h={h} too large: polygon-to-circle gap under h/2 cannot be meshed")
    # corner angles below the quality floor cannot be meshed at that floor
    for i in range(m):
        a, b, c = poly[i - 1], poly[i], poly[(i + 1) % m]
        u, v = a - b, c - b
        ang = math.degrees(math.acos(np.clip((u @ v) / (np.linalg.norm(u) * np.linalg.norm(v)), -1, 1)))
        if ang < MIN_ANGLE_DEG + 1.0:
            raise ValueError(f"polygon corner angle {ang:.1f} deg below mesh quality floor")
    lens = np.hypot(*(np.roll(poly, -1, axis=0) - poly).T)
    if np.any(np.ceil(lens / h) < 2):
        raise ValueError(f"h={h} too large: a polygon edge would get fewer than 3 chain nodes")
    return poly


def _min_angles_deg(nodes: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    p = nodes[triangles]
    out = np.full(len(triangles), 180.0)
    for i in range(3):
        u = p[:, (i + 1) % 3] - p[:, i]
        v = p[:, (i + 2) % 3] - p[:, i]
        cosang = np.einsum("ij,ij->i", u, v) / (
            np.linalg.norm(u, axis=1) * np.linalg.norm(v, axis=1))
        ang = np.degrees(np.arccos(np.clip(cosang, -1.0, 1.0)))
        out = np.minimum(out, ang)
    return out


def _unique_edges(simplices: np.ndarray) -> np.ndarray:
    e = np.vstack([simplices[:, [0, 1]], simplices[:, [1, 2]], simplices[:, [2, 0]]])
    e.sort(axis=1)
    return np.unique(e, axis=0)


def _laplacian_smooth(pts, n_fixed, R, h, chain_segs, iters):
    for _ in range(iters):
        tri = Delaunay(pts)
        e = _unique_edges(tri.simplices)
        acc = np.zeros_like(pts)
        cnt = np.zeros(len(pts))
        np.add.at(acc, e[:, 0], pts[e[:, 1]])
        np.add.at(acc, e[:, 1], pts[e[:, 0]])
        np.add.at(cnt, e[:, 0], 1.0)
        np.add.at(cnt, e[:, 1], 1.0)
        mean = acc / cnt[:, None]
        pts[n_fixed:] = mean[n_fixed:]
        _enforce_clearance(pts, n_fixed, R, h, chain_segs)
    return pts


def _enforce_clearance(pts, n_fixed, R, h, chain_segs):
    free = pts[n_fixed:]
    r = np.hypot(free[:, 0], free[:, 1])
    cap = R - _RING_CAP * h
    far = r > cap
    if np.any(far):
        free[far] *= (cap / r[far])[:, None]
    for a, b in chain_segs:
        mid = 0.5 * (pts[a] + pts[b])
        rad = _PROTECT_SCALE * 0.5 * np.linalg.norm(pts[b] - pts[a])
        d = free - mid
        dist = np.hypot(d[:, 0], d[:, 1])
        close = dist < rad
        if np.any(close):
            dirs = d[close]
            norms = dist[close]
            degenerate = norms < 1e-14
            if np.any(degenerate):
                t = pts[b] - pts[a]
                perp = np.array([-t[1], t[0]]) / np.linalg.norm(t)
                dirs[degenerate] = perp
                norms[degenerate] = 1.0
            free[close] = mid + dirs / norms[:, None] * rad
    pts[n_fixed:] = free


def _recover_chain_edges(pts, n_fixed, chain_segs, max_rounds=10):
    for _ in range(max_rounds):
        tri = Delaunay(pts)
        edge_set = {(int(a), int(b)) for a, b in _unique_edges(tri.simplices)}
        missing = [s for s in chain_segs
                   if (min(s), max(s)) not in edge_set]
        if not missing:
            return pts, tri
        drop = np.zeros(len(pts), dtype=bool)
        for a, b in missing:
            mid = 0.5 * (pts[a] + pts[b])
            rad = 1.1 * 0.5 * np.linalg.norm(pts[b] - pts[a])
            d = pts - mid
            inside = np.hypot(d[:, 0], d[:, 1]) < rad
            inside[:n_fixed] = False
            drop |= inside
        if not np.any(drop):
            raise RuntimeError("failed to recover a constrained polygon edge")
        pts = pts[~drop]
    raise RuntimeError("failed to recover constrained polygon edges")


def _circumcenters(p):
    a, b, c = p[:, 0], p[:, 1], p[:, 2]
    ab, ac = b - a, c - a
    d = 2.0 * (ab[:, 0] * ac[:, 1] - ab[:, 1] * ac[:, 0])
    ab2 = np.einsum("ij,ij->i", ab, ab)
    ac2 = np.einsum("ij,ij->i", ac, ac)
    ux = (ac[:, 1] * ab2 - ab[:, 1] * ac2) / d
    uy = (ab[:, 0] * ac2 - ac[:, 0] * ab2) / d
    return a + np.stack([ux, uy], axis=1)


def _dist_to_chain(pts, chain_pts, chain_segs_local):
    best = np.full(len(pts), np.inf)
    for a, b in chain_segs_local:
        pa, pb = chain_pts[a], chain_pts[b]
        ab = pb - pa
        L2 = ab @ ab
        t = np.clip(((pts - pa) @ ab) / L2, 0.0, 1.0)
        proj = pa + t[:, None] * ab
        d = np.hypot(*(pts - proj).T)
        best = np.minimum(best, d)
    return best


def _improve_quality(pts, n_fixed, R, h, chain_segs, floor_deg, seed_pts_chain, chain_local):
    for _ in range(20):
        tri = Delaunay(pts)
        angles = _min_angles_deg(pts, tri.simplices)
        if angles.min() >= floor_deg:
            break
        bad = np.flatnonzero(angles < floor_deg)
        bad = bad[np.argsort(angles[bad])][:16]
        cand = _circumcenters(pts[tri.simplices[bad]])
        mids = []
        for s in tri.simplices[bad]:
            q = pts[s]
            lens = [np.linalg.norm(q[(i + 1) % 3] - q[i]) for i in range(3)]
            i = int(np.argmax(lens))
            mids.append(0.5 * (q[i] + q[(i + 1) % 3]))
        cand = np.vstack([cand, np.asarray(mids)])
        r = np.hypot(cand[:, 0], cand[:, 1])
        ok = r < R - _RING_CLEAR * h
        ok &= _dist_to_chain(cand, seed_pts_chain, chain_local) > _CHAIN_CLEAR * h
        cand = cand[ok]
        if len(cand):
            tree = cKDTree(pts)
            d, _ = tree.query(cand)
            cand = cand[d > 0.45 * h]
        if len(cand) == 0:
            break
        # thin out mutually close candidates
        keep: list[int] = []
        for i in range(len(cand)):
            if all(np.linalg.norm(cand[i] - cand[k]) > 0.45 * h for k in keep):
                keep.append(i)
        cand = cand[keep]
        pts = np.vstack([pts, cand])
        pts = _laplacian_smooth(pts, n_fixed, R, h, chain_segs, 8)
        pts, _ = _recover_chain_edges(pts, n_fixed, chain_segs)
    return pts


def generate_disk_mesh(R: float, h: float, omega0, seed: int = 0) -> TriMesh:
    """Generate a conforming triangulation of B(0, R) with omega0 edges constrained.

    Boundary nodes are placed exactly on the circle, equally spaced, with
    count round(2*pi*R/h).  Every polygon edge is subdivided into segments
    of length <= h that appear as mesh edges.  The result is deterministic
    for fixed inputs and seed, and its minimum triangle angle is at least
    MIN_ANGLE_DEG.
    """
    if R <= 0:
        raise ValueError("R must be positive")
    if not 0 < h < R:
        raise ValueError("h must satisfy 0 < h < R")
    poly = _check_polygon(np.asarray(omega0, dtype=float), R, h)

    nb = int(round(2.0 * math.pi * R / h))
    theta = 2.0 * math.pi * np.arange(nb) / nb
    ring = R * np.stack([np.cos(theta), np.sin(theta)], axis=1)

    # polygon chain: each edge subdivided into ceil(len/h) segments
    chain_pts = []
    m = len(poly)
    lens = np.hypot(*(np.roll(poly, -1, axis=0) - poly).T)
    for k in range(m):
        c = int(np.ceil(lens[k] / h))
        frac = np.arange(c) / c
        chain_pts.append(poly[k] + frac[:, None] * (poly[(k + 1) % m] - poly[k]))
    chain_pts = np.vstack(chain_pts)
    n_chain = len(chain_pts)
    chain_local = [(i, (i + 1) % n_chain) for i in range(n_chain)]
    chain_segs = [(nb + i, nb + j) for i, j in chain_local]

    # hexagonal seed lattice, tiny deterministic jitter
    rng = np.random.default_rng(seed)
    dy = h * math.sqrt(3.0) / 2.0
    jmax = int(math.ceil(R / dy)) + 1
    imax = int(math.ceil(R / h)) + 1
    fill = []
    for j in range(-jmax, jmax + 1):
        xs = (np.arange(-imax, imax + 1) + (0.5 if j % 2 else 0.0)) * h
        ys = np.full_like(xs, j * dy)
        fill.append(np.stack([xs, ys], axis=1))
    fill = np.vstack(fill)
    fill = fill + rng.uniform(-0.05 * h, 0.05 * h, size=fill.shape)
    r = np.hypot(fill[:, 0], fill[:, 1])
    keep = r < R - _RING_CLEAR * h
    keep &= _dist_to_chain(fill, chain_pts, chain_local) > _CHAIN_CLEAR * h
    fill = fill[keep]

    pts = np.vstack([ring, chain_pts, fill])
    n_fixed = nb + n_chain

    pts = _laplacian_smooth(pts, n_fixed, R, h, chain_segs, 40)
    pts, _ = _recover_chain_edges(pts, n_fixed, chain_segs)
    pts = _improve_quality(pts, n_fixed, R, h, chain_segs, MIN_ANGLE_DEG + 0.5,
                           chain_pts, chain_local)
    pts, tri = _recover_chain_edges(pts, n_fixed, chain_segs)

    simp = tri.simplices.astype(np.int64)
    p = pts[simp]
    s2 = ((p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
          - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1]))
    flip = s2 < 0
    simp[flip] = simp[flip][:, [0, 2, 1]]

    centroids = pts[simp].mean(axis=1)
    flags = points_in_polygon(centroids, poly)

    # store angles recomputed from the placed coordinates (the canonical
    # atan2 parameterization), so a save/load round trip is bit-identical
    stored = np.arctan2(pts[:nb, 1], pts[:nb, 0])
    stored = np.where(stored < 0, stored + 2.0 * math.pi, stored)
    mesh = TriMesh(nodes=pts, triangles=simp, boundary_nodes=np.arange(nb),
                   boundary_angles=stored, omega0_triangles=flags, nominal_h=h)
    worst = mesh.min_angle_deg()
    if worst < MIN_ANGLE_DEG:
        raise RuntimeError(f"mesh quality floor not met: min angle {worst:.2f} deg")
    return mesh


def boundary_parameterization(mesh: TriMesh) -> list[tuple[int, float]]:
    """(node index, theta) pairs along the circle, theta strictly increasing."""
    out = []
    for idx in mesh.boundary_nodes:
        x, y = mesh.nodes[idx]
        th = math.atan2(y, x)
        if th < 0:
            th += 2.0 * math.pi
        out.append((int(idx), th))
    return out


def save_mesh(mesh: TriMesh, path) -> None:
    """Write the ASCII mesh format (17 significant digits)."""
    with open(path, "w") as fh:
        fh.write(f"{_MAGIC} {_VERSION}\n")
        fh.write(f"{mesh.num_nodes} {len(mesh.boundary_nodes)} {mesh.num_triangles}\n")
        for x, y in mesh.nodes:
            fh.write(f"{x:.17g} {y:.17g}\n")
        fh.write(" ".join(str(int(i)) for i in mesh.boundary_nodes) + "\n")
        for (i, j, k), flag in zip(mesh.triangles, mesh.omega0_triangles):
            fh.write(f"{i} {j} {k} {1 if flag else 0}\n")


def load_mesh(path) -> TriMesh:
    """Read the ASCII mesh format; raises MeshFormatError with a line number."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise MeshFormatError(1, "empty file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != _MAGIC:
        raise MeshFormatError(1, f"expected header '{_MAGIC} {_VERSION}'")
    if head[1] != str(_VERSION):
        raise MeshFormatError(1, f"unsupported format version {head[1]}")
    if len(lines) < 2:
        raise MeshFormatError(2, "missing size line")
    try:
        n, eb, t = (int(v) for v in lines[1].split())
    except ValueError:
        raise MeshFormatError(2, "expected three integers 'N E_b T'") from None
    if n <= 0 or eb <= 0 or t <= 0:
        raise MeshFormatError(2, "sizes must be positive")
    need = 2 + n + 1 + t
    if len(lines) < need:
        raise MeshFormatError(len(lines) + 1, f"file truncated: expected {need} lines")
    nodes = np.empty((n, 2))
    for i in range(n):
        parts = lines[2 + i].split()
        if len(parts) != 2:
            raise MeshFormatError(3 + i, "expected 'x y'")
        try:
            nodes[i] = float(parts[0]), float(parts[1])
        except ValueError:
            raise MeshFormatError(3 + i, "malformed coordinate") from None
    bline = 2 + n
    try:
        bnodes = np.array([int(v) for v in lines[bline].split()], dtype=np.int64)
    except ValueError:
        raise MeshFormatError(bline + 1, "malformed boundary index list") from None
    if len(bnodes) != eb:
        raise MeshFormatError(bline + 1, f"expected {eb} boundary indices, got {len(bnodes)}")
    if bnodes.min(initial=0) < 0 or bnodes.max(initial=-1) >= n:
        raise MeshFormatError(bline + 1, "boundary index out of range")
    tris = np.empty((t, 3), dtype=np.int64)
    flags = np.empty(t, dtype=bool)
    for i in range(t):
        ln = bline + 1 + i
        parts = lines[ln].split()
        if len(parts) != 4:
            raise MeshFormatError(ln + 1, "expected 'i j k flag'")
        try:
            a, b, c, f = (int(v) for v in parts)
        except ValueError:
            raise MeshFormatError(ln + 1, "malformed triangle line") from None
        if min(a, b, c) < 0 or max(a, b, c) >= n:
            raise MeshFormatError(ln + 1, f"triangle index out of range (N={n})")
        if f not in (0, 1):
            raise MeshFormatError(ln + 1, "flag must be 0 or 1")
        tris[i] = a, b, c
        flags[i] = bool(f)
    angles = np.arctan2(nodes[bnodes, 1], nodes[bnodes, 0])
    angles = np.where(angles < 0, angles + 2.0 * math.pi, angles)
    # nominal h is not stored; estimate from the boundary spacing
    chords = np.hypot(*(nodes[np.roll(bnodes, -1)] - nodes[bnodes]).T)
    return TriMesh(nodes=nodes, triangles=tris, boundary_nodes=bnodes,
                   boundary_angles=angles, omega0_triangles=flags,
                   nominal_h=float(np.median(chords)))
