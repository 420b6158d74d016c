"""Common refinements of the aggregation and breakage integration regions.

The aggregation region ``u + w <= v_max`` is cut by the size bands
``v_{i-1/2} <= u + w <= v_{i+1/2}`` and the two axis strips, which gives convex
cells with at most six sides.  Each cell on the ``u <= w`` side (including the
lower half of diagonal cells) is triangulated by Delaunay edge flips, and the
other half is obtained by reflection so that the triangulation is exactly
symmetric under ``u <-> w``.

All edges in this geometry are axis-parallel, of slope -1, or the diagonal, so
line intersections are computed in closed form from the mesh edges.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .mesh import Mesh
from .quadrature import triangle_area

DEGENERATE_AREA = 1e-14


@dataclass(frozen=True, eq=False)
class AggRefinement:
    """Triangles of the aggregation region.

    ``owners[t] = (i, j, k)``: band ``A_i`` (``u + w``), strip ``B_j`` (``u``)
    and strip ``B'_k`` (``w``).  ``mirror[t]`` is the index of the reflected
    triangle.
    """

    mesh: Mesh
    verts: np.ndarray
    owners: np.ndarray
    areas: np.ndarray
    mirror: np.ndarray
    lower: np.ndarray

    def __len__(self):
        return self.areas.size

    @property
    def band(self):
        return self.owners[:, 0]

    @property
    def p(self):
        return self.owners[:, 1]

    @property
    def q(self):
        return self.owners[:, 2]


@dataclass(frozen=True, eq=False)
class BreakRefinement:
    """Elements ``E_{i,j} = C_i ∩ D_j`` of the breakage region, ``i <= j``.

    ``is_triangle[e]`` marks the diagonal elements; the rest are rectangles
    stored by their corner ranges.
    """

    mesh: Mesh
    owners: np.ndarray
    is_triangle: np.ndarray
    u_range: np.ndarray
    w_range: np.ndarray
    areas: np.ndarray

    def __len__(self):
        return self.areas.size

    @property
    def p(self):
        return self.owners[:, 0]

    @property
    def q(self):
        return self.owners[:, 1]

    def triangle_verts(self) -> np.ndarray:
        """Vertices ``(a, a), (a, b), (b, b)`` of the diagonal triangles."""
        a = self.u_range[self.is_triangle, 0]
        b = self.u_range[self.is_triangle, 1]
        return np.stack(
            [np.stack([a, a], -1), np.stack([a, b], -1), np.stack([b, b], -1)], axis=1
        )


# -- polygon clipping ---------------------------------------------------------

def _line_point(P, Q, kind, s):
    """Intersection of segment PQ with ``u + w = s`` (kind 'sum') or ``u = w``."""
    if P[0] == Q[0]:
        u = P[0]
        return (u, s - u) if kind == "sum" else (u, u)
    if P[1] == Q[1]:
        w = P[1]
        return (s - w, w) if kind == "sum" else (w, w)
    if kind == "diag" and P[0] + P[1] == Q[0] + Q[1]:
        c = P[0] + P[1]
        return (0.5 * c, 0.5 * c)
    if kind == "sum" and P[0] == P[1] and Q[0] == Q[1]:
        return (0.5 * s, 0.5 * s)
    # generic fallback, not reached for the structured geometry
    fp = _side(P, kind, s)
    fq = _side(Q, kind, s)
    t = fp / (fp - fq)
    return (P[0] + t * (Q[0] - P[0]), P[1] + t * (Q[1] - P[1]))


def _side(P, kind, s):
    if kind == "sum":
        return P[0] + P[1] - s
    return P[1] - P[0]


def _clip(poly, kind, s, sign, eps):
    """Keep the part of ``poly`` where ``sign * side >= 0``."""
    out = []
    n = len(poly)
    for idx in range(n):
        P, Q = poly[idx], poly[(idx + 1) % n]
        fp = sign * _side(P, kind, s)
        fq = sign * _side(Q, kind, s)
        if fp >= -eps:
            out.append(P)
        if (fp < -eps and fq > eps) or (fp > eps and fq < -eps):
            out.append(_line_point(P, Q, kind, s))
    return out


def _clean(poly, eps):
    """Drop repeated and collinear vertices."""
    pts = []
    for P in poly:
        if not pts or abs(P[0] - pts[-1][0]) > eps or abs(P[1] - pts[-1][1]) > eps:
            pts.append(P)
    if len(pts) > 1 and abs(pts[0][0] - pts[-1][0]) <= eps and abs(pts[0][1] - pts[-1][1]) <= eps:
        pts.pop()
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        for idx in range(len(pts)):
            A, B, C = pts[idx - 1], pts[idx], pts[(idx + 1) % len(pts)]
            cross = (B[0] - A[0]) * (C[1] - A[1]) - (B[1] - A[1]) * (C[0] - A[0])
            if abs(cross) <= eps * eps * 1e2 + 1e-15 * (
                abs(B[0] - A[0]) + abs(B[1] - A[1])) * (abs(C[0] - A[0]) + abs(C[1] - A[1])
            ):
                pts.pop(idx)
                changed = True
                break
    return pts


def _poly_area(poly):
    a = 0.0
    for idx in range(len(poly)):
        P, Q = poly[idx - 1], poly[idx]
        a += P[0] * Q[1] - Q[0] * P[1]
    return 0.5 * a


# -- convex polygon Delaunay triangulation -------------------------------------

def _incircle(a, b, c, d):
    """Positive when ``d`` lies inside the circumcircle of ccw triangle abc."""
    m = np.array([
        [a[0] - d[0], a[1] - d[1], (a[0] - d[0]) ** 2 + (a[1] - d[1]) ** 2],
        [b[0] - d[0], b[1] - d[1], (b[0] - d[0]) ** 2 + (b[1] - d[1]) ** 2],
        [c[0] - d[0], c[1] - d[1], (c[0] - d[0]) ** 2 + (c[1] - d[1]) ** 2],
    ])
    return np.linalg.det(m)


def triangulate_convex(poly):
    """Delaunay triangulation of a convex ccw polygon, as vertex index triples.

    Starts from a fan and applies Lawson flips.  The polygon boundary is kept
    because every boundary edge is a hull edge.
    """
    n = len(poly)
    tris = [[0, a, a + 1] for a in range(1, n - 1)]
    scale = max(max(abs(p[0]), abs(p[1])) for p in poly) or 1.0
    tol = 1e-12 * scale**4
    for _ in range(4 * n * n):
        flipped = False
        for t1 in range(len(tris)):
            for t2 in range(t1 + 1, len(tris)):
                shared = set(tris[t1]) & set(tris[t2])
                if len(shared) != 2:
                    continue
                (o1,) = set(tris[t1]) - shared
                (o2,) = set(tris[t2]) - shared
                a, b, c = (poly[v] for v in tris[t1])
                if _incircle(a, b, c, poly[o2]) > tol:
                    s1, s2 = sorted(shared)
                    new1, new2 = [o1, s1, o2], [o1, o2, s2]
                    for tri in (new1, new2):
                        p0, p1, p2 = (poly[v] for v in tri)
                        if (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0]) < 0:
                            tri[1], tri[2] = tri[2], tri[1]
                    tris[t1], tris[t2] = new1, new2
                    flipped = True
        if not flipped:
            break
    return [tuple(t) for t in tris]


# -- refinements ---------------------------------------------------------------

def build_aggregation_refinement(mesh: Mesh) -> AggRefinement:
    """Triangulated common refinement of the bands A_i and strips B_j, B'_k."""
    if mesh.edges[0] != 0.0:
        raise ValueError("aggregation refinement needs v_{1/2} = 0")
    e = mesh.edges
    L = mesh.L
    vmax = mesh.v_max
    eps = 1e-13 * vmax
    min_area = DEGENERATE_AREA * vmax * vmax

    lower_tris = []
    lower_owners = []
    for j in range(L):
        a, b = e[j], e[j + 1]
        for k in range(j, L):
            c, d = e[k], e[k + 1]
            if a + c >= vmax - eps:
                break
            rect = [(a, c), (b, c), (b, d), (a, d)]
            if j == k:
                rect = _clip(rect, "diag", 0.0, +1, eps)
            lo, hi = a + c, b + d
            i0 = int(np.searchsorted(e, lo, side="right")) - 1
            for i in range(max(i0, 0), L):
                if e[i] >= hi - eps:
                    break
                poly = _clip(rect, "sum", e[i], +1, eps)
                poly = _clip(poly, "sum", e[i + 1], -1, eps)
                poly = _clean(poly, eps)
                if len(poly) < 3:
                    continue
                area = _poly_area(poly)
                if area < 0:
                    poly = poly[::-1]
                    area = -area
                if area < min_area:
                    continue
                for tri in triangulate_convex(poly):
                    verts = [poly[v] for v in tri]
                    if float(triangle_area(np.array(verts))) < min_area:
                        continue
                    lower_tris.append(verts)
                    lower_owners.append((i, j, k))

    lower = np.array(lower_tris, dtype=float).reshape(-1, 3, 2)
    low_own = np.array(lower_owners, dtype=np.int64).reshape(-1, 3)
    upper = lower[:, :, ::-1].copy()
    up_own = low_own[:, [0, 2, 1]]

    verts = np.concatenate([lower, upper])
    owners = np.concatenate([low_own, up_own])
    is_lower = np.concatenate([np.ones(len(lower), bool), np.zeros(len(upper), bool)])
    n = len(lower)
    mirror = np.concatenate([np.arange(n, 2 * n), np.arange(n)])

    order = np.lexsort((~is_lower, owners[:, 2], owners[:, 1], owners[:, 0]))
    inverse = np.empty_like(order)
    inverse[order] = np.arange(order.size)
    verts = verts[order]
    owners = owners[order]
    is_lower = is_lower[order]
    mirror = inverse[mirror[order]]
    areas = triangle_area(verts)
    for arr in (verts, owners, is_lower, mirror, areas):
        arr.setflags(write=False)
    return AggRefinement(mesh, verts, owners, areas, mirror, is_lower)


def build_breakage_refinement(mesh: Mesh) -> BreakRefinement:
    """Elements ``C_i ∩ D_j``: triangles on the diagonal, rectangles above it."""
    e = mesh.edges
    owners, tri, ur, wr = [], [], [], []
    for i in range(mesh.L):
        for j in range(i, mesh.L):
            owners.append((i, j))
            tri.append(i == j)
            ur.append((e[i], e[i + 1]))
            wr.append((e[j], e[j + 1]))
    owners = np.array(owners, dtype=np.int64)
    tri = np.array(tri, dtype=bool)
    ur = np.array(ur)
    wr = np.array(wr)
    areas = (ur[:, 1] - ur[:, 0]) * (wr[:, 1] - wr[:, 0])
    areas[tri] *= 0.5
    return BreakRefinement(mesh, owners, tri, ur, wr, areas)


def elements_in(region: str, index: int, refinement) -> np.ndarray:
    """Indices of the elements lying in one region cell.

    ``region`` is one of ``"A"``, ``"B"``, ``"B'"`` for an aggregation
    refinement or ``"C"``, ``"D"`` for a breakage refinement.
    """
    L = refinement.mesh.L
    if not 0 <= index < L:
        raise IndexError(f"region index {index} out of range for L={L}")
    if isinstance(refinement, AggRefinement):
        column = {"A": 0, "B": 1, "B'": 2}.get(region)
    else:
        column = {"C": 0, "D": 1}.get(region)
    if column is None:
        raise ValueError(f"region {region!r} does not belong to this refinement")
    return np.flatnonzero(refinement.owners[:, column] == index)


def dump_triangles_csv(refinement: AggRefinement, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["u1", "w1", "u2", "w2", "u3", "w3", "i", "j", "k", "area"])
        for t in range(len(refinement)):
            v = refinement.verts[t]
            writer.writerow([*(repr(float(x)) for x in v.ravel()),
                             *(int(o) + 1 for o in refinement.owners[t]),
                             repr(float(refinement.areas[t]))])


def dump_breakage_csv(refinement: BreakRefinement, path) -> None:
    """One row per breakage element: corner ranges, owners (1-based), shape and area."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["u_lo", "u_hi", "w_lo", "w_hi", "i", "j", "shape", "area"])
        for e in range(len(refinement)):
            writer.writerow([*(repr(float(x)) for x in refinement.u_range[e]),
                             *(repr(float(x)) for x in refinement.w_range[e]),
                             *(int(o) + 1 for o in refinement.owners[e]),
                             "triangle" if refinement.is_triangle[e] else "rectangle",
                             repr(float(refinement.areas[e]))])
