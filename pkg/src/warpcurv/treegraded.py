"""Geodesics and open triangles in R x T for a finite metric tree T.

``R x T`` is a union of flat strips ``R x e`` glued along walls ``R x {vertex}``;
geodesics project to tree arcs and their R-coordinate is linear in arclength.
A geodesic triangle is open when any two sides meet only at their common
vertex.  For a tripod with center m, this reduces to comparing the heights
at which the three sides cross the wall ``R x {m}``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import DegenerateTripod, InvalidParams

TOL = 1e-12
SYMMETRIC_DIAGNOSTIC = "crossings coincide for all perturbations of z within the branch"


# ---------------------------------------------------------------------------
# trees and points

@dataclass(frozen=True)
class TreePoint:
    edge: int
    offset: float


@dataclass(frozen=True)
class ConePoint:
    t: float
    p: TreePoint


class MetricTree:
    """Finite tree with positive edge lengths; edge ``i`` runs from ``u`` (offset 0) to ``v``."""

    def __init__(self, edges: Iterable[tuple[str, str, float]]):
        self.edges = tuple((str(u), str(v), float(w)) for u, v, w in edges)
        if not self.edges:
            raise InvalidParams("tree needs at least one edge")
        verts: list[str] = []
        for u, v, w in self.edges:
            if not w > 0:
                raise InvalidParams(f"edge {u}-{v} has nonpositive length {w}")
            if u == v:
                raise InvalidParams(f"loop at vertex {u}")
            for x in (u, v):
                if x not in verts:
                    verts.append(x)
        self.vertices = tuple(verts)
        self.index = {x: i for i, x in enumerate(verts)}
        if len(self.edges) != len(verts) - 1:
            raise InvalidParams("edge list is not a tree (|E| != |V| - 1)")
        self.adj: dict[str, list[tuple[str, int]]] = {x: [] for x in verts}
        for i, (u, v, _) in enumerate(self.edges):
            self.adj[u].append((v, i))
            self.adj[v].append((u, i))
        nv = len(verts)
        self.vdist = np.full((nv, nv), np.inf)
        self._parent: list[dict[str, tuple[str, int]]] = []
        for s in verts:
            par = {s: (s, -1)}
            dist = {s: 0.0}
            queue = deque([s])
            while queue:
                a = queue.popleft()
                for b, e in self.adj[a]:
                    if b not in par:
                        par[b] = (a, e)
                        dist[b] = dist[a] + self.edges[e][2]
                        queue.append(b)
            if len(par) != nv:
                raise InvalidParams("edge list is not connected")
            for b, d in dist.items():
                self.vdist[self.index[s], self.index[b]] = d
            self._parent.append(par)
        self.vdist = np.minimum(self.vdist, self.vdist.T)  # exact symmetry
        self._lengths = np.array([w for _, _, w in self.edges])
        self._ends = np.array([[self.index[u], self.index[v]] for u, v, _ in self.edges])

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "MetricTree":
        edges = []
        for raw in lines:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise InvalidParams(f"tree line must be 'u v length', got {raw!r}")
            edges.append((parts[0], parts[1], float(parts[2])))
        return cls(edges)

    @classmethod
    def load(cls, path: str | Path) -> "MetricTree":
        return cls.from_lines(Path(path).read_text().splitlines())

    def length(self, e: int) -> float:
        return self.edges[e][2]

    def point(self, edge: int, offset: float) -> TreePoint:
        if not 0 <= edge < len(self.edges):
            raise InvalidParams(f"no edge {edge}")
        if not -TOL <= offset <= self.length(edge) + TOL:
            raise InvalidParams(f"offset {offset} outside edge {edge}")
        return TreePoint(edge, min(max(offset, 0.0), self.length(edge)))

    def vertex(self, name: str) -> TreePoint:
        for i, (u, v, w) in enumerate(self.edges):
            if u == name:
                return TreePoint(i, 0.0)
            if v == name:
                return TreePoint(i, w)
        raise InvalidParams(f"no vertex {name!r}")

    def key(self, p: TreePoint):
        """Canonical identity of a point (vertices are shared by several edges)."""
        u, v, w = self.edges[p.edge]
        if p.offset <= TOL:
            return ("v", u)
        if p.offset >= w - TOL:
            return ("v", v)
        return ("e", p.edge, p.offset)

    def vertex_path(self, a: str, b: str) -> list[int]:
        """Edge ids along the vertex path from a to b."""
        par = self._parent[self.index[a]]
        out = []
        x = b
        while x != a:
            x, e = par[x]
            out.append(e)
        return out[::-1]


# ---------------------------------------------------------------------------
# arcs

@dataclass(frozen=True)
class TreeArc:
    """Unique arc as segments ``(edge, start offset, end offset)``."""

    segments: tuple[tuple[int, float, float], ...]
    length: float

    def _cum(self):
        return np.cumsum([0.0] + [abs(b - a) for _, a, b in self.segments])

    def point(self, s: float) -> TreePoint:
        edges, offs = self.points(np.array([s]))
        return TreePoint(int(edges[0]), float(offs[0]))

    def points(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized (edge ids, offsets) at arclengths ``s``."""
        s = np.clip(np.asarray(s, dtype=float), 0.0, self.length)
        cum = self._cum()
        k = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(self.segments) - 1)
        seg = np.array(self.segments, dtype=float)
        e, a, b = seg[k, 0], seg[k, 1], seg[k, 2]
        off = a + np.sign(b - a) * (s - cum[k])
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        return e.astype(int), np.clip(off, lo, hi)


def _endpoint_offsets(T: MetricTree, p: TreePoint):
    u, v, w = T.edges[p.edge]
    return ((u, p.offset, 0.0), (v, w - p.offset, w))


def tree_geodesic(T: MetricTree, p: TreePoint, q: TreePoint) -> TreeArc:
    if p.edge == q.edge:
        seg = ((p.edge, p.offset, q.offset),) if p.offset != q.offset else ((p.edge, p.offset, p.offset),)
        return TreeArc(seg, abs(q.offset - p.offset))
    best = None
    for a, da, oa in _endpoint_offsets(T, p):
        for b, db, ob in _endpoint_offsets(T, q):
            d = da + T.vdist[T.index[a], T.index[b]] + db
            if best is None or d < best[0]:
                best = (d, a, oa, b, ob)
    d, a, oa, b, ob = best
    segs = [(p.edge, p.offset, oa)]
    x = a
    for e in T.vertex_path(a, b):
        u, v, w = T.edges[e]
        segs.append((e, 0.0, w) if x == u else (e, w, 0.0))
        x = v if x == u else u
    segs.append((q.edge, ob, q.offset))
    segs = [s for s in segs if s[1] != s[2]] or [(p.edge, p.offset, p.offset)]
    return TreeArc(tuple(segs), float(d))


def tree_distance(T: MetricTree, p: TreePoint, q: TreePoint) -> float:
    if p.edge == q.edge:
        return abs(p.offset - q.offset)
    # (da + db) first so the result is exactly symmetric in p and q
    return float(min((da + db) + T.vdist[T.index[a], T.index[b]]
               for a, da, _ in _endpoint_offsets(T, p)
               for b, db, _ in _endpoint_offsets(T, q)))


def _pairwise_tree_distance(T: MetricTree, e1, o1, e2, o2) -> np.ndarray:
    """Distances between two vectorized point sets, as a matrix."""
    L1, L2 = T._lengths[e1], T._lengths[e2]
    u1, v1 = T._ends[e1, 0], T._ends[e1, 1]
    u2, v2 = T._ends[e2, 0], T._ends[e2, 1]
    D = T.vdist
    a1 = [(u1, o1), (v1, L1 - o1)]
    a2 = [(u2, o2), (v2, L2 - o2)]
    best = np.full((len(e1), len(e2)), np.inf)
    for x, dx in a1:
        for y, dy in a2:
            best = np.minimum(best, (dx[:, None] + dy[None, :]) + D[x[:, None], y[None, :]])
    same = e1[:, None] == e2[None, :]
    direct = np.abs(o1[:, None] - o2[None, :])
    return np.where(same, direct, best)


def median(T: MetricTree, a: TreePoint, b: TreePoint, c: TreePoint) -> TreePoint:
    """Center of the tripod spanned by a, b, c."""
    dab, dac, dbc = tree_distance(T, a, b), tree_distance(T, a, c), tree_distance(T, b, c)
    return tree_geodesic(T, a, b).point(max(0.0, 0.5 * (dab + dac - dbc)))


# ---------------------------------------------------------------------------
# R x T

def cone_distance(T: MetricTree, x: ConePoint, y: ConePoint) -> float:
    return math.hypot(y.t - x.t, tree_distance(T, x.p, y.p))


@dataclass(frozen=True)
class ConeGeodesic:
    start: ConePoint
    end: ConePoint
    arc: TreeArc

    @property
    def length(self) -> float:
        return math.hypot(self.end.t - self.start.t, self.arc.length)

    def __call__(self, s: float) -> ConePoint:
        """Point at parameter ``s`` in [0, 1] (proportional to arclength)."""
        t = self.start.t + s * (self.end.t - self.start.t)
        return ConePoint(t, self.arc.point(s * self.arc.length))

    def samples(self, s: np.ndarray):
        """Vectorized (t, edge ids, offsets) at parameters ``s``."""
        s = np.asarray(s, dtype=float)
        e, o = self.arc.points(s * self.arc.length)
        return self.start.t + s * (self.end.t - self.start.t), e, o


def cone_geodesic(T: MetricTree, x: ConePoint, y: ConePoint) -> ConeGeodesic:
    return ConeGeodesic(x, y, tree_geodesic(T, x.p, y.p))


# ---------------------------------------------------------------------------
# openness

def _scale(T: MetricTree, *pts: ConePoint) -> float:
    return 1.0 + max(abs(p.t) for p in pts) + float(T._lengths.sum())


def _tripod(T, x, y, z):
    m = median(T, x.p, y.p, z.p)
    tol = TOL * _scale(T, x, y, z)
    dists = [tree_distance(T, q.p, m) for q in (x, y, z)]
    return m, dists, min(dists) <= tol


def wall_crossings(T: MetricTree, x: ConePoint, y: ConePoint,
                   z: ConePoint) -> tuple[float, float, float]:
    """Heights at which sides [x,y], [x,z], [y,z] cross the wall over the tripod center."""
    m, (dx, dy, dz), degenerate = _tripod(T, x, y, z)
    if degenerate:
        raise DegenerateTripod("one projection lies on the arc between the other two")

    def cross(p, q, dp, dq):
        return p.t + (q.t - p.t) * dp / (dp + dq)

    return (float(cross(x, y, dx, dy)), float(cross(x, z, dx, dz)), float(cross(y, z, dy, dz)))


def _planar_open(T, x, y, z) -> bool:
    pts = (x, y, z)
    pairs = [(0, 1), (0, 2), (1, 2)]
    d = [tree_distance(T, pts[i].p, pts[j].p) for i, j in pairs]
    i, j = pairs[int(np.argmax(d))]
    # the three projections lie on the arc between the two outermost ones
    coords = [(p.t, tree_distance(T, pts[i].p, p.p)) for p in pts]
    (ax, ay), (bx, by), (cx, cy) = coords
    area = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    ext = max(abs(u - v) for a in coords for b in coords for u, v in zip(a, b))
    return abs(area) > TOL * max(1.0, ext) ** 2


def is_open(T: MetricTree, x: ConePoint, y: ConePoint, z: ConePoint) -> bool:
    """Whether the geodesic triangle xyz is open; coincident vertices give False."""
    tol = TOL * _scale(T, x, y, z)
    for p, q in ((x, y), (x, z), (y, z)):
        if cone_distance(T, p, q) <= tol:
            return False
    m, dists, degenerate = _tripod(T, x, y, z)
    if degenerate:
        return _planar_open(T, x, y, z)
    a, b, c = wall_crossings(T, x, y, z)
    return abs(a - b) > tol and abs(a - c) > tol and abs(b - c) > tol


@dataclass(frozen=True)
class NotFound:
    diagnostic: str


def _candidate_points(T: MetricTree, z: ConePoint, n: int) -> list[ConePoint]:
    steps = (1.0 / n, 1.0 / (2 * n), 1.0 / (4 * n))
    dts = (0.0,) + tuple(s * sgn for s in steps for sgn in (1.0, -1.0))
    moves = [(0.0, z.p)]
    key = T.key(z.p)
    if key[0] == "v":
        for _, e in T.adj[key[1]]:
            u, v, w = T.edges[e]
            for s in steps:
                if s < w:
                    moves.append((s, TreePoint(e, s if u == key[1] else w - s)))
    else:
        w = T.length(z.p.edge)
        for s in steps:
            for sgn in (1.0, -1.0):
                o = z.p.offset + sgn * s
                if 0.0 <= o <= w:
                    moves.append((s, TreePoint(z.p.edge, o)))
    cands = []
    for dt in dts:
        for ds, p in moves:
            r = math.hypot(dt, ds)
            if r <= 1.0 / n:
                cands.append((r, len(cands), ConePoint(z.t + dt, p)))
    return [c for _, _, c in sorted(cands, key=lambda c: (c[0], c[1]))]


def find_open_perturbation(T: MetricTree, x: ConePoint, y: ConePoint, z: ConePoint,
                           n: int) -> ConePoint | NotFound:
    """A point within 1/n of z making the triangle x y z_n open, or :class:`NotFound`."""
    if n < 1:
        raise InvalidParams(f"n must be >= 1, got {n}")
    for c in _candidate_points(T, z, n):
        if is_open(T, x, y, c):
            return c
    m, (dx, dy, _), degenerate = _tripod(T, x, y, z)
    tol = TOL * _scale(T, x, y, z)
    if not degenerate and abs(x.t - y.t) <= tol and abs(dx - dy) <= tol:
        return NotFound(SYMMETRIC_DIAGNOSTIC)
    return NotFound("no open triangle among the candidate perturbations")


# ---------------------------------------------------------------------------
# brute-force cross-check

def sides_meet_sampled(T: MetricTree, p: ConePoint, q1: ConePoint, q2: ConePoint,
                       samples: int = 1000) -> bool:
    """Whether sides [p, q1] and [p, q2] share a point other than p.

    Both sides are sampled at the same arclengths from p, up to the shorter
    side's length, and all sample pairs are compared.
    """
    g1, g2 = cone_geodesic(T, p, q1), cone_geodesic(T, p, q2)
    L = min(g1.length, g2.length)
    if L == 0.0:
        return True
    s = np.linspace(0.0, L, samples)
    t1, e1, o1 = g1.samples(s / g1.length)
    t2, e2, o2 = g2.samples(s / g2.length)
    d = np.hypot(t1[:, None] - t2[None, :], _pairwise_tree_distance(T, e1, o1, e2, o2))
    d[0, 0] = np.inf
    return bool(np.min(d) <= 1e-9 * _scale(T, p, q1, q2))


def is_open_bruteforce(T: MetricTree, x: ConePoint, y: ConePoint, z: ConePoint,
                       samples: int = 1000) -> bool:
    return not (sides_meet_sampled(T, x, y, z, samples)
                or sides_meet_sampled(T, y, x, z, samples)
                or sides_meet_sampled(T, z, x, y, samples))
