"""Exact L1 geodesic distances.

A shortest L1 path can always be taken to bend only at obstacle vertices:
pull it taut to the Euclidean geodesic of its homotopy class, whose L1
length is no larger inside the simple polygon swept by the path. So a
visibility graph over obstacle vertices with L1 edge weights gives exact
distances. Extra query points are joined to the vertices they see.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from gmpy2 import mpq

from .errors import NoDominantVertex, OutsidePolygon, Unreachable
from .geometry import (
    Point,
    PolygonalDomain,
    Segment,
    cross,
    l1_dist,
    lerp,
    line_intersection,
    param_on,
    path_l1_length,
    point_in_ring,
    segment_in_region,
)
from .triangulation import Triangulation, sleeve_path, triangulate

ZERO = mpq(0)


@dataclass
class Universe:
    """Free space for visibility: boundary edges, closed membership, corner vertices."""

    edges: Sequence[Segment]
    contains: Callable[[Point], bool]
    vertices: Sequence[Point]
    shortcuts: Sequence[tuple[Point, Point, object]] = ()
    name: str = ""

    def visible(self, a: Point, b: Point) -> bool:
        return segment_in_region(a, b, self.edges, self.contains)


def reflex_vertices(dom: PolygonalDomain) -> list[Point]:
    """Vertices where the free angle exceeds 180 degrees: the only places a geodesic bends."""
    out = []
    for r in dom.rings:
        k = len(r)
        for i in range(k):
            if cross(r[i - 1], r[i], r[(i + 1) % k]) < 0:
                out.append(r[i])
    return out


def domain_universe(dom: PolygonalDomain, name: str = "P") -> Universe:
    return Universe(dom.edges, dom.contains, reflex_vertices(dom), (), name or dom.name)


class VisGraph:
    """Visibility graph over universe vertices with all-pairs vertex distances."""

    def __init__(self, universe: Universe):
        self.universe = universe
        self.nodes: list[Point] = list(dict.fromkeys(universe.vertices))
        self.index = {p: i for i, p in enumerate(self.nodes)}
        n = len(self.nodes)
        adj: list[list[tuple[int, object]]] = [[] for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                u, v = self.nodes[i], self.nodes[j]
                if universe.visible(u, v):
                    w = l1_dist(u, v)
                    adj[i].append((j, w))
                    adj[j].append((i, w))
        for u, v, w in universe.shortcuts:
            i, j = self.index[u], self.index[v]
            adj[i].append((j, mpq(w)))
            adj[j].append((i, mpq(w)))
        self.adj = adj
        self.D: list[list] = []
        self.pred: list[list[int]] = []
        for s in range(n):
            d, p = self._dijkstra(s)
            self.D.append(d)
            self.pred.append(p)
        self._vis: dict[Point, list[tuple[int, object]]] = {}

    def _dijkstra(self, s: int):
        n = len(self.nodes)
        dist: list = [None] * n
        pred = [-1] * n
        dist[s] = ZERO
        heap = [(ZERO, s)]
        done = [False] * n
        while heap:
            d, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for v, w in self.adj[u]:
                nd = d + w
                if dist[v] is None or nd < dist[v]:
                    dist[v] = nd
                    pred[v] = u
                    heapq.heappush(heap, (nd, v))
        return dist, pred

    def vis(self, p: Point) -> list[tuple[int, object]]:
        """Vertices visible from p with their L1 distances (cached)."""
        got = self._vis.get(p)
        if got is None:
            i = self.index.get(p)
            if i is not None:
                got = [(i, ZERO)]
            else:
                got = [(j, l1_dist(p, v)) for j, v in enumerate(self.nodes) if self.universe.visible(p, v)]
            self._vis[p] = got
        return got

    def to_vertices(self, p: Point) -> list:
        """Distance from p to every vertex."""
        n = len(self.nodes)
        out: list = [None] * n
        for u, du in self.vis(p):
            row = self.D[u]
            for w in range(n):
                if row[w] is None:
                    continue
                c = du + row[w]
                if out[w] is None or c < out[w]:
                    out[w] = c
        return out

    def dist(self, s: Point, t: Point):
        return self.dist_path(s, t, want_path=False)[0]

    def dist_path(self, s: Point, t: Point, want_path: bool = True):
        if s == t:
            if not self.universe.contains(s):
                raise Unreachable(f"{s} is outside the universe")
            return ZERO, [s]
        best, arg = None, None
        for u, du in self.vis(s):
            row = self.D[u]
            for w, dw in self.vis(t):
                if row[w] is None:
                    continue
                c = du + row[w] + dw
                if best is None or c < best:
                    best, arg = c, (u, w)
        direct = l1_dist(s, t)
        if (best is None or direct < best) and self.universe.visible(s, t):
            return direct, [s, t]
        if best is None:
            raise Unreachable(f"no path from {s} to {t}")
        if not want_path:
            return best, None
        u, w = arg
        chain = [w]
        while chain[-1] != u:
            chain.append(self.pred[u][chain[-1]])
        path = [s] + [self.nodes[i] for i in reversed(chain)] + [t]
        dedup = [path[0]]
        for p in path[1:]:
            if p != dedup[-1]:
                dedup.append(p)
        return best, dedup


def build_visgraph(universe: Universe | PolygonalDomain, extras: Iterable[Point] = ()) -> VisGraph:
    if isinstance(universe, PolygonalDomain):
        universe = domain_universe(universe)
    g = VisGraph(universe)
    for p in extras:
        g.vis(p)
    return g


def geodesic_dist(g: VisGraph, s: Point, t: Point):
    """Exact distance and a witness path whose inner vertices are graph nodes."""
    return g.dist_path(s, t)


@dataclass
class DistTable:
    points: list[Point]
    values: list[list]
    index: dict[Point, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.index:
            self.index = {p: i for i, p in enumerate(self.points)}

    def __call__(self, a: Point, b: Point):
        return self.values[self.index[a]][self.index[b]]

    def __contains__(self, p: Point) -> bool:
        return p in self.index


def all_pairs(g: VisGraph, V: Sequence[Point]) -> DistTable:
    """Exact distances between every pair of points of V."""
    V = list(dict.fromkeys(V))
    m = len(V)
    hubs = [g.to_vertices(p) for p in V]
    vis = [g.vis(p) for p in V]
    vals = [[ZERO] * m for _ in range(m)]
    for i in range(m):
        hi = hubs[i]
        for j in range(i + 1, m):
            best = None
            for w, dw in vis[j]:
                if hi[w] is None:
                    continue
                c = hi[w] + dw
                if best is None or c < best:
                    best = c
            direct = l1_dist(V[i], V[j])
            if (best is None or direct < best) and g.universe.visible(V[i], V[j]):
                best = direct
            if best is None:
                raise Unreachable(f"no path from {V[i]} to {V[j]}")
            vals[i][j] = vals[j][i] = best
    return DistTable(V, vals)


class LazyDistTable:
    """Exact distances between arbitrary points, computed on first use and memoized."""

    def __init__(self, g: VisGraph):
        self.g = g
        self._hub: dict[Point, list] = {}
        self._memo: dict[tuple[Point, Point], object] = {}

    def _hub_of(self, p: Point) -> list:
        got = self._hub.get(p)
        if got is None:
            got = self._hub[p] = self.g.to_vertices(p)
        return got

    def __call__(self, a: Point, b: Point):
        if a == b:
            return ZERO
        key = (a, b) if a < b else (b, a)
        got = self._memo.get(key)
        if got is None:
            a, b = key
            ha = self._hub_of(a)
            best = None
            for w, dw in self.g.vis(b):
                if ha[w] is not None:
                    c = ha[w] + dw
                    if best is None or c < best:
                        best = c
            direct = l1_dist(a, b)
            if (best is None or direct < best) and self.g.universe.visible(a, b):
                best = direct
            if best is None:
                raise Unreachable(f"no path from {a} to {b}")
            got = self._memo[key] = best
        return got


# ----------------------------------------------------- simple polygons


_tri_cache: dict[int, tuple[PolygonalDomain, Triangulation]] = {}


def _triangulation(A: PolygonalDomain) -> Triangulation:
    got = _tri_cache.get(id(A))
    if got is None or got[0] is not A:
        got = (A, triangulate(A))
        _tri_cache[id(A)] = got
    return got[1]


def simple_poly_esp(A: PolygonalDomain, p: Point, q: Point) -> list[Point]:
    """Euclidean geodesic in a simple polygon; its L1 length is the L1 geodesic distance."""
    if not A.contains(p) or not A.contains(q):
        raise OutsidePolygon(f"{p} or {q} lies outside the polygon")
    if p == q:
        return [p]
    return sleeve_path(_triangulation(A), p, q)


def d_simple(A: PolygonalDomain, p: Point, q: Point):
    return path_l1_length(simple_poly_esp(A, p, q))


@dataclass
class GateDistFn:
    """f_v on a gate g = (c, d): exact values at breakpoints, linear in between."""

    v: Point
    gate: tuple[Point, Point]
    params: list  # sorted parameters in [0, 1]
    values: list

    def point(self, t) -> Point:
        c, d = self.gate
        return lerp(c, d, t)

    def __call__(self, t):
        ps = self.params
        if t <= ps[0]:
            return self.values[0]
        for i in range(1, len(ps)):
            if t <= ps[i]:
                t0, t1 = ps[i - 1], ps[i]
                v0, v1 = self.values[i - 1], self.values[i]
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        return self.values[-1]

    def at_point(self, x: Point):
        c, d = self.gate
        return self(param_on(c, d, x))


def _gate_breaks(gate: tuple[Point, Point], paths: Iterable[Sequence[Point]]) -> set:
    c, d = gate
    ts = {ZERO, mpq(1)}

    def add(p):
        if p is None:
            return
        if cross(c, d, p) != 0:
            return
        t = param_on(c, d, p)
        if 0 <= t <= 1:
            ts.add(t)

    for path in paths:
        for u, w in zip(path, path[1:]):
            add(line_intersection(u, w, c, d))
        for u in path:
            add(line_intersection(u, Point(u.x + 1, u.y), c, d))
            add(line_intersection(u, Point(u.x, u.y + 1), c, d))
    return ts


def gate_dist_fn(A: PolygonalDomain, v: Point, gate: tuple[Point, Point]) -> GateDistFn:
    """L1 geodesic distance in A from v to the points of the gate, as a piecewise linear function."""
    c, d = gate
    pc = simple_poly_esp(A, v, c)
    pd = simple_poly_esp(A, v, d)
    ts = sorted(_gate_breaks(gate, [pc, pd]))
    vals = [d_simple(A, v, lerp(c, d, t)) for t in ts]
    return GateDistFn(v, gate, ts, vals)


def find_v_g(corners: Sequence[Point], gate: tuple[Point, Point], A: PolygonalDomain) -> Point:
    """The corner through which every geodesic from the cell to the gate can be routed."""
    cands = sorted(p for p in dict.fromkeys(corners) if A.contains(p))
    if not cands:
        raise NoDominantVertex("no cell corner lies in the pocket")
    fns = {v: gate_dist_fn(A, v, gate) for v in cands}
    ts = sorted(set().union(*(set(f.params) for f in fns.values())))
    for v in cands:
        fv = fns[v]
        if all(
            fv(t) + l1_dist(v, w) <= fns[w](t)
            for w in cands
            if w != v
            for t in ts
        ):
            return v
    raise NoDominantVertex(f"no dominant corner among {cands}")


@dataclass
class Funnel:
    apex: Point
    base: tuple[Point, Point]
    chains: tuple[list[Point], list[Point]]
    stem: list[Point]  # geodesic from the source to the apex


def _extremes(chain: Sequence[Point]) -> list[Point]:
    return [
        min(chain, key=lambda p: (p.x, p.y)),
        max(chain, key=lambda p: (p.x, p.y)),
        min(chain, key=lambda p: (p.y, p.x)),
        max(chain, key=lambda p: (p.y, p.x)),
    ]


def funnel_and_extremes(A: PolygonalDomain, v: Point, gate: tuple[Point, Point]) -> tuple[Funnel, list[Point]]:
    """Funnel of geodesics from v to the gate and its axis-extreme chain points."""
    c, d = gate
    pc = simple_poly_esp(A, v, c)
    pd = simple_poly_esp(A, v, d)
    k = 0
    while k + 1 < len(pc) and k + 1 < len(pd) and pc[k + 1] == pd[k + 1]:
        k += 1
    apex = pc[k]
    ch1, ch2 = pc[k:], pd[k:]
    W = list(dict.fromkeys(_extremes(ch1) + _extremes(ch2) + [c, d, apex]))
    return Funnel(apex, gate, (ch1, ch2), pc[: k + 1]), W


def ring_polygon(ring: Sequence[Point]) -> PolygonalDomain:
    """A simple polygon as a hole-free domain, orientation normalized."""
    from .geometry import make_domain

    return make_domain(list(ring))


def inside_ring(p: Point, ring: Sequence[Point]) -> bool:
    return point_in_ring(p, ring) >= 0
