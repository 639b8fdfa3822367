"""Independent exact oracle: the axis-parallel track graph, plus point sampling.

Every obstacle vertex shoots rays in the four axis directions up to the
first boundary contact. Ray segments, split at their mutual crossings and at
boundary contacts, together with the boundary edges, form a graph that
contains an L1 shortest path between any two ray sources. Query points are
overlaid per call with their own four rays, so the vertex-only base graph is
built once per domain.
"""

from __future__ import annotations

import bisect
import heapq
import itertools
import random
from collections import defaultdict
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import OutOfDomain, Unreachable
from .geometry import (
    AXIS_DIRS,
    Point,
    PolygonalDomain,
    Segment,
    l1_dist,
    param_on,
    segment_intersection_points,
    shoot,
)


def _tracks_from(p: Point, dom: PolygonalDomain) -> list[Segment]:
    out = []
    for d in AXIS_DIRS.values():
        seg = shoot(p, d, dom.edges, dom.strictly_contains)
        if seg is not None:
            out.append(seg)
    return out


def _split_edges(segments: Sequence[Segment], extra_points: dict[int, set]) -> list[tuple[Point, Point]]:
    edges = []
    for i, (a, b) in enumerate(segments):
        pts = {a, b} | extra_points.get(i, set())
        ordered = sorted(pts, key=lambda p: param_on(a, b, p))
        edges.extend((u, v) for u, v in zip(ordered, ordered[1:]) if u != v)
    return edges


class TrackGraph:
    """Track graph of a domain; query points are added per distance query."""

    def __init__(self, dom: PolygonalDomain):
        self.dom = dom
        tracks = []
        for v in dom.vertices:
            tracks.extend(_tracks_from(v, dom))
        segs = list(dom.edges) + tracks
        hits: dict[int, set] = defaultdict(set)
        horiz = [i for i, s in enumerate(segs) if s.a.y == s.b.y]
        others = [i for i, s in enumerate(segs) if s.a.y != s.b.y]
        for i in horiz:
            for j in others:
                for p in segment_intersection_points(*segs[i], *segs[j]):
                    hits[i].add(p)
                    hits[j].add(p)
        for i, j in itertools.combinations(horiz, 2):
            if segs[i].a.y == segs[j].a.y:
                for p in segment_intersection_points(*segs[i], *segs[j]):
                    hits[i].add(p)
                    hits[j].add(p)
        for i, j in itertools.combinations(others, 2):
            for p in segment_intersection_points(*segs[i], *segs[j]):
                hits[i].add(p)
                hits[j].add(p)
        self.base_edges = sorted(set(tuple(sorted(e)) for e in _split_edges(segs, hits)))
        self.adj: dict[Point, list[Point]] = defaultdict(list)
        for u, v in self.base_edges:
            self.adj[u].append(v)
            self.adj[v].append(u)
        self._h = sorted((e for e in self.base_edges if e[0].y == e[1].y), key=lambda e: e[0].y)
        self._h_keys = [e[0].y for e in self._h]
        self._v = sorted((e for e in self.base_edges if e[0].x == e[1].x and e[0].y != e[1].y), key=lambda e: e[0].x)
        self._v_keys = [e[0].x for e in self._v]
        self._s = [e for e in self.base_edges if e[0].x != e[1].x and e[0].y != e[1].y]

    @property
    def node_count(self) -> int:
        return len(self.adj)

    def _candidates(self, seg: Segment):
        a, b = seg
        if a.y == b.y:
            lo, hi = sorted((a.x, b.x))
            i0 = bisect.bisect_left(self._v_keys, lo)
            i1 = bisect.bisect_right(self._v_keys, hi)
            j0 = bisect.bisect_left(self._h_keys, a.y)
            j1 = bisect.bisect_right(self._h_keys, a.y)
            return itertools.chain(self._v[i0:i1], self._h[j0:j1], self._s)
        lo, hi = sorted((a.y, b.y))
        i0 = bisect.bisect_left(self._h_keys, lo)
        i1 = bisect.bisect_right(self._h_keys, hi)
        j0 = bisect.bisect_left(self._v_keys, a.x)
        j1 = bisect.bisect_right(self._v_keys, a.x)
        return itertools.chain(self._h[i0:i1], self._v[j0:j1], self._s)

    def overlay(self, points: Iterable[Point]):
        """Removed base edges and added edges for a set of query points."""
        points = list(dict.fromkeys(points))
        for p in points:
            if not self.dom.contains(p):
                raise OutOfDomain(f"{p} is not in the domain")
        new = []
        for p in points:
            tr = _tracks_from(p, self.dom)
            new.extend(tr)
            if not tr:
                # isolated only if p is a vertex already in the graph
                new.append(Segment(p, p))
        on_new: dict[int, set] = defaultdict(set)
        on_base: dict[tuple, set] = defaultdict(set)
        for i, s in enumerate(new):
            if s.a == s.b:
                for e in self._all_edges_near(s.a):
                    if segment_intersection_points(*e, s.a, s.a):
                        on_base[e].add(s.a)
                continue
            for e in self._candidates(s):
                for p in segment_intersection_points(s.a, s.b, e[0], e[1]):
                    on_new[i].add(p)
                    on_base[e].add(p)
        for i, j in itertools.combinations(range(len(new)), 2):
            if new[i].a == new[i].b or new[j].a == new[j].b:
                continue
            for p in segment_intersection_points(*new[i], *new[j]):
                on_new[i].add(p)
                on_new[j].add(p)
        removed = set()
        added: dict[Point, list[Point]] = defaultdict(list)
        for e, pts in on_base.items():
            inner = {p for p in pts if p != e[0] and p != e[1]}
            if not inner:
                continue
            removed.add(e)
            for u, v in _split_edges([Segment(*e)], {0: inner}):
                added[u].append(v)
                added[v].append(u)
        for u, v in _split_edges([s for s in new if s.a != s.b], {k: on_new[i] for k, i in enumerate(i for i, s in enumerate(new) if s.a != s.b)}):
            added[u].append(v)
            added[v].append(u)
        return removed, added

    def _all_edges_near(self, p: Point):
        return self._candidates(Segment(Point(p.x - 1, p.y), Point(p.x + 1, p.y)))

    def dijkstra(self, source: Point, overlay=None, targets: Iterable[Point] = ()) -> dict[Point, object]:
        removed, added = overlay if overlay is not None else (set(), {})
        want = set(targets)
        dist = {source: mpq(0)}
        done = set()
        tick = itertools.count()
        heap = [(mpq(0), next(tick), source)]
        while heap:
            d, _, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            want.discard(u)
            if not want and targets:
                break
            nbrs = [v for v in self.adj.get(u, ()) if (min(u, v), max(u, v)) not in removed]
            nbrs += added.get(u, [])
            for v in nbrs:
                nd = d + l1_dist(u, v)
                if v not in dist or nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, next(tick), v))
        return {p: dist[p] for p in done}

    def distances(self, sources: Sequence[Point], targets: Sequence[Point]) -> dict[tuple[Point, Point], object]:
        ov = self.overlay(list(sources) + list(targets))
        out = {}
        for s in sources:
            res = self.dijkstra(s, ov, targets)
            for t in targets:
                if t not in res:
                    raise Unreachable(f"{t} unreachable from {s}")
                out[s, t] = res[t]
        return out

    def dist(self, s: Point, t: Point):
        if s == t:
            if not self.dom.contains(s):
                raise OutOfDomain(f"{s} is not in the domain")
            return mpq(0)
        return self.distances([s], [t])[s, t]


_cache: dict[int, TrackGraph] = {}


def track_graph(dom: PolygonalDomain) -> TrackGraph:
    key = id(dom)
    tg = _cache.get(key)
    if tg is None or tg.dom is not dom:
        tg = TrackGraph(dom)
        _cache[key] = tg
    return tg


def oracle_dist(dom: PolygonalDomain, s: Point, t: Point):
    """Exact L1 geodesic distance by Dijkstra on the track graph."""
    return track_graph(dom).dist(s, t)


def sample_points(dom: PolygonalDomain, k: int, seed: int, resolution: int = 4096) -> list[Point]:
    """``k`` points of the closed domain, deterministic in ``seed``."""
    rng = random.Random(seed)
    x0, y0, x1, y1 = dom.bbox()
    out = []
    while len(out) < k:
        p = Point(
            x0 + (x1 - x0) * mpq(rng.randint(0, resolution), resolution),
            y0 + (y1 - y0) * mpq(rng.randint(0, resolution), resolution),
        )
        if dom.contains(p):
            out.append(p)
    return out


def sample_in_convex(poly: Sequence[Point], k: int, rng: random.Random, resolution: int = 1024) -> list[Point]:
    """Random points of a convex polygon as rational convex combinations of its vertices."""
    out = []
    for _ in range(k):
        w = [rng.randint(0, resolution) for _ in poly]
        if not any(w):
            w = [1] * len(poly)
        tot = sum(w)
        x = sum((mpq(wi, tot) * p.x for wi, p in zip(w, poly)), mpq(0))
        y = sum((mpq(wi, tot) * p.y for wi, p in zip(w, poly)), mpq(0))
        out.append(Point(x, y))
    return out
