"""Planar subdivisions from segment sets: splitting, half-edge faces."""

from __future__ import annotations

import functools
from collections import defaultdict
from typing import Callable, Iterable, Sequence

from .geometry import (
    Point,
    Segment,
    cross,
    param_on,
    segment_intersection_points,
    signed_area2,
)


def _half(dx, dy) -> int:
    return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1


def angle_key(origin: Point):
    """Comparator key sorting points counterclockwise around ``origin``, starting at +x."""

    def cmp(p: Point, q: Point) -> int:
        hp = _half(p.x - origin.x, p.y - origin.y)
        hq = _half(q.x - origin.x, q.y - origin.y)
        if hp != hq:
            return hp - hq
        c = cross(origin, p, q)
        return -1 if c > 0 else (1 if c < 0 else 0)

    return functools.cmp_to_key(cmp)


def _bbox_overlap(s: Segment, t: Segment) -> bool:
    return not (
        max(s.a.x, s.b.x) < min(t.a.x, t.b.x)
        or max(t.a.x, t.b.x) < min(s.a.x, s.b.x)
        or max(s.a.y, s.b.y) < min(t.a.y, t.b.y)
        or max(t.a.y, t.b.y) < min(s.a.y, s.b.y)
    )


def split_segments(segments: Sequence[Segment]) -> list[tuple[Point, Point]]:
    """Cut every segment at every contact with another; return unique edges."""
    segs = [s for s in segments if s.a != s.b]
    cuts: dict[int, set] = defaultdict(set)
    for i in range(len(segs)):
        si = segs[i]
        for j in range(i + 1, len(segs)):
            sj = segs[j]
            if not _bbox_overlap(si, sj):
                continue
            for p in segment_intersection_points(si.a, si.b, sj.a, sj.b):
                cuts[i].add(p)
                cuts[j].add(p)
    edges = set()
    for i, s in enumerate(segs):
        pts = sorted({s.a, s.b} | cuts[i], key=lambda p: param_on(s.a, s.b, p))
        for u, v in zip(pts, pts[1:]):
            if u != v:
                edges.add((u, v) if u < v else (v, u))
    return sorted(edges)


def faces(edges: Iterable[tuple[Point, Point]]) -> list[list[Point]]:
    """All face boundary cycles of a planar straight-line graph.

    Bounded faces come out counterclockwise (positive area); the unbounded
    face of each component comes out clockwise.
    """
    nbrs: dict[Point, list[Point]] = defaultdict(list)
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    order = {}
    for v, ns in nbrs.items():
        ns = sorted(set(ns), key=angle_key(v))
        nbrs[v] = ns
        order[v] = {w: i for i, w in enumerate(ns)}
    seen = set()
    out = []
    for u in list(nbrs):
        for v in nbrs[u]:
            if (u, v) in seen:
                continue
            cyc = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                cyc.append(a)
                ns = nbrs[b]
                # next edge: the neighbour of b just clockwise from a
                i = order[b][a]
                c = ns[i - 1]
                a, b = b, c
            out.append(cyc)
    return out


def bounded_faces(
    edges: Iterable[tuple[Point, Point]],
    keep: Callable[[list[Point]], bool] | None = None,
) -> list[list[Point]]:
    res = [f for f in faces(edges) if len(f) >= 3 and signed_area2(f) > 0]
    if keep is not None:
        res = [f for f in res if keep(f)]
    return res


def simplify_cycle(cyc: Sequence[Point]) -> list[Point]:
    """Drop vertices where the boundary goes straight on."""
    out = list(cyc)
    i = 0
    while len(out) > 3 and i < len(out):
        p, v, q = out[i - 1], out[i], out[(i + 1) % len(out)]
        if cross(p, v, q) == 0 and (v.x - p.x) * (q.x - v.x) + (v.y - p.y) * (q.y - v.y) > 0:
            del out[i]
            i = max(i - 1, 0)
        else:
            i += 1
    return out
