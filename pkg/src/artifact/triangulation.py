"""Exact triangulation of polygonal domains and funnel string-pulling."""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field

from .errors import OutsidePolygon, StructuralError
from .geometry import (
    Point,
    PolygonalDomain,
    Segment,
    convex_polygon_contains,
    cross,
    midpoint,
    polygon_interior_point,
    segment_intersection_points,
)
from .planar import _bbox_overlap, bounded_faces


def open_diagonal(dom: PolygonalDomain, u: Point, v: Point) -> bool:
    """The open segment uv runs through the interior and meets no vertex or edge."""
    seg = Segment(u, v)
    ends = {u, v}
    for e in dom.edges:
        if not _bbox_overlap(seg, e):
            continue
        for p in segment_intersection_points(u, v, e.a, e.b):
            if p not in ends:
                return False
        # a boundary edge running along uv from an endpoint
        if cross(u, v, e.a) == 0 and cross(u, v, e.b) == 0 and {e.a, e.b} == ends:
            return False
    return dom.strictly_contains(midpoint(u, v))


@dataclass
class Triangulation:
    dom: PolygonalDomain
    triangles: list[tuple[Point, Point, Point]]  # counterclockwise
    diagonals: list[tuple[Point, Point]]
    adjacency: dict[int, list[tuple[int, tuple[Point, Point]]]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        owner = defaultdict(list)
        for i, t in enumerate(self.triangles):
            for k in range(3):
                a, b = t[k], t[(k + 1) % 3]
                owner[(a, b) if a < b else (b, a)].append(i)
        adj: dict[int, list] = defaultdict(list)
        for e, ts in owner.items():
            if len(ts) == 2:
                adj[ts[0]].append((ts[1], e))
                adj[ts[1]].append((ts[0], e))
        self.adjacency = {i: adj.get(i, []) for i in range(len(self.triangles))}
        self.edge_owner = dict(owner)

    def locate(self, p: Point) -> int:
        for i, t in enumerate(self.triangles):
            if convex_polygon_contains(t, p):
                return i
        raise OutsidePolygon(f"{p} lies outside the triangulated region")

    def dual_path(self, i: int, j: int) -> list[int]:
        prev = {i: None}
        dq = deque([i])
        while dq:
            u = dq.popleft()
            if u == j:
                break
            for w, _ in self.adjacency[u]:
                if w not in prev:
                    prev[w] = u
                    dq.append(w)
        if j not in prev:
            raise StructuralError("dual graph disconnected")
        path = [j]
        while path[-1] != i:
            path.append(prev[path[-1]])
        return path[::-1]


def triangulate(dom: PolygonalDomain) -> Triangulation:
    """Greedy maximal set of non-crossing open diagonals, shortest first."""
    verts = dom.vertices
    edge_set = {(e.a, e.b) if e.a < e.b else (e.b, e.a) for e in dom.edges}
    cands = []
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            u, v = verts[i], verts[j]
            key = (u, v) if u < v else (v, u)
            if key in edge_set:
                continue
            dx, dy = u.x - v.x, u.y - v.y
            cands.append((dx * dx + dy * dy, key))
    cands.sort()
    chosen: list[tuple[Point, Point]] = []
    for _, (u, v) in cands:
        seg = Segment(u, v)
        ok = True
        for a, b in chosen:
            if not _bbox_overlap(seg, Segment(a, b)):
                continue
            shared = {u, v} & {a, b}
            pts = segment_intersection_points(u, v, a, b)
            if any(p not in shared for p in pts):
                ok = False
                break
        if ok and open_diagonal(dom, u, v):
            chosen.append((u, v))
    edges = list(edge_set) + chosen
    tris = bounded_faces(edges, lambda f: dom.strictly_contains(polygon_interior_point(f)))
    if any(len(t) != 3 for t in tris):
        raise StructuralError("triangulation left a non-triangular face")
    return Triangulation(dom, [tuple(t) for t in tris], chosen)


def _centroid(f):
    n = len(f)
    return Point(sum(p.x for p in f) / n, sum(p.y for p in f) / n)


def portals_between(tri: Triangulation, path: list[int]) -> list[tuple[Point, Point]]:
    """(left, right) endpoints of the shared edges crossed along a triangle sleeve."""
    out = []
    for a, b in zip(path, path[1:]):
        ta = tri.triangles[a]
        tb = set(tri.triangles[b])
        for k in range(3):
            x, y = ta[k], ta[(k + 1) % 3]
            if x in tb and y in tb:
                out.append((y, x))
                break
    return out


def string_pull(p: Point, q: Point, portals: list[tuple[Point, Point]]) -> list[Point]:
    """Funnel algorithm: shortest path from p to q through the portal sequence."""
    ports = [(p, p)] + list(portals) + [(q, q)]
    path = [p]
    apex = left = right = p
    ai = li = ri = 0
    i = 1
    while i < len(ports):
        pl, pr = ports[i]
        if cross(apex, right, pr) >= 0:
            if apex == right or cross(apex, left, pr) < 0:
                right, ri = pr, i
            else:
                if path[-1] != left:
                    path.append(left)
                apex, ai = left, li
                left = right = apex
                li = ri = ai
                i = ai + 1
                continue
        if cross(apex, left, pl) <= 0:
            if apex == left or cross(apex, right, pl) > 0:
                left, li = pl, i
            else:
                if path[-1] != right:
                    path.append(right)
                apex, ai = right, ri
                left = right = apex
                li = ri = ai
                i = ai + 1
                continue
        i += 1
    if path[-1] != q:
        path.append(q)
    return path


def sleeve_path(tri: Triangulation, p: Point, q: Point) -> list[Point]:
    """Euclidean shortest path between two points of a triangulated simple polygon."""
    i, j = tri.locate(p), tri.locate(q)
    seq = tri.dual_path(i, j)
    return string_pull(p, q, portals_between(tri, seq))
