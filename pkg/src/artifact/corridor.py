"""Corridor structure: junction triangles, corridors, hourglasses, bays,
canals, the ocean M, its cores, the core domain and the rectified domain.
"""

from __future__ import annotations

import functools
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .distance_engine import Universe, reflex_vertices
from .errors import InternalInvariantViolation
from .geometry import (
    Point,
    PolygonalDomain,
    Segment,
    convex_polygon_contains,
    cross,
    is_monotone,
    on_segment,
    path_l1_length,
    point_in_ring,
    polygon_interior_point,
    ring_area,
    ring_edges,
    segment_intersection_points,
    signed_area2,
)
from .planar import _bbox_overlap, angle_key, bounded_faces, split_segments
from .triangulation import Triangulation, portals_between, string_pull, triangulate

Edge = tuple[Point, Point]


def _key(a: Point, b: Point) -> Edge:
    return (a, b) if a < b else (b, a)


# ------------------------------------------------------------ corridor graph


@dataclass
class Corridor:
    id: int
    ends: tuple[int, int]  # junction triangle ids
    chain: list[int]  # triangles from ends[0] to ends[1]
    trees: list[int]  # pruned triangles hanging off the chain
    doors: tuple[Edge, Edge]  # (left, right) endpoints of the two junction diagonals
    portals: list[Edge]  # (left, right) of the internal diagonals

    @property
    def triangles(self) -> list[int]:
        return self.chain + self.trees


@dataclass
class CorridorGraph:
    junctions: list[int]
    corridors: list[Corridor]
    stray_trees: list[tuple[int, list[int]]] = field(default_factory=list)  # (junction, triangles)

    def degree(self, j: int) -> int:
        return sum((c.ends[0] == j) + (c.ends[1] == j) for c in self.corridors)

    @property
    def node_count(self) -> int:
        return len(self.junctions)

    @property
    def edge_count(self) -> int:
        return len(self.corridors)


def _cycle_junctions(tri: Triangulation, nbrs: dict[int, list[int]], alive: set[int]) -> list[int]:
    """Two junctions for the one-hole case, where the reduced graph is a cycle.

    A single junction would give one corridor whose two doors share a vertex,
    and its hourglass then wraps around the hole. Two triangles without shared
    vertices, about half way round from each other, give two plain corridors.
    Triangles without pruned neighbours are preferred so no tree hangs off a
    junction.
    """
    start = min(alive, key=lambda i: (len(nbrs[i]) != 2, i))
    cycle = [start]
    prev = None
    while True:
        cur = cycle[-1]
        nxt = [w for w in nbrs[cur] if w in alive and w != prev]
        if not nxt or nxt[0] == start:
            break
        prev = cur
        cycle.append(nxt[0])
    vs = set(tri.triangles[start])
    best = None
    for k, t in enumerate(cycle):
        if set(tri.triangles[t]) & vs:
            continue
        score = (len(nbrs[t]) != 2, abs(2 * k - len(cycle)), t)
        if best is None or score < best[0]:
            best = (score, t)
    if best is None:
        return [start]
    return sorted([start, best[1]])


def build_corridor_graph(tri: Triangulation) -> CorridorGraph:
    """Prune degree-one nodes of the dual graph, then contract degree-two chains."""
    nbrs = {i: [j for j, _ in adj] for i, adj in tri.adjacency.items()}
    alive = set(nbrs)
    deg = {i: len(nbrs[i]) for i in nbrs}
    dq = deque(sorted(i for i in alive if deg[i] <= 1))
    while dq:
        u = dq.popleft()
        if u not in alive:
            continue
        alive.discard(u)
        for w in nbrs[u]:
            if w in alive:
                deg[w] -= 1
                if deg[w] == 1:
                    dq.append(w)
    if not alive:
        return CorridorGraph([], [])
    core_deg = {i: sum(1 for w in nbrs[i] if w in alive) for i in alive}
    junctions = sorted(i for i in alive if core_deg[i] == 3)
    if not junctions:
        junctions = _cycle_junctions(tri, nbrs, alive)
    jset = set(junctions)

    # pruned trees: attach each to the surviving triangle it hangs from
    owner: dict[int, int] = {}
    for r in sorted(alive):
        for w in nbrs[r]:
            if w in alive or w in owner:
                continue
            stack = [w]
            owner[w] = r
            while stack:
                u = stack.pop()
                for z in nbrs[u]:
                    if z not in alive and z not in owner:
                        owner[z] = r
                        stack.append(z)
    hanging: dict[int, list[int]] = defaultdict(list)
    for t, r in owner.items():
        hanging[r].append(t)

    corridors: list[Corridor] = []
    used: set[tuple[int, int]] = set()
    for j in junctions:
        for first in sorted(w for w in nbrs[j] if w in alive):
            if (j, first) in used:
                continue
            chain = []
            prev, cur = j, first
            while cur not in jset:
                chain.append(cur)
                nxt = [w for w in nbrs[cur] if w in alive and w != prev]
                if len(nxt) != 1:
                    # a cycle revisiting the same neighbour (h = 1 with tiny cycles)
                    nxt = [w for w in nbrs[cur] if w in alive and w != cur and w != prev] or nxt
                prev, cur = cur, nxt[0]
            used.add((j, first))
            used.add((cur, chain[-1] if chain else j))
            seq = [j] + chain + [cur]
            ports = portals_between(tri, seq)
            trees = sorted(t for c in chain for t in hanging.get(c, ()))
            corridors.append(
                Corridor(len(corridors), (j, cur), chain, trees, (ports[0], ports[-1]), ports[1:-1])
            )
    stray = [(j, sorted(hanging[j])) for j in junctions if hanging.get(j)]
    return CorridorGraph(junctions, corridors, stray)


# ---------------------------------------------------------------- hourglasses


@dataclass
class Hourglass:
    corridor: int
    left: list[Point]
    right: list[Point]
    closed: bool
    path: list[Point] | None = None  # corridor path between the terminals
    x: Point | None = None
    y: Point | None = None
    ix: tuple[int, int] = (0, 0)  # index of x in (left, right)
    iy: tuple[int, int] = (0, 0)

    @property
    def rings(self) -> list[list[Point]]:
        """Boundary rings of the hourglass region (one if open, the two funnels if closed)."""
        if not self.closed:
            return [self.left + self.right[::-1]]
        (lx, rx), (ly, ry) = self.ix, self.iy
        return [
            self.left[: lx + 1] + self.right[:rx][::-1],
            self.left[ly:] + self.right[ry + 1 :][::-1],
        ]


def build_hourglass(K: Corridor) -> Hourglass:
    (l1, r1), (l2, r2) = K.doors
    left = string_pull(l1, l2, K.portals)
    right = string_pull(r1, r2, K.portals)
    rpos: dict[Point, int] = {}
    for j, p in enumerate(right):
        rpos.setdefault(p, j)
    common = [i for i, p in enumerate(left) if p in rpos]
    if not common:
        return Hourglass(K.id, left, right, False)
    i0, i1 = common[0], common[-1]
    j0 = rpos[left[i0]]
    j1 = max(j for j, p in enumerate(right) if p == left[i1])
    path = left[i0 : i1 + 1]
    if right[j0 : j1 + 1] != path:
        raise InternalInvariantViolation(f"hourglass sides of corridor {K.id} share a non-contiguous part")
    return Hourglass(K.id, left, right, True, path, left[i0], left[i1], (i0, j0), (i1, j1))


# --------------------------------------------------------------- bays, canals


@dataclass
class Pocket:
    """A bay or canal; it does not contain its gates."""

    id: int
    kind: str  # "bay" | "canal"
    ring: list[Point]  # counterclockwise
    gates: list[Edge]
    corridor: int
    terminals: tuple[Point, Point] | None = None

    def __post_init__(self) -> None:
        xs = [p.x for p in self.ring]
        ys = [p.y for p in self.ring]
        self.bbox = (min(xs), min(ys), max(xs), max(ys))

    def on_gate(self, p: Point) -> bool:
        return any(on_segment(p, a, b) for a, b in self.gates)

    def contains(self, p: Point) -> bool:
        """Closed region minus its gates."""
        x0, y0, x1, y1 = self.bbox
        if p.x < x0 or p.x > x1 or p.y < y0 or p.y > y1:
            return False
        return point_in_ring(p, self.ring) >= 0 and not self.on_gate(p)

    def closure_contains(self, p: Point) -> bool:
        x0, y0, x1, y1 = self.bbox
        if p.x < x0 or p.x > x1 or p.y < y0 or p.y > y1:
            return False
        return point_in_ring(p, self.ring) >= 0

    @property
    def area(self):
        return ring_area(self.ring)

    def domain(self) -> PolygonalDomain:
        """The closure as a simple polygon, vertices kept as given."""
        return PolygonalDomain(tuple(self.ring), (), f"pocket-{self.id}")


def _chords(hg: Hourglass, p_edges: set[Edge]) -> list[tuple[Edge, int]]:
    """Side segments that are not edges of P, tagged 1/2 by funnel (0 if open).

    A side segment may be a junction diagonal itself when a funnel collapses
    onto it; it then serves as a canal gate.
    """
    out = []
    for side, k in ((hg.left, 0), (hg.right, 1)):
        ix = hg.ix[k] if hg.closed else None
        iy = hg.iy[k] if hg.closed else None
        for i in range(len(side) - 1):
            a, b = side[i], side[i + 1]
            e = _key(a, b)
            if a == b or e in p_edges:
                continue
            if hg.closed and ix <= i < iy:
                continue  # corridor path
            tag = 0 if not hg.closed else (1 if i < ix else 2)
            out.append(((a, b), tag))
    return out


def extract_pockets(tri: Triangulation, K: Corridor, hg: Hourglass, p_edges: set[Edge], start_id: int = 0) -> list[Pocket]:
    """Components of K minus the interior of its hourglass."""
    tris = [tri.triangles[t] for t in K.triangles]
    count: dict[Edge, int] = defaultdict(int)
    for t in tris:
        for k in range(3):
            count[_key(t[k], t[(k + 1) % 3])] += 1
    boundary = [e for e, c in count.items() if c == 1]
    chords = _chords(hg, p_edges)
    if not chords:
        return []
    chord_of: dict[Edge, tuple[Edge, int]] = {}
    segs = [Segment(*e) for e in boundary] + [Segment(*c) for c, _ in chords]
    edges = split_segments(segs)
    for (a, b), tag in chords:
        for u, v in edges:
            if on_segment(u, a, b) and on_segment(v, a, b):
                chord_of[(u, v)] = ((a, b), tag)
    hrings = [r for r in hg.rings if len(r) >= 3 and signed_area2(r) != 0]
    pockets: list[Pocket] = []
    for face in bounded_faces(edges):
        ip = polygon_interior_point(face)
        if not any(convex_polygon_contains(t, ip) for t in tris):
            continue
        if any(point_in_ring(ip, r) == 1 for r in hrings):
            continue
        gates: list[tuple[Edge, int]] = []
        for i in range(len(face)):
            u, v = face[i], face[(i + 1) % len(face)]
            got = chord_of.get(_key(u, v))
            if got is not None and got not in gates:
                gates.append(got)
        if not gates:
            raise InternalInvariantViolation(f"pocket without gate in corridor {K.id}")
        kind = "bay"
        terms = None
        if hg.closed:
            at_x = any(t == 1 and hg.x in g for g, t in gates)
            at_y = any(t == 2 and hg.y in g for g, t in gates)
            if at_x and at_y:
                kind, terms = "canal", (hg.x, hg.y)
        pockets.append(Pocket(start_id + len(pockets), kind, list(face), [g for g, _ in gates], K.id, terms))
    return pockets


def _stray_pocket(tri: Triangulation, junction: int, tris: list[int], pid: int) -> Pocket:
    """A pruned tree hanging off a junction, closed off by the junction diagonal."""
    jt = set(tri.triangles[junction])
    count: dict[Edge, int] = defaultdict(int)
    gate = None
    for t in tris:
        tt = tri.triangles[t]
        for k in range(3):
            e = _key(tt[k], tt[(k + 1) % 3])
            count[e] += 1
            if e[0] in jt and e[1] in jt:
                gate = e
    edges = [e for e, c in count.items() if c == 1]
    face = max(bounded_faces(edges), key=signed_area2)
    return Pocket(pid, "bay", face, [gate], -1)


# --------------------------------------------------------------------- ocean


def _sgn(v) -> int:
    return (v > 0) - (v < 0)


def _link_cycles(directed: list[Edge]) -> list[list[Point]]:
    """Link directed edges (region on the left) into boundary cycles."""
    out: dict[Point, list[Point]] = defaultdict(list)
    for a, b in directed:
        out[a].append(b)
    unused = set(directed)
    cycles = []
    for start in sorted(directed):
        if start not in unused:
            continue
        cyc = []
        a, b = start
        while (a, b) in unused:
            unused.discard((a, b))
            cyc.append(a)
            cands = [c for c in out[b] if (b, c) in unused]
            if not cands:
                break
            if len(cands) == 1:
                c = cands[0]
            else:
                # the first outgoing edge clockwise from the way we came in
                order = sorted(set(cands) | {a}, key=angle_key(b))
                k = order.index(a)
                c = order[k - 1]
                if c == a and len(order) > 1:
                    c = order[k - 2]
            a, b = b, c
        cycles.append(cyc)
    return cycles


@dataclass
class Ocean:
    """M = P minus all bays and canals (gates belong to M)."""

    dom: PolygonalDomain
    pockets: list[Pocket]
    cycles: list[list[Point]]  # boundary cycles of M, M on the left

    def __post_init__(self) -> None:
        self.edges = [Segment(c[i], c[(i + 1) % len(c)]) for c in self.cycles for i in range(len(c))]

    def pocket_of(self, p: Point) -> Pocket | None:
        for pk in self.pockets:
            if pk.contains(p):
                return pk
        return None

    def contains(self, p: Point) -> bool:
        return self.dom.contains(p) and self.pocket_of(p) is None

    def strictly_contains(self, p: Point) -> bool:
        return self.contains(p) and not any(on_segment(p, a, b) for a, b in self.edges)

    @property
    def area(self):
        return self.dom.area() - sum((pk.area for pk in self.pockets), mpq(0))


def build_ocean(dom: PolygonalDomain, pockets: list[Pocket]) -> Ocean:
    walls: set[Edge] = set()
    p_edges = {_key(e.a, e.b) for e in dom.edges}
    directed: list[Edge] = []
    for pk in pockets:
        gate_keys = {_key(*g) for g in pk.gates}
        r = pk.ring
        for i in range(len(r)):
            u, v = r[i], r[(i + 1) % len(r)]
            k = _key(u, v)
            if k in p_edges and k not in gate_keys:
                walls.add(k)
            elif any(on_segment(u, a, b) and on_segment(v, a, b) for a, b in pk.gates):
                directed.append((v, u))
    for ring in dom.rings:
        for i in range(len(ring)):
            a, b = ring[i], ring[(i + 1) % len(ring)]
            if _key(a, b) not in walls:
                directed.append((a, b))
    return Ocean(dom, pockets, _link_cycles(directed))


# --------------------------------------------------------------------- cores


def core_ring(cycle: Sequence[Point], terminals: set[Point], boundary: Sequence[Segment]) -> list[Point]:
    """Reduce a boundary cycle of M to its extreme, convex and terminal vertices.

    Between two kept vertices the cycle is monotone in both axes and bends
    away from M, so the chord between them changes no L1 distance in M. If a
    chord would touch another part of the boundary, the chain is kept whole.
    """
    n = len(cycle)
    if n < 3:
        return list(cycle)
    keep = []
    for i in range(n):
        u, v, w = cycle[i - 1], cycle[i], cycle[(i + 1) % n]
        if (
            cross(u, v, w) > 0
            or _sgn(v.x - u.x) != _sgn(w.x - v.x)
            or _sgn(v.y - u.y) != _sgn(w.y - v.y)
            or v in terminals
        ):
            keep.append(i)
    if not keep:
        return list(cycle)
    out: list[Point] = []
    for k, i in enumerate(keep):
        j = keep[(k + 1) % len(keep)]
        span = (j - i) % n or n
        chain = [cycle[(i + s) % n] for s in range(span + 1)]
        out.append(chain[0])
        if span == 1:
            continue
        a, b = chain[0], chain[-1]
        own = {_key(chain[s], chain[s + 1]) for s in range(span)}
        seg = Segment(a, b)
        blocked = a == b
        for e in boundary:
            if blocked:
                break
            if _key(e.a, e.b) in own or not _bbox_overlap(seg, e):
                continue
            if any(p != a and p != b for p in segment_intersection_points(a, b, e.a, e.b)):
                blocked = True
        if blocked:
            out.extend(chain[1:-1])
    return out


@dataclass
class CorridorStructure:
    dom: PolygonalDomain
    tri: Triangulation
    graph: CorridorGraph
    hourglasses: dict[int, Hourglass]
    pockets: list[Pocket]
    ocean: Ocean
    cores: list[list[Point]]
    shortcuts: list[tuple[Point, Point, object]]

    @property
    def bays(self) -> list[Pocket]:
        return [p for p in self.pockets if p.kind == "bay"]

    @property
    def canals(self) -> list[Pocket]:
        return [p for p in self.pockets if p.kind == "canal"]

    @property
    def terminals(self) -> set[Point]:
        return {p for a, b, _ in self.shortcuts for p in (a, b)}

    @functools.cached_property
    def core_vertices(self) -> list[Point]:
        return sorted({p for r in self.cores for p in r})

    def core_contains(self, p: Point) -> bool:
        inside = False
        for r in self.cores:
            k = point_in_ring(p, r) if len(r) >= 2 else (0 if p in r else -1)
            if k == 0:
                return True
            if k == 1:
                inside = not inside
        return inside

    def core_universe(self) -> Universe:
        edges = [Segment(r[i], r[(i + 1) % len(r)]) for r in self.cores if len(r) >= 2 for i in range(len(r))]
        return Universe(edges, self.core_contains, self.core_vertices, list(self.shortcuts), "P_core")


def build_structure(dom: PolygonalDomain) -> CorridorStructure:
    tri = triangulate(dom)
    graph = build_corridor_graph(tri)
    p_edges = {_key(e.a, e.b) for e in dom.edges}
    hourglasses: dict[int, Hourglass] = {}
    pockets: list[Pocket] = []
    for K in graph.corridors:
        if not K.chain:
            continue
        hg = build_hourglass(K)
        hourglasses[K.id] = hg
        pockets.extend(extract_pockets(tri, K, hg, p_edges, len(pockets)))
    for j, tris in graph.stray_trees:
        pockets.append(_stray_pocket(tri, j, tris, len(pockets)))
    ocean = build_ocean(dom, pockets)
    shortcuts = []
    for pk in pockets:
        if pk.kind == "canal":
            hg = hourglasses[pk.corridor]
            shortcuts.append((hg.x, hg.y, path_l1_length(hg.path)))
    terms = {p for a, b, _ in shortcuts for p in (a, b)}
    cores = [core_ring(c, terms, ocean.edges) for c in ocean.cycles]
    return CorridorStructure(dom, tri, graph, hourglasses, pockets, ocean, cores, shortcuts)


_cache: dict[int, CorridorStructure] = {}


def structure(dom: PolygonalDomain) -> CorridorStructure:
    got = _cache.get(id(dom))
    if got is None or got.dom is not dom:
        got = build_structure(dom)
        _cache[id(dom)] = got
    return got


# ------------------------------------------------------- rectified domain


def _arc_probe(u: Point, w: Point | None) -> Point:
    """A direction strictly inside the counterclockwise arc from u to w."""
    if w is not None and cross(Point(0, 0), u, w) > 0:
        nu = abs(u.x) + abs(u.y)
        nw = abs(w.x) + abs(w.y)
        return Point(u.x / nu + w.x / nw, u.y / nu + w.y / nw)
    return Point(-u.y, u.x)


_dir_key = angle_key(Point(0, 0))


def _unit(dx, dy) -> Point:
    n = abs(dx) + abs(dy)
    return Point(dx / n, dy / n)


def _local_inside(p: Point, d: Point, ring: Sequence[Point]) -> bool:
    """Direction d leaves p into the interior of the (left-hand side of the) ring."""
    k = len(ring)
    for i in range(k):
        a, b = ring[i], ring[(i + 1) % k]
        if p == b:
            c = ring[(i + 2) % k]
            e_in = Point(b.x - a.x, b.y - a.y)
            e_out = Point(c.x - b.x, c.y - b.y)
            left_in = cross(Point(0, 0), e_in, d) > 0
            left_out = cross(Point(0, 0), e_out, d) > 0
            if cross(Point(0, 0), e_in, e_out) >= 0:
                return left_in and left_out
            return left_in or left_out
        if p != a and on_segment(p, a, b):
            return cross(Point(0, 0), Point(b.x - a.x, b.y - a.y), d) > 0
    return point_in_ring(p, ring) == 1


def _inside_walls(p: Point, d: Point, walls: Sequence[Segment]) -> bool:
    """Direction d leaves p into P, given the edges of P through p (interior on their left)."""
    o = Point(0, 0)
    e_in = next((e for e in walls if e.b == p), None)
    e_out = next((e for e in walls if e.a == p), None)
    if e_in is not None and e_out is not None:
        u = Point(p.x - e_in.a.x, p.y - e_in.a.y)
        w = Point(e_out.b.x - p.x, e_out.b.y - p.y)
        if cross(o, u, w) >= 0:
            return cross(o, u, d) > 0 and cross(o, w, d) > 0
        return cross(o, u, d) > 0 or cross(o, w, d) > 0
    return all(cross(o, Point(e.b.x - e.a.x, e.b.y - e.a.y), d) > 0 for e in walls)


@dataclass
class RectifiedDomain:
    """P with every triangle spanned by an interior coastal corner and its facing edge removed."""

    dom: PolygonalDomain
    triangles: dict[Point, list[Point]]  # apex -> counterclockwise triangle, or [apex] when it collapses
    facing: dict[Point, int]  # apex -> index of the facing edge of P
    dropped: frozenset = frozenset()  # apexes whose triangles were given up

    @functools.cached_property
    def solid(self) -> list[list[Point]]:
        """The maximal kept triangles; the others lie inside them and change nothing."""
        tris = sorted({tuple(t) for v, t in self.triangles.items() if len(t) == 3 and v not in self.dropped})
        out = []
        for i, t in enumerate(tris):
            inside = [
                j for j, u in enumerate(tris) if j != i and all(point_in_ring(q, u) >= 0 for q in t)
            ]
            # of two equal triangles keep the first
            if not any(not all(point_in_ring(q, t) >= 0 for q in tris[j]) or j < i for j in inside):
                out.append(list(t))
        return out

    @functools.cached_property
    def edges(self) -> list[Segment]:
        out = list(self.dom.edges)
        for t in self.solid:
            out.extend(ring_edges(t))
        return out

    @functools.cached_property
    def vertices(self) -> list[Point]:
        """Graph nodes: reflex vertices of P and every triangle apex.

        Triangle sides meet the boundary and each other at convex corners of
        the free space, where no geodesic bends, so those points are left out.
        """
        return sorted(set(reflex_vertices(self.dom)) | set(self.apexes))

    @functools.cached_property
    def apexes(self) -> list[Point]:
        """Apexes that stay in the domain.

        Without general position an apex can sit on a leg of another
        triangle whose union with its own covers it; such apexes are gone.
        """
        return sorted(v for v in self.triangles if self.contains(v))

    @functools.cached_property
    def _solid_boxes(self) -> list[tuple[tuple, list[Point]]]:
        out = []
        for t in self.solid:
            xs = [q.x for q in t]
            ys = [q.y for q in t]
            out.append(((min(xs), min(ys), max(xs), max(ys)), t))
        return out

    def contains(self, p: Point) -> bool:
        """p lies in the closure of P minus the removed triangles."""
        touching = []
        for (x0, y0, x1, y1), t in self._solid_boxes:
            if p.x < x0 or p.x > x1 or p.y < y0 or p.y > y1:
                continue
            k = point_in_ring(p, t)
            if k == 1:
                return False
            if k == 0:
                touching.append(t)
        if not self.dom.contains(p):
            return False
        if not touching:
            return True
        walls = [e for e in self.dom.edges if on_segment(p, e.a, e.b)]
        dirs = {_unit(q.x - p.x, q.y - p.y) for t in touching for q in t if q != p}
        dirs |= {_unit(q.x - p.x, q.y - p.y) for e in walls for q in e if q != p}
        dirs = sorted(dirs, key=_dir_key)
        for i in range(len(dirs)):
            d = _arc_probe(dirs[i], dirs[(i + 1) % len(dirs)] if len(dirs) > 1 else None)
            if _inside_walls(p, d, walls) and not any(_local_inside(p, d, t) for t in touching):
                return True
        return False

    def universe(self) -> Universe:
        return Universe(self.edges, self.contains, self.vertices, (), "P_rect")

    def components(self) -> list[list[list[Point]]]:
        """Groups of removed triangles that overlap or share a piece of a side."""
        tris = list(self.solid)
        parent = list(range(len(tris)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(len(tris)):
            for j in range(i + 1, len(tris)):
                if _triangles_meet(tris[i], tris[j]):
                    parent[find(i)] = find(j)
        groups: dict[int, list] = defaultdict(list)
        for i, t in enumerate(tris):
            groups[find(i)].append(t)
        return list(groups.values())

    def walls(self, component: Sequence[Sequence[Point]]) -> list[list[Point]]:
        """The part of a component's boundary off the boundary of P, as chains."""
        segs = [Segment(a, b) for t in component for a, b in ring_edges(t)]
        keep = []
        for u, v in split_segments(segs):
            m = Point((u.x + v.x) / 2, (u.y + v.y) / 2)
            if self.dom.locate(m) != 0 and self.contains(m):
                keep.append((u, v))
        return _chain(keep)


def _chain(pieces: Sequence[tuple[Point, Point]]) -> list[list[Point]]:
    """Link edges into maximal paths (or closed loops) through degree-2 points."""
    nbrs: dict[Point, list[Point]] = defaultdict(list)
    for u, v in pieces:
        nbrs[u].append(v)
        nbrs[v].append(u)
    used: set = set()
    out = []
    starts = [p for p in sorted(nbrs) if len(nbrs[p]) != 2] + sorted(nbrs)
    for s0 in starts:
        for n0 in nbrs[s0]:
            if _key(s0, n0) in used:
                continue
            path = [s0, n0]
            used.add(_key(s0, n0))
            while len(nbrs[path[-1]]) == 2:
                nxt = next((q for q in nbrs[path[-1]] if _key(path[-1], q) not in used), None)
                if nxt is None:
                    break
                used.add(_key(path[-1], nxt))
                path.append(nxt)
            out.append(path)
    return out


def _triangles_meet(s: Sequence[Point], t: Sequence[Point]) -> bool:
    """Interiors overlap, or a side of one shares a segment with a side of the other."""
    for a, b in ring_edges(s):
        for c, d in ring_edges(t):
            pts = segment_intersection_points(a, b, c, d)
            if len(pts) == 2 and pts[0] != pts[1]:
                return True
            if len(pts) == 1 and cross(a, b, c) * cross(a, b, d) < 0 and cross(c, d, a) * cross(c, d, b) < 0:
                return True
    return any(point_in_ring(p, t) == 1 for p in s) or any(point_in_ring(p, s) == 1 for p in t)


def _axis_hit(v: Point, e: Segment, axis: str) -> Point | None:
    a, b = e
    if axis == "v":
        if a.x == b.x:
            return None
        y = a.y + (b.y - a.y) * (v.x - a.x) / (b.x - a.x)
        q = Point(v.x, y)
    else:
        if a.y == b.y:
            return None
        x = a.x + (b.x - a.x) * (v.y - a.y) / (b.y - a.y)
        q = Point(x, v.y)
    return q if on_segment(q, a, b) else None


def _rays_to(dom: PolygonalDomain, v: Point, e: Segment) -> list[Point] | None:
    """Hits of the vertical and horizontal lines through v on e, if both stay inside P."""
    hits = [q for q in (_axis_hit(v, e, "v"), _axis_hit(v, e, "h")) if q is not None]
    if not hits or any(not dom.segment_inside(v, q) for q in hits):
        return None
    if len(hits) == 1 and e.a.x != e.b.x and e.a.y != e.b.y:
        return None
    return hits


def build_rectified(dom: PolygonalDomain, coastal_cells: Sequence) -> RectifiedDomain:
    """Remove the triangle between each interior coastal corner and the edge its cell faces.

    ``coastal_cells`` are the coastal cells of the combined cell set; every
    cell has ``ring`` and ``corners``. Edges are taken in the order of
    ``dom.edges``; a corner is claimed by the first edge touched by one of its
    cells that both axis rays from the corner reach. Corners of cells that
    touch the boundary only at a vertex may reach no such edge; they keep no
    triangle, which only enlarges the domain.
    """
    interior = {v for c in coastal_cells for v in c.corners if dom.locate(v) == 1}
    triangles: dict[Point, list[Point]] = {}
    facing: dict[Point, int] = {}
    for i, e in enumerate(dom.edges):
        for c in coastal_cells:
            if not any(segment_intersection_points(a, b, e.a, e.b) for a, b in ring_edges(c.ring)):
                continue
            for v in c.corners:
                if v not in interior or v in triangles:
                    continue
                hits = _rays_to(dom, v, e)
                if hits is None:
                    continue
                if len(hits) == 2:
                    t = [v, hits[0], hits[1]]
                    if signed_area2(t) < 0:
                        t = [v, hits[1], hits[0]]
                else:
                    # an axis-parallel edge: the triangle has no interior and removes nothing
                    t = [v]
                triangles[v] = t
                facing[v] = i
    rd = RectifiedDomain(dom, triangles, facing)
    # Without general position triangles can merge into a component whose
    # free boundary splits into several chains or stops being monotone; the
    # reroute-along-the-wall argument then fails. Keep only the largest
    # triangle of such a component.
    while True:
        drop = set()
        for comp in rd.components():
            walls = rd.walls(comp)
            if len(walls) != 1 or not is_monotone(walls[0]):
                keep = max(comp, key=ring_area)
                drop |= {v for v, t in triangles.items() if len(t) == 3 and t in comp and t != keep}
        if not drop:
            return rd
        rd = RectifiedDomain(dom, triangles, facing, rd.dropped | frozenset(drop))
