"""Cell decompositions: D of P, D_M of the ocean, the augmented D, the
gate-refined D_M^A and the combined family D_f.

Every decomposition is the arrangement of a boundary and a set of
axis-parallel diagonals. Alignedness is decided by locating a cell's
interior sample in the faces of the horizontal-only and vertical-only maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from gmpy2 import mpq

from .corridor import CorridorStructure, Pocket, structure
from .errors import CrossFlavorError, OutOfUniverse
from .geometry import (
    AXIS_DIRS,
    Point,
    PolygonalDomain,
    Segment,
    clean_polygon,
    cross,
    on_segment,
    point_in_ring,
    polygon_interior_point,
    ring_area,
    segment_in_region,
    segment_intersection_points,
    shoot,
)
from .planar import bounded_faces, split_segments
from .triangulation import triangulate

ZERO = mpq(0)


@dataclass(frozen=True)
class Diagonal:
    axis: str  # "h" | "v"
    segment: Segment
    origin: Point
    generation: str  # from-vertex | from-H-endpoint | from-core-vertex | from-gate | from-DM-augmentation


@dataclass
class Cell:
    id: int
    ring: list[Point]  # counterclockwise
    corners: list[Point]  # V_sigma
    kind: str  # "coastal" | "oceanic"
    flavor: str
    pieces: list[list[Point]]  # convex pieces covering the cell
    sample: Point  # a point strictly inside
    hface: int = -1
    vface: int = -1
    parent: int | None = None  # containing cell of the coarser decomposition

    def __post_init__(self) -> None:
        xs = [p.x for p in self.ring]
        ys = [p.y for p in self.ring]
        self.bbox = (min(xs), min(ys), max(xs), max(ys))

    @property
    def n_sigma(self) -> int:
        return len(self.ring)

    @property
    def area(self):
        return ring_area(self.ring)

    def contains(self, p: Point) -> bool:
        x0, y0, x1, y1 = self.bbox
        if p.x < x0 or p.x > x1 or p.y < y0 or p.y > y1:
            return False
        return point_in_ring(p, self.ring) >= 0

    def on_boundary(self, p: Point) -> bool:
        return self.contains(p) and point_in_ring(p, self.ring) == 0


@dataclass
class Decomposition:
    flavor: str  # "D" | "DM" | "DMA" | "Daug"
    cells: list[Cell]
    diagonals: list[Diagonal]
    vertices: set[Point]
    hfaces: list[list[Point]] = field(default_factory=list)
    vfaces: list[list[Point]] = field(default_factory=list)
    pocket: int | None = None  # for D_M^A: the bay or canal it refines for

    def locate(self, p: Point) -> Cell:
        """The cell whose closure holds p; the smallest id wins on shared boundaries."""
        for c in self.cells:
            if c.contains(p):
                return c
        raise OutOfUniverse(f"{p} is outside the {self.flavor} decomposition")

    def locate_all(self, p: Point) -> list[Cell]:
        return [c for c in self.cells if c.contains(p)]

    def aligned(self, a: Cell, b: Cell) -> bool:
        if a.flavor != self.flavor or b.flavor != self.flavor:
            raise CrossFlavorError("use aligned_cells for cells of different decompositions")
        return a.id == b.id or a.hface == b.hface or a.vface == b.vface

    def __len__(self) -> int:
        return len(self.cells)


# ---------------------------------------------------------------- helpers


def _is_convex(ring: Sequence[Point]) -> bool:
    n = len(ring)
    return all(cross(ring[i - 1], ring[i], ring[(i + 1) % n]) >= 0 for i in range(n))


def convex_pieces(ring: Sequence[Point]) -> list[list[Point]]:
    """Split a simple counterclockwise polygon into convex pieces.

    Triangulate, then merge neighbouring pieces while the union stays convex.
    """
    if _is_convex(ring):
        return [clean_polygon(ring)]
    tri = triangulate(PolygonalDomain(tuple(ring), (), "cell"))
    pieces = [list(t) for t in tri.triangles]
    merged = True
    while merged:
        merged = False
        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces)):
                u = _merge(pieces[i], pieces[j])
                if u is not None:
                    pieces[i] = u
                    del pieces[j]
                    merged = True
                    break
            if merged:
                break
    return [clean_polygon(p) for p in pieces]


def _merge(a: list[Point], b: list[Point]) -> list[Point] | None:
    """Union of two convex polygons sharing an edge, if it is convex."""
    na, nb = len(a), len(b)
    for i in range(na):
        p, q = a[i], a[(i + 1) % na]
        for j in range(nb):
            if b[j] == q and b[(j + 1) % nb] == p:
                ring = [a[(i + 1 + k) % na] for k in range(na)]  # q ... p
                ring += [b[(j + 2 + k) % nb] for k in range(nb - 2)]  # after p in b, up to before q
                if _is_convex(ring):
                    return ring
                return None
    return None


def _half_planes(poly: Sequence[Point]):
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        # left of a->b:  (b.y-a.y) x - (b.x-a.x) y <= (b.y-a.y) a.x - (b.x-a.x) a.y
        A = b.y - a.y
        B = -(b.x - a.x)
        yield A, B, A * a.x + B * a.y


def clip_to(poly: Sequence[Point], convex: Sequence[Point]) -> list[Point]:
    from .geometry import clip_convex

    out = list(poly)
    for A, B, C in _half_planes(convex):
        if len(out) < 3:
            return []
        out = clip_convex(out, A, B, C)
    return out if len(out) >= 3 else []


def _overlap_area(pieces: Sequence[Sequence[Point]], tris: Sequence[Sequence[Point]]):
    tot = ZERO
    for p in pieces:
        for t in tris:
            c = clip_to(p, t)
            if c:
                tot += ring_area(c)
    return tot


def _shoot_all(origins: Iterable[Point], dirs: str, edges, strictly_inside, gen: str) -> list[Diagonal]:
    out = []
    seen = set()
    for v in origins:
        for d in dirs:
            seg = shoot(v, AXIS_DIRS[d], edges, strictly_inside)
            if seg is None:
                continue
            key = (min(seg), max(seg))
            if key in seen:
                continue
            seen.add(key)
            out.append(Diagonal("h" if d in "EW" else "v", seg, v, gen))
    return out


def _faces_in(edges: Sequence[Segment], inside: Callable[[Point], bool]) -> list[tuple[list[Point], Point]]:
    out = []
    for f in bounded_faces(split_segments(edges)):
        ip = polygon_interior_point(f)
        if inside(ip):
            out.append((f, ip))
    return out


def _face_index(faces: Sequence[list[Point]], p: Point) -> int:
    for i, f in enumerate(faces):
        if point_in_ring(p, f) == 1:
            return i
    return -1


def _crossings(diags: Sequence[Diagonal]) -> set[Point]:
    hs = [d.segment for d in diags if d.axis == "h"]
    vs = [d.segment for d in diags if d.axis == "v"]
    pts = set()
    for a, b in hs:
        for c, d in vs:
            pts.update(segment_intersection_points(a, b, c, d))
    return pts


def _assemble(
    flavor: str,
    boundary: Sequence[Segment],
    inside: Callable[[Point], bool],
    diags: list[Diagonal],
    vertex_set: set[Point] | None,
    kind: Callable[[list[list[Point]]], str],
) -> Decomposition:
    hsegs = [d.segment for d in diags if d.axis == "h"]
    vsegs = [d.segment for d in diags if d.axis == "v"]
    cells_raw = _faces_in(list(boundary) + hsegs + vsegs, inside)
    hfaces = [f for f, _ in _faces_in(list(boundary) + hsegs, inside)]
    vfaces = [f for f, _ in _faces_in(list(boundary) + vsegs, inside)]
    cells = []
    verts: set[Point] = set()
    for i, (ring, ip) in enumerate(sorted(cells_raw, key=lambda fi: (min(fi[0]), fi[1]))):
        corners = [p for p in dict.fromkeys(ring) if vertex_set is None or p in vertex_set]
        verts.update(corners)
        pieces = convex_pieces(ring)
        cells.append(
            Cell(i, ring, corners, kind(pieces), flavor, pieces, ip, _face_index(hfaces, ip), _face_index(vfaces, ip))
        )
    return Decomposition(flavor, cells, diags, verts, hfaces, vfaces)


# ---------------------------------------------------------------- builders


def _d_diagonals(dom: PolygonalDomain, extra_v: Sequence[Diagonal] = ()) -> list[Diagonal]:
    hd = _shoot_all(dom.vertices, "EW", dom.edges, dom.strictly_contains, "from-vertex")
    vd = _shoot_all(dom.vertices, "NS", dom.edges, dom.strictly_contains, "from-vertex")
    ends = [p for d in hd for p in d.segment if p != d.origin]
    vd += _shoot_all(ends, "NS", dom.edges, dom.strictly_contains, "from-H-endpoint")
    return hd + vd + list(extra_v)


def _coastal_kind(S: CorridorStructure):
    tris = _pocket_triangles(S)

    def kind(pieces):
        x0 = min(p.x for pc in pieces for p in pc)
        x1 = max(p.x for pc in pieces for p in pc)
        y0 = min(p.y for pc in pieces for p in pc)
        y1 = max(p.y for pc in pieces for p in pc)
        for pk, ts in tris:
            bx0, by0, bx1, by1 = pk.bbox
            if bx1 <= x0 or bx0 >= x1 or by1 <= y0 or by0 >= y1:
                continue
            if _overlap_area(pieces, ts) > 0:
                return "coastal"
        return "oceanic"

    return kind


_ptris: dict[int, list] = {}


def _pocket_triangles(S: CorridorStructure) -> list[tuple[Pocket, list]]:
    got = _ptris.get(id(S))
    if got is None or got[0] is not S:
        lst = [(pk, [list(t) for t in triangulate(pk.domain()).triangles]) for pk in S.pockets]
        got = (S, lst)
        _ptris[id(S)] = got
    return got[1]


def build_D(dom: PolygonalDomain, S: CorridorStructure | None = None) -> Decomposition:
    """Overlay of the horizontal and vertical trapezoidal maps of P."""
    S = S if S is not None else structure(dom)
    diags = _d_diagonals(dom)
    return _assemble("D", dom.edges, dom.strictly_contains, diags, None, _coastal_kind(S))


def _dm_diagonals(S: CorridorStructure, extra: Sequence[Point] = (), gen: str = "from-gate") -> list[Diagonal]:
    M = S.ocean
    cv = S.core_vertices
    hd = _shoot_all(cv, "EW", M.edges, M.strictly_contains, "from-core-vertex")
    vd = _shoot_all(cv, "NS", M.edges, M.strictly_contains, "from-core-vertex")
    ends = [p for d in hd for p in d.segment if p != d.origin]
    vd += _shoot_all(ends, "NS", M.edges, M.strictly_contains, "from-H-endpoint")
    if extra:
        he = _shoot_all(extra, "EW", M.edges, M.strictly_contains, gen)
        ends2 = [p for d in he for p in d.segment if p != d.origin]
        ve = _shoot_all(list(extra) + ends2, "NS", M.edges, M.strictly_contains, gen)
        known = {(min(d.segment), max(d.segment)) for d in hd + vd}
        hd += [d for d in he if (min(d.segment), max(d.segment)) not in known]
        vd += [d for d in ve if (min(d.segment), max(d.segment)) not in known]
    return hd + vd


def _dm_vertices(S: CorridorStructure, diags: Sequence[Diagonal]) -> set[Point]:
    vs = set(S.core_vertices)
    for d in diags:
        vs.update(d.segment)
    vs |= _crossings(diags)
    return vs


def _ocean_inside(S: CorridorStructure) -> Callable[[Point], bool]:
    return S.ocean.contains


def build_DM(S: CorridorStructure) -> Decomposition:
    """Decomposition of the ocean by diagonals from core vertices."""
    diags = _dm_diagonals(S)
    return _assemble("DM", S.ocean.edges, _ocean_inside(S), diags, _dm_vertices(S, diags), lambda _p: "oceanic")


def build_DM_A(S: CorridorStructure, DM: Decomposition, A: Pocket) -> Decomposition:
    """D_M refined by diagonals from the gate endpoints of one bay or canal."""
    ends = list(dict.fromkeys(p for g in A.gates for p in g))
    diags = _dm_diagonals(S, ends)
    dec = _assemble("DMA", S.ocean.edges, _ocean_inside(S), diags, _dm_vertices(S, diags), lambda _p: "oceanic")
    dec.pocket = A.id
    for c in dec.cells:
        c.parent = DM.locate(c.sample).id
    return dec


def augment_D(dom: PolygonalDomain, D: Decomposition, DM: Decomposition, S: CorridorStructure | None = None) -> Decomposition:
    """Add the vertical diagonals of D_M that no diagonal of D contains, extended to the boundary of P."""
    S = S if S is not None else structure(dom)
    dv = [d.segment for d in D.diagonals if d.axis == "v"]
    extra: list[Diagonal] = []
    seen = set()
    for d in DM.diagonals:
        if d.axis != "v":
            continue
        a, b = d.segment
        if any(on_segment(a, c, e) and on_segment(b, c, e) for c, e in dv):
            continue
        m = Point(a.x, (a.y + b.y) / 2)
        up = shoot(m, AXIS_DIRS["N"], dom.edges, dom.strictly_contains)
        dn = shoot(m, AXIS_DIRS["S"], dom.edges, dom.strictly_contains)
        lo = dn.b if dn is not None else m
        hi = up.b if up is not None else m
        key = (lo, hi)
        if key in seen or lo == hi:
            continue
        seen.add(key)
        extra.append(Diagonal("v", Segment(lo, hi), d.origin, "from-DM-augmentation"))
    if not extra:
        aug = Decomposition("Daug", [], list(D.diagonals), set(D.vertices), D.hfaces, D.vfaces)
        for c in D.cells:
            aug.cells.append(Cell(c.id, c.ring, c.corners, c.kind, "Daug", c.pieces, c.sample, c.hface, c.vface))
    else:
        aug = _assemble("Daug", dom.edges, dom.strictly_contains, list(D.diagonals) + extra, None, _coastal_kind(S))
    for c in aug.cells:
        if c.kind == "oceanic":
            c.parent = DM.locate(c.sample).id
    return aug


# ---------------------------------------------------------------- predicates


def aligned_cells(a: Cell, b: Cell, DM: Decomposition | None = None) -> bool:
    """Alignedness, extended to oceanic cells of D (or the augmented D) against cells of D_M."""
    if a.flavor == b.flavor:
        return a.id == b.id or a.hface == b.hface or a.vface == b.vface
    pair = {a.flavor, b.flavor}
    if pair in ({"Daug", "DM"}, {"D", "DM"}):
        dc, mc = (a, b) if a.flavor != "DM" else (b, a)
        if DM is None or dc.parent is None:
            raise CrossFlavorError("extended alignedness needs the augmented D and its D_M")
        owner = DM.cells[dc.parent]
        return owner.id == mc.id or owner.hface == mc.hface or owner.vface == mc.vface
    raise CrossFlavorError(f"no alignedness between {a.flavor} and {b.flavor} cells")


def in_cross_region(dom: PolygonalDomain, g: tuple[Point, Point], p: Point) -> bool:
    """p joins a point of the gate by a vertical or horizontal segment inside P."""
    a, b = g
    if min(a.x, b.x) <= p.x <= max(a.x, b.x):
        if a.x == b.x:
            q = Point(p.x, min(max(p.y, min(a.y, b.y)), max(a.y, b.y)))
        else:
            q = Point(p.x, a.y + (b.y - a.y) * (p.x - a.x) / (b.x - a.x))
        if segment_in_region(p, q, dom.edges, dom.contains):
            return True
    if min(a.y, b.y) <= p.y <= max(a.y, b.y):
        if a.y == b.y:
            q = Point(min(max(p.x, min(a.x, b.x)), max(a.x, b.x)), p.y)
        else:
            q = Point(a.x + (b.x - a.x) * (p.y - a.y) / (b.y - a.y), p.y)
        if segment_in_region(p, q, dom.edges, dom.contains):
            return True
    return False


def g_aligned(dom: PolygonalDomain, cell: Cell, g: tuple[Point, Point]) -> bool:
    """The cell lies in the cross-shaped region of the gate (tested at its interior sample)."""
    return in_cross_region(dom, g, cell.sample)


def touches_boundary(dom: PolygonalDomain, cell: Cell) -> bool:
    return any(dom.locate(p) == 0 for p in cell.ring)


def build_Df(dom: PolygonalDomain, D_aug: Decomposition, DM: Decomposition) -> list[Cell]:
    """All D_M cells plus the coastal cells of the augmented D that touch the boundary of P."""
    return list(DM.cells) + [c for c in D_aug.cells if c.kind == "coastal" and touches_boundary(dom, c)]


# ---------------------------------------------------------------- bundle


@dataclass
class Decompositions:
    dom: PolygonalDomain
    S: CorridorStructure
    D: Decomposition
    DM: Decomposition
    D_aug: Decomposition
    Df: list[Cell]
    _dma: dict[int, Decomposition] = field(default_factory=dict)

    def DM_A(self, A: Pocket) -> Decomposition:
        got = self._dma.get(A.id)
        if got is None:
            got = build_DM_A(self.S, self.DM, A)
            self._dma[A.id] = got
        return got


_cache: dict[int, Decompositions] = {}


def decompositions(dom: PolygonalDomain) -> Decompositions:
    got = _cache.get(id(dom))
    if got is None or got.dom is not dom:
        S = structure(dom)
        D = build_D(dom, S)
        DM = build_DM(S)
        Da = augment_D(dom, D, DM, S)
        got = Decompositions(dom, S, D, DM, Da, build_Df(dom, Da, DM))
        _cache[id(dom)] = got
    return got


def pockets_of(S: CorridorStructure, cell: Cell) -> list[Pocket]:
    """Bays and canals that overlap the cell in positive area."""
    out = []
    for pk, ts in _pocket_triangles(S):
        bx0, by0, bx1, by1 = pk.bbox
        x0, y0, x1, y1 = cell.bbox
        if bx1 <= x0 or bx0 >= x1 or by1 <= y0 or by0 >= y1:
            continue
        if _overlap_area(cell.pieces, ts) > 0:
            out.append(pk)
    return out
