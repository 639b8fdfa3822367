"""Geodesic diameter through restricted distance functions on cell pairs.

On a pair of cells the geodesic distance is either the plain L1 distance
(aligned cells) or the lower envelope of a few functions
``|s a| + d(a, b) + |b t|`` anchored at cell corners, at the dominant corner
of a bay or canal, or at axis-extreme points of its funnel. Maximizing that
envelope over the pair is a small exact LP once every ``|.|`` is split into
its linear pieces; the diameter is the largest value over all pairs.

Two routes compute it. The preliminary one pairs up every cell of D. The
improved one pairs up only the combined set D_f and uses the coast-to-ocean
case table with the core and rectified domains for anchor distances.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from .corridor import Pocket, RectifiedDomain, build_rectified
from .decomposition import Cell, Decompositions, aligned_cells, clip_to, decompositions, g_aligned, pockets_of
from .distance_engine import LazyDistTable, VisGraph, build_visgraph, find_v_g, funnel_and_extremes
from .errors import InternalInvariantViolation, MissingContext, OutOfDomain
from .geometry import (
    Point,
    PolygonalDomain,
    clip_convex,
    convex_hull,
    convex_polygon_contains,
    convex_region_free,
    l1_dist,
    ring_area,
)
from .lp import maximize_min

ZERO = mpq(0)


# ------------------------------------------------------------ pair functions


@dataclass(frozen=True)
class Term:
    """s, t -> |s a| + c + |b t| with c = d(a, b)."""

    a: Point
    c: object
    b: Point

    def __call__(self, s: Point, t: Point):
        return l1_dist(s, self.a) + self.c + l1_dist(self.b, t)

    def flipped(self) -> Term:
        return Term(self.b, self.c, self.a)


@dataclass
class Part:
    """The distance on (union of s_pieces) x (union of t_pieces), all convex."""

    s_pieces: list[list[Point]]
    t_pieces: list[list[Point]]
    mode: str  # "direct" (|st|) or "terms" (minimum of the terms)
    terms: tuple[Term, ...] = ()
    kind: str = "aligned"  # aligned | vertex | gate | mixed

    def value(self, s: Point, t: Point):
        if self.mode == "direct":
            return l1_dist(s, t)
        return min(term(s, t) for term in self.terms)

    def covers(self, s: Point, t: Point) -> bool:
        return any(convex_polygon_contains(p, s) for p in self.s_pieces) and any(
            convex_polygon_contains(p, t) for p in self.t_pieces
        )

    def flipped(self) -> Part:
        return Part(self.t_pieces, self.s_pieces, self.mode, tuple(t.flipped() for t in self.terms), self.kind)


@dataclass
class CellPairDistFn:
    sigma: Cell
    tau: Cell
    parts: list[Part]

    @property
    def mode(self) -> str:
        kinds = {p.kind for p in self.parts}
        if kinds == {"aligned"}:
            return "aligned-direct"
        if kinds == {"vertex"}:
            return "vertex-terms"
        if kinds == {"gate"}:
            return "gate-terms"
        return "mixed"

    @property
    def terms(self) -> list[Term]:
        return [t for p in self.parts for t in p.terms]

    def __call__(self, s: Point, t: Point):
        for p in self.parts:
            if p.covers(s, t):
                return p.value(s, t)
        raise OutOfDomain(f"({s}, {t}) is outside cells {self.sigma.id} x {self.tau.id}")

    def flipped(self) -> CellPairDistFn:
        return CellPairDistFn(self.tau, self.sigma, [p.flipped() for p in self.parts])


@dataclass
class CoastInfo:
    """What a coastal cell needs against the ocean: its bay or canal and the gate data."""

    pocket: Pocket
    gates: list[tuple[Point, Point]]
    s_aligned: list[bool]
    v_g: list[Point | None]
    W: list[list[Point]]
    gate_terms: list[tuple[Term, ...]]


class PairContext:
    """Anchor distances, decompositions and pocket data for one domain and one route.

    The preliminary route measures every anchor distance in P. The improved
    route measures pairs of ocean points in the core domain, pairs of
    interior coastal corners in the rectified domain, and the rest in P.
    """

    def __init__(self, dom: PolygonalDomain, route: str = "improved"):
        if route not in ("preliminary", "improved"):
            raise ValueError(f"unknown route {route!r}")
        self.dom = dom
        self.route = route
        self.X: Decompositions = decompositions(dom)
        self.P = LazyDistTable(build_visgraph(dom))
        self._coast: dict[int, CoastInfo | None] = {}

    # -- cell families

    @property
    def cells(self) -> list[Cell]:
        """Cells whose pairs cover every farthest pair."""
        return list(self.X.D.cells) if self.route == "preliminary" else list(self.X.Df)

    @property
    def q_cells(self) -> list[Cell]:
        """Cells covering P, as the home of a center candidate."""
        return list(self.X.D.cells) if self.route == "preliminary" else list(self.X.D_aug.cells)

    # -- distances

    @functools.cached_property
    def core(self) -> LazyDistTable:
        return LazyDistTable(VisGraph(self.X.S.core_universe()))

    @functools.cached_property
    def rectified(self) -> RectifiedDomain:
        return build_rectified(self.dom, [c for c in self.X.Df if c.kind == "coastal"])

    @functools.cached_property
    def rect(self) -> LazyDistTable:
        return LazyDistTable(VisGraph(self.rectified.universe()))

    @functools.cached_property
    def _apexes(self) -> frozenset:
        return frozenset(self.rectified.apexes)

    def dist(self, a: Point, b: Point):
        if a == b:
            return ZERO
        if self.route == "preliminary":
            return self.P(a, b)
        M = self.X.S.ocean
        if M.contains(a) and M.contains(b):
            return self.core(a, b)
        if a in self._apexes and b in self._apexes:
            return self.rect(a, b)
        return self.P(a, b)

    # -- pocket data

    def coast_info(self, cell: Cell) -> CoastInfo | None:
        """Gate data for a coastal cell meeting exactly one bay or canal, else None."""
        if cell.id in self._coast:
            return self._coast[cell.id]
        pks = pockets_of(self.X.S, cell)
        info = None
        if len(pks) == 1 and len(pks[0].gates) == (1 if pks[0].kind == "bay" else 2):
            A = pks[0]
            adom = A.domain()
            gates = [tuple(g) for g in A.gates]
            sal = [g_aligned(self.dom, cell, g) for g in gates]
            vgs: list[Point | None] = []
            Ws: list[list[Point]] = []
            gts: list[tuple[Term, ...]] = []
            for g, al in zip(gates, sal):
                if al:
                    vgs.append(None)
                    Ws.append([])
                    gts.append(())
                    continue
                v = find_v_g(cell.corners, g, adom)
                _, W = funnel_and_extremes(adom, v, g)
                vgs.append(v)
                Ws.append(W)
                gts.append(tuple(Term(v, self.dist(v, w), w) for w in W))
            info = CoastInfo(A, gates, sal, vgs, Ws, gts)
        self._coast[cell.id] = info
        return info

    def vertex_terms(self, a: Cell, b: Cell) -> tuple[Term, ...]:
        return tuple(Term(v, self.dist(v, w), w) for v in a.corners for w in b.corners)


def _same_family(a: Cell, b: Cell) -> bool:
    return a.flavor == b.flavor or "DM" not in (a.flavor, b.flavor)


def cellpair_fn(sigma: Cell, tau: Cell, ctx: PairContext) -> CellPairDistFn:
    """The geodesic distance on sigma x tau as aligned-direct or a lower envelope of terms."""
    if _same_family(sigma, tau) or "coastal" not in (sigma.kind, tau.kind):
        if aligned_cells(sigma, tau, ctx.X.DM):
            part = Part(sigma.pieces, tau.pieces, "direct")
        else:
            part = Part(sigma.pieces, tau.pieces, "terms", ctx.vertex_terms(sigma, tau), "vertex")
        return CellPairDistFn(sigma, tau, [part])
    if sigma.flavor == "DM":
        return cellpair_fn(tau, sigma, ctx).flipped()
    return CellPairDistFn(sigma, tau, _coast_to_ocean(sigma, tau, ctx))


def _coast_to_ocean(sigma: Cell, tau: Cell, ctx: PairContext) -> list[Part]:
    """Coastal cell of the augmented D against a cell of D_M, split along D_M^A."""
    info = ctx.coast_info(sigma)
    if info is None:
        return _coast_fallback(sigma, tau, ctx)
    dma = ctx.X.DM_A(info.pocket)
    parts = []
    for rho in dma.cells:
        if rho.parent != tau.id:
            continue
        al = [g_aligned(ctx.dom, rho, g) for g in info.gates]
        parts.extend(_gate_case(sigma, rho, info, al, ctx))
    if not parts:
        raise InternalInvariantViolation(f"no D_M^A cell refines D_M cell {tau.id}")
    return parts


def _gate_case(sigma: Cell, rho: Cell, info: CoastInfo, al: list[bool], ctx: PairContext) -> list[Part]:
    """One D_M^A cell against the coastal cell, by the gate alignment table.

    The two shortcuts of the table are certified before use. An aligned-direct
    entry must also be aligned-direct under the two-cell rule of the augmented
    D on every piece, and a funnel term needs the point w to see the whole
    cell, so that its last leg |w t| is a real path. Near sloped gates an
    obstacle vertex between the gate and the cell can break either one; the
    cell then falls back to the two-cell rule, which is exact.
    """
    sal = info.s_aligned

    def direct() -> list[Part]:
        fb = _coast_fallback(sigma, rho, ctx)
        if all(p.mode == "direct" for p in fb):
            return [Part(sigma.pieces, rho.pieces, "direct")]
        return fb

    def terms(*gates: int, vertex: bool = False) -> list[Part]:
        ts: list[Term] = []
        for i in gates:
            if info.v_g[i] is None:
                raise MissingContext(f"gate {i} terms needed but the cell is aligned with it")
            for term in info.gate_terms[i]:
                if not _sees_cell(ctx.dom, term.b, rho):
                    return _coast_fallback(sigma, rho, ctx)
                ts.append(term)
        if vertex:
            ts.extend(ctx.vertex_terms(sigma, rho))
        kind = "mixed" if gates and vertex else ("gate" if gates else "vertex")
        return [Part(sigma.pieces, rho.pieces, "terms", tuple(ts), kind)]

    if len(info.gates) == 1:
        if sal[0]:
            return direct() if al[0] else terms(vertex=True)
        return terms(0) if al[0] else terms(vertex=True)
    if sal[0] and sal[1]:
        return direct() if (al[0] or al[1]) else terms(vertex=True)
    if not sal[0] and not sal[1]:
        if al[0] and al[1]:
            return terms(0, 1)
        if al[0]:
            return terms(0, vertex=True)
        if al[1]:
            return terms(1, vertex=True)
        return terms(vertex=True)
    k = 0 if sal[0] else 1
    j = 1 - k
    if al[k]:
        return direct()
    if al[j]:
        return terms(j, vertex=True)
    return terms(vertex=True)


def _sees_cell(dom: PolygonalDomain, w: Point, cell: Cell) -> bool:
    return all(convex_region_free(dom, convex_hull([w, *piece])) for piece in cell.pieces)


def _coast_fallback(sigma: Cell, tau: Cell, ctx: PairContext) -> list[Part]:
    """Split the ocean cell along the augmented D and route through cell corners as in D."""
    parts = []
    x0, y0, x1, y1 = tau.bbox
    for rho in ctx.X.D_aug.cells:
        u0, v0, u1, v1 = rho.bbox
        if u1 <= x0 or u0 >= x1 or v1 <= y0 or v0 >= y1:
            continue
        pieces = [c for tp in tau.pieces for rp in rho.pieces if (c := clip_to(tp, rp)) and ring_area(c) > 0]
        if not pieces:
            continue
        if aligned_cells(sigma, rho):
            parts.append(Part(sigma.pieces, pieces, "direct"))
        else:
            parts.append(Part(sigma.pieces, pieces, "terms", ctx.vertex_terms(sigma, rho), "vertex"))
    return parts


# ------------------------------------------------------------ maximization


def split_piece(piece: Sequence[Point], anchors: Sequence[Point]) -> list[list[Point]]:
    """Cut a convex polygon by the axis lines through the anchors."""
    xs0 = min(p.x for p in piece)
    xs1 = max(p.x for p in piece)
    ys0 = min(p.y for p in piece)
    ys1 = max(p.y for p in piece)
    xs = sorted({a.x for a in anchors if xs0 < a.x < xs1})
    ys = sorted({a.y for a in anchors if ys0 < a.y < ys1})
    out = [list(piece)]
    for axis, cuts in ((0, xs), (1, ys)):
        nxt = []
        for pc in out:
            rest = pc
            for k in cuts:
                a, b = (1, 0) if axis == 0 else (0, 1)
                lo = clip_convex(rest, a, b, k)
                rest = clip_convex(rest, -a, -b, -k)
                if len(lo) >= 3:
                    nxt.append(lo)
                if len(rest) < 3:
                    break
            if len(rest) >= 3:
                nxt.append(rest)
        out = nxt
    return out


def _centroid(piece: Sequence[Point]) -> Point:
    n = len(piece)
    return Point(sum((p.x for p in piece), ZERO) / n, sum((p.y for p in piece), ZERO) / n)


def _signs(c: Point, a: Point) -> tuple[int, int]:
    return (1 if c.x >= a.x else -1, 1 if c.y >= a.y else -1)


def half_planes(piece: Sequence[Point]) -> list[tuple[object, object, object]]:
    n = len(piece)
    out = []
    for i in range(n):
        a, b = piece[i], piece[(i + 1) % n]
        A = b.y - a.y
        B = a.x - b.x
        out.append((A, B, A * a.x + B * a.y))
    return out


def _far(piece: Sequence[Point], a: Point):
    return max(l1_dist(p, a) for p in piece)


@dataclass
class PairMax:
    value: object
    s: Point
    t: Point


def _better(cand: PairMax, best: PairMax | None) -> bool:
    if best is None or cand.value > best.value:
        return True
    if cand.value < best.value:
        return False
    return _witness_key(cand) < _witness_key(best)


def _witness_key(m: PairMax):
    return min((m.s, m.t), (m.t, m.s))


def part_upper_bound(part: Part):
    """A cheap bound on the part's maximum: no term exceeds its own corner-wise maximum."""
    if part.mode == "direct":
        return max(l1_dist(p, q) for sp in part.s_pieces for p in sp for tp in part.t_pieces for q in tp)
    smax = {}
    tmax = {}
    for term in part.terms:
        if term.a not in smax:
            smax[term.a] = max(_far(sp, term.a) for sp in part.s_pieces)
        if term.b not in tmax:
            tmax[term.b] = max(_far(tp, term.b) for tp in part.t_pieces)
    return min(smax[t.a] + t.c + tmax[t.b] for t in part.terms)


def maximize_part(part: Part, floor=None) -> PairMax | None:
    """Exact maximum of the part over its domain; None if it cannot reach ``floor``."""
    if floor is not None and part_upper_bound(part) < floor:
        return None
    best: PairMax | None = None
    if part.mode == "direct":
        for sp in part.s_pieces:
            for tp in part.t_pieces:
                for p in sp:
                    for q in tp:
                        cand = PairMax(l1_dist(p, q), p, q)
                        if _better(cand, best):
                            best = cand
        return best
    s_anchor = list({t.a for t in part.terms})
    t_anchor = list({t.b for t in part.terms})
    s_sub = [q for sp in part.s_pieces for q in split_piece(sp, s_anchor)]
    t_sub = [q for tp in part.t_pieces for q in split_piece(tp, t_anchor)]
    for sp in s_sub:
        cs = _centroid(sp)
        s_hp = half_planes(sp)
        for tp in t_sub:
            lim = best.value if best is not None else floor
            if lim is not None:
                ub = min(_far(sp, t.a) + t.c + _far(tp, t.b) for t in part.terms)
                if ub < lim:
                    continue
            ct = _centroid(tp)
            lin = []
            for t in part.terms:
                sx, sy = _signs(cs, t.a)
                tx, ty = _signs(ct, t.b)
                h = t.c - sx * t.a.x - sy * t.a.y - tx * t.b.x - ty * t.b.y
                lin.append(([sx, sy, tx, ty], h))
            A = [[a, b, 0, 0] for a, b, _ in s_hp] + [[0, 0, a, b] for a, b, _ in half_planes(tp)]
            rhs = [c for _, _, c in s_hp] + [c for _, _, c in half_planes(tp)]
            res = maximize_min(lin, A, rhs)
            if not res.ok:
                raise InternalInvariantViolation(f"cell-pair LP is {res.status}")
            cand = PairMax(res.value, Point(res.x[0], res.x[1]), Point(res.x[2], res.x[3]))
            if _better(cand, best):
                best = cand
    return best


def constrained_diameter(f: CellPairDistFn, floor=None) -> PairMax | None:
    """Maximum of d over sigma x tau, or None when it provably stays below ``floor``."""
    best: PairMax | None = None
    for part in f.parts:
        lim = floor if best is None else max(best.value, floor) if floor is not None else best.value
        got = maximize_part(part, lim)
        if got is not None and _better(got, best):
            best = got
    if best is not None and floor is not None and best.value < floor:
        return None
    return best


# ------------------------------------------------------------ diameter


@dataclass
class DiameterResult:
    value: object
    s: Point
    t: Point
    cells: tuple[tuple[str, int], tuple[str, int]]
    algorithm: str
    pairs: int = 0
    solved: int = 0

    def to_json(self) -> dict:
        from .geometry import dec, fmt

        return {
            "algorithm": self.algorithm,
            "value": fmt(self.value),
            "decimal": dec(self.value),
            "witness": [[fmt(self.s.x), fmt(self.s.y)], [fmt(self.t.x), fmt(self.t.y)]],
            "cells": [list(c) for c in self.cells],
            "pairs": self.pairs,
            "pairs_solved": self.solved,
        }


def _corner_floor(ctx: PairContext, cells: Sequence[Cell]) -> PairMax:
    pts = sorted({v for c in cells for v in c.corners})
    best = None
    for i, a in enumerate(pts):
        for b in pts[i:]:
            cand = PairMax(ctx.dist(a, b), a, b)
            if _better(cand, best):
                best = cand
    return best


def _diameter(ctx: PairContext, algorithm: str) -> DiameterResult:
    cells = ctx.cells
    best = _corner_floor(ctx, cells)
    where = None
    pairs = solved = 0
    for i, a in enumerate(cells):
        for b in cells[i:]:
            pairs += 1
            f = cellpair_fn(a, b, ctx)
            got = constrained_diameter(f, best.value)
            if got is None:
                continue
            solved += 1
            if _better(got, best):
                best = got
                where = (a, b)
    s, t = _witness_key(best)
    check = ctx.P.g.dist(s, t)
    if check != best.value:
        raise InternalInvariantViolation(f"diameter {best.value} but the witness pair is {check} apart")
    if where is None:
        where = (ctx.X.D.locate(s), ctx.X.D.locate(t)) if algorithm == "preliminary" else (_home(ctx, s), _home(ctx, t))
    cells_id = ((where[0].flavor, where[0].id), (where[1].flavor, where[1].id))
    return DiameterResult(best.value, s, t, cells_id, algorithm, pairs, solved)


def _home(ctx: PairContext, p: Point) -> Cell:
    for c in ctx.cells:
        if c.contains(p):
            return c
    return ctx.X.D_aug.locate(p)


def diameter_preliminary(dom: PolygonalDomain, ctx: PairContext | None = None) -> DiameterResult:
    """Maximum of the constrained diameters over all pairs of cells of D."""
    return _diameter(ctx or PairContext(dom, "preliminary"), "preliminary")


def diameter_improved(dom: PolygonalDomain, ctx: PairContext | None = None) -> DiameterResult:
    """The same maximum over pairs of the combined cell set, with the coast-to-ocean case table."""
    return _diameter(ctx or PairContext(dom, "improved"), "improved")
