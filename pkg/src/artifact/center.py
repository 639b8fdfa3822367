"""Geodesic center by minimizing the farthest distance over each home cell.

For a home cell sigma and a cell sigma' the farthest distance
R_sigma'(q) = max over p in sigma' of d(p, q) comes from the cell-pair
function. Split sigma' so that every |b p| is linear and sigma so that every
|q a| is linear; then each piece of a term part gives a concave piecewise
linear function of q (a maximin LP in p), and each piece of a direct part
gives the convex function max over its corners of |q - c|.

The minimum of R = max over all pieces is found by best-first branch and
bound over convex regions of the home cells. A region is a leaf when every
concave piece is linear on it, which is certified exactly: the LP dual at one
vertex gives a linear majorant, and a concave function that meets its linear
majorant at every vertex of a polygon equals it there. Otherwise the region is
cut along the line where two such majorants cross. Leaves are solved by one
exact minimax LP.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .decomposition import Cell
from .diameter import (
    CellPairDistFn,
    PairContext,
    Term,
    _centroid,
    _far,
    _signs,
    cellpair_fn,
    half_planes,
    split_piece,
)
from .errors import InternalInvariantViolation, OutOfDomain
from .geometry import Point, PolygonalDomain, clip_convex, dec, fmt, l1_dist, ring_area
from .lp import maximize_min, minimize_max, solve_lp

ZERO = mpq(0)
ONE = mpq(1)


# ------------------------------------------------------------ components


def _box_dist(p: Point, box) -> object:
    """L1 distance from p to an axis box (x0, y0, x1, y1)."""
    x0, y0, x1, y1 = box
    dx = x0 - p.x if p.x < x0 else (p.x - x1 if p.x > x1 else ZERO)
    dy = y0 - p.y if p.y < y0 else (p.y - y1 if p.y > y1 else ZERO)
    return dx + dy


def _bbox(poly: Sequence[Point]):
    xs = [p.x for p in poly]
    ys = [p.y for p in poly]
    return (min(xs), min(ys), max(xs), max(ys))


@dataclass
class Linear:
    """q -> ax * x + ay * y + c."""

    ax: object
    ay: object
    c: object

    def __call__(self, q: Point):
        return self.ax * q.x + self.ay * q.y + self.c


class Component:
    """One convex piece of sigma' with the part's terms, or a direct piece.

    ``terms`` are oriented with the home cell on the a side: the value at
    (q, p) is |q a| + c + |b p|. On the piece every |b p| is linear.
    """

    def __init__(self, cell: Cell, piece: list[Point], terms: tuple[Term, ...] = ()):
        self.cell = cell
        self.piece = piece
        self.terms = terms
        self._at: dict[Point, tuple] = {}
        if terms:
            ct = _centroid(piece)
            self.p_lin = []
            for t in terms:
                tx, ty = _signs(ct, t.b)
                self.p_lin.append((tx, ty, -tx * t.b.x - ty * t.b.y))
            hp = half_planes(piece)
            self.A = [[a, b] for a, b, _ in hp]
            self.rhs = [c for _, _, c in hp]
            self.far_b = [_far(piece, t.b) for t in terms]

    @property
    def direct(self) -> bool:
        return not self.terms

    def solve(self, q: Point) -> tuple:
        """(value, duals, farthest p) at q."""
        got = self._at.get(q)
        if got is not None:
            return got
        if self.direct:
            p = max(self.piece, key=lambda c: (l1_dist(q, c), -c.x, -c.y))
            got = (l1_dist(q, p), None, p)
        else:
            lin = [([tx, ty], l1_dist(q, t.a) + t.c + e) for t, (tx, ty, e) in zip(self.terms, self.p_lin)]
            res = maximize_min(lin, self.A, self.rhs)
            if not res.ok:
                raise InternalInvariantViolation(f"farthest-point LP is {res.status}")
            got = (res.value, res.duals, Point(res.x[0], res.x[1]))
        self._at[q] = got
        return got

    def value(self, q: Point):
        return self.solve(q)[0]

    def majorant(self, q: Point, ref: Point) -> Linear:
        """The LP dual at q as a linear function that bounds the piece from above on
        the sign region of ``ref`` and touches it at q."""
        val, y, _ = self.solve(q)
        m = len(self.A)
        ax = ay = ZERO
        c = sum((yj * bj for yj, bj in zip(y[:m], self.rhs)), ZERO)
        for yi, t, (_, _, e) in zip(y[m:], self.terms, self.p_lin):
            if not yi:
                continue
            sx, sy = _signs(ref, t.a)
            ax += yi * sx
            ay += yi * sy
            c += yi * (t.c + e - sx * t.a.x - sy * t.a.y)
        U = Linear(ax, ay, c)
        if U(q) != val:
            raise InternalInvariantViolation("LP dual does not reproduce the optimum")
        return U

    def upper(self, verts: Sequence[Point]):
        """Bound on the piece over the convex hull of ``verts``."""
        if self.direct:
            return max(l1_dist(v, c) for v in verts for c in self.piece)
        return min(
            max(l1_dist(v, t.a) for v in verts) + t.c + fb for t, fb in zip(self.terms, self.far_b)
        )

    def lower_sign_region(self, verts: Sequence[Point]):
        """Bound from below over a region where every |q a| is linear."""
        if self.direct:
            box = _bbox(verts)
            return max(_box_dist(c, box) for c in self.piece)
        best = None
        for p0 in self.piece:
            tail = [t.c + l1_dist(t.b, p0) for t in self.terms]
            low = min(l1_dist(v, t.a) + k for v in verts for t, k in zip(self.terms, tail))
            if best is None or low > best:
                best = low
        return best

    def lower_box(self, verts: Sequence[Point]):
        """Bound from below over any region inside the bounding box of ``verts``."""
        box = _bbox(verts)
        if self.direct:
            return max(_box_dist(c, box) for c in self.piece)
        best = None
        for p0 in self.piece:
            low = min(_box_dist(t.a, box) + t.c + l1_dist(t.b, p0) for t in self.terms)
            if best is None or low > best:
                best = low
        return best

    def linear_pieces(self, poly: Sequence[Point]) -> list[Linear]:
        """Direct piece as a max of linear functions valid on ``poly``."""
        x0, y0, x1, y1 = _bbox(poly)
        out = []
        for c in self.piece:
            sxs = [1] if x0 >= c.x else [-1] if x1 <= c.x else [1, -1]
            sys_ = [1] if y0 >= c.y else [-1] if y1 <= c.y else [1, -1]
            for sx in sxs:
                for sy in sys_:
                    out.append(Linear(mpq(sx), mpq(sy), -sx * c.x - sy * c.y))
        return out


def components_of(f: CellPairDistFn) -> list[Component]:
    """Split the far side of a cell-pair function into components."""
    out = []
    for part in f.parts:
        if part.mode == "direct":
            out.extend(Component(f.tau, tp) for tp in part.t_pieces)
            continue
        anchors = list({t.b for t in part.terms})
        for tp in part.t_pieces:
            out.extend(Component(f.tau, sub, part.terms) for sub in split_piece(tp, anchors))
    return out


def _home_components(ctx: PairContext, sigma: Cell) -> list[Component]:
    comps = []
    for tau in ctx.cells:
        comps.extend(components_of(cellpair_fn(sigma, tau, ctx)))
    return comps


# ------------------------------------------------------------ eval_R


@dataclass
class FarPoint:
    value: object
    p: Point
    cell: Cell | None = None


def _eval_comps(comps: Sequence[Component], q: Point) -> FarPoint:
    order = sorted(comps, key=lambda k: k.lower_box([q]), reverse=True)
    best: FarPoint | None = None
    for k in order:
        if best is not None and k.upper([q]) <= best.value:
            continue
        val, _, p = k.solve(q)
        if best is None or val > best.value or (val == best.value and p < best.p):
            best = FarPoint(val, p, k.cell)
    return best


def home_cell(ctx: PairContext, q: Point) -> Cell:
    for c in ctx.q_cells:
        if c.contains(q):
            return c
    raise OutOfDomain(f"{q} is outside the domain")


def eval_R(dom: PolygonalDomain, q: Point, ctx: PairContext | None = None) -> FarPoint:
    """The farthest geodesic distance from q and a point attaining it."""
    if not dom.contains(q):
        raise OutOfDomain(f"{q} is outside the domain")
    ctx = ctx or PairContext(dom, "improved")
    sigma = home_cell(ctx, q)
    return _eval_comps(_home_components(ctx, sigma), q)


# ------------------------------------------------------------ projection


@dataclass
class LinearPatch:
    """A convex region of the home cell where R_sigma' is one linear function."""

    region: list[Point]
    f: Linear

    def __call__(self, q: Point):
        return self.f(q)


def _cut(poly: list[Point], U: Linear, V: Linear) -> tuple[list[Point], list[Point]]:
    """The two sides of the line U = V inside poly."""
    a, b, c = U.ax - V.ax, U.ay - V.ay, V.c - U.c
    return clip_convex(poly, a, b, c), clip_convex(poly, -a, -b, -c)


def _linear_or_cut(k: Component, poly: list[Point], ref: Point) -> tuple[Linear | None, tuple | None]:
    """(U, None) if k equals the linear U on poly, else (None, (U, V)) with two
    dual majorants whose crossing line cuts poly."""
    Us = [k.majorant(v, ref) for v in poly]
    vals = [k.value(v) for v in poly]
    for U in Us:
        if all(U(v) == val for v, val in zip(poly, vals)):
            return U, None
    for U, V in itertools.combinations(Us, 2):
        diff = [U(v) - V(v) for v in poly]
        if any(d > 0 for d in diff) and any(d < 0 for d in diff):
            return None, (U, V)
    raise InternalInvariantViolation("nonlinear piece without a separating majorant pair")


def _leaf_functions(comps: Sequence[Component], poly: list[Point]) -> list[Linear] | tuple:
    """Linear functions whose maximum is R on poly, or a cut pair if some piece is not linear."""
    ref = _centroid(poly)
    fs: list[Linear] = []
    for k in comps:
        if k.direct:
            fs.extend(k.linear_pieces(poly))
            continue
        U, cut = _linear_or_cut(k, poly, ref)
        if cut is not None:
            return cut
        fs.append(U)
    return fs


def _linearize(comps: Sequence[Component], poly: list[Point]) -> list[tuple[list[Point], list[Linear]]]:
    """Cut a sign region until every term component is linear; return (region, functions)."""
    out = []
    stack = [poly]
    while stack:
        pc = stack.pop()
        fs = _leaf_functions(comps, pc)
        if isinstance(fs, tuple):
            for side in _cut(pc, *fs):
                if len(side) >= 3 and ring_area(side) > 0:
                    stack.append(side)
            continue
        out.append((pc, fs))
    return out


def _upper_regions(poly: list[Point], fs: Sequence[Linear]) -> list[LinearPatch]:
    """Where each linear function is the maximum."""
    out = []
    seen = set()
    for i, U in enumerate(fs):
        key = (U.ax, U.ay, U.c)
        if key in seen:
            continue
        seen.add(key)
        region = list(poly)
        for j, V in enumerate(fs):
            if i == j or (V.ax, V.ay, V.c) == key:
                continue
            region = clip_convex(region, V.ax - U.ax, V.ay - U.ay, U.c - V.c)
            if len(region) < 3:
                break
        if len(region) >= 3 and ring_area(region) > 0:
            out.append(LinearPatch(region, U))
    return out


def _q_anchors(comps: Sequence[Component], with_direct: bool) -> list[Point]:
    pts = {t.a for k in comps for t in k.terms}
    if with_direct:
        pts |= {c for k in comps if k.direct for c in k.piece}
    return list(pts)


def project_R(f: CellPairDistFn) -> list[LinearPatch]:
    """R_sigma' over the home cell f.sigma as linear patches tiling it."""
    comps = components_of(f)
    anchors = _q_anchors(comps, with_direct=True)
    patches = []
    for piece in f.sigma.pieces:
        for region in split_piece(piece, anchors):
            for pc, fs in _linearize(comps, region):
                patches.extend(_upper_regions(pc, fs))
    return patches


# ------------------------------------------------------------ center


@dataclass
class CenterResult:
    q: Point
    radius: object
    witness: Point
    cell: tuple[str, int]
    algorithm: str
    unique: bool
    regions: int = 0
    leaves: int = 0

    def to_json(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "center": [fmt(self.q.x), fmt(self.q.y)],
            "center_decimal": [dec(self.q.x), dec(self.q.y)],
            "radius": fmt(self.radius),
            "decimal": dec(self.radius),
            "witness": [fmt(self.witness.x), fmt(self.witness.y)],
            "cell": list(self.cell),
            "unique": self.unique,
            "regions": self.regions,
            "leaves": self.leaves,
        }


@dataclass(order=True)
class _Entry:
    lb: object
    seq: int
    cell: Cell = field(compare=False)
    poly: list[Point] = field(compare=False)
    comps: list[Component] | None = field(compare=False, default=None)
    split: bool = field(compare=False, default=False)


def _hp_rows(poly: Sequence[Point]):
    hp = half_planes(poly)
    return [[a, b] for a, b, _ in hp], [c for _, _, c in hp]


def _optimal_face(poly: list[Point], fs: Sequence[Linear], value) -> tuple[Point, bool]:
    """Lexicographically smallest point of {q in poly : max f(q) <= value}, and
    whether that set is a single point."""
    A, b = _hp_rows(poly)
    A = A + [[U.ax, U.ay] for U in fs]
    b = b + [value - U.c for U in fs]

    def opt(c, extra_A=(), extra_b=()):
        res = solve_lp(c, A + list(extra_A), b + list(extra_b))
        if not res.ok:
            raise InternalInvariantViolation(f"optimal-face LP is {res.status}")
        return res.value

    x_lo = opt([ONE, ZERO])
    x_hi = -opt([-ONE, ZERO])
    fix = ([[ONE, ZERO], [-ONE, ZERO]], [x_lo, -x_lo])
    y_lo = opt([ZERO, ONE], *fix)
    y_hi = -opt([ZERO, -ONE], *fix)
    return Point(x_lo, y_lo), (x_lo == x_hi and y_lo == y_hi)


class _Search:
    def __init__(self, ctx: PairContext):
        self.ctx = ctx
        self.best = None
        self.best_q: Point | None = None
        self.faces: list[tuple[Point, bool, Cell]] = []
        self.heap: list[_Entry] = []
        self.seq = itertools.count()
        self.regions = 0
        self.leaves = 0
        self._comps: dict[int, list[Component]] = {}
        self._anchor_pts = list(ctx.dom.vertices)

    # -- bounds on whole pieces, before any pair function is built

    def _piece_floor(self, piece: list[Point]):
        best = ZERO
        for v in piece:
            far = max(l1_dist(v, w) for w in piece)
            reach = max(self.ctx.P(v, a) for a in self._anchor_pts)
            best = max(best, reach - far)
        return best

    def push(self, lb, cell, poly, comps=None, split=False):
        heapq.heappush(self.heap, _Entry(lb, next(self.seq), cell, poly, comps, split))

    def offer(self, value, q: Point, exact_face=None, cell=None):
        if self.best is None or value < self.best:
            self.best = value
            self.faces = []
        if value == self.best and exact_face is not None:
            self.faces.append((*exact_face, cell))

    # -- one region

    def comps_of(self, cell: Cell) -> list[Component]:
        got = self._comps.get(cell.id)
        if got is None:
            got = _home_components(self.ctx, cell)
            self._comps[cell.id] = got
        return got

    def open_piece(self, e: _Entry):
        comps = self.comps_of(e.cell)
        lb = max(k.lower_box(e.poly) for k in comps)
        comps = [k for k in comps if k.upper(e.poly) >= lb]
        for region in split_piece(e.poly, _q_anchors(comps, with_direct=False)):
            if len(region) < 3 or ring_area(region) == 0:
                continue
            rl = max(k.lower_sign_region(region) for k in comps)
            live = [k for k in comps if k.upper(region) >= rl]
            self.push(max(rl, e.lb), e.cell, region, live, True)

    def work(self, e: _Entry):
        self.regions += 1
        poly, comps = e.poly, e.comps
        vals = {v: [k.value(v) for k in comps] for v in poly}
        for v in poly:
            self.offer(max(vals[v]), v)
        lb = e.lb
        for i, k in enumerate(comps):
            if k.direct:
                low = k.lower_sign_region(poly)
            else:
                low = min(vals[v][i] for v in poly)
            if low > lb:
                lb = low
        if lb > self.best:
            return
        comps = [k for k in comps if k.upper(poly) >= lb]
        fs = _leaf_functions(comps, poly)
        if isinstance(fs, tuple):
            for side in _cut(poly, *fs):
                if len(side) >= 3 and ring_area(side) > 0:
                    self.push(lb, e.cell, side, comps, True)
            return
        self.leaves += 1
        A, b = _hp_rows(poly)
        res = minimize_max([([U.ax, U.ay], U.c) for U in fs], A, b)
        if not res.ok:
            raise InternalInvariantViolation(f"leaf LP is {res.status}")
        if res.value <= self.best:
            face = _optimal_face(poly, fs, res.value)
            self.offer(res.value, face[0], face, e.cell)

    def run(self) -> None:
        for cell in self.ctx.q_cells:
            for piece in cell.pieces:
                self.push(self._piece_floor(piece), cell, piece)
        while self.heap:
            e = heapq.heappop(self.heap)
            if self.best is not None and e.lb > self.best:
                break
            if e.split:
                self.work(e)
            else:
                self.open_piece(e)


def _center(ctx: PairContext, algorithm: str) -> CenterResult:
    s = _Search(ctx)
    s.run()
    if not s.faces:
        raise InternalInvariantViolation("no leaf reached the optimum")
    q, _, cell = min(s.faces, key=lambda f: f[0])
    unique = all(one and p == q for p, one, _ in s.faces)
    far = _eval_comps(s.comps_of(cell), q)
    if far.value != s.best:
        raise InternalInvariantViolation(f"center radius {s.best} but R(q*) = {far.value}")
    check = ctx.P.g.dist(q, far.p)
    if check != s.best:
        raise InternalInvariantViolation(f"center radius {s.best} but the witness is {check} away")
    return CenterResult(q, s.best, far.p, (cell.flavor, cell.id), algorithm, unique, s.regions, s.leaves)


def sigma_center(ctx: PairContext, sigma: Cell) -> tuple[Point, object]:
    """The minimum of R over one home cell, with its lexicographically smallest point."""
    s = _Search(ctx)
    for piece in sigma.pieces:
        s.push(ZERO, sigma, piece)
    while s.heap:
        e = heapq.heappop(s.heap)
        if s.best is not None and e.lb > s.best:
            break
        if e.split:
            s.work(e)
        else:
            s.open_piece(e)
    q = min(f[0] for f in s.faces)
    return q, s.best


def center_preliminary(dom: PolygonalDomain, ctx: PairContext | None = None) -> CenterResult:
    """Minimum of R over the cells of D, with farthest points over all cells of D."""
    return _center(ctx or PairContext(dom, "preliminary"), "preliminary")


def center_improved(dom: PolygonalDomain, ctx: PairContext | None = None) -> CenterResult:
    """Minimum of R over the augmented D, with farthest points over the combined cell set."""
    return _center(ctx or PairContext(dom, "improved"), "improved")
