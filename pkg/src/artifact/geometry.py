"""Exact rational plane geometry: points, segments, rings and polygonal domains.

Every coordinate is a ``gmpy2.mpq``. No floating point value ever enters a
predicate; decimal strings from JSON are converted exactly.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Sequence

from gmpy2 import mpq

from .errors import GeneralPositionWarning, ParseError, PerturbationFailed, StructuralError

Coord = type(mpq(0))
ZERO = mpq(0)
HALF = mpq(1, 2)


def Q(v) -> Coord:
    """Convert ints, decimal strings, fraction strings, Fractions or floats exactly."""
    if isinstance(v, Coord):
        return v
    if isinstance(v, bool):
        raise ParseError(f"not a number: {v!r}")
    if isinstance(v, int):
        return mpq(v)
    if isinstance(v, Fraction):
        return mpq(v.numerator, v.denominator)
    if isinstance(v, float):
        f = Fraction(v)
        return mpq(f.numerator, f.denominator)
    if isinstance(v, str):
        s = v.strip()
        try:
            if "/" in s:
                num, den = s.split("/")
                return mpq(int(num), int(den))
            f = Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a number: {v!r}") from exc
        return mpq(f.numerator, f.denominator)
    try:
        return mpq(v)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"not a number: {v!r}") from exc


class Point(NamedTuple):
    x: Coord
    y: Coord

    def __repr__(self) -> str:
        return f"({fmt(self.x)}, {fmt(self.y)})"


def P(x, y) -> Point:
    return Point(Q(x), Q(y))


def fmt(c: Coord) -> str:
    """Exact textual form of a coordinate: ``3`` or ``7/2``."""
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def dec(c: Coord, digits: int = 12) -> str:
    """Decimal rendering rounded half away from zero to ``digits`` places."""
    neg = c < 0
    a = -c if neg else c
    scaled = a * 10**digits
    q, r = divmod(scaled.numerator, scaled.denominator)
    if 2 * r >= scaled.denominator:
        q += 1
    s = str(q).rjust(digits + 1, "0")
    out = s[:-digits] + "." + s[-digits:] if digits else s
    out = out.rstrip("0").rstrip(".")
    if neg and out != "0":
        out = "-" + out
    return out


class Segment(NamedTuple):
    a: Point
    b: Point


# ---------------------------------------------------------------- L1 metric


def l1_dist(p: Point, q: Point) -> Coord:
    return abs(p.x - q.x) + abs(p.y - q.y)


def path_l1_length(path: Sequence[Point]) -> Coord:
    total = ZERO
    for u, v in zip(path, path[1:]):
        total += l1_dist(u, v)
    return total


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def is_monotone(path: Sequence[Point]) -> bool:
    """Staircase test: all x-steps share a sign and all y-steps share a sign."""
    sx = sy = 0
    for u, v in zip(path, path[1:]):
        dx, dy = _sign(v.x - u.x), _sign(v.y - u.y)
        if dx:
            if sx and dx != sx:
                return False
            sx = dx
        if dy:
            if sy and dy != sy:
                return False
            sy = dy
    return True


# ------------------------------------------------------------- predicates


def cross(o: Point, a: Point, b: Point) -> Coord:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def orient(o: Point, a: Point, b: Point) -> int:
    """+1 if o, a, b turn left, -1 if right, 0 if collinear."""
    return _sign(cross(o, a, b))


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """Closed segment membership."""
    if cross(a, b, p) != 0:
        return False
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def midpoint(a: Point, b: Point) -> Point:
    return Point((a.x + b.x) * HALF, (a.y + b.y) * HALF)


def lerp(a: Point, b: Point, t: Coord) -> Point:
    return Point(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)


def param_on(a: Point, b: Point, p: Point) -> Coord:
    """Parameter of p along a->b, assuming p lies on the line."""
    if a.x != b.x:
        return (p.x - a.x) / (b.x - a.x)
    return (p.y - a.y) / (b.y - a.y)


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Closed segments ab and cd share at least one point."""
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        (o1 == 0 and on_segment(c, a, b))
        or (o2 == 0 and on_segment(d, a, b))
        or (o3 == 0 and on_segment(a, c, d))
        or (o4 == 0 and on_segment(b, c, d))
    )


def proper_crossing(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Segments cross at a single point interior to both."""
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


def segment_intersection_points(a: Point, b: Point, c: Point, d: Point) -> list[Point]:
    """All points shared by closed segments ab and cd.

    Returns [] when disjoint, one point for a single contact and the two
    extreme points of the overlap when the segments are collinear.
    """
    d1 = cross(a, b, c)
    d2 = cross(a, b, d)
    if d1 == 0 and d2 == 0:
        pts = [p for p in (a, b) if on_segment(p, c, d)] + [p for p in (c, d) if on_segment(p, a, b)]
        if not pts:
            return []
        pts = sorted(set(pts), key=lambda p: param_on(a, b, p) if a != b else 0)
        return [pts[0]] if len(pts) == 1 else [pts[0], pts[-1]]
    if (d1 > 0 and d2 > 0) or (d1 < 0 and d2 < 0):
        return []
    d3 = cross(c, d, a)
    d4 = cross(c, d, b)
    if (d3 > 0 and d4 > 0) or (d3 < 0 and d4 < 0):
        return []
    t = d3 / (d3 - d4) if d3 != d4 else ZERO
    return [lerp(a, b, t)]


def line_intersection(a: Point, b: Point, c: Point, d: Point) -> Point | None:
    """Intersection point of the infinite lines ab and cd, None if parallel."""
    den = (b.x - a.x) * (d.y - c.y) - (b.y - a.y) * (d.x - c.x)
    if den == 0:
        return None
    t = ((c.x - a.x) * (d.y - c.y) - (c.y - a.y) * (d.x - c.x)) / den
    return lerp(a, b, t)


# ------------------------------------------------------------------ rings


def signed_area2(ring: Sequence[Point]) -> Coord:
    s = ZERO
    n = len(ring)
    for i in range(n):
        p, q = ring[i], ring[(i + 1) % n]
        s += p.x * q.y - q.x * p.y
    return s


def ring_area(ring: Sequence[Point]) -> Coord:
    return abs(signed_area2(ring)) * HALF


def ring_edges(ring: Sequence[Point]) -> list[Segment]:
    n = len(ring)
    return [Segment(ring[i], ring[(i + 1) % n]) for i in range(n)]


def point_in_ring(p: Point, ring: Sequence[Point]) -> int:
    """1 strictly inside, 0 on the boundary, -1 strictly outside."""
    inside = False
    n = len(ring)
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        if on_segment(p, a, b):
            return 0
        if (a.y > p.y) != (b.y > p.y):
            c = cross(a, b, p)
            if (c > 0) == (b.y > a.y):
                inside = not inside
    return 1 if inside else -1


def ring_is_simple(ring: Sequence[Point]) -> bool:
    n = len(ring)
    if n < 3 or len(set(ring)) != n:
        return False
    edges = ring_edges(ring)
    for i in range(n):
        a, b = edges[i]
        for j in range(i + 1, n):
            c, d = edges[j]
            pts = segment_intersection_points(a, b, c, d)
            if not pts:
                continue
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if not adjacent:
                return False
            shared = b if j == i + 1 else a
            if len(pts) > 1 or pts[0] != shared:
                return False
    return True


def drop_collinear(ring: Sequence[Point]) -> list[Point]:
    out = list(ring)
    changed = True
    while changed and len(out) > 3:
        changed = False
        for i in range(len(out)):
            p, v, q = out[i - 1], out[i], out[(i + 1) % len(out)]
            if v == p or cross(p, v, q) == 0:
                del out[i]
                changed = True
                break
    return out


def convex_polygon_contains(poly: Sequence[Point], p: Point) -> bool:
    """Closed containment for a counterclockwise convex polygon."""
    n = len(poly)
    for i in range(n):
        if cross(poly[i], poly[(i + 1) % n], p) < 0:
            return False
    return True


def convex_hull(points: Iterable[Point]) -> list[Point]:
    """Counterclockwise hull without collinear points (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def chain(seq):
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    return lower[:-1] + upper[:-1]


def convex_region_free(dom: PolygonalDomain, poly: Sequence[Point]) -> bool:
    """No boundary edge of the domain reaches the open interior of a CCW convex polygon."""
    n = len(poly)
    if n < 3:
        return True
    xs = [p.x for p in poly]
    ys = [p.y for p in poly]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    for e in dom.edges:
        a, b = e.a, e.b
        if max(a.x, b.x) <= x0 or min(a.x, b.x) >= x1 or max(a.y, b.y) <= y0 or min(a.y, b.y) >= y1:
            continue
        lo, hi = Q(0), Q(1)
        for i in range(n):
            fa = cross(poly[i], poly[(i + 1) % n], a)
            fb = cross(poly[i], poly[(i + 1) % n], b)
            if fa < 0 and fb < 0:
                lo, hi = Q(1), Q(0)
                break
            if fa < 0:
                lo = max(lo, fa / (fa - fb))
            elif fb < 0:
                hi = min(hi, fa / (fa - fb))
        if lo >= hi:
            continue
        m = lerp(a, b, (lo + hi) / 2)
        if all(cross(poly[i], poly[(i + 1) % n], m) > 0 for i in range(n)):
            return False
    return True


def clip_convex(poly: Sequence[Point], a: Coord, b: Coord, c: Coord) -> list[Point]:
    """Keep the part of a convex polygon where a*x + b*y <= c."""
    out: list[Point] = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp = a * p.x + b * p.y - c
        fq = a * q.x + b * q.y - c
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append(lerp(p, q, t))
    return clean_polygon(out)


def clean_polygon(poly: Sequence[Point]) -> list[Point]:
    """Drop repeated and collinear vertices from a convex polygon."""
    pts: list[Point] = []
    for p in poly:
        if not pts or pts[-1] != p:
            pts.append(p)
    while len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        for i in range(len(pts)):
            if cross(pts[i - 1], pts[i], pts[(i + 1) % len(pts)]) == 0:
                del pts[i]
                changed = True
                break
    return pts


def polygon_interior_point(ring: Sequence[Point]) -> Point:
    """A point strictly inside a simple polygon (any orientation)."""
    pts = list(ring)
    if signed_area2(pts) < 0:
        pts.reverse()
    n = len(pts)
    for i in range(n):
        a, v, b = pts[i - 1], pts[i], pts[(i + 1) % n]
        if cross(a, v, b) <= 0:
            continue
        tri = (a, v, b)
        inner = [
            p for p in pts
            if p not in tri and convex_polygon_contains(tri, p)
        ]
        if not inner:
            return Point((a.x + v.x + b.x) / 3, (a.y + v.y + b.y) / 3)
        # pull toward the inner vertex closest to v along the bisector direction
        best = min(inner, key=lambda p: cross(a, b, p) * -1)
        m = midpoint(v, best)
        if point_in_ring(m, pts) == 1:
            return m
    raise StructuralError("could not find an interior point")


# ------------------------------------------------------------- domains


@dataclass(frozen=True)
class PolygonalDomain:
    """Outer ring (counterclockwise) and hole rings (clockwise)."""

    outer: tuple[Point, ...]
    holes: tuple[tuple[Point, ...], ...] = ()
    name: str = ""
    _edges: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self) -> None:
        edges = []
        for ri, ring in enumerate(self.rings):
            for i in range(len(ring)):
                edges.append(Segment(ring[i], ring[(i + 1) % len(ring)]))
        object.__setattr__(self, "_edges", tuple(edges))

    @property
    def rings(self) -> tuple[tuple[Point, ...], ...]:
        return (self.outer,) + tuple(self.holes)

    @property
    def n(self) -> int:
        return sum(len(r) for r in self.rings)

    @property
    def h(self) -> int:
        return len(self.holes)

    @property
    def edges(self) -> tuple[Segment, ...]:
        return self._edges

    @property
    def vertices(self) -> list[Point]:
        return [p for r in self.rings for p in r]

    def locate(self, p: Point) -> int:
        """1 interior, 0 on the boundary, -1 outside."""
        r = point_in_ring(p, self.outer)
        if r < 0:
            return -1
        on = r == 0
        for hole in self.holes:
            s = point_in_ring(p, hole)
            if s > 0:
                return -1
            if s == 0:
                on = True
        return 0 if on else 1

    def contains(self, p: Point) -> bool:
        return self.locate(p) >= 0

    def strictly_contains(self, p: Point) -> bool:
        return self.locate(p) == 1

    def area(self) -> Coord:
        return ring_area(self.outer) - sum((ring_area(h) for h in self.holes), ZERO)

    def bbox(self) -> tuple[Coord, Coord, Coord, Coord]:
        xs = [p.x for p in self.outer]
        ys = [p.y for p in self.outer]
        return min(xs), min(ys), max(xs), max(ys)

    def segment_inside(self, a: Point, b: Point) -> bool:
        return segment_in_region(a, b, self.edges, self.contains)

    def is_general_position(self) -> bool:
        vs = self.vertices
        return len({p.x for p in vs}) == len(vs) and len({p.y for p in vs}) == len(vs)

    def to_json(self) -> dict:
        def ring(r):
            return [[fmt(p.x), fmt(p.y)] for p in r]

        return {"outer": ring(self.outer), "holes": [ring(h) for h in self.holes]}


def make_domain(outer: Iterable, holes: Iterable[Iterable] = (), name: str = "") -> PolygonalDomain:
    """Build a domain from coordinate pairs, normalizing ring orientation."""

    def ring(pts, ccw):
        r = [P(*xy) if not isinstance(xy, Point) else xy for xy in pts]
        r = drop_collinear(r)
        if len(r) < 3:
            raise StructuralError("ring with fewer than 3 vertices")
        area = signed_area2(r)
        if area == 0:
            raise StructuralError("degenerate ring with zero area")
        if (area > 0) != ccw:
            r.reverse()
        return tuple(r)

    return PolygonalDomain(ring(outer, True), tuple(ring(h, False) for h in holes), name)


def load_domain(source) -> PolygonalDomain:
    """Parse the domain JSON format from a dict, a JSON string or a file path."""
    if isinstance(source, dict):
        data = source
    else:
        text = str(source)
        try:
            if text.lstrip().startswith("{"):
                data = json.loads(text)
            else:
                with open(text, encoding="utf-8") as fh:
                    data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(str(exc)) from exc
    if not isinstance(data, dict) or "outer" not in data:
        raise ParseError("domain JSON needs an 'outer' ring")
    try:
        outer = [(Q(x), Q(y)) for x, y in data["outer"]]
        holes = [[(Q(x), Q(y)) for x, y in h] for h in data.get("holes", [])]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"malformed ring: {exc}") from exc
    return make_domain(outer, holes, data.get("name", ""))


def dump_domain(dom: PolygonalDomain) -> str:
    return json.dumps(dom.to_json(), sort_keys=True)


# ---------------------------------------------------------- validation


@dataclass
class ValidationReport:
    accepted: bool
    n: int
    h: int
    general_position: bool
    problems: list[str]

    def to_json(self) -> dict:
        return {
            "accepted": self.accepted,
            "n": self.n,
            "h": self.h,
            "general_position": self.general_position,
            "problems": self.problems,
        }


def structural_problems(dom: PolygonalDomain) -> list[str]:
    problems = []
    for i, ring in enumerate(dom.rings):
        if not ring_is_simple(ring):
            problems.append(f"ring {i} is not simple")
    if signed_area2(dom.outer) <= 0:
        problems.append("outer ring is not counterclockwise")
    for i, hole in enumerate(dom.holes):
        if signed_area2(hole) >= 0:
            problems.append(f"hole {i} is not clockwise")
        if any(point_in_ring(p, dom.outer) != 1 for p in hole):
            problems.append(f"hole {i} is not strictly inside the outer ring")
        for a, b in ring_edges(hole):
            if any(segments_intersect(a, b, c, d) for c, d in ring_edges(dom.outer)):
                problems.append(f"hole {i} touches the outer ring")
                break
    for i in range(dom.h):
        for j in range(i + 1, dom.h):
            hi, hj = dom.holes[i], dom.holes[j]
            touch = any(
                segments_intersect(a, b, c, d)
                for a, b in ring_edges(hi)
                for c, d in ring_edges(hj)
            )
            nested = point_in_ring(hi[0], hj) >= 0 or point_in_ring(hj[0], hi) >= 0
            if touch or nested:
                problems.append(f"holes {i} and {j} overlap or touch")
    return problems


def validate_domain(dom: PolygonalDomain, strict: bool = True) -> ValidationReport:
    """Check simplicity, orientation, disjointness; flag non general position.

    Raises StructuralError when ``strict`` and a structural check fails.
    Emits GeneralPositionWarning for shared coordinates.
    """
    problems = structural_problems(dom)
    gp = dom.is_general_position()
    report = ValidationReport(not problems, dom.n, dom.h, gp, problems)
    if problems and strict:
        raise StructuralError("; ".join(problems))
    if not gp:
        warnings.warn("two vertices share an x- or y-coordinate", GeneralPositionWarning, stacklevel=2)
    return report


def _min_feature(dom: PolygonalDomain) -> Coord:
    """Smallest positive coordinate gap or vertex-edge L1 clearance proxy."""
    vals = []
    for coords in ({p.x for p in dom.vertices}, {p.y for p in dom.vertices}):
        s = sorted(coords)
        vals += [b - a for a, b in zip(s, s[1:])]
    bx = dom.bbox()
    vals.append(bx[2] - bx[0])
    return min(v for v in vals if v > 0)


def perturb_general_position(dom: PolygonalDomain, scale=None, max_halvings: int = 60) -> PolygonalDomain:
    """Shift vertex i by (i*eps, (i*i mod p)*eps) with eps small enough to keep topology."""
    n = dom.n
    prime = next(q for q in range(2 * n + 3, 10 * n + 100) if all(q % d for d in range(2, int(q**0.5) + 1)))
    eps = Q(scale) if scale is not None else _min_feature(dom) / (4 * prime * prime)
    for _ in range(max_halvings):
        rings = []
        idx = 0
        for ring in dom.rings:
            r = []
            for p in ring:
                r.append(Point(p.x + idx * eps, p.y + ((idx * idx) % prime) * eps))
                idx += 1
            rings.append(tuple(r))
        cand = PolygonalDomain(rings[0], tuple(rings[1:]), dom.name)
        if cand.is_general_position() and not structural_problems(cand):
            return cand
        eps = eps / 2
    raise PerturbationFailed("no perturbation preserving topology found")


# ------------------------------------------------------ region queries


def segment_in_region(
    a: Point,
    b: Point,
    edges: Sequence[Segment],
    contains: Callable[[Point], bool],
) -> bool:
    """Closed-region visibility: segment ab lies in the region bounded by ``edges``.

    The segment is cut at every contact with a boundary edge; the midpoint
    of each piece must belong to the closed region. A proper crossing of any
    edge also blocks, which makes zero-area slits act as walls.
    """
    if not contains(a) or not contains(b):
        return False
    if a == b:
        return True
    ts = {ZERO, mpq(1)}
    lox, hix = (a.x, b.x) if a.x <= b.x else (b.x, a.x)
    loy, hiy = (a.y, b.y) if a.y <= b.y else (b.y, a.y)
    for c, d in edges:
        if (c.x < lox and d.x < lox) or (c.x > hix and d.x > hix):
            continue
        if (c.y < loy and d.y < loy) or (c.y > hiy and d.y > hiy):
            continue
        if proper_crossing(a, b, c, d):
            return False
        for p in segment_intersection_points(a, b, c, d):
            t = param_on(a, b, p)
            if 0 < t < 1:
                ts.add(t)
    ts = sorted(ts)
    for t0, t1 in zip(ts, ts[1:]):
        if not contains(lerp(a, b, (t0 + t1) * HALF)):
            return False
    return True


AXIS_DIRS = {"E": (1, 0), "W": (-1, 0), "N": (0, 1), "S": (0, -1)}


def ray_hit(origin: Point, direction: tuple[int, int], edges: Sequence[Segment]):
    """First boundary contact of an axis-parallel ray.

    Returns ``("along", None)`` if the ray starts along a boundary edge,
    ``("hit", point)`` for the nearest contact strictly beyond the origin,
    or ``("none", None)`` if nothing is hit.
    """
    dx, dy = direction
    best = None
    for a, b in edges:
        if dx:
            if not (min(a.y, b.y) <= origin.y <= max(a.y, b.y)):
                continue
            if a.y == b.y:
                if a.y != origin.y:
                    continue
                lo, hi = sorted((a.x, b.x))
                if lo <= origin.x <= hi:
                    if (dx > 0 and hi > origin.x) or (dx < 0 and lo < origin.x):
                        return "along", None
                    continue
                cands = [lo if dx > 0 else hi]
            else:
                t = (origin.y - a.y) / (b.y - a.y)
                cands = [a.x + (b.x - a.x) * t]
            for x in cands:
                dist = (x - origin.x) * dx
                if dist > 0 and (best is None or dist < best):
                    best = dist
        else:
            if not (min(a.x, b.x) <= origin.x <= max(a.x, b.x)):
                continue
            if a.x == b.x:
                if a.x != origin.x:
                    continue
                lo, hi = sorted((a.y, b.y))
                if lo <= origin.y <= hi:
                    if (dy > 0 and hi > origin.y) or (dy < 0 and lo < origin.y):
                        return "along", None
                    continue
                cands = [lo if dy > 0 else hi]
            else:
                t = (origin.x - a.x) / (b.x - a.x)
                cands = [a.y + (b.y - a.y) * t]
            for y in cands:
                dist = (y - origin.y) * dy
                if dist > 0 and (best is None or dist < best):
                    best = dist
    if best is None:
        return "none", None
    return "hit", Point(origin.x + dx * best, origin.y + dy * best)


def shoot(
    origin: Point,
    direction: tuple[int, int],
    edges: Sequence[Segment],
    strictly_inside: Callable[[Point], bool],
) -> Segment | None:
    """Axis-parallel diagonal from ``origin`` until it first touches the boundary.

    None when the ray leaves the region immediately or runs along an edge.
    """
    kind, hit = ray_hit(origin, direction, edges)
    if kind != "hit":
        return None
    if not strictly_inside(midpoint(origin, hit)):
        return None
    return Segment(origin, hit)
