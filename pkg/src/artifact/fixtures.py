"""Named test domains and seeded random domain generators."""

from __future__ import annotations

import math
import random

from .errors import StructuralError
from .geometry import (
    Point,
    PolygonalDomain,
    convex_polygon_contains,
    make_domain,
    point_in_ring,
    segments_intersect,
    structural_problems,
)


def unit_square() -> PolygonalDomain:
    return make_domain([(0, 0), (1, 0), (1, 1), (0, 1)], name="unit-square")


def rectangle(w, h) -> PolygonalDomain:
    return make_domain([(0, 0), (w, 0), (w, h), (0, h)], name=f"rect-{w}x{h}")


def l_shape() -> PolygonalDomain:
    return make_domain([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)], name="L-shape")


def hole1() -> PolygonalDomain:
    """Square [0,10]^2 with the square hole [4,6]^2."""
    return make_domain(
        [(0, 0), (10, 0), (10, 10), (0, 10)],
        [[(4, 4), (6, 4), (6, 6), (4, 6)]],
        name="HOLE1",
    )


def twohole() -> PolygonalDomain:
    """Square [0,20]^2 with two quadrilateral holes around (5,10) and (15,10)."""
    return make_domain(
        [(0, 0), (20, 0), (20, 20), (0, 20)],
        [
            [(3, 9), (6, 8), (7, 11), (4, 12)],
            [(13, 10), (16, 7), (17, 13), (14, 14)],
        ],
        name="TWOHOLE",
    )


def canal1() -> PolygonalDomain:
    """Two holes whose interlocking spikes pinch the corridor between them."""
    return make_domain(
        [(1, 0), (41, 2), (40, 42), (0, 40)],
        [
            [(3, 9), (13, 10), (25, 16), (14, 19), (12, 31), (4, 30)],
            [(28, 8), (37, 11), (36, 32), (27, 33), (26, 27), (15, 24), (29, 21)],
        ],
        name="CANAL1",
    )


NAMED = {
    "unit-square": unit_square,
    "rect-3x1": lambda: rectangle(3, 1),
    "rect-5x2": lambda: rectangle(5, 2),
    "L-shape": l_shape,
    "HOLE1": hole1,
    "TWOHOLE": twohole,
    "CANAL1": canal1,
}


def named(name: str) -> PolygonalDomain:
    try:
        return NAMED[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(NAMED)}") from None


# ------------------------------------------------------------ generators


def _spread(rings: list[list[tuple[int, int]]], rng: random.Random) -> list[list[tuple[int, int]]]:
    """Scale integer rings and add distinct offsets so all x and all y differ."""
    n = sum(len(r) for r in rings)
    scale = 4 * n + 4
    xo = rng.sample(range(n), n)
    yo = rng.sample(range(n), n)
    out, k = [], 0
    for ring in rings:
        r = []
        for x, y in ring:
            r.append((x * scale + xo[k], y * scale + yo[k]))
            k += 1
        out.append(r)
    return out


def _star(rng: random.Random, cx: float, cy: float, rmin: float, rmax: float, k: int) -> list[tuple[int, int]]:
    angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(k))
    pts = []
    for a in angles:
        r = rng.uniform(rmin, rmax)
        pts.append((round(cx + r * math.cos(a)), round(cy + r * math.sin(a))))
    return pts


def _finish(rings, rng, name) -> PolygonalDomain | None:
    rings = _spread(rings, rng)
    try:
        dom = make_domain(rings[0], rings[1:], name=name)
    except StructuralError:
        return None
    if structural_problems(dom) or not dom.is_general_position():
        return None
    if dom.h != len(rings) - 1:
        return None
    return dom


def _holes_fit(outer, holes, cand) -> bool:
    oring = [Point(*p) for p in outer]
    if any(point_in_ring(Point(*p), oring) != 1 for p in cand):
        return False
    ring = [Point(*p) for p in cand]
    edges = list(zip(ring, ring[1:] + ring[:1]))
    oedges = list(zip(oring, oring[1:] + oring[:1]))
    for a, b in edges:
        if any(segments_intersect(a, b, c, d) for c, d in oedges):
            return False
    for h in holes:
        hr = [Point(*p) for p in h]
        hedges = list(zip(hr, hr[1:] + hr[:1]))
        if any(segments_intersect(a, b, c, d) for a, b in edges for c, d in hedges):
            return False
        if point_in_ring(hr[0], ring) >= 0 or point_in_ring(ring[0], hr) >= 0:
            return False
    return True


def _convex_blob(rng, cx, cy, r, k) -> list[tuple[int, int]] | None:
    pts = _star(rng, cx, cy, r * 0.6, r, k)
    pts = list(dict.fromkeys(pts))
    if len(pts) < 3:
        return None
    ring = [Point(*p) for p in pts]
    n = len(ring)
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        for p in ring:
            if (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) < 0:
                return None
    if not convex_polygon_contains(ring, Point(cx, cy)):
        return None
    return pts


def random_holes(seed: int, h: int = 2, outer_k: int = 5, hole_k: int = 3) -> PolygonalDomain:
    """Star-shaped outer ring with ``h`` small convex holes placed by rejection."""
    rng = random.Random(seed)
    for _ in range(1000):
        outer = _star(rng, 50, 50, 35, 50, outer_k)
        holes: list = []
        for _ in range(200):
            if len(holes) == h:
                break
            blob = _convex_blob(rng, rng.uniform(20, 80), rng.uniform(20, 80), rng.uniform(5, 12), hole_k)
            if blob and _holes_fit(outer, holes, blob):
                holes.append(blob)
        if len(holes) != h:
            continue
        dom = _finish([outer] + holes, rng, f"random-holes-{seed}")
        if dom is not None:
            return dom
    raise StructuralError("generator gave up")


def pinch(seed: int) -> PolygonalDomain:
    """Two holes with interlocking spikes, producing a closed hourglass."""
    rng = random.Random(seed)
    for _ in range(1000):
        j = lambda v: v + rng.randint(-1, 1)  # noqa: E731
        outer = [(j(1), j(0)), (j(41), j(2)), (j(40), j(42)), (j(0), j(40))]
        tip1 = (rng.randint(22, 26), rng.randint(14, 17))
        tip2 = (rng.randint(14, 17), rng.randint(23, 26))
        h1 = [(j(3), j(9)), (j(13), j(10)), tip1, (j(14), j(19)), (j(12), j(31)), (j(4), j(30))]
        h2 = [(j(28), j(8)), (j(37), j(11)), (j(36), j(32)), (j(27), j(33)), (j(26), j(27)), tip2, (j(29), j(21))]
        dom = _finish([outer, h1, h2], rng, f"pinch-{seed}")
        if dom is not None:
            return dom
    raise StructuralError("generator gave up")


def comb(seed: int, teeth: int = 3, with_hole: bool = True) -> PolygonalDomain:
    """Rectangle whose top edge carries ``teeth`` notches; optionally one hole below."""
    rng = random.Random(seed)
    for _ in range(1000):
        w = 10 * teeth + 10
        outer = [(0, 0), (w, 0), (w, 30)]
        x = w
        for _ in range(teeth):
            x -= rng.randint(3, 5)
            outer.append((x, 30))
            depth = rng.randint(8, 14)
            outer.append((x, 30 - depth))
            x -= rng.randint(2, 4)
            outer.append((x, 30 - depth))
            outer.append((x, 30))
        outer.append((0, 30))
        holes = []
        if with_hole:
            cx = rng.randint(8, w - 8)
            holes.append([(cx - 3, 4), (cx + 3, 5), (cx + 2, 9), (cx - 2, 8)])
        dom = _finish([outer] + holes, rng, f"comb-{seed}")
        if dom is not None:
            return dom
    raise StructuralError("generator gave up")


GENERATORS = {"random-holes": random_holes, "pinch": pinch, "comb": comb}


def generate(kind: str, seed: int, **kw) -> PolygonalDomain:
    try:
        gen = GENERATORS[kind]
    except KeyError:
        raise KeyError(f"unknown generator {kind!r}; known: {sorted(GENERATORS)}") from None
    return gen(seed, **kw)
