import random

import pytest
from gmpy2 import mpq

from artifact.decomposition import g_aligned
from artifact.diameter import cellpair_fn, constrained_diameter, diameter_improved, diameter_preliminary
from artifact.fixtures import rectangle
from artifact.geometry import P, Point, l1_dist
from artifact.oracle import oracle_dist, sample_in_convex, sample_points
from corpus import HOLED, context, domain


def cell_points(cell, k, rng):
    return [p for piece in cell.pieces for p in sample_in_convex(piece, k, rng)]


def grid_in(cell, step):
    """Lattice points of the cell's bounding box that fall inside the cell."""
    x0, y0, x1, y1 = cell.bbox
    nx = max(1, int((x1 - x0) / step))
    ny = max(1, int((y1 - y0) / step))
    pts = []
    for i in range(nx + 1):
        for j in range(ny + 1):
            p = Point(x0 + (x1 - x0) * mpq(i, nx), y0 + (y1 - y0) * mpq(j, ny))
            if cell.contains(p):
                pts.append(p)
    return pts


# ------------------------------------------------------------ cell-pair functions


def test_aligned_pair_is_direct():
    ctx = context("HOLE1", "improved")
    by_box = {c.bbox: c for c in ctx.X.D.cells}
    a, b = by_box[(0, 0, 4, 4)], by_box[(0, 4, 4, 6)]
    f = cellpair_fn(a, b, ctx)
    assert f.mode == "aligned-direct" and f.terms == []
    s, t = P(1, 1), P(3, 5)
    assert f(s, t) == l1_dist(s, t) == 6


@pytest.mark.parametrize("route", ["preliminary", "improved"])
def test_unaligned_pairs_match_the_engine(route):
    ctx = context("HOLE1", route)
    rng = random.Random(5)
    cells = ctx.cells
    pairs = [(a, b) for a in cells for b in cells if cellpair_fn(a, b, ctx).mode != "aligned-direct"]
    assert pairs
    for a, b in rng.sample(pairs, min(20, len(pairs))):
        f = cellpair_fn(a, b, ctx)
        for s, t in zip(cell_points(a, 3, rng), cell_points(b, 3, rng)):
            assert f(s, t) == ctx.P(s, t)


@pytest.mark.parametrize("name", HOLED)
def test_cell_pair_functions_match_the_engine(name):
    ctx = context(name, "improved")
    rng = random.Random(6)
    cells = ctx.cells
    for _ in range(25):
        a, b = rng.choice(cells), rng.choice(cells)
        f = cellpair_fn(a, b, ctx)
        assert all(len(p.terms) <= 32 for p in f.parts)
        for s, t in zip(cell_points(a, 2, rng), cell_points(b, 2, rng)):
            assert f(s, t) == ctx.P(s, t)
            assert f.flipped()(t, s) == f(s, t)


def test_canal_cell_against_an_ocean_cell_aligned_to_both_gates():
    dom = domain("CANAL1")
    ctx = context("CANAL1", "improved")
    rng = random.Random(7)
    cases = []
    for a in ctx.X.Df:
        info = ctx.coast_info(a) if a.kind == "coastal" else None
        if not (info and info.pocket.kind == "canal" and not any(info.s_aligned)):
            continue
        for b in ctx.X.Df:
            if b.kind == "oceanic" and all(g_aligned(dom, b, g) for g in info.gates):
                cases.append((a, b))
    assert cases
    for a, b in rng.sample(cases, min(10, len(cases))):
        f = cellpair_fn(a, b, ctx)
        assert f.mode != "aligned-direct"
        for s, t in zip(cell_points(a, 4, rng), cell_points(b, 4, rng)):
            assert f(s, t) == ctx.P(s, t)


# ------------------------------------------------------------ constrained diameter


def test_l_shape_opposite_arms():
    ctx = context("L-shape", "preliminary")
    a, b = (c for c in ctx.X.D.cells if c.bbox in ((1, 0, 2, 1), (0, 1, 1, 2)))
    m = constrained_diameter(cellpair_fn(a, b, ctx))
    # the arm tips are joined by a staircase through the reflex corner
    assert m.value == 4
    assert {m.s, m.t} == {P(2, 0), P(0, 2)}


def test_single_cell_reaches_its_farthest_corners():
    ctx = context("unit-square", "preliminary")
    c = ctx.X.D.cells[0]
    m = constrained_diameter(cellpair_fn(c, c, ctx))
    assert m.value == max(l1_dist(u, v) for u in c.corners for v in c.corners) == 2


def test_floor_prunes_small_pairs():
    ctx = context("unit-square", "preliminary")
    c = ctx.X.D.cells[0]
    assert constrained_diameter(cellpair_fn(c, c, ctx), floor=mpq(5)) is None


def nontrivial_pairs(ctx, k, rng):
    """k random cell pairs whose distance is not plain |st|."""
    out = []
    while len(out) < k:
        a, b = rng.choice(ctx.cells), rng.choice(ctx.cells)
        if cellpair_fn(a, b, ctx).mode != "aligned-direct":
            out.append((a, b))
    return out


def test_constrained_diameter_against_a_grid():
    ctx = context("HOLE1", "improved")
    rng = random.Random(8)
    step = mpq(1, 2)
    for a, b in nontrivial_pairs(ctx, 4, rng):
        m = constrained_diameter(cellpair_fn(a, b, ctx))
        # the maximizer is a real pair with that distance
        assert ctx.P(m.s, m.t) == m.value
        grid_max = max(ctx.P(s, t) for s in grid_in(a, step) for t in grid_in(b, step))
        assert grid_max <= m.value
        # d is 1-Lipschitz in each argument and every point of a box cell is within step of the grid
        assert m.value <= grid_max + 2 * step


@pytest.mark.parametrize("name", ["TWOHOLE", "CANAL1", "pinch-0"])
def test_constrained_diameter_dominates_samples(name):
    ctx = context(name, "improved")
    rng = random.Random(9)
    for a, b in nontrivial_pairs(ctx, 4, rng):
        m = constrained_diameter(cellpair_fn(a, b, ctx))
        assert ctx.P(m.s, m.t) == m.value
        assert a.contains(m.s) and b.contains(m.t) or a.contains(m.t) and b.contains(m.s)
        pts_a, pts_b = cell_points(a, 6, rng), cell_points(b, 6, rng)
        assert max(ctx.P(s, t) for s in pts_a + a.corners for t in pts_b + b.corners) <= m.value


# ------------------------------------------------------------ geodesic diameter


def test_unit_square_diameter():
    r = diameter_improved(domain("unit-square"))
    assert r.value == 2
    assert {r.s, r.t} in ({P(0, 0), P(1, 1)}, {P(1, 0), P(0, 1)})


@pytest.mark.parametrize("w,h", [(1, 1), (3, 2), (7, 1)])
def test_rectangle_diameter(w, h):
    assert diameter_preliminary(rectangle(w, h)).value == w + h
    assert diameter_improved(rectangle(w, h)).value == w + h


def test_hole1_diameter():
    # frozen from the track-graph oracle: max over corner pairs and a half-unit grid
    dom = domain("HOLE1")
    r = diameter_improved(dom)
    assert r.value == 20
    assert oracle_dist(dom, r.s, r.t) == 20


def test_hole1_diameter_bounds_a_grid():
    dom = domain("HOLE1")
    ctx = context("HOLE1", "improved")
    pts = [p for p in sample_points(dom, 80, 12)]
    assert max(ctx.P(s, t) for s in pts for t in pts) <= 20


@pytest.mark.parametrize("name", ["unit-square", "L-shape", "HOLE1", "TWOHOLE", "CANAL1"])
def test_both_routes_agree(name):
    dom = domain(name)
    a = diameter_preliminary(dom, context(name, "preliminary"))
    b = diameter_improved(dom, context(name, "improved"))
    assert a.value == b.value
    for r in (a, b):
        assert oracle_dist(dom, r.s, r.t) == r.value
        assert r.pairs >= r.solved >= 0
