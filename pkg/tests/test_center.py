import random

import pytest
from gmpy2 import mpq

from artifact.center import (
    center_improved,
    center_preliminary,
    components_of,
    eval_R,
    home_cell,
    project_R,
    sigma_center,
)
from artifact.diameter import cellpair_fn, diameter_improved
from artifact.errors import OutOfDomain
from artifact.fixtures import rectangle
from artifact.geometry import P, Point, convex_polygon_contains
from artifact.oracle import oracle_dist, sample_in_convex, sample_points
from corpus import context, domain

# ------------------------------------------------------------ eval_R


def test_unit_square_farthest_points():
    dom = domain("unit-square")
    ctx = context("unit-square", "improved")
    far = eval_R(dom, P(0, 0), ctx)
    assert far.value == 2 and far.p == P(1, 1)
    assert eval_R(dom, P("1/2", "1/2"), ctx).value == 1


def test_eval_r_outside_raises():
    with pytest.raises(OutOfDomain):
        eval_R(domain("HOLE1"), P(5, 5), context("HOLE1", "improved"))


@pytest.mark.parametrize("name", ["L-shape", "HOLE1", "CANAL1"])
def test_eval_r_is_attained_and_dominates_samples(name):
    dom = domain(name)
    ctx = context(name, "improved")
    pts = sample_points(dom, 40, 13)
    for q in sample_points(dom, 3, 14):
        far = eval_R(dom, q, ctx)
        assert ctx.P(q, far.p) == far.value
        assert all(ctx.P(q, p) <= far.value for p in pts + list(dom.vertices))


def test_hole1_corner_against_the_oracle():
    dom = domain("HOLE1")
    far = eval_R(dom, P(1, 1), context("HOLE1", "improved"))
    assert oracle_dist(dom, P(1, 1), far.p) == far.value
    assert all(oracle_dist(dom, P(1, 1), p) <= far.value for p in sample_points(dom, 30, 15))


@pytest.mark.parametrize("name", ["HOLE1", "TWOHOLE"])
def test_routes_give_the_same_farthest_distance(name):
    dom = domain(name)
    for q in sample_points(dom, 3, 16):
        assert eval_R(dom, q, context(name, "preliminary")).value == eval_R(dom, q, context(name, "improved")).value


# ------------------------------------------------------------ projection


@pytest.mark.parametrize("name", ["HOLE1", "CANAL1"])
def test_projected_patches_match_brute_force(name):
    ctx = context(name, "improved")
    rng = random.Random(17)
    for _ in range(3):
        sigma, tau = rng.choice(ctx.q_cells), rng.choice(ctx.cells)
        f = cellpair_fn(sigma, tau, ctx)
        patches = project_R(f)
        comps = components_of(f)
        far_grid = [p for piece in tau.pieces for p in sample_in_convex(piece, 25, rng)] + list(tau.corners)
        for q in [p for piece in sigma.pieces for p in sample_in_convex(piece, 4, rng)]:
            inside = [pt for pt in patches if convex_polygon_contains(pt.region, q)]
            assert inside
            exact = max(k.value(q) for k in comps)
            assert all(pt(q) == exact for pt in inside)
            # a brute-force maximum over samples of the far cell never exceeds it
            assert max(f(q, p) for p in far_grid) <= exact


def test_farthest_distance_is_concave_on_a_sign_region():
    # R itself is not concave, but each term component is concave where every |q a| is linear
    ctx = context("HOLE1", "improved")
    sigma = home_cell(ctx, P(1, 1))
    comps = [k for tau in ctx.cells for k in components_of(cellpair_fn(sigma, tau, ctx)) if not k.direct]
    assert comps
    a, b = P("1/4", "1/4"), P("3/4", "1/2")
    for k in comps[:20]:
        mid = P((a.x + b.x) / 2, (a.y + b.y) / 2)
        assert 2 * k.value(mid) >= k.value(a) + k.value(b)


# ------------------------------------------------------------ center


def test_unit_square_center():
    r = center_improved(domain("unit-square"))
    assert r.q == P("1/2", "1/2") and r.radius == 1 and r.unique


@pytest.mark.parametrize("w,h", [(1, 1), (3, 2), (7, 1)])
def test_rectangle_center(w, h):
    for fn in (center_preliminary, center_improved):
        r = fn(rectangle(w, h))
        assert r.radius == mpq(w + h, 2)
        assert r.q == P(mpq(w, 2), mpq(h, 2))


@pytest.mark.parametrize("name", ["L-shape", "HOLE1", "TWOHOLE"])
def test_center_bounds_and_routes(name):
    dom = domain(name)
    a = center_preliminary(dom, context(name, "preliminary"))
    b = center_improved(dom, context(name, "improved"))
    assert a.radius == b.radius
    diam = diameter_improved(dom, context(name, "improved")).value
    assert diam <= 2 * b.radius and b.radius <= diam
    assert eval_R(dom, b.q, context(name, "improved")).value == b.radius
    assert oracle_dist(dom, b.q, b.witness) == b.radius


@pytest.mark.parametrize("name", ["L-shape", "HOLE1"])
def test_center_beats_random_points(name):
    dom = domain(name)
    ctx = context(name, "improved")
    r = center_improved(dom, ctx)
    for q in sample_points(dom, 15, 18):
        assert eval_R(dom, q, ctx).value >= r.radius


def test_sigma_center_is_a_cell_minimum():
    dom = domain("HOLE1")
    ctx = context("HOLE1", "improved")
    r = center_improved(dom, ctx)
    rng = random.Random(19)
    for sigma in rng.sample(ctx.q_cells, 3):
        q, value = sigma_center(ctx, sigma)
        assert sigma.contains(q)
        assert eval_R(dom, q, ctx).value == value >= r.radius
        for p in [pt for piece in sigma.pieces for pt in sample_in_convex(piece, 3, rng)]:
            assert eval_R(dom, p, ctx).value >= value


def test_hole1_center_radius():
    dom = domain("HOLE1")
    r = center_improved(dom, context("HOLE1", "improved"))
    assert r.radius == 11 and not r.unique  # the hole's symmetry gives several centers
    # independent check: the farthest outer corner, minimized over a half-unit grid with the oracle
    corners = [P(0, 0), P(10, 0), P(10, 10), P(0, 10)]
    grid = [P(mpq(i, 2), mpq(j, 2)) for i in range(21) for j in range(21)]
    grid = [q for q in grid if dom.contains(q)]
    assert min(max(oracle_dist(dom, q, c) for c in corners) for q in grid) == 11
    assert max(oracle_dist(dom, r.q, c) for c in corners) == 11


def test_center_point_is_inside():
    dom = domain("CANAL1")
    q = center_improved(dom, context("CANAL1", "improved")).q
    assert dom.contains(q) and isinstance(q, Point)
