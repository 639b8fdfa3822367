import random

import pytest
from gmpy2 import mpq

from artifact.corridor import build_rectified
from artifact.distance_engine import build_visgraph, d_simple
from artifact.geometry import Point, is_monotone, make_domain, point_in_ring, ring_area, signed_area2
from artifact.oracle import sample_points
from artifact.triangulation import string_pull, triangulate
from corpus import HOLED, SMALL, STRUCT_C, context, domain


def S_of(name):
    return context(name, "improved").X.S


# ------------------------------------------------------------ triangulation


def test_convex_quad_has_two_triangles():
    tri = triangulate(make_domain([(0, 0), (3, 0), (4, 2), (1, 3)]))
    assert len(tri.triangles) == 2


@pytest.mark.parametrize("name", SMALL)
def test_triangulation_partitions_the_domain(name):
    dom = domain(name)
    tri = S_of(name).tri
    assert len(tri.triangles) == dom.n + 2 * dom.h - 2
    assert sum((ring_area(t) for t in tri.triangles), mpq(0)) == dom.area()
    for t in tri.triangles:
        assert signed_area2(t) > 0
        c = Point(sum(p.x for p in t) / 3, sum(p.y for p in t) / 3)
        assert dom.strictly_contains(c)
        assert all(dom.segment_inside(t[k], t[(k + 1) % 3]) for k in range(3))
    # the dual graph is connected
    seen, todo = {0}, [0]
    while todo:
        for w, _ in tri.adjacency[todo.pop()]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    assert len(seen) == len(tri.triangles)


# ------------------------------------------------------------ corridor graph


def test_hole_free_graph_is_empty():
    g = S_of("L-shape").graph
    assert g.node_count == 0 and g.edge_count == 0


def test_one_hole_graph_is_a_double_edge():
    g = S_of("HOLE1").graph
    assert g.node_count == 2 and g.edge_count == 2
    assert all(g.degree(j) == 2 for j in g.junctions)


@pytest.mark.parametrize("name", ["TWOHOLE", "CANAL1", "random-holes-0", "pinch-0"])
def test_graph_is_3_regular_for_two_or_more_holes(name):
    dom = domain(name)
    g = S_of(name).graph
    assert all(g.degree(j) == 3 for j in g.junctions)
    assert g.node_count + g.edge_count <= STRUCT_C * dom.h


# ------------------------------------------------------------ hourglasses


@pytest.mark.parametrize("name", HOLED)
def test_open_hourglasses_have_disjoint_sides(name):
    S = S_of(name)
    for hg in S.hourglasses.values():
        if not hg.closed:
            assert not set(hg.left) & set(hg.right)
        else:
            assert hg.path and hg.path[0] == hg.x and hg.path[-1] == hg.y


def test_plain_strip_corridor_is_open_with_straight_sides():
    S = S_of("HOLE1")
    opened = [hg for hg in S.hourglasses.values() if not hg.closed]
    assert opened
    assert any(len(hg.left) == 2 or len(hg.right) == 2 for hg in opened)


def test_canal1_pinch_is_closed_with_funnel_apex_terminals():
    S = S_of("CANAL1")
    pinch = [pk for pk in S.canals if not set(pk.ring) & set(domain("CANAL1").outer)]
    assert len(pinch) == 1
    K = next(k for k in S.graph.corridors if k.id == pinch[0].corridor)
    hg = S.hourglasses[K.id]
    assert hg.closed and len(hg.path) >= 2
    # pulling the strings from the other door gives the same sides
    (l1, r1), (l2, r2) = K.doors
    back = [(b, a) for a, b in reversed(K.portals)]
    assert string_pull(l2, l1, back)[::-1] == hg.left
    assert string_pull(r2, r1, back)[::-1] == hg.right


# ------------------------------------------------------------ bays and canals


def test_hole1_pockets():
    S = S_of("HOLE1")
    # one of the two corridors closes up at a hole corner and leaves one canal
    assert [pk.kind for pk in S.pockets] == ["canal"]


def test_canal1_has_one_canal_between_the_holes():
    dom = domain("CANAL1")
    S = S_of("CANAL1")
    between = [
        pk for pk in S.canals if all(set(pk.ring) & set(h) for h in dom.holes) and not set(pk.ring) & set(dom.outer)
    ]
    assert len(between) == 1
    A = between[0]
    hg = S.hourglasses[A.corridor]
    assert len(A.gates) == 2
    assert any(hg.x in g for g in A.gates) and any(hg.y in g for g in A.gates)


@pytest.mark.parametrize("name", HOLED)
def test_canals_contain_their_corridor_path(name):
    S = S_of(name)
    for A in S.canals:
        hg = S.hourglasses[A.corridor]
        assert all(A.closure_contains(p) for p in hg.path)
        for a, b in zip(hg.path, hg.path[1:]):
            assert A.closure_contains(Point((a.x + b.x) / 2, (a.y + b.y) / 2))


@pytest.mark.parametrize("name", HOLED)
def test_bay_gates_join_consecutive_side_vertices(name):
    dom = domain(name)
    S = S_of(name)
    for A in S.bays:
        assert len(A.gates) == 1
        c, d = A.gates[0]
        assert c in dom.vertices and d in dom.vertices
        assert not A.contains(Point((c.x + d.x) / 2, (c.y + d.y) / 2))  # gates are excluded


@pytest.mark.parametrize("name", SMALL)
def test_ocean_and_pockets_partition_the_domain(name):
    dom = domain(name)
    S = S_of(name)
    m_area = sum((signed_area2(c) for c in S.ocean.cycles), mpq(0)) / 2
    assert m_area + sum((pk.area for pk in S.pockets), mpq(0)) == dom.area()
    rng = random.Random(0)
    for p in sample_points(dom, 300, rng.randrange(1000)):
        inside = [pk for pk in S.pockets if point_in_ring(p, pk.ring) == 1]
        assert len(inside) <= 1


def test_hole_free_ocean_is_everything():
    S = S_of("L-shape")
    assert S.pockets == [] and S.ocean.area == domain("L-shape").area()


@pytest.mark.parametrize("name", SMALL)
def test_core_domain_is_small(name):
    dom = domain(name)
    S = S_of(name)
    assert len(S.core_vertices) <= STRUCT_C * max(dom.h, 1)
    for a, b, w in S.shortcuts:
        hg = next(h for h in S.hourglasses.values() if h.closed and {h.x, h.y} == {a, b})
        assert w == sum((abs(u.x - v.x) + abs(u.y - v.y) for u, v in zip(hg.path, hg.path[1:])), mpq(0))


# ------------------------------------------------------------ Fact 2 in pockets


@pytest.mark.parametrize("name", HOLED)
def test_pocket_geodesics_are_l1_shortest(name):
    S = S_of(name)
    for A in S.pockets:
        dom = A.domain()
        g = build_visgraph(dom)
        pts = sample_points(dom, 60, A.id)
        for p, q in zip(pts[::2], pts[1::2]):
            assert d_simple(dom, p, q) == g.dist(p, q)


# ------------------------------------------------------------ rectified domain


def test_rectified_without_interior_corners_is_the_domain():
    dom = domain("unit-square")
    ctx = context("unit-square", "improved")
    R = build_rectified(dom, [c for c in ctx.X.Df if c.kind == "coastal"])
    assert R.apexes == [] and R.solid == []
    assert all(R.contains(p) for p in sample_points(dom, 50, 1))


@pytest.mark.parametrize("name", HOLED)
def test_rectified_domain_keeps_apexes_and_stays_inside(name):
    dom = domain(name)
    R = context(name, "improved").rectified
    for v in R.apexes:
        assert R.contains(v)
    for p in sample_points(dom, 200, 3):
        if R.contains(p):
            assert dom.contains(p)


@pytest.mark.parametrize("name", HOLED)
def test_rectified_walls_are_monotone(name):
    R = context(name, "improved").rectified
    for comp in R.components():
        for chain in R.walls(comp):
            assert is_monotone(chain)


def test_hole1_rectified_distances_between_apexes():
    ctx = context("HOLE1", "improved")
    R = ctx.rectified
    V = sorted(set(R.apexes))
    assert V
    for a in V:
        for b in V:
            assert ctx.rect(a, b) == ctx.P(a, b)

