import pytest

from artifact.distance_engine import build_visgraph
from artifact.errors import OutOfDomain
from artifact.fixtures import hole1, rectangle
from artifact.geometry import P, l1_dist
from artifact.oracle import oracle_dist, sample_points, track_graph
from corpus import SMALL, domain


def test_convex_domain_gives_l1():
    dom = rectangle(5, 2)
    pts = sample_points(dom, 40, 3)
    for s, t in zip(pts[::2], pts[1::2]):
        assert oracle_dist(dom, s, t) == l1_dist(s, t)


def test_hole1_vertical_crossing_is_12():
    # straight up is blocked; the best detour backtracks 1 around a hole corner
    assert oracle_dist(hole1(), P(5, 0), P(5, 10)) == 12


def test_same_point_is_zero():
    assert oracle_dist(hole1(), P(1, 1), P(1, 1)) == 0


def test_points_outside_raise():
    with pytest.raises(OutOfDomain):
        oracle_dist(hole1(), P(5, 5), P(1, 1))


@pytest.mark.parametrize("name", SMALL)
def test_oracle_agrees_with_engine(name):
    dom = domain(name)
    g = build_visgraph(dom)
    pts = sample_points(dom, 200, 11)
    for s, t in zip(pts[::2], pts[1::2]):
        assert oracle_dist(dom, s, t) == g.dist(s, t)


def test_sampling_is_deterministic_and_inside():
    dom = hole1()
    a = sample_points(dom, 1000, 5)
    assert a == sample_points(dom, 1000, 5)
    assert a != sample_points(dom, 1000, 6)
    assert all(dom.contains(p) for p in a)
    assert not any(4 < p.x < 6 and 4 < p.y < 6 for p in a)
    assert dom.contains(sample_points(dom, 1, 99)[0])


@pytest.mark.parametrize("name", SMALL)
def test_track_graph_size_is_quadratic(name):
    dom = domain(name)
    tg = track_graph(dom)
    assert tg.node_count <= 4 * dom.n**2
