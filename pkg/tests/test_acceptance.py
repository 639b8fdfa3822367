"""Acceptance criteria 1 to 10 over the whole fixture corpus.

One module-scoped pass builds each fixture's contexts once, runs every
criterion's checks on it and keeps only the findings. The ten tests then
report one pass/fail line each (also printed in the terminal summary).
"""

from __future__ import annotations

import random
import time
import traceback

import pytest
from gmpy2 import mpq

from artifact.center import center_improved, center_preliminary, components_of, eval_R, home_cell
from artifact.diameter import PairContext, cellpair_fn, diameter_improved, diameter_preliminary
from artifact.distance_engine import build_visgraph, d_simple, geodesic_dist
from artifact.geometry import (
    P,
    Point,
    convex_polygon_contains,
    is_monotone,
    l1_dist,
    path_l1_length,
    ring_edges,
    segment_intersection_points,
)
from artifact.oracle import oracle_dist, sample_in_convex, sample_points
from corpus import ACCEPTANCE_REPORT, CORPUS, STRUCT_C, domain

CRITERIA = {
    1: "engine equals oracle on 500 random pairs",
    2: "cell-pair functions equal the engine (50 + 50 cell pairs x 20 point pairs)",
    3: "pocket maxima are reached on the pocket boundary",
    4: "core distances equal full distances on 200 ocean pairs",
    5: "rectified distances equal full distances on 100 pairs",
    6: "preliminary and improved diameter and radius agree",
    7: "diameter dominates 10^4 pairs and is attained",
    8: "center beats 10^3 random points",
    9: "structural counts with one constant",
    10: "monotone-path identity and pocket geodesics",
}


def cell_points(cell, k, rng):
    """k points from each convex piece of the cell."""
    return [p for piece in cell.pieces for p in sample_in_convex(piece, k, rng)]


def points_in(pred, dom, k, seed, batches=50):
    """k sampled points of the domain that satisfy pred (fewer if they are rare)."""
    out = []
    for b in range(batches):
        for p in sample_points(dom, 20 * k, seed + b):
            if pred(p):
                out.append(p)
                if len(out) == k:
                    return out
    return out


# ------------------------------------------------------------ per-criterion checks
# Each returns a list of problem strings (empty when the fixture passes) and may
# add counters to ``stats``.


def check_1(dom, g, rng, stats):
    bad = []
    pts = sample_points(dom, 1000, rng.randrange(10**9))
    for s, t in zip(pts[::2], pts[1::2]):
        a, _ = geodesic_dist(g, s, t)
        b = oracle_dist(dom, s, t)
        if a != b:
            bad.append(f"d{s}{t}: engine {a} oracle {b}")
    stats["pairs"] += 500
    return bad


def check_2(dom, pre, imp, rng, stats):
    bad = []
    for ctx in (pre, imp):
        cells = ctx.cells
        for _ in range(50):
            a, b = rng.choice(cells), rng.choice(cells)
            f = cellpair_fn(a, b, ctx)
            ss = cell_points(a, 20, rng)
            ts = cell_points(b, 20, rng)
            pairs = list(zip(rng.sample(ss, 20), rng.sample(ts, 20)))
            for s, t in pairs:
                d = ctx.P(s, t)
                if f(s, t) != d:
                    bad.append(f"{ctx.route} cells {a.id},{b.id} at {s},{t}: {f(s, t)} != {d}")
                if f.mode == "aligned-direct" and d != l1_dist(s, t):
                    bad.append(f"{ctx.route} aligned cells {a.id},{b.id} at {s},{t}: {d} != |st|")
            stats["cell pairs"] += 1
            stats["point pairs"] += len(pairs)
    return bad


def _meets(piece, u, v):
    """The closed segment uv touches the closed convex piece."""
    if convex_polygon_contains(piece, u) or convex_polygon_contains(piece, v):
        return True
    return any(segment_intersection_points(u, v, e.a, e.b) for e in ring_edges(piece))


def boundary_cells(ctx, A):
    """Cells of D_f whose closure meets the boundary of pocket A."""
    ring = A.ring
    sides = list(zip(ring, ring[1:] + ring[:1]))
    return [c for c in ctx.cells if any(_meets(piece, u, v) for piece in c.pieces for u, v in sides)]


def check_3(dom, imp, rng, stats):
    bad = []
    pockets = imp.X.S.pockets
    if not pockets:
        return bad
    for s in sample_points(dom, 20, rng.randrange(10**9)):
        sigma = home_cell(imp, s)
        for A in pockets:
            edge = boundary_cells(imp, A)
            bmax = max(k.value(s) for tau in edge for k in components_of(cellpair_fn(sigma, tau, imp)))
            inner = [p for p in sample_points(A.domain(), 30, rng.randrange(10**9)) if A.contains(p)]
            worst = max((imp.P(s, t) for t in inner), default=None)
            if worst is not None and worst > bmax:
                bad.append(f"s={s} pocket {A.id}: interior {worst} > boundary {bmax}")
            stats["s x pocket"] += 1
    return bad


def check_4(dom, imp, rng, stats):
    bad = []
    M = imp.X.S.ocean
    pts = points_in(M.contains, dom, 400, rng.randrange(10**9))
    for s, t in zip(pts[::2], pts[1::2]):
        a, b = imp.core(s, t), imp.P(s, t)
        if a != b:
            bad.append(f"{s},{t}: core {a} != {b}")
    stats["ocean pairs"] += len(pts) // 2
    if len(pts) < 400:
        bad.append(f"only {len(pts) // 2} ocean pairs sampled")
    return bad


def check_5(dom, imp, rng, stats):
    R = imp.rectified
    apexes = sorted(set(R.apexes))
    if not apexes:
        stats["skipped (no interior corners)"] += 1
        return []
    bad = []
    inside = points_in(R.contains, dom, 100, rng.randrange(10**9))
    pool = apexes + inside
    for _ in range(100):
        a, b = rng.choice(apexes), rng.choice(pool)
        x, y = imp.rect(a, b), imp.P(a, b)
        if x != y:
            bad.append(f"{a},{b}: rectified {x} != {y}")
    stats["pairs"] += 100
    return bad


def check_6(dom, pre, imp, found, stats):
    dp = diameter_preliminary(dom, pre)
    di = diameter_improved(dom, imp)
    cp = center_preliminary(dom, pre)
    ci = center_improved(dom, imp)
    found.update(diameter=di, center=ci)
    bad = []
    if dp.value != di.value:
        bad.append(f"diameter {dp.value} != {di.value}")
    if cp.radius != ci.radius:
        bad.append(f"radius {cp.radius} != {ci.radius}")
    return bad


EXPECTED_DIAMETER = {"unit-square": 2, "rect-3x1": 4, "rect-5x2": 7, "HOLE1": 20}
EXPECTED_CENTER = {
    "unit-square": (P("1/2", "1/2"), 1),
    "rect-3x1": (P("3/2", "1/2"), 2),
    "rect-5x2": (P("5/2", 1), mpq(7, 2)),
}


def check_7(name, dom, imp, found, rng, stats):
    r = found.get("diameter")
    if r is None:
        return ["no diameter (criterion 6 failed to run)"]
    bad = []
    S = sample_points(dom, 100, rng.randrange(10**9))
    T = sample_points(dom, 100, rng.randrange(10**9))
    worst = max(imp.P(s, t) for s in S for t in T)
    stats["pairs"] += len(S) * len(T)
    if worst > r.value:
        bad.append(f"a sampled pair is {worst} apart, above {r.value}")
    if imp.P(r.s, r.t) != r.value or oracle_dist(dom, r.s, r.t) != r.value:
        bad.append(f"witness {r.s},{r.t} is not {r.value} apart")
    if name in EXPECTED_DIAMETER and r.value != EXPECTED_DIAMETER[name]:
        bad.append(f"diameter {r.value}, expected {EXPECTED_DIAMETER[name]}")
    return bad


def check_8(name, dom, imp, found, rng, stats):
    c, r = found.get("center"), found.get("diameter")
    if c is None or r is None:
        return ["no center (criterion 6 failed to run)"]
    bad = []
    at_center = eval_R(dom, c.q, imp).value
    if at_center != c.radius:
        bad.append(f"R(q*) = {at_center} != radius {c.radius}")
    if not (r.value <= 2 * c.radius and c.radius <= r.value):
        bad.append(f"radius {c.radius} outside [diameter/2, diameter] for diameter {r.value}")
    corners = sorted({v for cell in imp.X.D.cells for v in cell.corners})
    for q in sample_points(dom, 1000, rng.randrange(10**9)):
        # the farthest corner is an exact lower bound on R(q); fall back to R(q) itself
        if max(imp.P(q, v) for v in corners) >= at_center:
            stats["by corner bound"] += 1
            continue
        stats["by eval_R"] += 1
        if eval_R(dom, q, imp).value < at_center:
            bad.append(f"R({q}) < R(q*)")
    if name in EXPECTED_CENTER:
        q, rad = EXPECTED_CENTER[name]
        if (c.q, c.radius) != (q, rad):
            bad.append(f"center {c.q} radius {c.radius}, expected {q} radius {rad}")
    return bad


def check_9(dom, imp, stats):
    S = imp.X.S
    g = S.graph
    h = dom.h
    bad = []
    want = 3 if h >= 2 else 2
    if h >= 1 and not all(g.degree(j) == want for j in g.junctions):
        bad.append(f"junction degrees {sorted(g.degree(j) for j in g.junctions)}")
    if h == 0 and g.node_count + g.edge_count:
        bad.append("corridor graph of a hole-free domain is not empty")
    hh = max(h, 1)
    for label, value, bound in [
        ("junctions + corridors", g.node_count + g.edge_count, STRUCT_C * hh),
        ("D_M cells", len(imp.X.DM.cells), STRUCT_C * hh * hh),
        ("core vertices", len(S.core_vertices), STRUCT_C * hh),
    ]:
        stats[f"max {label} / bound"] = max(stats[f"max {label} / bound"], mpq(value, bound))
        if value > bound:
            bad.append(f"{label} {value} > {bound}")
    return bad


def check_10(dom, imp, rng, stats):
    bad = []
    for A in imp.X.S.pockets:
        Ad = A.domain()
        vg = build_visgraph(Ad)
        pts = sample_points(Ad, 200, rng.randrange(10**9))
        for p, q in zip(pts[::2], pts[1::2]):
            if d_simple(Ad, p, q) != vg.dist(p, q):
                bad.append(f"pocket {A.id}: {p},{q}")
        stats["pocket pairs"] += len(pts) // 2
    return bad


def staircase_problems(count=1000, seed=0):
    rng = random.Random(seed)
    bad = []
    for _ in range(count):
        sx, sy = rng.choice((-1, 1)), rng.choice((-1, 1))
        path = [P(rng.randint(-50, 50), rng.randint(-50, 50))]
        for _ in range(rng.randint(1, 12)):
            dx, dy = mpq(rng.randint(0, 40), rng.randint(1, 8)), mpq(rng.randint(0, 40), rng.randint(1, 8))
            path.append(Point(path[-1].x + sx * dx, path[-1].y + sy * dy))
        if not is_monotone(path) or path_l1_length(path) != l1_dist(path[0], path[-1]):
            bad.append(f"staircase {path}")
    return bad


# ------------------------------------------------------------ the corpus pass


class Counter(dict):
    def __missing__(self, key):
        return 0


@pytest.fixture(scope="module")
def findings():
    problems = {k: [] for k in CRITERIA}
    stats = {k: Counter() for k in CRITERIA}
    problems[10].extend(staircase_problems())
    stats[10]["staircases"] = 1000
    for name in CORPUS:
        dom = domain(name)
        rng = random.Random(name)
        pre, imp = PairContext(dom, "preliminary"), PairContext(dom, "improved")
        found: dict = {}
        runs = [
            (1, lambda s: check_1(dom, pre.P.g, rng, s)),
            (2, lambda s: check_2(dom, pre, imp, rng, s)),
            (3, lambda s: check_3(dom, imp, rng, s)),
            (4, lambda s: check_4(dom, imp, rng, s)),
            (5, lambda s: check_5(dom, imp, rng, s)),
            (6, lambda s: check_6(dom, pre, imp, found, s)),
            (7, lambda s: check_7(name, dom, imp, found, rng, s)),
            (8, lambda s: check_8(name, dom, imp, found, rng, s)),
            (9, lambda s: check_9(dom, imp, s)),
            (10, lambda s: check_10(dom, imp, rng, s)),
        ]
        for k, run in runs:
            t0 = time.perf_counter()
            try:
                got = run(stats[k])
            except Exception:
                got = [f"raised {traceback.format_exc().splitlines()[-1]}"]
            stats[k]["seconds"] += time.perf_counter() - t0
            problems[k].extend(f"{name}: {p}" for p in got)
        stats[6]["fixtures"] += 1
    return problems, stats


def _stats_text(st):
    parts = []
    for key, value in st.items():
        if isinstance(value, float):
            value = f"{value:.0f}"
        elif not isinstance(value, int):
            value = f"{float(value):.2f}"
        parts.append(f"{key}={value}")
    return ", ".join(parts)


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, findings):
    problems, stats = findings
    bad = problems[k]
    line = f"criterion {k:2d} {'PASS' if not bad else 'FAIL'}: {CRITERIA[k]} [{len(CORPUS)} fixtures; {_stats_text(stats[k])}]"
    if bad:
        line += f" first problem: {bad[0]}"
    ACCEPTANCE_REPORT[k] = line
    print(line)
    assert not bad, "\n".join(bad[:20])
