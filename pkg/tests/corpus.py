"""Fixture corpus shared by the test modules.

The corpus is every named fixture plus ``ARTIFACT_GEN_PER_KIND`` generated
domains of each kind (default 20). Domains and pair contexts are built once
per test session.
"""

from __future__ import annotations

import functools
import os

from artifact.diameter import PairContext
from artifact.fixtures import NAMED, generate, named

KINDS = ("random-holes", "pinch", "comb")
GEN_PER_KIND = int(os.environ.get("ARTIFACT_GEN_PER_KIND", "20"))

NAMED_IDS = list(NAMED)
GEN_IDS = [f"{k}-{s}" for k in KINDS for s in range(GEN_PER_KIND)]
CORPUS = NAMED_IDS + GEN_IDS

# One constant for every structural count bound (O(h), O(h^2), O(n), O(n^2)),
# chosen once. D_M cell counts come out near (core vertex count)^2, about 48 h^2
# on the comb fixtures with h = 1.
STRUCT_C = 64

# one summary line per acceptance criterion, printed at the end of the run
ACCEPTANCE_REPORT: dict[int, str] = {}

# a quick cross-section used by the per-module tests
SMALL = ["unit-square", "L-shape", "HOLE1", "TWOHOLE", "CANAL1", "random-holes-0", "pinch-0", "comb-0"]
HOLED = ["HOLE1", "TWOHOLE", "CANAL1", "random-holes-0", "pinch-0", "comb-0"]


@functools.cache
def domain(name: str):
    if name in NAMED:
        return named(name)
    kind, seed = name.rsplit("-", 1)
    return generate(kind, int(seed))


@functools.cache
def context(name: str, route: str) -> PairContext:
    return PairContext(domain(name), route)
