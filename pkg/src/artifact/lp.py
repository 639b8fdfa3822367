"""Tiny exact linear programs over the rationals.

Problems have a handful of free variables and a few dozen inequality
constraints. We solve ``min c.x  s.t.  A x <= b`` through its dual in
standard form, ``min b.y  s.t.  A^T y = -c, y >= 0``, with a two-phase
tableau simplex and Bland's rule, so termination is guaranteed and every
number stays an exact rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

ZERO = mpq(0)
ONE = mpq(1)


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: list | None = None
    value: object = None
    duals: list | None = None

    @property
    def ok(self) -> bool:
        return self.status == "optimal"


def _pivot(T: list[list], r: int, c: int) -> None:
    row = T[r]
    inv = ONE / row[c]
    if inv != 1:
        T[r] = row = [v * inv for v in row]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                T[i] = [a - f * b if b else a for a, b in zip(other, row)]


def _simplex(T: list[list], basis: list[int], obj: list, allowed: int) -> str:
    """Minimize ``obj`` over the tableau; columns >= ``allowed`` never enter."""
    width = len(T[0]) - 1
    while True:
        # reduced cost of column j: obj_j - sum_i obj[basis_i] * T[i][j]
        cb = [obj[b] for b in basis]
        enter = -1
        for j in range(min(allowed, width)):
            if j in basis:
                continue
            rc = obj[j]
            for i, row in enumerate(T):
                if row[j] and cb[i]:
                    rc -= cb[i] * row[j]
            if rc < 0:
                enter = j
                break
        if enter < 0:
            return "optimal"
        leave = -1
        best = None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave < 0:
            return "unbounded"
        _pivot(T, leave, enter)
        basis[leave] = enter


def solve_gauss(rows: list[list], rhs: list) -> list | None:
    """Solve a consistent (possibly underdetermined) system; free variables set to zero."""
    if not rows:
        return []
    n = len(rows[0])
    M = [list(r) + [v] for r, v in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(M)) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = ONE / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    for i in range(r, len(M)):
        if M[i][-1]:
            return None
    x = [ZERO] * n
    for i, c in enumerate(pivots):
        x[c] = M[i][-1]
    return x


def solve_lp(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Minimize c.x subject to A x <= b with x free."""
    d = len(c)
    m = len(A)
    c = [mpq(v) for v in c]
    A = [[mpq(v) for v in row] for row in A]
    b = [mpq(v) for v in b]
    if m == 0:
        if any(c):
            return LPResult("unbounded")
        return LPResult("optimal", [ZERO] * d, ZERO, [])
    # dual rows: sum_j A[j][k] y_j = -c_k
    T = []
    for k in range(d):
        row = [A[j][k] for j in range(m)]
        rhs = -c[k]
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        art = [ZERO] * d
        art[k] = ONE
        T.append(row + art + [rhs])
    basis = [m + k for k in range(d)]
    phase1 = [ZERO] * m + [ONE] * d
    _simplex(T, basis, phase1, m + d)
    if sum((T[i][-1] for i, bi in enumerate(basis) if bi >= m), ZERO) > 0:
        # dual infeasible: primal is unbounded or infeasible; decide by a feasibility run
        feas = _feasible_point(A, b)
        return LPResult("unbounded" if feas is not None else "infeasible")
    # drive remaining artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= m:
            col = next((j for j in range(m) if T[i][j] and j not in basis), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, i, col)
            basis[i] = col
        i += 1
    T = [row[:m] + [row[-1]] for row in T]
    status = _simplex(T, basis, b, m)
    if status == "unbounded":
        return LPResult("infeasible")
    y = [ZERO] * m
    for i, bi in enumerate(basis):
        y[bi] = T[i][-1]
    x = solve_gauss([A[j] for j in basis], [b[j] for j in basis])
    if x is None:
        raise ArithmeticError("inconsistent basis system")
    value = sum((ci * xi for ci, xi in zip(c, x)), ZERO)
    return LPResult("optimal", x, value, y)


def _feasible_point(A: list[list], b: list) -> list | None:
    """Any x with A x <= b, or None; via min t s.t. A x - t <= b."""
    d = len(A[0])
    A2 = [row + [-ONE] for row in A] + [[ZERO] * d + [-ONE]]
    b2 = list(b) + [ZERO]
    # bounded below by t >= 0, always feasible: t large
    res = solve_lp([ZERO] * d + [ONE], A2, b2)
    if res.status != "optimal" or res.value > 0:
        return None
    return res.x[:d]


def maximize_min(terms: Sequence[tuple[Sequence, object]], A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Maximize min_i (g_i.x + h_i) over {A x <= b}.

    ``terms`` holds (g_i, h_i) pairs. The result's ``x`` has the epigraph
    variable appended; ``value`` is the optimum (sign already restored).
    """
    d = len(A[0]) if A else len(terms[0][0])
    rows = [list(row) + [ZERO] for row in A]
    rhs = list(b)
    for g, h in terms:
        rows.append([-mpq(v) for v in g] + [ONE])
        rhs.append(mpq(h))
    res = solve_lp([ZERO] * d + [-ONE], rows, rhs)
    if res.ok:
        res.value = -res.value
    return res


def minimize_max(terms: Sequence[tuple[Sequence, object]], A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Minimize max_i (g_i.x + h_i) over {A x <= b}."""
    d = len(A[0]) if A else len(terms[0][0])
    rows = [list(row) + [ZERO] for row in A]
    rhs = list(b)
    for g, h in terms:
        rows.append([mpq(v) for v in g] + [-ONE])
        rhs.append(-mpq(h))
    return solve_lp([ZERO] * d + [ONE], rows, rhs)
