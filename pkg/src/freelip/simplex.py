"""Linear programming backends: exact rational simplex and scipy floats.

The exact solver is a dense two-phase primal simplex over Fractions with
Dantzig pricing and a Bland fallback after an iteration threshold, which
guarantees termination.  It exists because the package certifies identities
(norm equalities, projection properties) that must hold exactly over Q;
float solves go through scipy's HiGHS backend.

Problem wrappers cover the three LP shapes used throughout: balanced
transportation (the earth-mover primal), max <m, f> under pairwise
Lipschitz constraints (the dual), and min ||x - Zc||_1 (quotient norms).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .errors import SolverFailure

ZERO = Fraction(0)
ONE = Fraction(1)

_BLAND_AFTER = 2000
_MAX_ITER = 200000


def _pivot(rows, cost, basis, r, c):
    piv = rows[r][c]
    if piv != 1:
        inv = ONE / piv
        rows[r] = [x * inv if x else x for x in rows[r]]
    prow = rows[r]
    for i, row in enumerate(rows):
        if i != r and row[c]:
            f = row[c]
            rows[i] = [x - f * y if y else x for x, y in zip(row, prow)]
    if cost[c]:
        f = cost[c]
        cost[:] = [x - f * y if y else x for x, y in zip(cost, prow)]
    basis[r] = c


def _run_simplex(rows, cost, basis, ncols):
    """Minimize; rows are [coeffs..., rhs], cost is [reduced costs..., -value]."""
    it = 0
    while True:
        it += 1
        if it > _MAX_ITER:
            raise SolverFailure("simplex iteration limit exceeded")
        entering = -1
        if it <= _BLAND_AFTER:
            best = ZERO
            for j in range(ncols):
                if cost[j] < best:
                    best = cost[j]
                    entering = j
        else:
            for j in range(ncols):
                if cost[j] < 0:
                    entering = j
                    break
        if entering < 0:
            return
        leaving = -1
        best_ratio = None
        for i, row in enumerate(rows):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                if best_ratio is None or ratio < best_ratio or (
                    ratio == best_ratio and basis[i] < basis[leaving]
                ):
                    best_ratio = ratio
                    leaving = i
        if leaving < 0:
            raise SolverFailure("LP is unbounded")
        _pivot(rows, cost, basis, leaving, entering)


def solve_standard_exact(a, b, c, basis=None):
    """min c.x  s.t.  a x = b, x >= 0, exactly over Q.

    Returns (optimal value, x as list of Fractions).  A known feasible
    basis (one column index per row, after rows with negative rhs are sign
    flipped) skips phase 1.  Raises SolverFailure if infeasible or
    unbounded.
    """
    m = len(a)
    n = len(c)
    rows = []
    for i in range(m):
        row = [Fraction(x) for x in a[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        row.append(rhs)
        rows.append(row)

    if basis is not None:
        basis = list(basis)
        cost = [ZERO] * (n + 1)
        for i in range(m):
            if rows[i][basis[i]] == 0:
                raise SolverFailure("supplied basis is singular")
            _pivot(rows, cost, basis, i, basis[i])
        if any(row[-1] < 0 for row in rows):
            raise SolverFailure("supplied basis is infeasible")
        cost = [Fraction(x) for x in c] + [ZERO]
        for i, bi in enumerate(basis):
            if cost[bi]:
                f = cost[bi]
                cost = [x - f * y if y else x for x, y in zip(cost, rows[i])]
        _run_simplex(rows, cost, basis, n)
        x = [ZERO] * n
        for i, bi in enumerate(basis):
            x[bi] = rows[i][-1]
        return -cost[-1], x

    # Phase 1: artificial variable per row.
    total = n + m
    for i, row in enumerate(rows):
        art = [ZERO] * m
        art[i] = ONE
        rows[i] = row[:n] + art + [row[-1]]
    basis = [n + i for i in range(m)]
    cost = [ZERO] * (total + 1)
    for i, row in enumerate(rows):
        for j in range(total + 1):
            cost[j] -= row[j]
    _run_simplex(rows, cost, basis, total)
    if -cost[-1] != 0:
        raise SolverFailure("LP infeasible (phase 1 optimum nonzero)")

    # Drive remaining artificials out of the basis where possible.
    for i in range(m):
        if basis[i] >= n:
            piv_col = next((j for j in range(n) if rows[i][j] != 0), None)
            if piv_col is not None:
                _pivot(rows, cost, basis, i, piv_col)
    keep = [i for i in range(m) if basis[i] < n]  # rows with basic artificial are redundant
    rows = [rows[i][:n] + [rows[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    # Phase 2.
    cost = [Fraction(x) for x in c] + [ZERO]
    for i, bi in enumerate(basis):
        if cost[bi]:
            f = cost[bi]
            cost = [x - f * y for x, y in zip(cost, rows[i])]
    _run_simplex(rows, cost, basis, n)
    x = [ZERO] * n
    for i, bi in enumerate(basis):
        x[bi] = rows[i][-1]
    return -cost[-1], x


def solve_standard_float(a, b, c):
    res = linprog(np.asarray(c, dtype=float),
                  A_eq=np.asarray(a, dtype=float),
                  b_eq=np.asarray(b, dtype=float),
                  bounds=(0, None), method="highs")
    if not res.success:
        raise SolverFailure(f"linprog failed: {res.message}")
    return float(res.fun), [float(v) for v in res.x]


# ---------------------------------------------------------------------------
# Problem wrappers
# ---------------------------------------------------------------------------

def transportation(cost, supply, demand, mode="exact"):
    """Balanced transportation: min sum c[i][j] p[i][j] with given marginals.

    Returns (value, plan) where plan is a dense matrix of the same shape.
    """
    ns, nd = len(supply), len(demand)
    if sum(supply) != sum(demand) and mode == "exact":
        raise SolverFailure("unbalanced transportation problem")
    nvar = ns * nd
    a = []
    b = []
    for i in range(ns):
        row = [ZERO] * nvar
        for j in range(nd):
            row[i * nd + j] = ONE
        a.append(row)
        b.append(supply[i])
    for j in range(nd - 1):  # last demand row is redundant
        row = [ZERO] * nvar
        for i in range(ns):
            row[i * nd + j] = ONE
        a.append(row)
        b.append(demand[j])
    cvec = [cost[i][j] for i in range(ns) for j in range(nd)]
    if mode == "exact":
        val, x = solve_standard_exact(a, b, cvec)
    else:
        val, x = solve_standard_float([[float(v) for v in row] for row in a],
                                      [float(v) for v in b],
                                      [float(v) for v in cvec])
    plan = [[x[i * nd + j] for j in range(nd)] for i in range(ns)]
    return val, plan


def min_l1_combination(x, zcols, mode="exact"):
    """min over c of || x - sum_i c_i z_i ||_1.

    zcols: list of column vectors, all of the same length as x.
    Returns (value, coefficients c).
    """
    m = len(x)
    k = len(zcols)
    if k == 0:
        val = sum(abs(Fraction(v)) for v in x)
        return (val if mode == "exact" else float(val)), []
    nvar = 2 * k + 2 * m  # c+, c-, u, v with x - Zc = u - v
    a = []
    for i in range(m):
        row = [ZERO] * nvar
        for j in range(k):
            zij = zcols[j][i]
            row[j] = zij
            row[k + j] = -zij
        row[2 * k + i] = ONE
        row[2 * k + m + i] = -ONE
        a.append(row)
    b = list(x)
    cvec = [ZERO] * (2 * k) + [ONE] * (2 * m)
    if mode == "exact":
        # u_i (or v_i when the rhs is negative) is an immediate feasible basis
        start = [2 * k + i if Fraction(x[i]) >= 0 else 2 * k + m + i for i in range(m)]
        val, sol = solve_standard_exact(a, b, cvec, basis=start)
    else:
        val, sol = solve_standard_float([[float(v) for v in row] for row in a],
                                        [float(v) for v in b],
                                        [float(v) for v in cvec])
    coeffs = [sol[j] - sol[k + j] for j in range(k)]
    return val, coeffs


def lipschitz_dual(dist, weights, base, mode="exact"):
    """max sum_p weights[p] f[p]  s.t.  f 1-Lipschitz w.r.t. dist, f[base] = 0.

    dist: n x n matrix, weights: length-n vector summing to zero.
    Returns (value, f values as a list).
    """
    n = len(weights)
    vs = [i for i in range(n) if i != base]
    pos = {v: j for j, v in enumerate(vs)}
    pairs = [(p, q) for p in range(n) for q in range(n) if p != q]
    nf = len(vs)
    nvar = 2 * nf + len(pairs)  # f+, f-, slack per ordered pair
    a = []
    b = []
    for s, (p, q) in enumerate(pairs):
        row = [ZERO] * nvar
        if p != base:
            j = pos[p]
            row[j] = ONE
            row[nf + j] = -ONE
        if q != base:
            j = pos[q]
            row[j] -= ONE
            row[nf + j] += ONE
        row[2 * nf + s] = ONE
        a.append(row)
        b.append(dist[p][q])
    cvec = [ZERO] * nvar
    for v in vs:
        j = pos[v]
        cvec[j] = -weights[v]
        cvec[nf + j] = weights[v]
    if mode == "exact":
        # f = 0 with all slacks basic is feasible (distances are nonnegative)
        start = [2 * nf + s for s in range(len(pairs))]
        val, sol = solve_standard_exact(a, b, cvec, basis=start)
    else:
        val, sol = solve_standard_float([[float(v) for v in row] for row in a],
                                        [float(v) for v in b],
                                        [float(v) for v in cvec])
    f = [ZERO if mode == "exact" else 0.0] * n
    for v in vs:
        f[v] = sol[pos[v]] - sol[nf + pos[v]]
    return -val, f
