"""Operator norms on l1/linf, orthogonal and minimal projections onto
subspaces of the edge space, group averaging, and Banach-Mazur bound
assembly.

Matrices act on coordinates indexed by a fixed basis order (edge ids or
grid cells).  Orthogonal projections and averages are exact over Q; the
minimal-projection LP runs in floats and the achieving operator is then
repaired to an exact rational projection for certification.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from . import linalg
from .errors import (GroupClosureOverflow, NotInvariantSubspace, SingularGram,
                     SolverFailure, ValidationError)
from .rational import ZERO

DEFAULT_GROUP_CAP = 10 ** 6


@dataclass
class ProjectionReport:
    operator: list                      # exact rational matrix
    range_basis: list                   # column vectors spanning the range
    norm_l1: Fraction
    norm_linf: Fraction
    is_projection: bool
    invariant_under: list = field(default_factory=list)
    label: str = ""

    def to_json(self) -> dict:
        from .rational import num_to_json
        return {
            "label": self.label,
            "dim": len(self.operator),
            "rank": len(self.range_basis),
            "norm_l1": num_to_json(self.norm_l1),
            "norm_linf": num_to_json(self.norm_linf),
            "is_projection": self.is_projection,
            "invariant_under": list(self.invariant_under),
            "operator": [[num_to_json(x) for x in row] for row in self.operator],
        }


def l1_norm(p) -> Fraction:
    """Operator norm l1 -> l1: maximum column absolute sum."""
    if not p:
        return ZERO
    return max(linalg.column_abs_sums(p))


def linf_norm(p) -> Fraction:
    """Operator norm linf -> linf: maximum row absolute sum."""
    if not p:
        return ZERO
    return max(linalg.row_abs_sums(p))


def orthogonal_projection(basis_cols: list) -> list:
    """P = B (B^T B)^{-1} B^T in exact rationals; basis given as columns.

    The formula is scale-invariant in the inner product, so the same matrix
    is the orthogonal projection for both the counting and the normalized
    (mean) inner products used on dyadic grids.
    """
    if not basis_cols:
        raise SingularGram("empty basis")
    m = len(basis_cols[0])
    b = [[col[i] for col in basis_cols] for i in range(m)]  # m x k
    bt = linalg.transpose(b)
    gram = linalg.mat_mul(bt, b)
    try:
        x = linalg.solve(gram, bt)  # k x m
    except SingularGram:
        raise SingularGram("basis columns are linearly dependent")
    return linalg.mat_mul(b, x)


def projection_onto_line(z: list) -> list:
    return orthogonal_projection([z])


def check_invariance(p, g) -> bool:
    """Whether P g = g P exactly."""
    return linalg.mat_eq(linalg.mat_mul(p, g), linalg.mat_mul(g, p))


def permutation_matrix(perm: list[int]) -> list:
    """Matrix of the isometry f -> f o g^{-1} for an index bijection g.

    perm[i] = g(i); the matrix has a 1 at (g(i), i).
    """
    n = len(perm)
    m = linalg.zeros(n, n)
    for i, gi in enumerate(perm):
        m[gi][i] = Fraction(1)
    return m


def generate_group(generators: list, cap: int = DEFAULT_GROUP_CAP) -> list:
    """Closure of a generator set of exact matrices under multiplication."""
    def key(mat):
        return tuple(tuple(row) for row in mat)

    n = len(generators[0])
    ident = linalg.identity(n)
    seen = {key(ident): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in generators:
                prod = linalg.mat_mul(a, g)
                k = key(prod)
                if k not in seen:
                    if len(seen) >= cap:
                        raise GroupClosureOverflow(f"group closure exceeds cap {cap}")
                    seen[k] = prod
                    nxt.append(prod)
        frontier = nxt
    return list(seen.values())


def average_projection(p: list, group_elements: list) -> list:
    """Grunbaum-Rudin average (1/|G|) sum g^{-1} P g.

    Requires each element to map range(P) onto itself (checked through
    P g P = g P); the caller must pass a full group, and then the average
    is a projection onto the same range, has no larger l1 norm, and
    commutes with every element.
    """
    for g in group_elements:
        gp = linalg.mat_mul(g, p)
        if not linalg.mat_eq(linalg.mat_mul(p, gp), gp):
            raise NotInvariantSubspace("a group element moves the range of P")
    n = len(p)
    acc = linalg.zeros(n, n)
    for g in group_elements:
        ginv = linalg.inverse(g)
        acc = linalg.mat_add(acc, linalg.mat_mul(ginv, linalg.mat_mul(p, g)))
    count = Fraction(len(group_elements))
    return [[x / count for x in row] for row in acc]


# ---------------------------------------------------------------------------
# Minimal projections
# ---------------------------------------------------------------------------

def _min_proj_lp_float(bcols: list):
    """LP: min t s.t. P = B A, A B = I, ||P e_j||_1 <= t, in floats.

    Variables are A (k x m), slack s >= |P| entrywise, and t.
    """
    m = len(bcols[0])
    k = len(bcols)
    bmat = np.array([[float(col[i]) for col in bcols] for i in range(m)])  # m x k
    na = k * m
    ns = m * m
    nv = na + ns + 1

    def a_idx(l, j):
        return l * m + j

    def s_idx(i, j):
        return na + i * m + j

    rows_eq = []
    rhs_eq = []
    for l in range(k):
        for lp in range(k):
            row = np.zeros(nv)
            for j in range(m):
                row[a_idx(l, j)] = bmat[j][lp]
            rows_eq.append(row)
            rhs_eq.append(1.0 if l == lp else 0.0)
    rows_ub = []
    rhs_ub = []
    for i in range(m):
        for j in range(m):
            row = np.zeros(nv)
            for l in range(k):
                row[a_idx(l, j)] = bmat[i][l]
            row[s_idx(i, j)] = -1.0
            rows_ub.append(row.copy())
            rhs_ub.append(0.0)
            row2 = -row
            row2[s_idx(i, j)] = -1.0
            rows_ub.append(row2)
            rhs_ub.append(0.0)
    for j in range(m):
        row = np.zeros(nv)
        for i in range(m):
            row[s_idx(i, j)] = 1.0
        row[-1] = -1.0
        rows_ub.append(row)
        rhs_ub.append(0.0)
    c = np.zeros(nv)
    c[-1] = 1.0
    bounds = [(None, None)] * na + [(0, None)] * ns + [(0, None)]
    res = linprog(c, A_ub=np.array(rows_ub), b_ub=np.array(rhs_ub),
                  A_eq=np.array(rows_eq), b_eq=np.array(rhs_eq),
                  bounds=bounds, method="highs")
    if not res.success:
        raise SolverFailure(f"minimal projection LP failed: {res.message}")
    a = [[res.x[a_idx(l, j)] for j in range(m)] for l in range(k)]
    return float(res.fun), a


def _rationalize_projection(bcols: list, a_float: list) -> list:
    """Repair a float left inverse A to an exact one and return P = B A.

    Round A entrywise, then subtract (A B - I) (B^T B)^{-1} B^T, which
    restores A B = I exactly without moving A far.
    """
    m = len(bcols[0])
    k = len(bcols)
    b = [[col[i] for col in bcols] for i in range(m)]
    a_rat = [[Fraction(x).limit_denominator(10 ** 9) for x in row] for row in a_float]
    err = linalg.mat_sub(linalg.mat_mul(a_rat, b), linalg.identity(k))
    bt = linalg.transpose(b)
    gram_inv_bt = linalg.solve(linalg.mat_mul(bt, b), bt)
    a_fixed = linalg.mat_sub(a_rat, linalg.mat_mul(err, gram_inv_bt))
    assert linalg.mat_eq(linalg.mat_mul(a_fixed, b), linalg.identity(k))
    return linalg.mat_mul(b, a_fixed)


def minimal_projection_lp(basis_cols: list, ambient_dim: int, mode: str = "float"):
    """Relative projection constant of span(basis) in l1^m and an optimal P.

    Returns (lambda, P) where P is an exact rational projection onto the
    span whose l1 norm is within LP tolerance of lambda.  mode='exact'
    solves the whole LP over Q (small instances only).
    """
    if not basis_cols or len(basis_cols[0]) != ambient_dim:
        raise ValidationError("basis does not match the ambient dimension")
    if mode == "exact":
        return _min_proj_exact(basis_cols)
    lam, a = _min_proj_lp_float(basis_cols)
    p = _rationalize_projection(basis_cols, a)
    exact_norm = l1_norm(p)
    if abs(float(exact_norm) - lam) > 1e-6:
        raise SolverFailure("rationalized projection norm drifted from the LP optimum")
    return lam, p


def _min_proj_exact(bcols: list):
    """Exact-simplex version of the minimal projection LP (tiny m only)."""
    from .simplex import solve_standard_exact

    m = len(bcols[0])
    k = len(bcols)
    b = [[col[i] for col in bcols] for i in range(m)]
    # variables: A+ (k*m), A- (k*m), s (m*m), t, slack per column-sum row (m)
    na = k * m
    ns = m * m
    nv = 2 * na + ns + 1 + m
    a_rows = []
    rhs = []

    def arow():
        return [ZERO] * nv

    for l in range(k):          # A B = I
        for lp in range(k):
            row = arow()
            for j in range(m):
                row[l * m + j] = b[j][lp]
                row[na + l * m + j] = -b[j][lp]
            a_rows.append(row)
            rhs.append(Fraction(1 if l == lp else 0))
    # P_ij - s_ij <= 0 and -P_ij - s_ij <= 0 become equalities with slack
    # folded into s: use s_ij = |P_ij| via two inequalities -> need slacks;
    # instead encode P_ij = u_ij - v_ij with u,v >= 0 and s = u + v.
    # Simpler exact encoding: P_ij = sum_l B_il A_lj, s_ij >= +-P_ij.
    extra = []
    for i in range(m):
        for j in range(m):
            for sign in (1, -1):
                row = arow()
                for l in range(k):
                    row[l * m + j] = sign * b[i][l]
                    row[na + l * m + j] = -sign * b[i][l]
                row[2 * na + i * m + j] = Fraction(-1)
                extra.append((row, ZERO))
    for j in range(m):
        row = arow()
        for i in range(m):
            row[2 * na + i * m + j] = Fraction(1)
        row[2 * na + ns] = Fraction(-1)
        row[2 * na + ns + 1 + j] = Fraction(1)
        a_rows.append(row)
        rhs.append(ZERO)
    # inequality rows from `extra` get their own slack variables
    n_extra = len(extra)
    total = nv + n_extra
    final_rows = []
    final_rhs = []
    for row, r in zip(a_rows, rhs):
        final_rows.append(row + [ZERO] * n_extra)
        final_rhs.append(r)
    for idx, (row, r) in enumerate(extra):
        slack = [ZERO] * n_extra
        slack[idx] = Fraction(1)
        final_rows.append(row + slack)
        final_rhs.append(r)
    cost = [ZERO] * total
    cost[2 * na + ns] = Fraction(1)
    val, x = solve_standard_exact(final_rows, final_rhs, cost)
    a_mat = [[x[l * m + j] - x[na + l * m + j] for j in range(m)] for l in range(k)]
    p = linalg.mat_mul(b, a_mat)
    return val, p


# ---------------------------------------------------------------------------
# Banach-Mazur bound assembly
# ---------------------------------------------------------------------------

def bm_lower_bound(lam):
    """Lower bound lambda - 1 on the distance from the quotient to l1.

    Contrapositive of the lifting property: a C-isomorphism of X/Y with l1
    forces a projection onto Y of norm at most 1 + C.
    """
    if isinstance(lam, float):
        if lam < 1 - 1e-9:
            raise ValidationError("projection constants are >= 1")
        return max(lam - 1.0, 0.0)
    lam = Fraction(lam)
    if lam < 1:
        raise ValidationError("projection constants are >= 1")
    return lam - 1


def bm_upper_via_basis_map(z_cols: list, t_matrix: list, preimages: list,
                           mode: str = "exact"):
    """||T|| ||T^{-1}|| for a basis map on the quotient by span(z_cols).

    t_matrix (N x m) must vanish on the cycle space, so it descends to the
    quotient; ||T|| is the max over unit coordinate vectors of ||T e||_1
    (the quotient map sends the unit ball onto the unit ball), and
    ||T^{-1}|| is the max quotient norm of the supplied preimages of the
    target unit vectors (one quotient-norm LP each).
    """
    from .simplex import min_l1_combination

    m = len(t_matrix[0])
    for z in z_cols:
        img = linalg.mat_vec(t_matrix, z)
        if any(v != 0 for v in img):
            raise ValidationError("T does not vanish on the given cycle space")
    t_norm = ZERO
    for j in range(m):
        col = [row[j] for row in t_matrix]
        t_norm = max(t_norm, sum((abs(v) for v in col), start=ZERO))
    tinv_norm = ZERO
    for w in preimages:
        val, _ = min_l1_combination(w, z_cols, mode=mode)
        tinv_norm = max(tinv_norm, val)
    return t_norm * tinv_norm, t_norm, tinv_norm
