"""Independent oracles used by the tests.

These deliberately avoid the code paths they check: the flow oracle
computes transportation norms on graphs from an edge-flow LP rather than
the bipartite transportation formulation, and the clipped-cone witness
certifies elementary-molecule norms with no LP at all.
"""

from fractions import Fraction

from freelip.metric import MetricSpace, Molecule
from freelip.graphs import TwoPoleGraph
from freelip.simplex import solve_standard_exact

ZERO = Fraction(0)


def flow_norm(g: TwoPoleGraph, m: Molecule) -> Fraction:
    """min sum |y_e| over edge flows with boundary m (exact LP).

    Independent of the transportation formulation: variables live on the
    graph's edges, constraints on its vertices.
    """
    verts = list(g.vertices)
    edges = list(g.edges)
    n, k = len(verts), len(edges)
    vidx = {v: i for i, v in enumerate(verts)}
    nvar = 2 * k  # y+, y-
    rows = []
    rhs = []
    for v in verts[:-1]:  # last vertex row is redundant (total mass 0)
        row = [ZERO] * nvar
        for j, e in enumerate(edges):
            if e.head == v:
                row[j] += 1
                row[k + j] -= 1
            if e.tail == v:
                row[j] -= 1
                row[k + j] += 1
        rows.append(row)
        rhs.append(m.coeffs.get(v, ZERO))
    cost = [Fraction(1)] * nvar
    value, _ = solve_standard_exact(rows, rhs, cost)
    return value


def clipped_witness_value(space: MetricSpace, p: str, q: str) -> Fraction:
    """Pair the molecule 1_p - 1_q with f = max(d(p,q) - d(., p), 0).

    The function is 1-Lipschitz, so the pairing certifies the norm from
    below; it evaluates to d(p, q).
    """
    dpq = space.d(p, q)
    f = {x: max(dpq - space.d(x, p), ZERO) for x in space.points}
    # check 1-Lipschitz explicitly
    pts = list(space.points)
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            assert abs(f[a] - f[b]) <= space.d(a, b)
    return f[p] - f[q]


def plan_is_valid(space: MetricSpace, m: Molecule, plan) -> bool:
    """Moves must realize the molecule: net outflow equals the coefficient."""
    net = {p: ZERO for p in space.points}
    cost = ZERO
    for p, q, mass in plan.moves:
        if mass <= 0:
            return False
        net[p] += mass
        net[q] -= mass
        cost += mass * space.d(p, q)
    for p in space.points:
        if net[p] != m.coeffs.get(p, ZERO):
            return False
    return cost == plan.cost
