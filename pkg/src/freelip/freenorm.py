"""Transportation norm of molecules: primal plans, dual Lipschitz
certificates, and the exact coordinate isometry on weighted trees.

The norm of a molecule is the optimal value of the balanced transportation
problem between its positive and negative parts over the metric; by
duality it equals the maximal pairing with a 1-Lipschitz function
vanishing at the basepoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import simplex
from .errors import NotATree, SolverFailure, ValidationError
from .graphs import TwoPoleGraph
from .metric import LipschitzFunction, MetricSpace, Molecule
from .rational import ZERO

FLOAT_PLAN_TOL = 1e-12


@dataclass(frozen=True)
class TransportPlan:
    """List of (source, sink, mass) moves realizing a molecule."""

    moves: tuple[tuple[str, str, Fraction], ...]
    cost: Fraction

    def to_json(self) -> dict:
        from .rational import num_to_json
        return {
            "moves": [[p, q, num_to_json(m)] for p, q, m in self.moves],
            "cost": num_to_json(self.cost),
        }


@dataclass(frozen=True)
class DualCertificate:
    f: LipschitzFunction
    value: Fraction

    def to_json(self) -> dict:
        from .rational import num_to_json
        return {"f": self.f.to_json(), "value": num_to_json(self.value)}


def _split(m: Molecule):
    pos = sorted((p, v) for p, v in m.coeffs.items() if v > 0)
    neg = sorted((p, -v) for p, v in m.coeffs.items() if v < 0)
    return pos, neg


def ae_norm(space: MetricSpace, m: Molecule, mode: str = "exact"):
    """Transportation norm of a molecule and an optimal plan.

    Only the support of m matters: the optimal coupling moves mass between
    support points directly (triangle inequality).  Exact mode keeps every
    number a Fraction; float mode goes through HiGHS.
    """
    for p in m.coeffs:
        if p not in space.points:
            raise ValidationError(f"molecule point {p!r} not in the space")
    pos, neg = _split(m)
    if not pos:
        return (ZERO if mode == "exact" else 0.0), TransportPlan((), ZERO)
    sources = [p for p, _ in pos]
    sinks = [q for q, _ in neg]
    cost = [[space.d(p, q) for q in sinks] for p in sources]
    supply = [v for _, v in pos]
    demand = [v for _, v in neg]
    if mode == "float":
        cost = [[float(x) for x in row] for row in cost]
        supply = [float(x) for x in supply]
        demand = [float(x) for x in demand]
    value, plan = simplex.transportation(cost, supply, demand, mode=mode)
    tol = 0 if mode == "exact" else FLOAT_PLAN_TOL
    moves = tuple(
        (sources[i], sinks[j], plan[i][j])
        for i in range(len(sources))
        for j in range(len(sinks))
        if plan[i][j] > tol
    )
    return value, TransportPlan(moves, value)


def lip_dual(space: MetricSpace, m: Molecule, basepoint: str | None = None,
             mode: str = "exact") -> DualCertificate:
    """Optimal 1-Lipschitz certificate: maximize sum f(p) m(p), f(O) = 0.

    The value equals ae_norm exactly in exact mode (LP strong duality over Q)
    and up to solver tolerance in float mode.
    """
    if basepoint is None:
        basepoint = space.basepoint or space.points[0]
    weights = [m.coeffs.get(p, ZERO) for p in space.points]
    if mode == "float":
        weights = [float(w) for w in weights]
        dist = [[float(x) for x in row] for row in space.dist]
    else:
        dist = [list(row) for row in space.dist]
    base = space.index(basepoint)
    value, f = simplex.lipschitz_dual(dist, weights, base, mode=mode)
    func = LipschitzFunction(dict(zip(space.points, f)), basepoint=basepoint)
    return DualCertificate(func, value)


# ---------------------------------------------------------------------------
# Weighted trees
# ---------------------------------------------------------------------------

def _check_tree(t: TwoPoleGraph):
    if len(t.edges) != len(t.vertices) - 1:
        raise NotATree(f"{len(t.edges)} edges on {len(t.vertices)} vertices")


def _rooted(t: TwoPoleGraph, root: str):
    """(parent, parent_edge) maps from a BFS rooting."""
    parent = {root: None}
    parent_edge = {}
    frontier = [root]
    while frontier:
        nxt = []
        for u in frontier:
            for w in t.adjacency[u]:
                if w not in parent:
                    parent[w] = u
                    parent_edge[w] = t.edge_by_pair[frozenset((u, w))]
                    nxt.append(w)
        frontier = nxt
    return parent, parent_edge


def tree_isometry(t: TwoPoleGraph, m: Molecule) -> dict[str, Fraction]:
    """Image of a molecule under the edge-coordinate isometry of a tree.

    Coordinate at edge f = w(f) times the net molecule mass in the subtree
    hanging below f; the l1 norm of the image equals the transportation
    norm exactly.
    """
    _check_tree(t)
    root = t.bottom
    parent, parent_edge = _rooted(t, root)
    order = sorted(parent, key=lambda v: -_depth(parent, v))  # leaves first
    sub = {v: m.coeffs.get(v, ZERO) for v in t.vertices}
    for v in order:
        p = parent[v]
        if p is not None:
            sub[p] += sub[v]
    return {e.id: e.weight * sub[v] for v, e in parent_edge.items()}


def _depth(parent, v):
    d = 0
    while parent[v] is not None:
        v = parent[v]
        d += 1
    return d


def tree_norm(t: TwoPoleGraph, m: Molecule) -> Fraction:
    image = tree_isometry(t, m)
    return sum((abs(x) for x in image.values()), start=ZERO)


def tree_lip_witness(t: TwoPoleGraph, signs: dict[str, int],
                     basepoint: str | None = None) -> LipschitzFunction:
    """1-Lipschitz function with prescribed +-w(e) increments along edges.

    signs maps edge id -> +1/-1: walking away from the basepoint across
    edge e, the value changes by signs[e] * w(e).  Pairs with the molecule
    carrying the matching sign pattern to give sum |a_e| w(e).
    """
    _check_tree(t)
    if basepoint is None:
        basepoint = t.bottom
    values = {basepoint: ZERO}
    frontier = [basepoint]
    while frontier:
        nxt = []
        for u in frontier:
            for w in t.adjacency[u]:
                if w not in values:
                    e = t.edge_by_pair[frozenset((u, w))]
                    s = signs.get(e.id, 1)
                    if s not in (1, -1):
                        raise ValidationError(f"sign for edge {e.id!r} must be +1 or -1")
                    values[w] = values[u] + s * e.weight
                    nxt.append(w)
        frontier = nxt
    return LipschitzFunction(values, basepoint=basepoint)


def primal_dual_gap(space: MetricSpace, m: Molecule, mode: str = "exact"):
    """Convenience: (primal value, dual value, gap) at the given mode."""
    primal, _ = ae_norm(space, m, mode=mode)
    dual = lip_dual(space, m, mode=mode).value
    gap = primal - dual
    if mode == "exact" and gap != 0:
        raise SolverFailure(f"exact duality gap is {gap}, expected 0")
    return primal, dual, gap
