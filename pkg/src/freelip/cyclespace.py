"""Cycle spaces of oriented graphs: signed indicators, fundamental bases,
the boundary map to molecules, quotient norms, and greedy cycle packing.

The edge space carries the l1 norm; the quotient of it by the cycle space
is isometric to the free space over the graph's vertices, which is the
identity the quotient-norm tests certify.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import simplex
from .errors import NotACycle, ValidationError
from .graphs import TwoPoleGraph
from .metric import Molecule
from .rational import ZERO, num_from_json, num_to_json


@dataclass(frozen=True)
class EdgeVector:
    """Rational-valued function on the edge set of a fixed graph."""

    graph: TwoPoleGraph
    coeffs: dict[str, Fraction]

    def __post_init__(self):
        clean = {}
        for eid, v in self.coeffs.items():
            if eid not in self.graph.edge_by_id:
                raise ValidationError(f"unknown edge id {eid!r}")
            if v != 0:
                clean[eid] = Fraction(v)
        object.__setattr__(self, "coeffs", clean)

    def __add__(self, other: "EdgeVector") -> "EdgeVector":
        if other.graph is not self.graph and other.graph != self.graph:
            raise ValidationError("edge vectors live on different graphs")
        out = dict(self.coeffs)
        for eid, v in other.coeffs.items():
            out[eid] = out.get(eid, ZERO) + v
        return EdgeVector(self.graph, out)

    def __neg__(self) -> "EdgeVector":
        return EdgeVector(self.graph, {e: -v for e, v in self.coeffs.items()})

    def __sub__(self, other: "EdgeVector") -> "EdgeVector":
        return self + (-other)

    def scale(self, c) -> "EdgeVector":
        c = Fraction(c)
        return EdgeVector(self.graph, {e: c * v for e, v in self.coeffs.items()})

    def l1(self) -> Fraction:
        return sum((abs(v) for v in self.coeffs.values()), start=ZERO)

    def get(self, eid: str) -> Fraction:
        return self.coeffs.get(eid, ZERO)

    def dense(self) -> list[Fraction]:
        out = [ZERO] * len(self.graph.edges)
        for eid, v in self.coeffs.items():
            out[self.graph.edge_order[eid]] = v
        return out

    def support(self) -> frozenset:
        return frozenset(self.coeffs)

    def permute(self, edge_map: dict[str, str]) -> "EdgeVector":
        """Image under the isometry induced by an edge bijection g:
        (g.x)(e) = x(g^{-1} e), i.e. the value at e moves to edge_map[e]."""
        return EdgeVector(self.graph, {edge_map[e]: v for e, v in self.coeffs.items()})

    def to_json(self) -> dict:
        return {"coeffs": {e: num_to_json(v) for e, v in sorted(self.coeffs.items())}}

    @staticmethod
    def from_json(graph: TwoPoleGraph, obj: dict) -> "EdgeVector":
        return EdgeVector(graph, {e: num_from_json(v) for e, v in obj["coeffs"].items()})


def from_dense(graph: TwoPoleGraph, values) -> EdgeVector:
    return EdgeVector(graph, {e.id: Fraction(v) for e, v in zip(graph.edges, values) if v != 0})


@dataclass(frozen=True)
class CycleBasis:
    vectors: tuple[EdgeVector, ...]
    provenance: str = "fundamental-tree"

    def __len__(self):
        return len(self.vectors)


def signed_indicator(cycle_edges: list[str], g: TwoPoleGraph) -> EdgeVector:
    """Signed indicator of a closed walk given as a sequence of edge ids.

    +1 where the walk direction agrees with the graph orientation, -1 where
    it disagrees.  The walk orientation is fixed by the first edge's own
    direction when that chains up, otherwise by its reverse.
    """
    if len(cycle_edges) < 3:
        raise NotACycle("a cycle needs at least three edges")
    if len(set(cycle_edges)) != len(cycle_edges):
        raise NotACycle("repeated edge in cycle")
    edges = []
    for eid in cycle_edges:
        e = g.edge_by_id.get(eid)
        if e is None:
            raise NotACycle(f"unknown edge id {eid!r}")
        edges.append(e)

    def chain(start):
        signs = {}
        cur = start
        for e in edges:
            if cur == e.tail:
                signs[e.id] = Fraction(1)
                cur = e.head
            elif cur == e.head:
                signs[e.id] = Fraction(-1)
                cur = e.tail
            else:
                return None
        return signs if cur == start else None

    signs = chain(edges[0].tail) or chain(edges[0].head)
    if signs is None:
        raise NotACycle("edge sequence is not a closed walk")
    return EdgeVector(g, signs)


def boundary(x: EdgeVector) -> Molecule:
    """Net inflow minus outflow at each vertex; kernel = cycle space."""
    coeffs: dict[str, Fraction] = {}
    for eid, v in x.coeffs.items():
        e = x.graph.edge_by_id[eid]
        coeffs[e.head] = coeffs.get(e.head, ZERO) + v
        coeffs[e.tail] = coeffs.get(e.tail, ZERO) - v
    return Molecule(coeffs)


def _spanning_tree(g: TwoPoleGraph):
    """Deterministic BFS tree from the bottom; returns (parent, parent_edge)."""
    parent = {g.bottom: None}
    parent_edge = {}
    frontier = [g.bottom]
    while frontier:
        nxt = []
        for u in frontier:
            for w in g.adjacency[u]:
                if w not in parent:
                    parent[w] = u
                    parent_edge[w] = g.edge_by_pair[frozenset((u, w))]
                    nxt.append(w)
        frontier = nxt
    return parent, parent_edge


def fundamental_cycle_basis(g: TwoPoleGraph) -> CycleBasis:
    """One cycle per non-tree edge of a BFS spanning tree.

    Each basis vector is +1 on its non-tree edge and +-1 along the tree
    path closing it, so the vectors are independent by construction and
    there are exactly |E| - |V| + 1 of them.
    """
    parent, parent_edge = _spanning_tree(g)
    tree_ids = {e.id for e in parent_edge.values()}

    def path_to_root(v):
        out = []
        while parent[v] is not None:
            out.append((parent_edge[v], v))
            v = parent[v]
        return out

    vectors = []
    for e in g.edges:
        if e.id in tree_ids:
            continue
        coeffs = {e.id: Fraction(1)}
        path_head = path_to_root(e.head)
        path_tail = path_to_root(e.tail)
        common = {pe.id for pe, _ in path_head} & {pe.id for pe, _ in path_tail}
        # head -> LCA: traversal runs child to parent
        for pe, child in path_head:
            if pe.id in common:
                break
            coeffs[pe.id] = Fraction(-1) if pe.head == child else Fraction(1)
        # LCA -> tail: traversal runs parent to child
        for pe, child in path_tail:
            if pe.id in common:
                break
            coeffs[pe.id] = Fraction(1) if pe.head == child else Fraction(-1)
        vectors.append(EdgeVector(g, coeffs))
    return CycleBasis(tuple(vectors), "fundamental-tree")


def fundamental_cycles_as_walks(g: TwoPoleGraph) -> list[list[str]]:
    """The fundamental cycles as ordered closed edge walks.

    Each walk starts with its non-tree edge (traversed tail to head) and
    closes through the tree: head up to the least common ancestor, then
    down to the tail.
    """
    parent, parent_edge = _spanning_tree(g)
    tree_ids = {e.id for e in parent_edge.values()}

    def path_to_root(v):
        out = []
        while parent[v] is not None:
            out.append(parent_edge[v])
            v = parent[v]
        return out

    walks = []
    for e in g.edges:
        if e.id in tree_ids:
            continue
        up = path_to_root(e.head)
        down = path_to_root(e.tail)
        common = {pe.id for pe in up} & {pe.id for pe in down}
        up = [pe for pe in up if pe.id not in common]
        down = [pe for pe in down if pe.id not in common]
        walks.append([e.id] + [pe.id for pe in up] + [pe.id for pe in reversed(down)])
    return walks


def mu(g: TwoPoleGraph) -> int:
    """Dimension of the cycle space of a connected graph."""
    value = len(g.edges) - len(g.vertices) + 1
    assert len(fundamental_cycle_basis(g).vectors) == value
    return value


def quotient_norm(x: EdgeVector, z: CycleBasis | None = None, mode: str = "exact"):
    """Distance from x to the cycle space in l1: min_c ||x - sum c_i z_i||_1.

    Equals the transportation norm of boundary(x) on the graph metric for
    unit-weight graphs.
    """
    if z is None:
        z = fundamental_cycle_basis(x.graph)
    cols = [v.dense() for v in z.vectors]
    xv = x.dense()
    if mode == "float":
        cols = [[float(a) for a in col] for col in cols]
        xv = [float(a) for a in xv]
    value, _ = simplex.min_l1_combination(xv, cols, mode=mode)
    return value


def _shortest_cycle_through(g_adj, edge, by_pair):
    """Shortest cycle through `edge` in the residual graph, as an edge id list."""
    u, v = edge.tail, edge.head
    # BFS from u to v avoiding the edge itself
    parent = {u: None}
    frontier = [u]
    while frontier and v not in parent:
        nxt = []
        for a in frontier:
            for b in sorted(g_adj.get(a, ())):
                if b == v and a == u:
                    continue  # skip the direct edge
                if b not in parent:
                    parent[b] = a
                    nxt.append(b)
        frontier = nxt
    if v not in parent:
        return None
    ids = [edge.id]
    cur = v
    while parent[cur] is not None:
        ids.append(by_pair[frozenset((cur, parent[cur]))].id)
        cur = parent[cur]
    return ids


def greedy_cycle_packing(g: TwoPoleGraph) -> list[list[str]]:
    """Edge-disjoint cycles by repeated shortest-cycle extraction.

    Deterministic: among shortest cycles the one through the
    lexicographically smallest edge id wins.  The count is a lower bound on
    the maximum packing; disjoint supports make the spanned subspace an
    isometric, 1-complemented copy of l1 of that dimension.
    """
    adj = {v: set(ws) for v, ws in g.adjacency.items()}
    by_pair = dict(g.edge_by_pair)
    alive = {e.id: e for e in g.edges}
    cycles = []
    while True:
        best = None
        for eid in sorted(alive):
            e = alive[eid]
            ids = _shortest_cycle_through(adj, e, by_pair)
            if ids is not None and (best is None or len(ids) < len(best)):
                best = ids
                if len(best) == 3:
                    break
        if best is None:
            return cycles
        cycles.append(best)
        for eid in best:
            e = alive.pop(eid)
            adj[e.tail].discard(e.head)
            adj[e.head].discard(e.tail)
            del by_pair[frozenset((e.tail, e.head))]


def up_down_decomposition(cycle_edges: list[str], g: TwoPoleGraph) -> bool:
    """Check that a cycle is one ascending and one descending run.

    Walking the cycle, the agreement pattern with the toward-top orientation
    must form exactly two contiguous sign blocks.
    """
    vec = signed_indicator(cycle_edges, g)
    signs = [vec.coeffs[eid] for eid in cycle_edges]
    changes = sum(1 for a, b in zip(signs, signs[1:] + signs[:1]) if a != b)
    return changes == 2
