"""Complemented near-l1 subspaces of free spaces on finite metric spaces:
the MST half-dimensional construction, the general selected-subset version
with its interpolation constant, mod-p layer selection, and the diamond
sharpenings.

Every report is certified computationally: the interpolation constant C is
an exact finite max, biorthogonality is checked exactly, and the projection
norm is evaluated on the extreme points of the free-space unit ball (the
normalized elementary molecules), whose images are supported on at most
four points and so cost one tiny transportation solve each.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (EmptyComplement, MinimalityViolated, PTooLarge,
                     ValidationError)
from .freenorm import ae_norm
from .graphs import Edge, TwoPoleGraph
from .metric import MetricSpace, Molecule, graph_metric
from .rational import ZERO


@dataclass
class EmbeddingReport:
    ys: list[str]
    partners: dict[str, str]            # y -> nearest complement point
    d_values: dict[str, Fraction]
    c_constant: Fraction                # interpolation constant, eq-(11) style
    lower_eq: Fraction                  # certified lower l1-equivalence bound
    upper_eq: Fraction                  # certified upper bound (always 1)
    proj_norm: Fraction | float | None  # computed over extreme points
    k: int

    def to_json(self) -> dict:
        from .rational import num_to_json

        def num(x):
            return x if isinstance(x, float) else num_to_json(x)

        return {"k": self.k, "ys": list(self.ys),
                "partners": dict(sorted(self.partners.items())),
                "d_values": {y: num(v) for y, v in sorted(self.d_values.items())},
                "C": num(self.c_constant),
                "lower_eq": num(self.lower_eq), "upper_eq": num(self.upper_eq),
                "proj_norm": None if self.proj_norm is None else num(self.proj_norm)}


def kruskal_mst(space: MetricSpace) -> TwoPoleGraph:
    """Minimum spanning tree by sorted edge insertion (union-find).

    Sorted processing guarantees the property the half-dimensional
    embedding needs: some shortest edge at every vertex joins the tree.
    Ties break lexicographically on the endpoint pair.
    """
    pts = list(space.points)
    if len(pts) < 2:
        raise ValidationError("need at least two points")
    pairs = sorted(
        (space.d(p, q), p, q)
        for i, p in enumerate(pts) for q in pts[i + 1:]
    )
    root = {p: p for p in pts}

    def find(p):
        while root[p] != p:
            root[p] = root[root[p]]
            p = root[p]
        return p

    edges = []
    for w, p, q in pairs:
        rp, rq = find(p), find(q)
        if rp != rq:
            root[rp] = rq
            edges.append(Edge(f"{p}--{q}", p, q, w))
            if len(edges) == len(pts) - 1:
                break
    return TwoPoleGraph(tuple(pts), tuple(edges), pts[-1], pts[0])


def _bipartition(tree: TwoPoleGraph) -> tuple[set, set]:
    color = {tree.vertices[0]: 0}
    frontier = [tree.vertices[0]]
    while frontier:
        nxt = []
        for u in frontier:
            for w in tree.adjacency[u]:
                if w not in color:
                    color[w] = 1 - color[u]
                    nxt.append(w)
        frontier = nxt
    side0 = {v for v, c in color.items() if c == 0}
    side1 = set(color) - side0
    return side0, side1


def interpolation_constant(space: MetricSpace, ys: list[str],
                           d_values: dict[str, Fraction]) -> Fraction:
    """max over pairs of (d_i + d_j) / d(y_i, y_j), floored at 1."""
    best = Fraction(1)
    for i, yi in enumerate(ys):
        for yj in ys[i + 1:]:
            ratio = (d_values[yi] + d_values[yj]) / space.d(yi, yj)
            if ratio > best:
                best = ratio
    return best


def apply_projection(ys: set, partners: dict[str, str], m: Molecule) -> Molecule:
    """P m = sum_i f_i(m) u_i; the d_i factors cancel, leaving
    sum over selected points of m(y) (1_y - 1_{partner(y)})."""
    out: dict[str, Fraction] = {}
    for y, v in m.coeffs.items():
        if y in ys:
            x = partners[y]
            out[y] = out.get(y, ZERO) + v
            out[x] = out.get(x, ZERO) - v
    return Molecule(out)


def projection_norm(space: MetricSpace, ys: list[str], partners: dict[str, str],
                    mode: str = "exact"):
    """Operator norm of P on the free space, exactly.

    The unit ball is the convex hull of normalized elementary molecules, so
    the norm is the max of ||P m_pq|| / d(p,q) over pairs; each image is
    supported on at most four points.
    """
    ys_set = set(ys)
    best = ZERO if mode == "exact" else 0.0
    pts = list(space.points)
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            if p not in ys_set and q not in ys_set:
                continue
            img = apply_projection(ys_set, partners, Molecule({p: 1, q: -1}))
            if img.is_zero():
                continue
            val, _ = ae_norm(space, img, mode=mode)
            ratio = val / (space.d(p, q) if mode == "exact" else float(space.d(p, q)))
            if ratio > best:
                best = ratio
    return best


def biorthogonality_matrix(space: MetricSpace, ys: list[str],
                           partners: dict[str, str]) -> list[list[Fraction]]:
    """Pairing matrix f_i(u_j) with f_i = d_i 1_{y_i} and
    u_j = (1_{y_j} - 1_{x_j}) / d_j; the identity matrix certifies
    biorthogonality."""
    d_values = {y: space.d(y, partners[y]) for y in ys}
    out = []
    for yi in ys:
        row = []
        for yj in ys:
            uj_at_yi = (Fraction(1 if yj == yi else 0)
                        - Fraction(1 if partners[yj] == yi else 0)) / d_values[yj]
            row.append(d_values[yi] * uj_at_yi)
        out.append(row)
    return out


def _build_report(space: MetricSpace, ys: list[str], partners: dict[str, str],
                  d_values: dict[str, Fraction], with_proj_norm: bool,
                  mode: str) -> EmbeddingReport:
    c = interpolation_constant(space, ys, d_values)
    proj = projection_norm(space, ys, partners, mode=mode) if with_proj_norm else None
    return EmbeddingReport(ys=list(ys), partners=dict(partners),
                           d_values=dict(d_values), c_constant=c,
                           lower_eq=Fraction(1) / c, upper_eq=Fraction(1),
                           proj_norm=proj, k=len(ys))


def half_dim_embedding(space: MetricSpace, with_proj_norm: bool = True,
                       mode: str = "exact") -> EmbeddingReport:
    """At-least-half-dimensional selection through the MST bipartition.

    The selected side's nearest partners are globally nearest neighbors
    (shortest-edge property of sorted insertion), which caps the
    interpolation constant at 2.
    """
    tree = kruskal_mst(space)
    side0, side1 = _bipartition(tree)
    if len(side0) > len(side1) or (len(side0) == len(side1)
                                   and min(side0) < min(side1)):
        chosen, other = side0, side1
    else:
        chosen, other = side1, side0
    ys = sorted(chosen)
    partners = {}
    d_values = {}
    for y in ys:
        best = min(sorted(other), key=lambda z: (space.d(y, z), z))
        partners[y] = best
        d_values[y] = space.d(y, best)
    report = _build_report(space, ys, partners, d_values, with_proj_norm, mode)
    if report.c_constant > 2:
        raise ValidationError("interpolation constant exceeded 2 on an MST selection")
    return report


def large_embedding(space: MetricSpace, ys: list[str],
                    with_proj_norm: bool = True, mode: str = "exact") -> EmbeddingReport:
    """Selected-subset embedding with nearest-complement partners."""
    complement = [p for p in space.points if p not in set(ys)]
    if not complement:
        raise EmptyComplement("selected set must have a nonempty complement")
    partners = {}
    d_values = {}
    for y in sorted(ys):
        best = min(complement, key=lambda z: (space.d(y, z), z))
        partners[y] = best
        d_values[y] = space.d(y, best)
    return _build_report(space, sorted(ys), partners, d_values, with_proj_norm, mode)


def lcdw_bounds(space: MetricSpace, ys: list[str], partners: dict[str, str],
                alphas: dict[str, Fraction]):
    """Exact Lipschitz constant of sum alpha_i f_i and its two-sided bounds.

    Preconditions: partners minimize the distance to the complement.
    Returns (lower, lip, upper) with lower = max |alpha|,
    upper = C max |alpha|.
    """
    ys_set = set(ys)
    complement = [p for p in space.points if p not in ys_set]
    if not complement:
        raise EmptyComplement("selected set must have a nonempty complement")
    d_values = {}
    for y in ys:
        dmin = min(space.d(y, z) for z in complement)
        if space.d(y, partners[y]) != dmin:
            raise MinimalityViolated(f"partner of {y!r} is not a nearest complement point")
        d_values[y] = dmin
    values = {p: ZERO for p in space.points}
    for y in ys:
        values[y] = Fraction(alphas.get(y, ZERO)) * d_values[y]
    lip = ZERO
    pts = list(space.points)
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            ratio = abs(values[p] - values[q]) / space.d(p, q)
            lip = max(lip, ratio)
    amax = max((abs(Fraction(a)) for a in alphas.values()), default=ZERO)
    c = interpolation_constant(space, list(ys), d_values)
    return amax, lip, c * amax


def mod_p_selection(graph: TwoPoleGraph, p: int) -> list[str]:
    """Keep the vertices outside the smallest distance-residue class.

    The origin is a diameter-achieving vertex; classes collect vertices by
    distance mod p.  Guarantees |Y| >= n (p-1)/p and partner distances at
    most 2p, hence an interpolation constant at most 4p.
    """
    if p < 2:
        raise ValidationError("p must be at least 2 (one class would be dropped empty)")
    space = graph_metric(graph)
    diam = space.diameter
    origin = min(v for v in space.points
                 if max(space.d(v, w) for w in space.points) == diam)
    if p > diam + 1:
        raise PTooLarge(f"p = {p} exceeds diameter + 1 = {diam + 1}")
    classes: dict[int, list[str]] = {i: [] for i in range(p)}
    for v in space.points:
        classes[int(space.d(origin, v)) % p].append(v)
    drop = min(range(p), key=lambda i: (len(classes[i]), i))
    ys = sorted(v for i in range(p) if i != drop for v in classes[i])
    return ys


def diamond_top_level(n: int, with_proj_norm: bool = True,
                      mode: str = "exact") -> EmbeddingReport:
    """Last-step vertices of the level-n diamond: an exactly isometric,
    norm-one complemented selection of dimension 2 * 4^(n-1)."""
    from .graphs import diamond

    if n < 1:
        raise ValidationError("n must be >= 1")
    g = diamond(n)
    space = graph_metric(g)
    ys = sorted(v for v in g.interior_vertices if v.count("/") == n - 1)
    if len(ys) != 2 * 4 ** (n - 1):
        raise ValidationError("unexpected last-step vertex count")
    partners = {}
    d_values = {}
    for y in ys:
        nb = min(g.adjacency[y])
        partners[y] = nb
        d_values[y] = space.d(y, nb)
    report = _build_report(space, ys, partners, d_values, with_proj_norm, mode)
    return report


def diamond_anm(n: int, m: int) -> list[str]:
    """Vertices added when the level-m diamond was created, inside level n.

    Size 2 * 4^(m-1).  Note that dropping only this set certifies the
    weaker constant 2^(n-m+1); see diamond_stage_net for the set that
    achieves 2^(n-m).
    """
    from .graphs import diamond

    if not (1 <= m < n):
        raise ValidationError("need 1 <= m < n")
    g = diamond(n)
    return sorted(v for v in g.interior_vertices if v.count("/") == m - 1)


def diamond_stage_net(n: int, m: int) -> list[str]:
    """All level-m diamond vertices inside the level-n diamond.

    Every copy of the (n-m)-fold diamond has both poles here, so every
    vertex lies within 2^(n-m-1) of the set and dropping it certifies the
    interpolation constant 2^(n-m).
    """
    from .graphs import diamond

    if not (1 <= m < n):
        raise ValidationError("need 1 <= m < n")
    g = diamond(n)
    net = [g.top, g.bottom]
    net.extend(v for v in g.interior_vertices if v.count("/") <= m - 1)
    return sorted(net)


def max_distance_to_set(graph: TwoPoleGraph, targets: list[str]) -> int:
    """Multi-source BFS eccentricity of a vertex set."""
    dist = {v: 0 for v in targets}
    frontier = list(targets)
    far = 0
    while frontier:
        nxt = []
        for u in frontier:
            for w in graph.adjacency[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    far = max(far, dist[w])
                    nxt.append(w)
        frontier = nxt
    if len(dist) != len(graph.vertices):
        raise ValidationError("target set does not reach the whole graph")
    return far
