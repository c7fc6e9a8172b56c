"""Structure theory of recursive two-pole families: base-graph profiles,
the seven admissibility conditions, the copy-averaged embedding, recursive
cycle-space bases, annihilation checks for invariant projections, the
norm-growth witness construction, and the non-unique invariant projection
on the level-2 Laakso graph.

Witness vectors live on graphs whose edge count grows like |E(B)|^n, far
past what a dense vector can hold, so they are kept as short sums of
elementary tensor products of base-graph vectors (one factor per recursion
level).  Exact l1 norms of such sums come from a level-by-level dynamic
program over deduplicated coefficient states.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg, projections
from .cyclespace import EdgeVector, boundary, fundamental_cycle_basis
from .errors import (GraphMismatch, NoVerticalAutomorphism, NotInvariant,
                     OddGeodesic, ResourceLimit, TrivialCycleSpace,
                     ValidationError)
from .graphs import (TwoPoleGraph, automorphism_search, compose,
                     edge_map_from_vertex_map, laakso, laakso_base,
                     recursive_family)
from .metric import graph_metric
from .rational import ZERO

GEODESIC_CAP = 10 ** 5
MATERIALIZE_CAP = 2 * 10 ** 5


# ---------------------------------------------------------------------------
# Base-graph profile
# ---------------------------------------------------------------------------

@dataclass
class BaseGraphProfile:
    graph: TwoPoleGraph
    height: int                       # bottom-top distance D
    geodesic_count: int               # K
    geodesics: list[list[str]]        # edge-id walks bottom -> top
    delta: EdgeVector                 # averaged geodesic indicator, norm 1
    c: EdgeVector                     # signed delta: + on top half, - on bottom half
    d: EdgeVector                     # (1/D) 1_p - delta for the maximizing geodesic
    alpha: Fraction                   # ||d||_1
    vertical: dict                    # pole-swapping vertex automorphism fixing Z
    vertical_edges: dict              # induced edge bijection
    horizontals: list[dict]           # all pole-fixing vertex automorphisms


def enumerate_geodesics(g: TwoPoleGraph, cap: int = GEODESIC_CAP) -> list[list[str]]:
    """All bottom-top geodesics as edge-id walks (distance-pruned DFS)."""
    space = graph_metric(g)
    out: list[list[str]] = []

    def extend(v, walk):
        if v == g.top:
            out.append(list(walk))
            if len(out) > cap:
                raise ResourceLimit("geodesic enumeration cap exceeded")
            return
        for w in g.adjacency[v]:
            if space.d(w, g.top) == space.d(v, g.top) - 1:
                walk.append(g.edge_by_pair[frozenset((v, w))].id)
                extend(w, walk)
                walk.pop()

    extend(g.bottom, [])
    out.sort()
    return out


def profile_base(b: TwoPoleGraph) -> BaseGraphProfile:
    """Compute D, K, delta, c, d, alpha and the distinguished automorphisms."""
    space = graph_metric(b)
    height = space.d(b.bottom, b.top)
    if height % 2 != 0:
        raise OddGeodesic(f"bottom-top distance {height} is odd")
    geos = enumerate_geodesics(b)
    k = len(geos)

    coeffs: dict[str, Fraction] = {}
    unit = Fraction(1, height * k)
    for walk in geos:
        for eid in walk:
            coeffs[eid] = coeffs.get(eid, ZERO) + unit
    delta = EdgeVector(b, coeffs)
    uncovered = [e.id for e in b.edges if e.id not in coeffs]
    if uncovered:
        raise ValidationError(f"edges not on any bottom-top geodesic: {uncovered}")

    half = height // 2
    c_coeffs = {}
    for eid, v in coeffs.items():
        e = b.edge_by_id[eid]
        tail_level = space.d(b.bottom, e.tail)
        c_coeffs[eid] = v if tail_level >= half else -v
    c_vec = EdgeVector(b, c_coeffs)

    basis = fundamental_cycle_basis(b)
    vertical = None
    vertical_edges = None
    for sigma in automorphism_search(b, "swap-poles"):
        emap = edge_map_from_vertex_map(b, sigma)
        if all(z.permute(emap) == z for z in basis.vectors):
            vertical, vertical_edges = sigma, emap
            break
    if vertical is None:
        raise NoVerticalAutomorphism("no pole swap fixes the cycle space pointwise")

    horizontals = automorphism_search(b, "fix-poles")

    best = None
    inv_height = Fraction(1, height)
    for walk in geos:
        w = {eid: -v for eid, v in coeffs.items()}
        for eid in walk:
            w[eid] = w.get(eid, ZERO) + inv_height
        vec = EdgeVector(b, w)
        key = (-vec.l1(), tuple(walk))
        if best is None or key < best[0]:
            best = (key, vec)
    d_vec = best[1]
    alpha = d_vec.l1()
    if alpha == 0:
        raise TrivialCycleSpace("only one bottom-top geodesic; d(B) vanishes")
    return BaseGraphProfile(b, height, k, geos, delta, c_vec, d_vec, alpha,
                            vertical, vertical_edges, horizontals)


def _all_bottom_top_paths(g: TwoPoleGraph, cap: int = GEODESIC_CAP):
    """All simple bottom-top paths (any length), as vertex lists."""
    out = []

    def extend(v, seen, walk):
        if v == g.top:
            out.append(list(walk))
            if len(out) > cap:
                raise ResourceLimit("path enumeration cap exceeded")
            return
        for w in g.adjacency[v]:
            if w not in seen:
                seen.add(w)
                walk.append(w)
                extend(w, seen, walk)
                walk.pop()
                seen.discard(w)

    extend(g.bottom, {g.bottom}, [g.bottom])
    return out


def check_conditions(b: TwoPoleGraph) -> dict:
    """Per-item report on the seven base-graph conditions.

    Each entry carries a boolean and, where useful, a witness or
    counterexample.
    """
    from .cyclespace import fundamental_cycles_as_walks, up_down_decomposition

    space = graph_metric(b)
    height = space.d(b.bottom, b.top)
    report: dict[str, dict] = {}

    paths = _all_bottom_top_paths(b)
    lengths = sorted({len(p) - 1 for p in paths})
    geos = enumerate_geodesics(b)
    covered = {eid for walk in geos for eid in walk}
    item1_ok = lengths == [height] and height % 2 == 0 and len(covered) == len(b.edges)
    report["1_even_geodesics"] = {
        "ok": item1_ok,
        "height": height,
        "path_lengths": lengths,
        "uncovered_edges": sorted(e.id for e in b.edges if e.id not in covered),
    }

    oriented = all(space.d(e.head, b.top) < space.d(e.tail, b.top) for e in b.edges)
    walks = fundamental_cycles_as_walks(b)
    two_blocks = all(up_down_decomposition(w, b) for w in walks)
    report["2_orientation_updown"] = {"ok": oriented and two_blocks,
                                      "oriented_toward_top": oriented,
                                      "cycles_two_blocks": two_blocks}

    swaps = automorphism_search(b, "swap-poles")
    report["3_vertical_exists"] = {"ok": bool(swaps), "count": len(swaps)}

    basis = fundamental_cycle_basis(b)
    fixing = []
    for sigma in swaps:
        emap = edge_map_from_vertex_map(b, sigma)
        if all(z.permute(emap) == z for z in basis.vectors):
            fixing.append(sigma)
    report["4_vertical_fixes_cycles"] = {"ok": bool(fixing) or not basis.vectors,
                                         "count": len(fixing)}

    try:
        prof = profile_base(b)
        delta_ok = prof.delta.l1() == 1
        vc = prof.c.permute(prof.vertical_edges)
        report["5_delta_and_c"] = {"ok": delta_ok and vc == -prof.c,
                                   "delta_norm_one": delta_ok,
                                   "v_negates_c": vc == -prof.c}
    except (OddGeodesic, NoVerticalAutomorphism, TrivialCycleSpace, ValidationError) as exc:
        prof = None
        report["5_delta_and_c"] = {"ok": False, "error": str(exc)}

    horizontals = automorphism_search(b, "fix-poles")
    if basis.vectors:
        rows = []
        dense = [z.dense() for z in basis.vectors]
        for sigma in horizontals:
            emap = edge_map_from_vertex_map(b, sigma)
            moved = [z.permute(emap).dense() for z in basis.vectors]
            for i in range(len(b.edges)):
                rows.append([moved[j][i] - dense[j][i] for j in range(len(dense))])
        fixed_dim = len(dense) - linalg.rank(rows) if rows else len(dense)
    else:
        fixed_dim = 0
    c_fixed = prof is not None and all(
        prof.c.permute(edge_map_from_vertex_map(b, sigma)) == prof.c
        for sigma in horizontals)
    report["6_horizontal_group"] = {"ok": fixed_dim == 0 and c_fixed,
                                    "fixed_subspace_dim": fixed_dim,
                                    "c_fixed_by_all": c_fixed,
                                    "group_order": len(horizontals)}

    nontrivial = len(geos) >= 2
    report["7_nontrivial_cycles"] = {"ok": nontrivial,
                                     "geodesic_count": len(geos),
                                     "alpha": prof.alpha if prof else None}
    report["all_ok"] = all(v["ok"] for k, v in report.items() if k != "all_ok")
    return report


# ---------------------------------------------------------------------------
# The copy-averaged embedding E_n and the recursive basis S_n
# ---------------------------------------------------------------------------

def embed_E(x: EdgeVector, profile: BaseGraphProfile,
            target: TwoPoleGraph | None = None) -> EdgeVector:
    """Isometric embedding: each edge indicator becomes delta on its copy."""
    source = x.graph
    if target is None:
        target = compose(source, profile.graph)
    out: dict[str, Fraction] = {}
    for eid, v in x.coeffs.items():
        for fid, dv in profile.delta.coeffs.items():
            nid = f"{eid}/{fid}" if eid else fid
            if nid not in target.edge_by_id:
                raise GraphMismatch(f"edge {nid!r} missing from the target graph")
            out[nid] = v * dv
    return EdgeVector(target, out)


def delta_power(profile: BaseGraphProfile, m: int) -> dict[str, Fraction]:
    """Delta_m on the m-fold composition, keyed by slash-joined edge ids."""
    out = {"": Fraction(1)}
    for _ in range(m):
        nxt = {}
        for prefix, v in out.items():
            for fid, dv in profile.delta.coeffs.items():
                nxt[f"{prefix}/{fid}" if prefix else fid] = v * dv
        out = nxt
    return out


@dataclass
class RecursiveBasis:
    level: int
    type_one: list[EdgeVector]
    type_two: list[EdgeVector]

    @property
    def vectors(self) -> list[EdgeVector]:
        return self.type_one + self.type_two

    def __len__(self):
        return len(self.type_one) + len(self.type_two)


def basis_S(profile: BaseGraphProfile, n: int,
            graph: TwoPoleGraph | None = None) -> RecursiveBasis:
    """The recursive cycle-space basis: per-copy lower bases plus lifts of
    the level-1 basis carried on delta replicas."""
    if n < 1:
        raise ValidationError("basis is defined for n >= 1")
    b = profile.graph
    if graph is None:
        graph = recursive_family(b, n)
    if len(graph.edges) != len(b.edges) ** n:
        raise GraphMismatch("graph does not match the requested level")
    s1 = fundamental_cycle_basis(recursive_family(b, 1)).vectors
    if n == 1:
        return RecursiveBasis(1, [], [EdgeVector(graph, dict(z.coeffs)) for z in s1])
    lower_graph = recursive_family(b, n - 1)
    lower = basis_S(profile, n - 1, lower_graph)
    type_one = []
    for e in b.edges:
        for w in lower.vectors:
            type_one.append(EdgeVector(
                graph, {f"{e.id}/{sid}": v for sid, v in w.coeffs.items()}))
    dpow = delta_power(profile, n - 1)
    type_two = []
    for f in s1:
        coeffs = {}
        for eid, fv in f.coeffs.items():
            for suffix, dv in dpow.items():
                coeffs[f"{eid}/{suffix}"] = fv * dv
        type_two.append(EdgeVector(graph, coeffs))
    return RecursiveBasis(n, type_one, type_two)


def vertical_automorphism(profile: BaseGraphProfile, n: int) -> dict[str, str]:
    """Edge bijection of the level-n graph: the base pole swap applied
    coordinatewise to every id segment."""
    if n < 0:
        raise ValidationError("level must be >= 0")
    b = profile.graph
    ids = itertools.product(*( [sorted(e.id for e in b.edges)] * n ))
    vmap = profile.vertical_edges
    out = {}
    for tup in ids:
        eid = "/".join(tup)
        out[eid] = "/".join(vmap[seg] for seg in tup)
    return out


def vertical_vertex_map(profile: BaseGraphProfile, n: int,
                        graph: TwoPoleGraph) -> dict[str, str]:
    """Vertex form of the level-n vertical automorphism."""
    b = profile.graph
    vmap_v = profile.vertical
    vmap_e = profile.vertical_edges
    out = {}
    for v in graph.vertices:
        if v == graph.top:
            out[v] = graph.bottom
        elif v == graph.bottom:
            out[v] = graph.top
        else:
            *prefix, w = v.split("/")
            mapped = [vmap_e[seg] for seg in prefix]
            out[v] = "/".join(mapped + [vmap_v[w]])
    return out


# ---------------------------------------------------------------------------
# Invariance generators and the annihilation check
# ---------------------------------------------------------------------------

def invariance_generators(profile: BaseGraphProfile, n: int,
                          graph: TwoPoleGraph) -> dict[str, dict[str, str]]:
    """Named edge bijections: the vertical automorphism plus every
    horizontal applied inside every copy at every depth."""
    b = profile.graph
    gens: dict[str, dict[str, str]] = {}
    gens["v"] = vertical_automorphism(profile, n)
    nontrivial = [s for s in profile.horizontals
                  if any(s[v] != v for v in b.vertices)]
    base_ids = sorted(e.id for e in b.edges)
    for gi, sigma in enumerate(nontrivial):
        emap = edge_map_from_vertex_map(b, sigma)
        for depth in range(1, n + 1):
            for prefix in itertools.product(*([base_ids] * (depth - 1))):
                pref = "/".join(prefix)

                def apply(eid, emap=emap, depth=depth, pref=pref):
                    segs = eid.split("/")
                    if "/".join(segs[:depth - 1]) != pref:
                        return eid
                    segs[depth - 1] = emap[segs[depth - 1]]
                    return "/".join(segs)

                name = f"h{gi}@{pref}" if pref else f"h{gi}"
                gens[name] = {e.id: apply(e.id) for e in graph.edges}
    return gens


def edge_map_matrix(graph: TwoPoleGraph, emap: dict[str, str]) -> list:
    order = graph.edge_order
    perm = [0] * len(graph.edges)
    for eid, img in emap.items():
        perm[order[eid]] = order[img]
    return projections.permutation_matrix(perm)


def c_type_vectors(profile: BaseGraphProfile, n: int,
                   graph: TwoPoleGraph) -> list[EdgeVector]:
    """All c(B_1)-type vectors in the level-n graph: c on a level-1 copy,
    spread by delta replicas over copies of every level m <= n."""
    b = profile.graph
    base_ids = sorted(e.id for e in b.edges)
    out = []
    for m in range(1, n + 1):
        dpow = delta_power(profile, m - 1)
        for prefix in itertools.product(*([base_ids] * (n - m))):
            pref = "/".join(prefix)
            coeffs = {}
            for fid, cv in profile.c.coeffs.items():
                stem = f"{pref}/{fid}" if pref else fid
                for suffix, dv in dpow.items():
                    eid = f"{stem}/{suffix}" if suffix else stem
                    coeffs[eid] = cv * dv
            out.append(EdgeVector(graph, coeffs))
    return out


def annihilation_check(p: list, profile: BaseGraphProfile, n: int,
                       graph: TwoPoleGraph) -> dict:
    """Verify that a projection invariant under the generator set kills
    every c-type vector exactly.

    Raises NotInvariant if the supplied operator fails the invariance
    precondition for some generator.
    """
    gens = invariance_generators(profile, n, graph)
    for name, emap in gens.items():
        gmat = edge_map_matrix(graph, emap)
        if not projections.check_invariance(p, gmat):
            raise NotInvariant(f"projection does not commute with generator {name}")
    vectors = c_type_vectors(profile, n, graph)
    failures = []
    for i, f in enumerate(vectors):
        img = linalg.mat_vec(p, f.dense())
        if any(v != 0 for v in img):
            failures.append(i)
    return {"generators_checked": sorted(gens),
            "c_type_count": len(vectors),
            "all_annihilated": not failures,
            "failures": failures}


# ---------------------------------------------------------------------------
# The norm-growth witness
# ---------------------------------------------------------------------------

@dataclass
class TensorVector:
    """Sum of elementary tensor products of base-edge vectors.

    terms: list of (coefficient, tuple of factor vectors), each factor a
    tuple of Fractions over the base edge order; level = number of factors.
    """

    base: TwoPoleGraph
    terms: list[tuple[Fraction, tuple[tuple[Fraction, ...], ...]]]

    @property
    def level(self) -> int:
        return len(self.terms[0][1]) if self.terms else 0

    def append_factor(self, factor) -> "TensorVector":
        return TensorVector(self.base,
                            [(c, fs + (factor,)) for c, fs in self.terms])

    def __add__(self, other: "TensorVector") -> "TensorVector":
        return TensorVector(self.base, self.terms + other.terms)

    def l1(self) -> Fraction:
        """Exact l1 norm by a level-wise DP over coefficient states."""
        if not self.terms:
            return ZERO
        m = self.level
        nterms = len(self.terms)
        nedges = len(self.base.edges)
        states = {tuple(c for c, _ in self.terms): 1}
        for pos in range(m):
            cols = []
            for e in range(nedges):
                cols.append(tuple(fs[pos][e] for _, fs in self.terms))
            nxt: dict[tuple, int] = {}
            for state, count in states.items():
                for col in cols:
                    ns = tuple(s * c for s, c in zip(state, col))
                    if any(ns):
                        nxt[ns] = nxt.get(ns, 0) + count
            states = nxt
        total = ZERO
        for state, count in states.items():
            total += count * abs(sum(state))
        return total

    def materialize(self, graph: TwoPoleGraph) -> EdgeVector:
        """Flat edge vector; only for graphs under the materialization cap."""
        if len(graph.edges) > MATERIALIZE_CAP:
            raise ResourceLimit("witness vector too large to materialize")
        ids = sorted(e.id for e in self.base.edges)
        order = {eid: i for i, eid in enumerate(ids)}
        coeffs: dict[str, Fraction] = {}
        for c, fs in self.terms:
            partial = {"": c}
            for factor in fs:
                nxt = {}
                for prefix, v in partial.items():
                    for eid in ids:
                        fv = factor[order[eid]]
                        if fv and v:
                            nxt[f"{prefix}/{eid}" if prefix else eid] = v * fv
                partial = nxt
            for eid, v in partial.items():
                coeffs[eid] = coeffs.get(eid, ZERO) + v
        return EdgeVector(graph, {k: v for k, v in coeffs.items() if v != 0})


@dataclass
class WitnessResult:
    base: TwoPoleGraph
    r: int
    level: int
    t_schedule: list[int]
    norm_c: Fraction
    norm_sum: Fraction
    alpha: Fraction
    c_vector: TensorVector
    sum_vector: TensorVector          # C_r + A_r (a single elementary tensor)

    @property
    def a_vector(self) -> TensorVector:
        neg = TensorVector(self.base, [(-c, fs) for c, fs in self.c_vector.terms])
        return self.sum_vector + neg

    def to_json(self) -> dict:
        from .rational import num_to_json
        return {"r": self.r, "level": self.level,
                "t_schedule": list(self.t_schedule),
                "alpha": num_to_json(self.alpha),
                "norm_C": num_to_json(self.norm_c),
                "norm_sum": num_to_json(self.norm_sum)}


def _base_vector_tuple(profile: BaseGraphProfile, vec: EdgeVector):
    ids = sorted(e.id for e in profile.graph.edges)
    return tuple(vec.coeffs.get(eid, ZERO) for eid in ids)


def witness(profile: BaseGraphProfile, r: int,
            t_schedule: list[int] | None = None,
            level_cap: int = 40) -> WitnessResult:
    """Inductive construction of C_r and A_r with ||C_r + A_r|| = 1 and
    ||C_r|| >= 1 + alpha (r-1)/2.

    Each round applies the copy-averaged embedding t times with c-type
    corrections (keeping the sum of norms at 1 while halving the overlap),
    then one d-type correction that adds alpha to the cycle part.  The
    minimal t makes ||C_r|| / 2^t < alpha / 4; a caller-supplied schedule
    may only force larger t.
    """
    if r < 1:
        raise ValidationError("r must be >= 1")
    b = profile.graph
    s1 = fundamental_cycle_basis(recursive_family(b, 1)).vectors
    if not s1:
        raise TrivialCycleSpace("base has no cycles")
    s = s1[0]
    s = s.scale(Fraction(1) / s.l1())
    sv = _base_vector_tuple(profile, s)
    delta = _base_vector_tuple(profile, profile.delta)
    u = _base_vector_tuple(profile, profile.delta + profile.c)
    dcorr = _base_vector_tuple(profile, profile.d)
    rho = _base_vector_tuple(profile, profile.delta + profile.d)

    c_vec = TensorVector(b, [(Fraction(1), (sv,))])
    p_vec = TensorVector(b, [(Fraction(1), (sv,))])
    level = 1
    used_t = []
    for step in range(r - 1):
        norm_c = c_vec.l1()
        t = 1
        while Fraction(norm_c, 2 ** t) >= profile.alpha / 4:
            t += 1
        if t_schedule is not None and step < len(t_schedule):
            if t_schedule[step] < t:
                raise ValidationError(f"scheduled t={t_schedule[step]} below the minimum {t}")
            t = t_schedule[step]
        for _ in range(t):
            c_vec = c_vec.append_factor(delta)
            p_vec = p_vec.append_factor(u)
        new_c_term = p_vec.append_factor(dcorr)
        c_vec = c_vec.append_factor(delta) + new_c_term
        p_vec = p_vec.append_factor(rho)
        level += t + 1
        used_t.append(t)
        if level > level_cap:
            raise ResourceLimit(f"witness level {level} exceeds the cap")
    norm_c = c_vec.l1()
    norm_sum = p_vec.l1()
    return WitnessResult(b, r, level, used_t, norm_c, norm_sum,
                         profile.alpha, c_vec, p_vec)


# ---------------------------------------------------------------------------
# Non-unique invariant projection on the level-2 Laakso graph
# ---------------------------------------------------------------------------

def laakso_nonunique_projection() -> dict:
    """Explicit invariant projection onto Z(L_2) differing from the
    orthogonal one.

    Tail-copy edges project orthogonally; middle edges of the four central
    copies go to their copy's 4-cycle line; central tail edges go to the
    averaged 16-cycle flow with weight 1/8 (the orthogonal weight would be
    1/12, which is what makes the two projections differ).
    """
    base = laakso_base()
    g2 = laakso(2)
    n_edges = len(g2.edges)
    order = g2.edge_order

    zbasis = fundamental_cycle_basis(g2)
    p_orth = projections.orthogonal_projection([z.dense() for z in zbasis.vectors])

    central = ["x1", "x2", "y1", "y2"]
    copy_cycle = {}
    for q in central:
        copy_cycle[q] = EdgeVector(g2, {
            f"{q}/x1": Fraction(1), f"{q}/x2": Fraction(1),
            f"{q}/y1": Fraction(-1), f"{q}/y2": Fraction(-1)})

    def side_path(q, branch, sign):
        return {f"{q}/b": sign, f"{q}/{branch}1": sign,
                f"{q}/{branch}2": sign, f"{q}/t": sign}

    one = Fraction(1)
    f1 = {}
    f2 = {}
    for q in ("x1", "x2"):          # ascending side
        f1.update(side_path(q, "x", one))
        f2.update(side_path(q, "y", one))
    for q in ("y1", "y2"):          # descending side
        f1.update(side_path(q, "y", -one))
        f2.update(side_path(q, "x", -one))
    f_avg = (EdgeVector(g2, f1) + EdgeVector(g2, f2)).scale(Fraction(1, 2))

    cols = []
    for e in g2.edges:
        prefix, sub = e.id.split("/")
        if prefix in ("b", "t"):
            col = [row[order[e.id]] for row in p_orth]
        elif sub in ("b", "t"):
            col = f_avg.scale(f_avg.get(e.id) / 8).dense()
        else:
            chi = copy_cycle[prefix]
            col = chi.scale(chi.get(e.id) / 4).dense()
        cols.append(col)
    p = [[cols[j][i] for j in range(n_edges)] for i in range(n_edges)]

    profile = profile_base(base)
    gens = invariance_generators(profile, 2, g2)
    invariant_under = []
    for name, emap in sorted(gens.items()):
        gmat = edge_map_matrix(g2, emap)
        if not projections.check_invariance(p, gmat):
            raise NotInvariant(f"constructed projection not invariant under {name}")
        invariant_under.append(name)

    fixes_range = all(
        linalg.mat_vec(p, z.dense()) == z.dense() for z in zbasis.vectors)
    in_range = all(boundary(EdgeVector(
        g2, {e.id: cols[j][order[e.id]] for e in g2.edges})).is_zero()
        for j in range(n_edges))
    gap = linalg.max_abs_entry_diff(p, p_orth)
    return {
        "projection": p,
        "orthogonal": p_orth,
        "is_projection": linalg.is_idempotent(p) and fixes_range and in_range,
        "fixes_cycle_space": fixes_range,
        "range_in_cycle_space": in_range,
        "invariant_under": invariant_under,
        "max_entry_gap": gap,
        "differs_from_orthogonal": gap > 0,
    }
