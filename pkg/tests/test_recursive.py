import random
from fractions import Fraction as F

import pytest

from freelip import linalg
from freelip.cyclespace import EdgeVector, boundary, fundamental_cycle_basis
from freelip.errors import NotInvariant, TrivialCycleSpace, ValidationError
from freelip.graphs import (diamond, diamond_base, k2n_base, laakso,
                            laakso_base, path, recursive_family)
from freelip.metric import graph_metric
from freelip.projections import (check_invariance, l1_norm,
                                 minimal_projection_lp, orthogonal_projection)
from freelip.randgen import random_edge_vector
from freelip.recursive import (annihilation_check, basis_S, c_type_vectors,
                               check_conditions, edge_map_matrix, embed_E,
                               invariance_generators, laakso_nonunique_projection,
                               profile_base, vertical_automorphism,
                               vertical_vertex_map, witness)

RNG_SEED = 99


@pytest.mark.parametrize("base,alpha,height,count", [
    (diamond_base(), F(1), 2, 2),
    (k2n_base(3), F(4, 3), 2, 3),
    (k2n_base(5), F(8, 5), 2, 5),
    (laakso_base(), F(1, 2), 4, 2),
])
def test_profile_values(base, alpha, height, count):
    prof = profile_base(base)
    assert prof.alpha == alpha
    assert prof.height == height
    assert prof.geodesic_count == count
    assert prof.delta.l1() == 1
    assert prof.c.permute(prof.vertical_edges) == -prof.c
    assert boundary(prof.d).is_zero()  # d(B) lies in the cycle space


def test_profile_c_structure():
    prof = profile_base(laakso_base())
    # |c| = delta and c sums to zero along every geodesic
    for eid, v in prof.delta.coeffs.items():
        assert abs(prof.c.get(eid)) == v
    for walk in prof.geodesics:
        assert sum((prof.c.get(eid) for eid in walk), start=F(0)) == 0
    # fixed by every horizontal automorphism, and delta fixed by everything
    from freelip.graphs import edge_map_from_vertex_map
    for sigma in prof.horizontals:
        emap = edge_map_from_vertex_map(prof.graph, sigma)
        assert prof.c.permute(emap) == prof.c
        assert prof.delta.permute(emap) == prof.delta
    assert prof.delta.permute(prof.vertical_edges) == prof.delta


@pytest.mark.parametrize("base", [diamond_base(), k2n_base(3), laakso_base()])
def test_conditions_hold_for_paper_bases(base):
    report = check_conditions(base)
    assert report["all_ok"], report


def test_conditions_fail_for_tree():
    report = check_conditions(path(2))
    assert not report["7_nontrivial_cycles"]["ok"]
    assert not report["all_ok"]


def test_embed_single_edge_to_delta():
    prof = profile_base(laakso_base())
    b0 = recursive_family(laakso_base(), 0)
    x = EdgeVector(b0, {"": F(1)})
    image = embed_E(x, prof, recursive_family(laakso_base(), 1))
    assert image.l1() == 1
    assert image.coeffs == prof.delta.coeffs


def test_embed_maps_cycles_to_cycles():
    prof = profile_base(diamond_base())
    d1, d2 = diamond(1), diamond(2)
    for z in fundamental_cycle_basis(d1).vectors:
        img = embed_E(z, prof, d2)
        assert boundary(img).is_zero()


@pytest.mark.parametrize("base,n", [(diamond_base(), 1), (laakso_base(), 1)])
def test_embed_is_exact_isometry(base, n):
    rng = random.Random(RNG_SEED)
    prof = profile_base(base)
    src = recursive_family(base, n)
    dst = recursive_family(base, n + 1)
    for _ in range(30):
        x = random_edge_vector(rng, src)
        assert embed_E(x, prof, dst).l1() == x.l1()


@pytest.mark.parametrize("base,n,expected", [
    (laakso_base(), 1, 1),
    (laakso_base(), 2, 7),
    (diamond_base(), 2, 5),
    (k2n_base(3), 2, 14),
])
def test_basis_cardinality_and_rank(base, n, expected):
    prof = profile_base(base)
    g = recursive_family(base, n)
    basis = basis_S(prof, n, g)
    assert len(basis) == expected == len(g.edges) - len(g.vertices) + 1
    assert linalg.rank([v.dense() for v in basis.vectors]) == expected
    for v in basis.vectors:
        assert boundary(v).is_zero()


@pytest.mark.parametrize("base", [diamond_base(), laakso_base(), k2n_base(3)])
def test_type_two_vectors_fixed_by_vertical(base):
    prof = profile_base(base)
    for n in (1, 2):
        g = recursive_family(base, n)
        basis = basis_S(prof, n, g)
        vmap = vertical_automorphism(prof, n)
        for w in basis.type_two:
            assert w.permute(vmap) == w


def test_vertical_automorphism_structure():
    prof = profile_base(laakso_base())
    # level 1 is the profiled map
    assert vertical_automorphism(prof, 1) == prof.vertical_edges
    v2 = vertical_automorphism(prof, 2)
    # bottom-stem copy swaps with top-stem copy
    assert all(v2[eid].startswith("t/") for eid in v2 if eid.startswith("b/"))
    # involution
    assert all(v2[v2[eid]] == eid for eid in v2)
    # the vertex form is a pole-swapping graph automorphism
    g2 = laakso(2)
    vmap = vertical_vertex_map(prof, 2, g2)
    assert vmap[g2.top] == g2.bottom and vmap[g2.bottom] == g2.top
    for e in g2.edges:
        assert frozenset((vmap[e.tail], vmap[e.head])) in g2.edge_by_pair


def test_c_type_vector_counts():
    prof = profile_base(diamond_base())
    g = diamond(2)
    vecs = c_type_vectors(prof, 2, g)
    assert len(vecs) == 4 + 1  # one per level-1 copy plus the top-level spread
    for f in vecs:
        assert f.l1() == 1  # |f| = Delta_m, which has norm one


@pytest.mark.parametrize("base,graph", [(diamond_base(), diamond(2)),
                                        (laakso_base(), laakso(2))])
def test_orthogonal_projection_annihilates_c_vectors(base, graph):
    prof = profile_base(base)
    p = orthogonal_projection([v.dense() for v in fundamental_cycle_basis(graph).vectors])
    report = annihilation_check(p, prof, 2, graph)
    assert report["all_annihilated"]
    # range vectors are fixed, not annihilated
    z = fundamental_cycle_basis(graph).vectors[0].dense()
    assert linalg.mat_vec(p, z) == z


def test_annihilation_rejects_non_invariant_projection():
    prof = profile_base(diamond_base())
    g = diamond(2)
    zcols = [v.dense() for v in fundamental_cycle_basis(g).vectors]
    # a skew projection onto the cycle space: restrict to a coordinate
    # section where the basis matrix is invertible; not invariant
    b = [[col[i] for col in zcols] for i in range(16)]
    _, pivots = linalg.rref(linalg.transpose(b))
    section = linalg.inverse([b[i] for i in pivots])
    selector = [[F(1) if j == i else F(0) for j in range(16)] for i in pivots]
    p = linalg.mat_mul(b, linalg.mat_mul(section, selector))
    assert linalg.is_idempotent(p)
    with pytest.raises(NotInvariant):
        annihilation_check(p, prof, 2, g)


def test_invariance_generator_matrices_preserve_cycles():
    prof = profile_base(laakso_base())
    g = laakso(2)
    p = orthogonal_projection([v.dense() for v in fundamental_cycle_basis(g).vectors])
    for name, emap in invariance_generators(prof, 2, g).items():
        gmat = edge_map_matrix(g, emap)
        assert check_invariance(p, gmat), name


# --- witness construction ---------------------------------------------------

@pytest.mark.parametrize("base,alpha", [(diamond_base(), F(1)),
                                        (k2n_base(3), F(4, 3)),
                                        (laakso_base(), F(1, 2))])
def test_witness_growth(base, alpha):
    prof = profile_base(base)
    assert prof.alpha == alpha
    levels = []
    for r in (1, 2, 3):
        w = witness(prof, r)
        assert w.norm_sum == 1
        assert w.norm_c >= 1 + alpha * (r - 1) / 2
        levels.append(w.level)
    assert levels == sorted(levels) and len(set(levels)) == 3


def test_witness_r1_has_zero_correction():
    prof = profile_base(laakso_base())
    w = witness(prof, 1)
    assert w.norm_c == 1 and w.norm_sum == 1
    assert w.a_vector.l1() == 0


def test_witness_flat_cross_check():
    prof = profile_base(diamond_base())
    w = witness(prof, 2)
    g = recursive_family(diamond_base(), w.level)
    flat_c = w.c_vector.materialize(g)
    flat_sum = w.sum_vector.materialize(g)
    assert flat_c.l1() == w.norm_c == F(15, 8)
    assert flat_sum.l1() == w.norm_sum == 1
    assert boundary(flat_c).is_zero()  # C_r lies in the cycle space


def test_witness_respects_forced_schedule():
    prof = profile_base(diamond_base())
    w = witness(prof, 2, t_schedule=[5])
    assert w.t_schedule == [5]
    assert w.norm_sum == 1 and w.norm_c >= F(3, 2)
    with pytest.raises(ValidationError):
        witness(prof, 2, t_schedule=[1])  # below the minimal t


def test_witness_consistency_with_projection_constant():
    # any projection onto Z(B_1) has norm at least ||C_1|| = 1
    prof = profile_base(diamond_base())
    w = witness(prof, 1)
    zcols = [v.dense() for v in fundamental_cycle_basis(diamond(1)).vectors]
    lam, _ = minimal_projection_lp(zcols, 4)
    assert lam >= float(w.norm_c) - 1e-9


def test_witness_rejects_trivial_base():
    with pytest.raises((TrivialCycleSpace, ValidationError)):
        profile_base(path(2))


# --- the non-unique invariant projection ------------------------------------

def test_laakso_nonunique_projection():
    res = laakso_nonunique_projection()
    assert res["is_projection"]
    assert res["fixes_cycle_space"] and res["range_in_cycle_space"]
    assert res["differs_from_orthogonal"] and res["max_entry_gap"] > 0
    assert "v" in res["invariant_under"] and len(res["invariant_under"]) == 8
    # both competing projections have finite l1 norms worth comparing
    assert l1_norm(res["projection"]) >= 1
    assert linalg.is_idempotent(res["orthogonal"])
