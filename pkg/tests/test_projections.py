import random
from fractions import Fraction as F

import pytest

from freelip import linalg
from freelip.cyclespace import fundamental_cycle_basis
from freelip.errors import (GroupClosureOverflow, NotInvariantSubspace,
                            SingularGram, ValidationError)
from freelip.graphs import diamond, laakso
from freelip.projections import (average_projection, bm_lower_bound,
                                 bm_upper_via_basis_map, check_invariance,
                                 generate_group, l1_norm, linf_norm,
                                 minimal_projection_lp, orthogonal_projection,
                                 permutation_matrix)
from freelip.recursive import invariance_generators, edge_map_matrix, profile_base
from freelip.graphs import diamond_base, laakso_base

LINE = [F(1), F(1), F(-1), F(-1)]


def test_l1_linf_norms_basic():
    assert l1_norm(linalg.identity(3)) == 1
    assert linf_norm(linalg.identity(3)) == 1
    assert l1_norm(linalg.zeros(3, 3)) == 0
    p = orthogonal_projection([LINE])
    assert l1_norm(p) == 1
    assert linf_norm(p) == 1


def test_orthogonal_projection_onto_line():
    p = orthogonal_projection([LINE])
    assert all(abs(x) == F(1, 4) for row in p for x in row)
    assert linalg.is_idempotent(p) and linalg.is_symmetric(p)


def test_orthogonal_projection_full_basis_is_identity():
    cols = [[F(1), F(0)], [F(0), F(1)]]
    assert orthogonal_projection(cols) == linalg.identity(2)


def test_orthogonal_projection_diamond_two():
    cols = [v.dense() for v in fundamental_cycle_basis(diamond(2)).vectors]
    p = orthogonal_projection(cols)
    assert linalg.is_idempotent(p) and linalg.is_symmetric(p)
    assert linalg.rank(p) == 5


def test_singular_gram_detected():
    with pytest.raises(SingularGram):
        orthogonal_projection([LINE, [2 * x for x in LINE]])


def test_minimal_projection_line_in_l1_four():
    lam, p = minimal_projection_lp([LINE], 4)
    assert abs(lam - 1) < 1e-7
    assert l1_norm(p) == 1  # exact rationalized projection
    lam_exact, p_exact = minimal_projection_lp([LINE], 4, mode="exact")
    assert lam_exact == 1 and linalg.is_idempotent(p_exact)


def test_minimal_projection_full_space():
    cols = [[F(1), F(0)], [F(0), F(1)]]
    lam, p = minimal_projection_lp(cols, 2)
    assert abs(lam - 1) < 1e-9
    assert p == linalg.identity(2)


def test_minimal_projection_diamond_two_lower_bound():
    cols = [v.dense() for v in fundamental_cycle_basis(diamond(2)).vectors]
    lam, p = minimal_projection_lp(cols, 16)
    assert lam >= F(5, 3) - F(1, 10 ** 7)
    assert linalg.is_idempotent(p)
    # minimality: no larger than the orthogonal projection norm
    assert lam <= float(l1_norm(orthogonal_projection(cols))) + 1e-9


def _cycle_graph_symmetries():
    """The 8 automorphisms of the 4-cycle as edge permutations of D_1."""
    from freelip.graphs import edge_map_from_vertex_map

    g = diamond(1)
    order = g.edge_order
    verts = ["top", "l", "bottom", "r"]

    def as_matrix(sigma):
        emap = edge_map_from_vertex_map(g, sigma)
        perm = [0] * 4
        for eid, img in emap.items():
            perm[order[eid]] = order[img]
        return permutation_matrix(perm)

    rotation = {verts[i]: verts[(i + 1) % 4] for i in range(4)}
    horizontal = {"top": "top", "bottom": "bottom", "l": "r", "r": "l"}
    vertical = {"top": "bottom", "bottom": "top", "l": "l", "r": "r"}
    pole_preserving = generate_group([as_matrix(horizontal), as_matrix(vertical)])
    return g, pole_preserving, as_matrix(rotation)


def test_average_projection_over_pole_preserving_symmetries_is_orthogonal():
    g, group, rotation = _cycle_graph_symmetries()
    assert len(group) == 4
    z = fundamental_cycle_basis(g).vectors[0].dense()
    # skew rank-one projection onto the cycle line: z a^T with a.z = 1
    a = [F(0)] * 4
    a[0] = 1 / z[0]
    p = [[z[i] * a[j] for j in range(4)] for i in range(4)]
    assert linalg.is_idempotent(p)
    avg = average_projection(p, group)
    assert avg == orthogonal_projection([z])
    assert l1_norm(avg) <= l1_norm(p)
    for gmat in group:
        assert check_invariance(avg, gmat)


def test_average_projection_fixed_point():
    g, group, _ = _cycle_graph_symmetries()
    z = fundamental_cycle_basis(g).vectors[0].dense()
    p = orthogonal_projection([z])
    assert average_projection(p, group) == p


def test_rotation_moves_the_cycle_space():
    # plain rotations of the square are not cycle-preserving bijections in
    # the pole-path sense, and the averaging precondition must reject them
    g, _, rotation = _cycle_graph_symmetries()
    z = fundamental_cycle_basis(g).vectors[0].dense()
    p = orthogonal_projection([z])
    with pytest.raises(NotInvariantSubspace):
        average_projection(p, [rotation])


def test_average_projection_rejects_range_movers():
    p = orthogonal_projection([LINE])
    bad = permutation_matrix([1, 2, 3, 0])  # 4-rotation does not fix span(LINE)
    with pytest.raises(NotInvariantSubspace):
        average_projection(p, [bad])


def test_check_invariance_examples():
    ident = linalg.identity(4)
    anyg = permutation_matrix([1, 0, 3, 2])
    assert check_invariance(ident, anyg)
    l2 = laakso(2)
    p = orthogonal_projection([v.dense() for v in fundamental_cycle_basis(l2).vectors])
    prof = profile_base(laakso_base())
    gens = invariance_generators(prof, 2, l2)
    for emap in gens.values():
        assert check_invariance(p, edge_map_matrix(l2, emap))


def test_generate_group_closure_and_cap():
    g, group, rotation = _cycle_graph_symmetries()
    closed = generate_group(group + [rotation])  # full dihedral group
    assert len(closed) == 8
    with pytest.raises(GroupClosureOverflow):
        generate_group(group, cap=2)


def test_bm_lower_bound():
    assert bm_lower_bound(F(1)) == 0
    assert bm_lower_bound(F(5, 3)) == F(2, 3)
    with pytest.raises(ValidationError):
        bm_lower_bound(F(1, 2))
    # consistency with the Haar lower bound (2n+1)/3 at n = 1, 2
    for n, graph in ((1, diamond(1)), (2, diamond(2))):
        cols = [v.dense() for v in fundamental_cycle_basis(graph).vectors]
        lam, _ = minimal_projection_lp(cols, 4 ** n)
        assert bm_lower_bound(lam) - (2 * n + 1) / 3 + 1 >= -1e-7


def test_bm_upper_trivial_quotient():
    ident = linalg.identity(3)
    unit = [[F(1), F(0), F(0)], [F(0), F(1), F(0)], [F(0), F(0), F(1)]]
    value, tn, tin = bm_upper_via_basis_map([], ident, unit)
    assert value == tn == tin == 1


def test_bm_upper_rejects_map_not_vanishing_on_cycles():
    with pytest.raises(ValidationError):
        bm_upper_via_basis_map([[F(1), F(1)]], linalg.identity(2),
                               [[F(1), F(0)]])
