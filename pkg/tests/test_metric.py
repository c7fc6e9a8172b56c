import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from freelip.errors import (AsymmetryError, SamePoint, TriangleViolation,
                            ValidationError, ZeroOffDiagonal)
from freelip.graphs import diamond, k2n_base, laakso, single_edge
from freelip.metric import (MetricSpace, Molecule, elementary_molecule,
                            graph_metric, molecule_float, validate_metric)
from freelip.randgen import random_metric_space


def test_two_point_matrix_is_valid():
    space = validate_metric([[0, 3], [3, 0]])
    assert space.d("p0", "p1") == 3
    assert space.diameter == 3


def test_asymmetric_matrix_rejected():
    with pytest.raises(AsymmetryError):
        validate_metric([[0, 1], [2, 0]])


def test_triangle_violation_reports_triple():
    # 3 > 1 + 1; confirmed by scanning all triples by hand
    bad = [[0, 1, 3], [1, 0, 1], [3, 1, 0]]
    with pytest.raises(TriangleViolation) as err:
        validate_metric(bad)
    p, q, r = err.value.triple
    names = ["p0", "p1", "p2"]
    d = {n: row for n, row in zip(names, bad)}
    i, j, k = names.index(p), names.index(q), names.index(r)
    assert bad[i][j] > bad[i][k] + bad[k][j]


def test_zero_off_diagonal_and_nonzero_diagonal():
    with pytest.raises(ZeroOffDiagonal):
        validate_metric([[0, 0], [0, 0]])
    with pytest.raises(ValidationError):
        validate_metric([[1, 2], [2, 0]])


def test_negative_distance_rejected():
    with pytest.raises(ValidationError):
        validate_metric([[0, -1], [-1, 0]])


def test_graph_metric_diamond():
    space = graph_metric(diamond(1))
    assert space.diameter == 2
    assert space.d("top", "bottom") == 2


def test_graph_metric_laakso_height():
    space = graph_metric(laakso(1))
    assert space.d("top", "bottom") == 4


def test_graph_metric_single_edge():
    space = graph_metric(single_edge())
    assert space.d("top", "bottom") == 1


@pytest.mark.parametrize("g", [diamond(2), laakso(1), k2n_base(4)])
def test_family_metrics_satisfy_axioms(g):
    space = graph_metric(g)
    validate_metric([list(row) for row in space.dist], points=list(space.points))


def test_elementary_molecule():
    m = elementary_molecule("p", "q")
    assert m.coeffs == {"p": F(1), "q": F(-1)}
    assert sum(m.coeffs.values()) == 0
    assert (m + elementary_molecule("q", "p")).is_zero()


def test_elementary_molecule_same_point():
    with pytest.raises(SamePoint):
        elementary_molecule("p", "p")


def test_molecule_rejects_nonzero_sum():
    with pytest.raises(ValidationError):
        Molecule({"a": F(1), "b": F(1)})


def test_molecule_float_mode_tolerance():
    m = molecule_float({"a": 0.1, "b": 0.2, "c": -0.1 - 0.2})
    assert sum(m.coeffs.values()) == 0  # dust absorbed exactly
    with pytest.raises(ValidationError):
        molecule_float({"a": 0.5, "b": -0.4})


coeff = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@given(st.lists(coeff, min_size=1, max_size=6), coeff)
@settings(max_examples=40, deadline=None)
def test_molecule_arithmetic_keeps_zero_sum(values, scalar):
    pts = [f"p{i}" for i in range(len(values) + 1)]
    coeffs = dict(zip(pts, values))
    coeffs[pts[-1]] = -sum(values)
    m = Molecule(coeffs)
    n = m.scale(scalar) + m
    assert sum(n.coeffs.values(), start=F(0)) == 0


def test_space_json_roundtrip():
    rng = random.Random(3)
    space = random_metric_space(rng, 5).with_basepoint("p2")
    again = MetricSpace.from_json(space.to_json())
    assert again == space


def test_molecule_json_roundtrip():
    m = Molecule({"a": F(3, 2), "b": F(-1, 2), "c": F(-1)})
    assert Molecule.from_json(m.to_json()) == m
