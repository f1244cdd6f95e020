from fractions import Fraction as F
from itertools import product

import numpy as np
import pytest

from nashax._exact import (affine_dimension, format_fraction, lp_maximize, polytope_vertices,
                           rref, solve_affine, to_fraction)


@pytest.mark.parametrize("raw, expected", [
    (3, F(3)), ("2/6", F(1, 3)), (" -7 / 2 ", F(-7, 2)), (np.int64(5), F(5)), (F(4, 9), F(4, 9)),
])
def test_to_fraction_accepts_exact_inputs(raw, expected):
    assert to_fraction(raw) == expected


@pytest.mark.parametrize("raw", [0.5, True, None, [1]])
def test_to_fraction_rejects_inexact_or_foreign_types(raw):
    with pytest.raises(TypeError):
        to_fraction(raw)


@pytest.mark.parametrize("raw", ["1/0", "one", "1.5", "1/-2"])
def test_to_fraction_rejects_malformed_strings(raw):
    with pytest.raises(ValueError):
        to_fraction(raw)


def test_format_fraction():
    assert format_fraction(F(6, 3)) == "2"
    assert format_fraction(F(-1, 4)) == "-1/4"


def test_rref_and_solve_affine():
    rows, pivots = rref([[F(2), F(4), F(6)], [F(1), F(3), F(5)]])
    assert pivots == [0, 1]
    assert rows == [[1, 0, -1], [0, 1, 2]]
    x0, basis = solve_affine([[1, 1, 0]], [F(1)], 3)
    assert x0[0] + x0[1] == 1
    assert len(basis) == 2
    assert solve_affine([[1, 1], [1, 1]], [F(1), F(2)], 2) is None


def test_polytope_vertices_of_a_triangle():
    # x + y + z = 1, x, y, z >= 0
    verts = polytope_vertices([[1, 1, 1]], [F(1)], [[-1, 0, 0], [0, -1, 0], [0, 0, -1]], [0, 0, 0], 3)
    assert sorted(verts) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert affine_dimension(verts) == 2


def test_lp_maximize_simple():
    # max x + y  s.t. x + 2y <= 4, 3x + y <= 6
    value, x = lp_maximize([1, 1], [[1, 2], [3, 1]], [4, 6])
    assert value == F(14, 5)
    assert x == [F(8, 5), F(6, 5)]


def test_lp_maximize_detects_infeasible_and_unbounded():
    # the failure mode of an off-the-shelf exact solver: x1 + x2 <= 0 with x1 + x2 = 1
    assert lp_maximize([1, 0], [[1, 1]], [0], [[1, 1]], [1]) is None
    with pytest.raises(ValueError):
        lp_maximize([1, 0], [[0, 1]], [1])


def test_lp_maximize_handles_redundant_equalities():
    value, x = lp_maximize([0, 1], A_eq=[[1, 1], [2, 2]], b_eq=[1, 2])
    assert value == 1 and x == [0, 1]


def test_lp_maximize_agrees_with_vertex_enumeration():
    # independent oracle: the optimum of a bounded LP is attained at a vertex
    rng = np.random.default_rng(5)
    for _ in range(40):
        n = 3
        A = [[int(v) for v in rng.integers(-3, 4, n)] for _ in range(3)]
        b = [int(v) for v in rng.integers(0, 5, 3)]
        c = [int(v) for v in rng.integers(-3, 4, n)]
        A_ub = A + [[1] * n] + [[-1 if j == k else 0 for j in range(n)] for k in range(n)]
        b_ub = b + [6] + [0] * n
        verts = polytope_vertices([], [], A_ub, b_ub, n)
        best = max(sum(ci * xi for ci, xi in zip(c, v)) for v in verts)
        value, _ = lp_maximize(c, A + [[1] * n], b + [6])
        assert value == best


def test_polytope_vertices_brute_force_cross_check():
    # every vertex of the unit square cut by x + y <= 3/2
    verts = polytope_vertices([], [], [[1, 0], [0, 1], [-1, 0], [0, -1], [1, 1]],
                              [1, 1, 0, 0, F(3, 2)], 2)
    expected = {(0, 0), (1, 0), (0, 1), (1, F(1, 2)), (F(1, 2), 1)}
    assert set(verts) == expected
    assert all(isinstance(x, F) for v in verts for x in v)
    assert not set(product([0, 1], repeat=2)) <= set(verts)
