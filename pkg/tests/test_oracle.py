import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bartholdi.algebra import ONE, U, BiPoly
from bartholdi.corpus import builtin, random_connected_graph
from bartholdi.errors import BudgetExceeded
from bartholdi.graph_core import build_matrices
from bartholdi.oracle import (
    _is_least_rotation,
    _is_primitive,
    compare_to_determinant,
    euler_truncation,
    primitive_classes,
    trace_series_matrix,
    trace_series_walks,
)


def test_p2_traces():
    s = trace_series_matrix(builtin("P2"), 4)
    assert [s[m] for m in range(1, 5)] == [BiPoly(), 2 * U * U, BiPoly(), 2 * U**4]
    assert trace_series_walks(builtin("P2"), 4).traces == s.traces


def test_triangle_counts():
    assert trace_series_matrix(builtin("C3"), 3)[3].evaluate(q=0, u=0) == 6
    assert trace_series_matrix(builtin("K4"), 3)[3].evaluate(q=0, u=0) == 24


@pytest.mark.parametrize("name", ["C3", "K13", "P3", "C4"])
def test_walks_match_matrix(name):
    g = builtin(name)
    assert trace_series_walks(g, 6).traces == trace_series_matrix(g, 6).traces


def test_trace_at_u_one_is_line_digraph_trace():
    g = builtin("K4")
    m = build_matrices(g)
    full = (m.W + m.J).astype(object)
    s = trace_series_matrix(g, 5)
    for k in range(1, 6):
        assert s[k].evaluate(q=0, u=1) == np.trace(np.linalg.matrix_power(full, k))


def test_bipartite_odd_traces_vanish():
    for name in ("C4", "K33", "K13"):
        s = trace_series_matrix(builtin(name), 7)
        assert all(s[m].is_zero() for m in (1, 3, 5, 7))


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        trace_series_walks(builtin("Petersen"), 30)
    with pytest.raises(BudgetExceeded):
        euler_truncation(builtin("K4"), 8, budget=10)


def test_euler_examples():
    c3 = euler_truncation(builtin("C3"), 3)
    assert c3.count(3, 0) == 2
    assert [c3.series[m].evaluate(q=0, u=0) for m in range(4)] == [1, 0, 0, 2]
    assert c3.series[2] == 3 * U * U  # the three back-and-forth classes e e^{-1}
    k4 = euler_truncation(builtin("K4"), 3)
    assert k4.count(3, 0) == 8
    p2 = euler_truncation(builtin("P2"), 4)
    assert [(c.length, c.bumps) for c in p2.classes] == [(2, 2)]
    assert [p2.series[m] for m in range(5)] == [ONE, BiPoly(), U * U, BiPoly(), U**4]


def test_euler_c3_series_at_u0():
    # (1 - q^3)^{-2} = 1 + 2q^3 + 3q^6 + ...
    e = euler_truncation(builtin("C3"), 6)
    assert [e.series[m].evaluate(q=0, u=0) for m in range(7)] == [1, 0, 0, 2, 0, 0, 3]


def test_representatives_are_canonical():
    for c in primitive_classes(builtin("K4"), 6):
        s = c.representative
        assert _is_least_rotation(s) and _is_primitive(s)


def test_rotation_helpers():
    assert _is_least_rotation((0, 1, 2)) and not _is_least_rotation((1, 2, 0))
    assert not _is_primitive((0, 1, 0, 1)) and _is_primitive((0, 0, 1))


@pytest.mark.parametrize("name", ["P2", "C3", "C4", "K4", "P3", "K13"])
def test_compare_to_determinant(name):
    assert all(r.holds for r in compare_to_determinant(builtin(name), 8))


@given(st.integers(0, 10_000), st.integers(2, 5))
def test_compare_random(seed, n):
    g = random_connected_graph(random.Random(seed), n)
    assert all(r.holds for r in compare_to_determinant(g, 5))


def test_ihara_counts_at_u0():
    # N_m for K4: closed non-backtracking tailless walks
    s = trace_series_matrix(builtin("K4"), 4)
    m = build_matrices(builtin("K4"))
    for k in range(1, 5):
        assert s[k].evaluate(q=0, u=0) == np.trace(np.linalg.matrix_power(m.W, k))
