import itertools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bartholdi.algebra import det_fraction_free, rank_exact
from bartholdi.corpus import BUILTIN_NAMES, builtin, random_connected_graph
from bartholdi.errors import Disconnected, DuplicateEdge, SelfLoop, ValidationError
from bartholdi.graph_core import build_digraph, build_matrices, graph_info, laplacian_cofactor


def test_build_single_edge():
    g = build_digraph(2, [(0, 1)])
    assert (g.n_vertices, g.n_edges) == (2, 1)
    assert g.directed_edges == ((0, 1), (1, 0))


def test_canonical_orientation_and_involution():
    g = build_digraph(3, [(1, 0), (2, 1), (0, 2)])
    assert g.edges == ((0, 1), (1, 2), (0, 2))
    assert g.degrees == (2, 2, 2)
    for a in range(g.n_directed):
        assert g.inverse(g.inverse(a)) == a
        assert g.source(a) == g.target(g.inverse(a))


def test_validation_errors():
    with pytest.raises(DuplicateEdge) as exc:
        build_digraph(3, [(0, 1), (1, 2), (0, 1)])
    assert exc.value.edge == (0, 1)
    with pytest.raises(DuplicateEdge):
        build_digraph(2, [(0, 1), (1, 0)])
    with pytest.raises(SelfLoop) as exc:
        build_digraph(2, [(0, 1), (1, 1)])
    assert exc.value.vertex == 1
    with pytest.raises(Disconnected) as exc:
        build_digraph(4, [(0, 1), (2, 3)])
    assert exc.value.vertex == 2
    with pytest.raises(ValidationError):
        build_digraph(2, [(0, 5)])
    with pytest.raises(ValidationError):
        build_digraph(2, [])


def test_p2_matrices():
    m = build_matrices(builtin("P2"))
    assert not m.W.any()
    assert m.J.tolist() == [[0, 1], [1, 0]]


def test_c3_closed_nonbacktracking_walks():
    m = build_matrices(builtin("C3"))
    assert np.trace(np.linalg.matrix_power(m.W, 3)) == 6


def test_u_star_is_exact():
    assert builtin("P3").u_star == pytest.approx(1 / 3) and str(builtin("P3").u_star) == "1/3"
    assert builtin("K4").u_star == -0.5


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_matrix_invariants(name):
    g = builtin(name)
    m = build_matrices(g)
    assert (m.A == m.A.T).all() and not m.A.diagonal().any()
    assert m.A.sum(axis=1).tolist() == list(g.degrees)
    assert (m.L.T @ m.L == m.Delta).all() and (m.Delta == m.D - m.A).all()
    assert (m.L_tilde.T @ m.L_tilde == m.Delta_tilde).all() and (m.Delta_tilde == m.D + m.A).all()
    assert not m.Delta.sum(axis=1).any()
    assert (np.linalg.eigvalsh(m.Delta.astype(float)) > -1e-9).all()
    assert rank_exact(m.Delta.tolist()) == g.n_vertices - 1
    assert ((m.J @ m.J) == np.eye(g.n_directed, dtype=int)).all() and (m.J == m.J.T).all()
    for a in range(g.n_directed):
        assert m.W[a, g.inverse(a)] == 0
        assert m.W[a].sum() == g.degrees[g.target(a)] - 1
    assert ((m.A @ m.A).diagonal() == m.D.diagonal()).all()


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_incidence_ranks(name):
    g = builtin(name)
    m = build_matrices(g)
    info = graph_info(g)
    assert rank_exact(m.L.tolist()) == g.n_vertices - 1
    assert rank_exact(m.L_tilde.tolist()) == g.n_vertices - (1 if info.is_bipartite else 0)


def test_graph_info_examples():
    p3, c4, k4 = builtin("P3"), builtin("C4"), builtin("K4")
    i = graph_info(p3)
    assert (i.spanning_tree_count, i.is_bipartite, i.is_tree) == (1, True, True)
    i = graph_info(c4)
    assert (i.spanning_tree_count, i.is_bipartite, i.is_regular, i.t) == (4, True, True, 1)
    i = graph_info(k4)
    assert (i.spanning_tree_count, i.is_bipartite, i.is_regular, i.t) == (16, False, True, 2)
    assert graph_info(builtin("Petersen")).spanning_tree_count == 2000
    assert graph_info(builtin("K5")).spanning_tree_count == 5**3


def test_bipartition_crosses_every_edge():
    for name in ("C4", "C6", "K33", "K13", "P3"):
        g = builtin(name)
        v1, v2 = graph_info(g).bipartition
        side = {v: 0 for v in v1} | {v: 1 for v in v2}
        assert all(side[a] != side[b] for a, b in g.edges)


@given(st.integers(0, 10_000), st.integers(2, 7))
def test_cofactors_all_equal(seed, n):
    g = random_connected_graph(random.Random(seed), n)
    k = laplacian_cofactor(g, 0, 0)
    assert k >= 1
    assert all(laplacian_cofactor(g, i, j) == k for i in range(n) for j in range(n))
    assert (g.n_edges == n - 1) == (k == 1)


@given(st.integers(0, 10_000), st.integers(2, 7))
def test_tree_incidence_minors_nonzero(seed, n):
    r = random.Random(seed)
    g = random_connected_graph(r, n, extra_edge_prob=0.0)
    L = build_matrices(g).L.tolist()
    for drop in range(n):
        minor = [row[:drop] + row[drop + 1:] for row in L]
        assert det_fraction_free(minor) in (1, -1)


def test_degree_sum():
    for g in (random_connected_graph(random.Random(s), 6) for s in range(5)):
        assert sum(g.degrees) == 2 * g.n_edges
