import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bartholdi.algebra import ONE, Q, U, BiPoly, RationalFunction
from bartholdi.corpus import BUILTIN_NAMES, REGULAR_NAMES, builtin, cycle, random_connected_graph
from bartholdi.errors import ForbiddenU, NotRegular, SingularQu
from bartholdi.graph_core import build_matrices
from bartholdi.zeta import (
    check_bu_inverse,
    check_completed_fe,
    check_det_bu_identity,
    check_expressions_agree,
    check_ihara_bartholdi_equivalence,
    check_q_functional_equation,
    check_u_functional_equation,
    completed_zeta_inverse,
    det_bu,
    dual_vertex_identity_check,
    edge_zeta_inverse,
    edge_zeta_inverse_at,
    vertex_determinant,
    vertex_zeta_inverse,
)

K4_U0 = (ONE - Q) * (ONE - 2 * Q) * (ONE + Q + 2 * Q * Q) ** 3 * (ONE - Q * Q) ** 2


def test_p2_both_forms():
    g = builtin("P2")
    assert edge_zeta_inverse(g) == ONE - U * U * Q * Q
    vf = vertex_zeta_inverse(g)
    assert vf.num == (ONE + U * (ONE - U) * Q * Q) ** 2 - Q * Q
    assert vf.den == ONE - (ONE - U) ** 2 * Q * Q
    assert vf == RationalFunction(ONE - U * U * Q * Q)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_cycles_at_u0(n):
    g = cycle(n)
    assert edge_zeta_inverse_at(g, 0) == (ONE - Q**n) ** 2
    assert edge_zeta_inverse(g).evaluate(u=0) == (ONE - Q**n) ** 2


def test_k4_closed_forms():
    g = builtin("K4")
    assert edge_zeta_inverse_at(g, 0) == K4_U0
    c = (ONE - U) * (U + 2)
    expected = (ONE - (ONE - U) ** 2 * Q * Q) ** 2 * (ONE + c * Q * Q - 3 * Q) * (ONE + c * Q * Q + Q) ** 3
    assert edge_zeta_inverse(g) == expected
    assert vertex_zeta_inverse(g) == RationalFunction(expected)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_edge_form_basic_shape(name):
    g = builtin(name)
    p = edge_zeta_inverse(g)
    assert p.coeff_q(0) == ONE
    assert p.degree_q() == g.n_directed
    assert check_expressions_agree(g).holds


def test_edge_specialisation_matches_symbolic():
    g = builtin("K13")
    p = edge_zeta_inverse(g)
    for u0 in (0, Fraction(1, 2), -3, Fraction(2, 7)):
        assert p.evaluate(u=u0) == edge_zeta_inverse_at(g, u0)


def test_edge_form_matches_float_determinant():
    g = builtin("K33")
    m = build_matrices(g)
    q0, u0 = 0.3, -0.7
    direct = np.linalg.det(np.eye(g.n_directed) - q0 * (m.W + u0 * m.J))
    assert edge_zeta_inverse(g).evaluate_complex(q0, u0).real == pytest.approx(direct, rel=1e-9)


def test_mutated_w_is_detected():
    g = builtin("K4")
    m = build_matrices(g)
    w = m.W.copy()
    w[0, 1] = 1 - w[0, 1]
    rep = check_expressions_agree(g, build_matrices(g, W=w))
    assert not rep.holds and not rep.witness.is_zero()
    assert rep.as_dict()["verdict"] == "violated"


@given(st.integers(0, 10_000), st.integers(2, 6))
def test_expressions_agree_random(seed, n):
    g = random_connected_graph(random.Random(seed), n)
    assert check_expressions_agree(g).holds


def test_dual_vertex_identity():
    k4 = builtin("K4")
    u0 = Fraction(1, 2)
    assert dual_vertex_identity_check(k4, (1 - u0) * (2 + u0), u0).holds
    assert dual_vertex_identity_check(builtin("C4"), 1, Fraction(1, 3)).holds
    assert dual_vertex_identity_check(builtin("P3"), 3, Fraction(1, 5)).holds
    with pytest.raises(SingularQu):
        dual_vertex_identity_check(k4, 1, 1)


@pytest.mark.parametrize("name", REGULAR_NAMES)
def test_q_functional_equation(name):
    g = builtin(name)
    t = g.regular_t()
    for u0 in (0, Fraction(1, 2), Fraction(1, 3), -3):
        if u0 in (1, -t):
            with pytest.raises(ForbiddenU):
                check_q_functional_equation(g, u0)
            continue
        assert check_q_functional_equation(g, u0).holds


def test_q_fe_rejects_irregular():
    with pytest.raises(NotRegular):
        check_q_functional_equation(builtin("P3"), 0)


def test_q_fe_detects_corrupted_operator():
    g = builtin("K4")
    m = build_matrices(g)
    w = m.W.copy()
    w[0, g.inverse(0)] = 1
    assert not check_q_functional_equation(g, Fraction(1, 2), build_matrices(g, W=w)).holds


def test_u_fe_for_cycles_is_parity():
    g = builtin("C4")
    p = edge_zeta_inverse(g)
    assert p == p.subs_u(-U)
    assert check_u_functional_equation(g).holds


@pytest.mark.parametrize("name", ["K4", "K33", "C5", "K5"])
def test_u_fe_and_ihara(name):
    g = builtin(name)
    assert check_u_functional_equation(g).holds
    assert check_ihara_bartholdi_equivalence(g).holds


def test_ihara_bartholdi_k4_factor():
    g = builtin("K4")
    lhs = RationalFunction(edge_zeta_inverse_at(g, -1))
    rhs = RationalFunction(edge_zeta_inverse_at(g, 0)) * RationalFunction(ONE - 4 * Q * Q, ONE - Q * Q) ** 2
    assert lhs == rhs


def test_det_bu_examples():
    p2 = builtin("P2")
    assert det_bu(build_matrices(p2)) == -(U * U)
    k4 = build_matrices(builtin("K4"))
    assert np.prod([x for x in k4.Q_u.diagonal()]) == (ONE - U) ** 4 * (U + 2) ** 4
    for name in BUILTIN_NAMES:
        assert check_det_bu_identity(builtin(name)).holds


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_bu_inverse(name):
    g = builtin(name)
    for u0 in (Fraction(1, 2), Fraction(1, 3), -3):
        try:
            assert check_bu_inverse(g, u0).holds
        except SingularQu:
            assert any(t + u0 == 0 for t in g.t_values)


def test_bu_inverse_c3_at_minus_two():
    assert check_bu_inverse(builtin("C3"), -2).holds
    with pytest.raises(SingularQu):
        check_bu_inverse(builtin("C3"), -1)


def test_source_degree_variant_is_wrong_on_irregular_graphs():
    assert not check_bu_inverse(builtin("P3"), Fraction(1, 2), degree_side="source").holds


def test_completed_zeta():
    k4 = builtin("K4")
    assert completed_zeta_inverse(k4).numerator_degree_q() == 24
    for name in ("C4", "Petersen", "K4", "C3", "K5"):
        g = builtin(name)
        rep = check_completed_fe(g, Fraction(1, 2))
        assert rep.holds, rep.notes


def test_vertex_determinant_is_cached_and_exact():
    g = builtin("C3")
    assert vertex_determinant(g) is vertex_determinant(g)
    assert vertex_determinant(g).evaluate(u=0) == (ONE - Q**3) ** 2 * 1  # k = 0 for cycles
