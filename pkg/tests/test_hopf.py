from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from cobarforge.arith import BasePoly, LocElem
from cobarforge.cobar import coface, hopf_axioms
from cobarforge.hopf import (
    WORD_DEGREE,
    GammaElem,
    TensorElem,
    counit,
    coproduct,
    eta_R,
    gamma_normal_form,
    r_elem,
    s_elem,
    shift_coeff_left,
    t_elem,
    tensor_mul_words,
    verify_delta_invariance,
)

N = 8
ONE = LocElem.one(N)
A1, A3 = LocElem.a1(N), LocElem.a3(N)
INV3 = LocElem.const(pow(3, -1, 2 ** N), N)
INV27 = LocElem.const(pow(27, -1, 2 ** N), N)


def gam(d):
    """GammaElem from {(p, q): coefficient} on already reduced words."""
    return gamma_normal_form(d, N)


def test_basis_words_are_fixed_points():
    assert gam({(2, 0): ONE}) == GammaElem({2: ONE}, N)
    assert gam({(3, 1): ONE}) == GammaElem({7: ONE}, N)


def test_s4_rewrite():
    expected = gam({(1, 1): 6 * ONE, (3, 0): -A1, (0, 1): 3 * A1, (1, 0): 3 * A3})
    assert gam({(4, 0): ONE}) == expected


def test_t2_rewrite_matches_expanded_relation():
    # 27 t^2 = s^6 + 3a1 s^5 - 9a1 s^2 t + 3a1^2 s^4 - 9a1^2 s t + a1^3 s^3 - 27 a3 t
    rhs = gam({(6, 0): ONE, (5, 0): 3 * A1, (2, 1): -9 * A1, (4, 0): 3 * A1 * A1,
               (1, 1): -9 * A1 * A1, (3, 0): A1 ** 3, (0, 1): -27 * A3})
    assert gam({(0, 2): 27 * ONE}) == rhs
    assert gam({(0, 2): ONE}) == gam({(0, 0): INV27}) * rhs


def test_r_elem():
    r = r_elem(N)
    assert r * 3 - s_elem(N) * s_elem(N) - s_elem(N) * A1 == GammaElem({}, N)
    assert counit(r).is_zero()
    assert r_elem(1, "f2") == GammaElem({2: LocElem.one(1, "f2"), 1: LocElem.a1(1, "f2")}, 1, "f2")


def test_eta_R_generators():
    assert eta_R(A1) == GammaElem({0: A1, 1: 2 * ONE}, N)
    assert eta_R(A3) == GammaElem({0: A3}, N) + r_elem(N) * A1 + t_elem(N) * 2
    f2 = LocElem.a1(1, "f2")
    assert eta_R(f2) == GammaElem({0: f2}, 1, "f2")


def test_eta_R_delta_and_inverse():
    assert eta_R(LocElem.delta(N)) == GammaElem({0: LocElem.delta(N)}, N)
    dinv = LocElem.delta_inv(1, N)
    assert eta_R(dinv) == GammaElem({0: dinv}, N)


def test_counit_examples():
    assert counit(GammaElem({0: ONE}, N)) == ONE
    assert counit(GammaElem({7: ONE}, N)).is_zero()
    assert counit(eta_R(A3)) == A3


def tensor(d, arity=2):
    return TensorElem(arity, "unit", {(ws, 0): c for ws, c in d.items()}, N)


def test_coproduct_examples():
    assert coproduct(GammaElem({0: ONE}, N)) == tensor({(0, 0): ONE})
    assert coproduct(s_elem(N)) == tensor({(1, 0): ONE, (0, 1): ONE})
    # s (x) r with r = 3^-1 (s^2 + a1 s); a1 crosses the s as a1 + 2s
    expected = tensor({(4, 0): ONE, (0, 4): ONE, (1, 2): INV3, (1, 1): INV3 * A1, (2, 1): 2 * INV3})
    assert coproduct(t_elem(N)) == expected


def test_shift_coeff_left():
    x = TensorElem(2, "unit", {((0, 1), 0): A1}, N, slot=1)
    assert shift_coeff_left(x, 1) == tensor({(0, 1): A1, (1, 1): 2 * ONE})
    y = TensorElem(2, "unit", {((0, 4), 0): 5 * ONE}, N, slot=1)
    assert shift_coeff_left(y, 1) == tensor({(0, 4): 5 * ONE})
    once = shift_coeff_left(x, 1)
    assert shift_coeff_left(once, 0) == once


def test_shift_coeff_left_counit_oracle():
    # (eps (x) id) on the shifted form equals eps(eta_R(a)) * s = a * s
    a = A3 * A1
    x = TensorElem(2, "unit", {((0, 1), 0): a}, N, slot=1)
    y = shift_coeff_left(x, 1)
    surviving = {ws[1]: c for (ws, _), c in y.terms.items() if ws[0] == 0}
    assert GammaElem(surviving, N) == GammaElem({1: a}, N)


@pytest.mark.parametrize("prec,mode", [(4, "z2"), (8, "z2"), (1, "f2"), (12, "z2")])
def test_delta_invariance(prec, mode):
    assert verify_delta_invariance(prec, mode)
    assert verify_delta_invariance(prec, mode, order="t2")


def test_delta_mod2_form():
    d = LocElem.delta(1, "f2")
    assert d == LocElem.a3(1, "f2") ** 4 + LocElem.a3(1, "f2") ** 3 * LocElem.a1(1, "f2") ** 3


def test_axiom_suite_n8():
    report = hopf_axioms(8, n_random=50)
    assert all(report.values()), report


def test_axiom_suite_mod2():
    report = hopf_axioms(1, "f2", n_random=20, seed=3)
    assert all(report.values()), report


@st.composite
def gamma_words(draw):
    w = draw(st.integers(0, 7))
    i = draw(st.integers(0, 4))
    j = draw(st.integers(0, 2))
    c = draw(st.integers(1, 255))
    return GammaElem({w: LocElem(BasePoly({(i, j): c}, N))}, N)


@settings(max_examples=40)
@given(gamma_words(), gamma_words())
def test_coproduct_multiplicative(g, h):
    lhs = coproduct(g * h)
    acc = None
    for (ws1, _), c1 in coproduct(g).terms.items():
        for (ws2, _), c2 in coproduct(h).terms.items():
            for key, p in tensor_mul_words(ws1, ws2, N, "z2"):
                term = tensor({key: c1 * c2 * LocElem(p)})
                acc = term if acc is None else acc + term
    assert lhs == acc


@settings(max_examples=30)
@given(gamma_words())
def test_grading_preserved(g):
    w = next(iter(g.coeffs))
    deg = WORD_DEGREE[w] + g.coeffs[w].degree()
    assert coproduct(g).degrees() == {deg}
    assert coface(coproduct(g), 1).degrees() == {deg}
