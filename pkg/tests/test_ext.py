from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from cobarforge.arith import Echelon, PrecisionError
from cobarforge.ext import (
    ExtEngine,
    RangeError,
    bockstein_d1,
    h1_chain,
    integral_ext,
    mbar_labels,
    unit_labels,
)
from cobarforge.ext import ExtClass

# dims of Ext^{s,t}(Unit) over F2, computed once and frozen; the unnormalized
# complex reproduces them independently (see test_normalized_matches_unnormalized)
FROZEN_UNIT_DIMS = {
    (0, 0): 1, (0, 2): 1, (1, 2): 1, (0, 4): 1, (1, 4): 2, (2, 4): 1,
    (0, 6): 1, (1, 6): 1, (2, 6): 1, (3, 6): 1,
    (0, 8): 1, (1, 8): 2, (2, 8): 2, (3, 8): 1, (4, 8): 1,
}


@pytest.fixture(scope="module")
def unit():
    return ExtEngine("unit")


@pytest.fixture(scope="module")
def unnormalized():
    return ExtEngine("unit", normalized=False)


@pytest.fixture(scope="module")
def mbar():
    return ExtEngine("mbar")


def test_basis_examples(unit):
    assert unit.basis(0, 0) == (((0, 0), (), 0),)
    assert unit.basis(1, 2) == (((0, 0), (1,), 0),)
    assert unit.basis(2, 4) == (((0, 0), (1, 1), 0),)


def test_basis_is_distinct_and_homogeneous(unit):
    from cobarforge.hopf import WORD_DEGREE

    for s, t in [(1, 12), (2, 14), (3, 16)]:
        b = unit.basis(s, t)
        assert len(set(b)) == len(b)
        for (i, j), ws, _ in b:
            assert len(ws) == s and 0 not in ws
            assert 2 * i + 6 * j + sum(WORD_DEGREE[w] for w in ws) == t


def test_range_guard():
    small = ExtEngine("unit", max_basis=10)
    with pytest.raises(RangeError):
        small.basis(4, 40)


def test_frozen_dims(unit):
    for (s, t), d in FROZEN_UNIT_DIMS.items():
        assert unit.dim(s, t) == d, (s, t)


def test_normalized_matches_unnormalized(unit, unnormalized):
    for s in range(5):
        for t in range(0, 25, 2):
            assert unit.dim(s, t) == unnormalized.dim(s, t), (s, t)


def test_rank_nullity(unit):
    for s in range(4):
        for t in range(0, 21, 2):
            n, rank_prev, rank = unit.ranks(s, t)
            assert unit.dim(s, t) == n - rank - rank_prev
            assert unit.dim(s, t) >= 0


def test_reversed_basis_order_same_dims(unit):
    rev = ExtEngine("unit", reverse=True)
    for s in range(4):
        for t in range(0, 21, 2):
            assert rev.dim(s, t) == unit.dim(s, t)


def test_unit_product_is_identity(unit):
    one = unit.cls({((0, 0), (), 0): 1}, 0, 0)
    for s in range(3):
        for t in range(0, 17, 2):
            for c in unit.ext_basis(s, t):
                assert unit.product(one, c).coords == c.coords


def test_h1_squared_nonzero(unit):
    h1 = unit.cls(h1_chain(), 1, 2)
    assert not unit.product(h1, h1).is_zero()


def test_product_is_bilinear(unit):
    a1 = unit.cls({((1, 0), (), 0): 1}, 0, 2)
    classes = unit.ext_basis(1, 8)
    total = ExtClass(1, 8, classes[0].coords ^ classes[1].coords, {})
    lhs = unit.times_chain(a1.rep, 0, 2, ExtClass(1, 8, total.coords, unit.rep_of(total.coords, 1, 8)))
    rhs = unit.product(a1, classes[0]).coords ^ unit.product(a1, classes[1]).coords
    assert lhs.coords == rhs


def test_labels(unit):
    report = unit_labels(unit)
    f = report.facts
    assert f["ker_a1sq_dim_1_8"] == 1 and f["r2_class_nonzero"] and f["r2_in_ker_a1sq"]
    assert f["delta_h1_4_nonzero"] and f["g_solvable"] and f["g_indecomposable"]
    c = report.classes
    assert (c["h1"].s, c["h1"].t) == (1, 2) and not c["h1"].is_zero()
    assert (c["x"].stem, c["x"].s) == (7, 1)
    assert (c["g"].stem, c["g"].s) == (20, 4)
    assert (c["Delta"].s, c["Delta"].t) == (0, 24) and not c["Delta"].is_zero()


def test_x_is_killed_by_a1_squared(unit):
    x = unit_labels(unit).classes["x"]
    assert not x.is_zero()
    assert unit.times_chain({((2, 0), (), 0): 1}, 0, 4, x).is_zero()


def test_g_is_pinned_down(unit):
    """Exactly one indecomposable class y in Ext^{4,24} has a1^4 y = Delta h1^4."""
    decomposables = unit.multiplication_matrix({((1, 0), (), 0): 1}, 0, 2, 4, 22)
    decomposables += unit.multiplication_matrix(h1_chain(), 1, 2, 3, 22)
    span = Echelon()
    for v in decomposables:
        span.add(v)
    g = unit_labels(unit).classes["g"]
    a1_4 = {((4, 0), (), 0): 1}
    images = unit.multiplication_matrix(a1_4, 0, 8, 4, 24)
    hits = [y for y in range(1, 1 << unit.dim(4, 24))
            if not span.contains(y) and _apply(images, y) == _apply(images, g.coords)]
    assert hits == [g.coords]
    # Delta h1^4 is not a1^4 times a decomposable class
    for y in range(1 << unit.dim(4, 24)):
        if span.contains(y):
            assert _apply(images, y) != _apply(images, g.coords)


def _apply(images, coords):
    out = 0
    for i, v in enumerate(images):
        if coords >> i & 1:
            out ^= v
    return out


def test_mbar_labels(mbar):
    c = mbar_labels(mbar).classes
    assert not c["b1"].is_zero() and not c["sqrtDelta_b1"].is_zero()


def test_integral_examples():
    g00 = integral_ext(0, 0, "unit", 8)
    assert g00.free == 1 and g00.torsion == ()
    assert integral_ext(1, 2, "unit", 8).orders() == ["Z/2"]
    assert integral_ext(1, 4, "unit", 8).orders() == ["Z/4"]


def test_integral_mbar_refused():
    with pytest.raises(PrecisionError):
        integral_ext(0, 2, "mbar", 8)


def test_integral_precision_guard():
    with pytest.raises(PrecisionError):
        integral_ext(1, 2, "unit", 3)


def test_integral_stable_and_two_primary(unit):
    for s in range(4):
        for t in range(0, 21, 2):
            a, b = integral_ext(s, t, "unit", 6), integral_ext(s, t, "unit", 8)
            assert a.orders() == b.orders(), (s, t)
            assert all(o & (o - 1) == 0 for o in b.torsion)


def test_universal_coefficients(unit):
    for s in range(3):
        for t in range(0, 21, 2):
            g, nxt = integral_ext(s, t, "unit", 8), integral_ext(s + 1, t, "unit", 8)
            assert unit.dim(s, t) == g.free + len(g.torsion) + len(nxt.torsion), (s, t)


def test_bockstein_a1_is_h1(unit):
    res = bockstein_d1(unit, {((1, 0), (), 0): 1}, 0, 2)
    assert res.value.coords == unit.cls(h1_chain(), 1, 2).coords and not res.is_zero


def test_bockstein_delta_vanishes(unit):
    integral_delta = {((3, 3), (), 0): 1, ((0, 4), (), 0): -27}
    assert bockstein_d1(unit, integral_delta, 0, 24).is_zero


def test_bockstein_rejects_non_cocycle(unit):
    with pytest.raises(ValueError):
        bockstein_d1(unit, {((0, 1), (), 0): 1}, 0, 6)


def test_bockstein_b1(mbar):
    lift = {((3, 3), (), 0): 1, ((0, 4), (), 0): -27}
    res = bockstein_d1(mbar, lift, 0, 26)
    assert not res.is_zero
    a1_images = mbar.multiplication_matrix({((1, 0), (), 0): 1}, 0, 2, 1, 24)
    span = Echelon()
    for v in a1_images:
        span.add(v)
    assert not span.contains(res.value.coords)


@settings(max_examples=25)
@given(st.integers(0, 6), st.integers(0, 3))
def test_bockstein_squares_to_zero(i, j):
    unit = _shared_unit()
    lift = {((i, j), (), 0): 1}
    t = 2 * i + 6 * j
    first = bockstein_d1(unit, lift, 0, t) if _even_boundary(lift) else None
    if first is None:
        return
    integral = ExtEngine("unit", prec=4)
    half = {k: c // 2 for k, c in integral.d_chain(lift).items()}
    second = bockstein_d1(unit, half, 1, t)
    assert second.is_zero


_UNIT = []


def _shared_unit():
    if not _UNIT:
        _UNIT.append(ExtEngine("unit"))
    return _UNIT[0]


def _even_boundary(lift):
    d = ExtEngine("unit", prec=4).d_chain(lift)
    return all(c % 2 == 0 for c in d.values())
