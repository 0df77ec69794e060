from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cobarforge.arith import (
    BasePoly,
    F2Matrix,
    LocElem,
    ModeError,
    TruncatedCoeff,
    f2_kernel_basis,
    f2_rank,
    f2_rank_columns,
    invert_unit,
    loc_add,
    loc_mul,
    reduce_fraction,
    snf,
    snf_divisors,
)


def test_truncated_coeff_wraps_and_aligns():
    a = TruncatedCoeff(300, 8)
    assert a.value == 44
    b = TruncatedCoeff(7, 3)
    assert (a + b).precision == 3
    assert (a * b) == TruncatedCoeff(44 * 7, 3)


@pytest.mark.parametrize("u,n,expected", [(3, 4, 11), (1, 8, 1), (27, 8, 19)])
def test_invert_unit_examples(u, n, expected):
    assert invert_unit(TruncatedCoeff(u, n)).value == expected


def test_invert_unit_rejects_even():
    with pytest.raises(ValueError):
        invert_unit(TruncatedCoeff(6, 8))


def test_localization_examples():
    a1, a3 = LocElem.a1(), LocElem.a3()
    assert loc_add(a1, LocElem.zero()) == a1
    assert loc_mul(LocElem.a3inv(), a3) == LocElem.one()
    dinv = LocElem.delta_inv()
    assert (dinv.da3, dinv.dv2) == (3, 1)
    assert dinv * a3 ** 3 * LocElem.v2() == LocElem.one()


def test_reduce_fraction_examples():
    v2 = BasePoly.v2()
    x = reduce_fraction(LocElem(v2 * BasePoly.mono(1, 0), 0, 1))
    assert x.dv2 == 0 and x == LocElem.a1()
    y = reduce_fraction(LocElem(BasePoly.mono(0, 2), 1, 0))
    assert y.da3 == 0 and y.num == BasePoly.mono(0, 1)
    z = reduce_fraction(LocElem(BasePoly.mono(3, 0) - BasePoly.mono(0, 1, 27), 0, 1))
    assert z == LocElem.one() and z.dv2 == 0


def test_modes_do_not_mix():
    with pytest.raises(ModeError):
        LocElem.a1(1, "f2") + LocElem.a1(8, "z2")


def test_degree_with_denominators():
    assert LocElem.delta_inv().degree() == -24
    assert (LocElem.a1() * LocElem.a3inv()).degree() == -4


# -- random localized elements ------------------------------------------------

@st.composite
def loc_elems(draw, prec=8, mode="z2"):
    n = draw(st.integers(0, 12))
    terms = {}
    for _ in range(n):
        i, j = draw(st.integers(0, 6)), draw(st.integers(0, 4))
        terms[(i, j)] = draw(st.integers(0, 2 ** prec - 1))
    da3, dv2 = draw(st.integers(0, 3)), draw(st.integers(0, 2))
    return LocElem(BasePoly(terms, prec, mode), da3, dv2)


@given(loc_elems(), loc_elems(), loc_elems())
def test_ring_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z


@given(loc_elems(prec=16), loc_elems(prec=16))
def test_ring_axioms_high_precision(x, y):
    assert (x * y) * x == x * (y * x)
    assert x - x == LocElem.zero(16)


@given(loc_elems())
def test_reduce_fraction_idempotent(x):
    r = reduce_fraction(x)
    assert r == x
    r2 = reduce_fraction(r)
    assert (r2.num, r2.da3, r2.dv2) == (r.num, r.da3, r.dv2)


@given(loc_elems(), loc_elems(), st.integers(1, 7))
def test_truncation_is_a_ring_map(x, y, n):
    assert (x * y).truncate(n) == x.truncate(n) * y.truncate(n)
    assert (x + y).truncate(n) == x.truncate(n) + y.truncate(n)


# -- linear algebra ------------------------------------------------------------

def test_f2_examples():
    eye = F2Matrix.identity(3)
    assert f2_rank(eye) == 3 and f2_kernel_basis(eye) == []
    zero = F2Matrix.zero(2, 5)
    assert f2_rank(zero) == 0 and len(f2_kernel_basis(zero)) == 5


def test_snf_example():
    assert snf_divisors([[2, 0], [0, 4]], 8) == [2, 4]


@st.composite
def dense_matrices(draw):
    r, c = draw(st.integers(1, 64)), draw(st.integers(1, 64))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    density = draw(st.sampled_from([0.05, 0.3, 0.5]))
    return (rng.random((r, c)) < density).astype(int).tolist()


@settings(max_examples=200)
@given(dense_matrices())
def test_rank_row_vs_column_elimination(entries):
    m = F2Matrix.from_dense(entries)
    rank = f2_rank(m)
    assert rank == f2_rank_columns(m)
    assert rank <= min(m.nrows, m.ncols)
    kernel = f2_kernel_basis(m)
    assert rank + len(kernel) == m.ncols
    for v in kernel:
        assert all(bin(row & v).count("1") % 2 == 0 for row in m.rows)


@given(dense_matrices(), st.randoms(use_true_random=False))
def test_rank_permutation_invariant(entries, rnd):
    rows = list(entries)
    rnd.shuffle(rows)
    perm = list(range(len(entries[0])))
    rnd.shuffle(perm)
    shuffled = [[row[j] for j in perm] for row in rows]
    assert f2_rank(F2Matrix.from_dense(entries)) == f2_rank(F2Matrix.from_dense(shuffled))


def _unimodular(rng, n, mod):
    u = np.eye(n, dtype=np.int64)
    for _ in range(3 * n):
        i, j = rng.integers(0, n, 2)
        if i != j:
            u[i] = (u[i] + int(rng.integers(0, mod)) * u[j]) % mod
    perm = rng.permutation(n)
    return u[perm]


@settings(max_examples=60)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 6), st.integers(1, 6), st.integers(4, 10))
def test_snf_invariant_under_unimodular_change(seed, r, c, n):
    rng = np.random.default_rng(seed)
    mod = 1 << n
    a = (rng.integers(0, 4, (r, c)) * (1 << rng.integers(0, n, (r, c)))) % mod
    p, q = _unimodular(rng, r, mod), _unimodular(rng, c, mod)
    b = (p @ a % mod) @ q % mod
    assert snf(a, n) == snf(b, n)


def test_snf_high_precision_uses_exact_integers():
    from cobarforge.arith.linalg import snf

    assert snf([[2 ** 35, 0], [0, 6]], 40) == [1, 35]
    assert snf([[2 ** 35, 0], [0, 6]], 8) == [1]
