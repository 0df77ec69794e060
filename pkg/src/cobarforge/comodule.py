"""The 2-torsion comodule M = A[z]/(2z - a1 z^2 + a3 z^4) and its quotient MBar.

Coaction convention: psi is a ring map M -> Gamma (x)_A M that is A-linear for
the left unit, and Gamma (x)_A M is formed with the right unit of Gamma, so
g (x) a m = g eta_R(a) (x) m.  Writing zeta = 1 (x) z, zeta satisfies the
quartic with eta_R-transformed coefficients, and

    psi(z) = (zeta - r zeta^3) / (1 - s zeta + t zeta^3)

satisfies the original quartic.  The quotient MBar = A{z, z^2} is M modulo
1 and tr 1 = 2 - a1 z + a3 z^3.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Mapping, Sequence

from .arith import BasePoly, Echelon, LocElem, ModeError
from .arith.poly import mono_degree
from .hopf import (
    WORD_DEGREE,
    GammaElem,
    TensorElem,
    _loc_sum,
    absorb_loc,
    eta_R,
    r_elem,
    s_elem,
    t_elem,
)

__all__ = [
    "ComoduleElem",
    "GammaTors",
    "MulMatrix",
    "mul_matrix",
    "trace_element",
    "hensel_invert",
    "coaction",
    "coaction_z",
    "quotient_to_mbar",
    "quotient_tensor",
    "b_basis_change",
    "from_b_basis",
    "b1",
    "b5",
    "sqrt_delta",
    "sqrt_delta_op",
    "z_minus8",
    "unit_tensor",
    "tensor_in_b_basis",
    "HenselError",
]

Z_DEGREE = {0: 0, 1: -2, 2: -4, 3: -6}


class HenselError(ArithmeticError):
    """The element is not invertible modulo 2."""


class ComoduleElem:
    """Element of TorsM (basis 1, z, z^2, z^3) or MBar (basis z, z^2)."""

    __slots__ = ("tag", "coeffs", "prec", "mode")

    def __init__(self, tag: str, coeffs: Mapping[int, LocElem] | None = None, prec: int = 8, mode: str = "z2"):
        if tag not in ("tors", "mbar"):
            raise ValueError(f"unknown comodule tag {tag!r}")
        self.tag = tag
        self.prec = prec
        self.mode = mode
        basis = (0, 1, 2, 3) if tag == "tors" else (1, 2)
        self.coeffs: dict[int, LocElem] = {}
        for j, c in (coeffs or {}).items():
            if j not in basis:
                raise ValueError(f"z^{j} is not a basis element of {tag}")
            if isinstance(c, int):
                c = LocElem.const(c, prec, mode)
            elif isinstance(c, BasePoly):
                c = LocElem(c)
            if c.mode != mode:
                raise ModeError("coefficient mode mismatch")
            if not c.is_zero():
                self.coeffs[j] = c
                self.prec = min(self.prec, c.prec)

    @classmethod
    def scalar(cls, a: LocElem) -> "ComoduleElem":
        return cls("tors", {0: a}, a.prec, a.mode)

    @classmethod
    def z(cls, prec: int = 8, mode: str = "z2", power: int = 1) -> "ComoduleElem":
        one = cls("tors", {0: LocElem.one(prec, mode)}, prec, mode)
        gen = cls("tors", {1: LocElem.one(prec, mode)}, prec, mode)
        out = one
        for _ in range(power):
            out = out * gen
        return out

    def _coerce(self, other) -> "ComoduleElem":
        if isinstance(other, ComoduleElem):
            if other.mode != self.mode:
                raise ModeError("cannot mix F2 and Z/2^N elements")
            return other
        if isinstance(other, (LocElem, BasePoly, int)):
            if self.tag != "tors":
                raise TypeError("MBar has no unit; scalars cannot be added")
            c = other if isinstance(other, LocElem) else (LocElem(other) if isinstance(other, BasePoly) else LocElem.const(other, self.prec, self.mode))
            return ComoduleElem("tors", {0: c}, self.prec, self.mode)
        raise TypeError(f"cannot combine ComoduleElem with {type(other).__name__}")

    def __add__(self, other) -> "ComoduleElem":
        o = self._coerce(other)
        if o.tag != self.tag:
            raise ValueError("cannot add TorsM and MBar elements")
        out = dict(self.coeffs)
        for j, c in o.coeffs.items():
            out[j] = out[j] + c if j in out else c
        return ComoduleElem(self.tag, out, min(self.prec, o.prec), self.mode)

    __radd__ = __add__

    def __neg__(self) -> "ComoduleElem":
        return ComoduleElem(self.tag, {j: -c for j, c in self.coeffs.items()}, self.prec, self.mode)

    def __sub__(self, other) -> "ComoduleElem":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "ComoduleElem":
        return self._coerce(other) - self

    def scale(self, a: LocElem | int) -> "ComoduleElem":
        return ComoduleElem(self.tag, {j: c * a for j, c in self.coeffs.items()}, self.prec, self.mode)

    def __mul__(self, other) -> "ComoduleElem":
        if isinstance(other, (int, LocElem)):
            return self.scale(other)
        if isinstance(other, BasePoly):
            return self.scale(LocElem(other))
        o = self._coerce(other)
        if "mbar" in (self.tag, o.tag):
            if self.tag == "tors" and set(self.coeffs) <= {0}:
                return o.scale(self.coeffs.get(0, LocElem.zero(self.prec, self.mode)))
            if o.tag == "tors" and set(o.coeffs) <= {0}:
                return self.scale(o.coeffs.get(0, LocElem.zero(o.prec, o.mode)))
            raise TypeError("MBar is a module, not a ring")
        prec = min(self.prec, o.prec)
        acc: dict[int, list[LocElem]] = {}
        for i, c in self.coeffs.items():
            for j, c2 in o.coeffs.items():
                for k, r in _z_power(i + j, prec, self.mode):
                    acc.setdefault(k, []).append(c * c2 * r)
        return ComoduleElem("tors", {k: _loc_sum(cs) for k, cs in acc.items()}, prec, self.mode)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "ComoduleElem":
        out = ComoduleElem("tors", {0: LocElem.one(self.prec, self.mode)}, self.prec, self.mode)
        for _ in range(e):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, (ComoduleElem, LocElem, BasePoly, int)):
            return NotImplemented
        o = self._coerce(other)
        if o.tag != self.tag:
            return False
        return (self - o).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def coeff(self, j: int) -> LocElem:
        return self.coeffs.get(j, LocElem.zero(self.prec, self.mode))

    def reduce(self) -> "ComoduleElem":
        return ComoduleElem(self.tag, {j: c.reduce() for j, c in self.coeffs.items()}, self.prec, self.mode)

    def truncate(self, n: int) -> "ComoduleElem":
        return ComoduleElem(self.tag, {j: c.truncate(n) for j, c in self.coeffs.items()}, n, self.mode)

    def to_f2(self) -> "ComoduleElem":
        return ComoduleElem(self.tag, {j: c.to_f2() for j, c in self.coeffs.items()}, 1, "f2")

    def degrees(self) -> set[int]:
        out = set()
        for j, c in self.coeffs.items():
            for m in c.num.terms:
                out.add(mono_degree(m) - 6 * (c.da3 + c.dv2) + Z_DEGREE[j])
        return out

    def to_mbar(self) -> "ComoduleElem":
        return quotient_to_mbar(self)

    def __repr__(self) -> str:
        from .expr import format_comodule

        return f"ComoduleElem({self.tag}, {format_comodule(self)!r})"


@lru_cache(maxsize=None)
def _z_power(k: int, prec: int, mode: str) -> tuple[tuple[int, LocElem], ...]:
    """z^k in the basis 1, z, z^2, z^3 of TorsM, via z^4 = a3^-1 (a1 z^2 - 2 z)."""
    if k < 4:
        return ((k, LocElem.one(prec, mode)),)
    a1 = LocElem.a1(prec, mode)
    a3inv = LocElem.a3inv(prec, mode)
    acc: dict[int, list[LocElem]] = {}
    for j, c in _z_power(k - 1, prec, mode):
        if j < 3:
            acc.setdefault(j + 1, []).append(c)
        else:
            acc.setdefault(2, []).append(c * a1 * a3inv)
            acc.setdefault(1, []).append(c * a3inv * -2)
    return tuple(sorted((j, _loc_sum(cs).reduce()) for j, cs in acc.items()))


def trace_element(prec: int = 8, mode: str = "z2") -> ComoduleElem:
    """tr 1 = 2 - a1 z + a3 z^3."""
    return ComoduleElem("tors", {0: LocElem.const(2, prec, mode), 1: -LocElem.a1(prec, mode), 3: LocElem.a3(prec, mode)}, prec, mode)


def quotient_to_mbar(m: ComoduleElem) -> ComoduleElem:
    """TorsM -> MBar: 1 -> 0, z^3 -> a1 a3^-1 z."""
    if m.tag == "mbar":
        return m
    c1 = m.coeff(1) + m.coeff(3) * LocElem.a1(m.prec, m.mode) * LocElem.a3inv(m.prec, m.mode)
    return ComoduleElem("mbar", {1: c1.reduce(), 2: m.coeff(2)}, m.prec, m.mode)


def lift_to_tors(m: ComoduleElem) -> ComoduleElem:
    return ComoduleElem("tors", dict(m.coeffs), m.prec, m.mode)


def b_basis_change(m: ComoduleElem) -> tuple[LocElem, LocElem]:
    """Coefficients of m on b1 = a3 z^2 and b5 = a3^2 z."""
    if m.tag != "mbar":
        m = quotient_to_mbar(m)
    a3inv = LocElem.a3inv(m.prec, m.mode)
    return (m.coeff(2) * a3inv).reduce(), (m.coeff(1) * a3inv * a3inv).reduce()


def from_b_basis(c1: LocElem, c5: LocElem) -> ComoduleElem:
    a3 = LocElem.a3(c1.prec, c1.mode)
    return ComoduleElem("mbar", {2: (c1 * a3).reduce(), 1: (c5 * a3 * a3).reduce()}, min(c1.prec, c5.prec), c1.mode)


def b1(prec: int = 8, mode: str = "z2") -> ComoduleElem:
    return ComoduleElem("mbar", {2: LocElem.a3(prec, mode)}, prec, mode)


def b5(prec: int = 8, mode: str = "z2") -> ComoduleElem:
    return ComoduleElem("mbar", {1: LocElem.a3(prec, mode) * LocElem.a3(prec, mode)}, prec, mode)


def sqrt_delta(prec: int = 8, mode: str = "z2") -> ComoduleElem:
    """a3^2 (1 + a1 z) in TorsM."""
    a3sq = LocElem.a3(prec, mode) * LocElem.a3(prec, mode)
    return ComoduleElem("tors", {0: a3sq, 1: a3sq * LocElem.a1(prec, mode)}, prec, mode)


def sqrt_delta_op(m: ComoduleElem) -> ComoduleElem:
    """Multiplication by a3^2 (1 + a1 z) on MBar/2 (well defined only mod 2)."""
    if m.mode != "f2":
        m = ComoduleElem(m.tag, {j: c.to_f2() for j, c in m.coeffs.items()}, 1, "f2")
    return quotient_to_mbar(lift_to_tors(m) * sqrt_delta(1, "f2"))


def z_minus8(prec: int = 8, mode: str = "z2") -> ComoduleElem:
    """v2^-1 [a1 (z^2 - a3^-1 a1^2 z) + 2 z]."""
    a1 = LocElem.a1(prec, mode)
    v2inv = LocElem.v2inv(prec, mode)
    c2 = a1 * v2inv
    c1 = (-(a1 * a1 * a1 * LocElem.a3inv(prec, mode)) + 2) * v2inv
    return ComoduleElem("tors", {1: c1.reduce(), 2: c2.reduce()}, prec, mode)


# ---------------------------------------------------------------- Gamma (x) M as a ring

class GammaTors:
    """Element of Gamma (x)_A M written as sum_j g_j (x) zeta^j, j < 4."""

    __slots__ = ("parts", "prec", "mode")

    def __init__(self, parts: Sequence[GammaElem] | Mapping[int, GammaElem], prec: int = 8, mode: str = "z2"):
        self.prec = prec
        self.mode = mode
        items = parts.items() if isinstance(parts, Mapping) else enumerate(parts)
        self.parts: dict[int, GammaElem] = {}
        for j, g in items:
            if not 0 <= j < 4:
                raise ValueError("zeta power out of range")
            if not g.is_zero():
                self.parts[j] = g
                self.prec = min(self.prec, g.prec)

    @classmethod
    def one(cls, prec: int = 8, mode: str = "z2") -> "GammaTors":
        return cls({0: GammaElem({0: LocElem.one(prec, mode)}, prec, mode)}, prec, mode)

    @classmethod
    def zeta(cls, prec: int = 8, mode: str = "z2") -> "GammaTors":
        return cls({1: GammaElem({0: LocElem.one(prec, mode)}, prec, mode)}, prec, mode)

    def part(self, j: int) -> GammaElem:
        return self.parts.get(j, GammaElem({}, self.prec, self.mode))

    def __add__(self, other: "GammaTors") -> "GammaTors":
        out = dict(self.parts)
        for j, g in other.parts.items():
            out[j] = out[j] + g if j in out else g
        return GammaTors(out, min(self.prec, other.prec), self.mode)

    def __neg__(self) -> "GammaTors":
        return GammaTors({j: -g for j, g in self.parts.items()}, self.prec, self.mode)

    def __sub__(self, other: "GammaTors") -> "GammaTors":
        return self + (-other)

    def scale(self, g: GammaElem | LocElem | int) -> "GammaTors":
        return GammaTors({j: p * g for j, p in self.parts.items()}, self.prec, self.mode)

    def __mul__(self, other) -> "GammaTors":
        if not isinstance(other, GammaTors):
            return self.scale(other)
        prec = min(self.prec, other.prec)
        acc: dict[int, GammaElem] = {}
        for i, g in self.parts.items():
            for j, h in other.parts.items():
                gh = g * h
                for k, coeff in _zeta_power(i + j, prec, self.mode):
                    term = gh if coeff is None else gh * coeff
                    acc[k] = acc[k] + term if k in acc else term
        return GammaTors({k: v.reduce() for k, v in acc.items()}, prec, self.mode)

    def __pow__(self, e: int) -> "GammaTors":
        out = GammaTors.one(self.prec, self.mode)
        for _ in range(e):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.parts.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GammaTors):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def truncate(self, n: int) -> "GammaTors":
        return GammaTors({j: g.truncate(n) for j, g in self.parts.items()}, n, self.mode)

    def to_f2(self) -> "GammaTors":
        return GammaTors({j: g.to_f2() for j, g in self.parts.items()}, 1, "f2")

    def lift(self, n: int) -> "GammaTors":
        return GammaTors({j: GammaElem({w: c.lift(n) for w, c in g.coeffs.items()}, n, "z2") for j, g in self.parts.items()}, n, "z2")

    def to_tensor(self, tag: str = "tors") -> TensorElem:
        terms = {((w,), j): c for j, g in self.parts.items() for w, c in g.coeffs.items()}
        return TensorElem(1, tag, terms, self.prec, self.mode)

    @classmethod
    def from_tensor(cls, x: TensorElem) -> "GammaTors":
        parts: dict[int, dict[int, LocElem]] = {}
        for ((w,), j), c in x.terms.items():
            parts.setdefault(j, {})[w] = c
        return cls({j: GammaElem(d, x.prec, x.mode) for j, d in parts.items()}, x.prec, x.mode)


@lru_cache(maxsize=None)
def _zeta4(prec: int, mode: str) -> tuple[GammaElem, GammaElem]:
    """zeta^4 = G2 zeta^2 + G1 zeta with G2 = eta_R(a1/a3), G1 = eta_R(-2/a3)."""
    a3inv = LocElem.a3inv(prec, mode)
    g2 = eta_R(LocElem.a1(prec, mode) * a3inv).reduce()
    g1 = eta_R(a3inv * -2).reduce()
    return g2, g1


@lru_cache(maxsize=None)
def _zeta_power(k: int, prec: int, mode: str) -> tuple[tuple[int, GammaElem | None], ...]:
    """zeta^k = sum_j G_j zeta^j; None stands for the unit of Gamma."""
    if k < 4:
        return ((k, None),)
    g2, g1 = _zeta4(prec, mode)
    acc: dict[int, GammaElem] = {}
    for j, c in _zeta_power(k - 1, prec, mode):
        c = GammaElem({0: LocElem.one(prec, mode)}, prec, mode) if c is None else c
        if j < 3:
            acc[j + 1] = acc[j + 1] + c if j + 1 in acc else c
        else:
            for jj, g in ((2, g2), (1, g1)):
                term = c * g
                acc[jj] = acc[jj] + term if jj in acc else term
    return tuple(sorted((j, v.reduce()) for j, v in acc.items()))


class MulMatrix:
    """Matrix of multiplication by u on the basis 1, zeta, zeta^2, zeta^3."""

    def __init__(self, u: GammaTors):
        self.u = u
        cols = []
        for j in range(4):
            zj = GammaTors({j: GammaElem({0: LocElem.one(u.prec, u.mode)}, u.prec, u.mode)}, u.prec, u.mode)
            cols.append(u * zj)
        self.entries = [[cols[j].part(i) for j in range(4)] for i in range(4)]

    def column(self, j: int) -> list[GammaElem]:
        return [self.entries[i][j] for i in range(4)]


def mul_matrix(u: GammaTors) -> MulMatrix:
    return MulMatrix(u)


def _monomials(deg: int) -> list[tuple[int, int]]:
    if deg < 0 or deg % 2:
        return []
    out = []
    for j in range(deg // 6 + 1):
        rest = deg - 6 * j
        out.append((rest // 2, j))
    return out


def _f2_inverse(u: GammaTors, max_k: int = 8) -> GammaTors:
    """Solve u X = 1 mod 2 with X = sum p_{w,j} / Delta^K w (x) zeta^j, p polynomial."""
    uf = u.to_f2()
    for K in range(max_k + 1):
        unknowns = []
        products = []
        for w in range(8):
            for j in range(4):
                d = 24 * K - WORD_DEGREE[w] + 2 * j
                for m in _monomials(d):
                    coeff = LocElem(BasePoly.mono(m[0], m[1], 1, 1, "f2"), 3 * K, K)
                    x = GammaTors({j: GammaElem({w: coeff}, 1, "f2")}, 1, "f2")
                    unknowns.append((w, j, coeff))
                    products.append(uf * x)
        if not unknowns:
            continue
        depth = 0
        for prod in products:
            for g in prod.parts.values():
                for c in g.coeffs.values():
                    depth = max(depth, c.delta_form()[1])
        index: dict[tuple, int] = {}

        def vec(prod: GammaTors) -> int:
            v = 0
            for j, g in prod.parts.items():
                for w, c in g.coeffs.items():
                    p, m = c.delta_form()
                    p = p * BasePoly.delta(1, "f2") ** (depth - m)
                    for mono in p.terms:
                        key = (w, j, mono)
                        if key not in index:
                            index[key] = len(index)
                        v ^= 1 << index[key]
            return v

        rows = [vec(p) for p in products]
        target = GammaTors({0: GammaElem({0: LocElem(BasePoly.delta(1, "f2") ** depth, 3 * depth, depth)}, 1, "f2")}, 1, "f2")
        t = vec(target)
        e = Echelon()
        for i, row in enumerate(rows):
            e.add(row, 1 << i)
        rem, tag = e.reduce(t)
        if rem:
            continue
        acc: dict[int, dict[int, list[LocElem]]] = {}
        i = 0
        while tag:
            if tag & 1:
                w, j, coeff = unknowns[i]
                acc.setdefault(j, {}).setdefault(w, []).append(coeff)
            tag >>= 1
            i += 1
        parts = {j: GammaElem({w: _loc_sum(cs).reduce() for w, cs in d.items()}, 1, "f2") for j, d in acc.items()}
        return GammaTors(parts, 1, "f2")
    raise HenselError("element is not invertible modulo 2 within the search range")


def hensel_invert(u: GammaTors) -> GammaTors:
    """Inverse in Gamma (x) M: solve mod 2, then Newton steps V <- V (2 - u V)."""
    if u.mode == "f2":
        return _f2_inverse(u)
    n = u.prec
    v = _f2_inverse(u).lift(n)
    two = GammaTors.one(n, "z2").scale(2)
    bits = 1
    while bits < n:
        v = v * (two - u * v)
        bits *= 2
    one = GammaTors.one(n, "z2")
    if not (u * v) == one:
        raise HenselError("Newton iteration failed to converge")
    return v


@lru_cache(maxsize=None)
def coaction_z(prec: int = 8, mode: str = "z2") -> GammaTors:
    """psi(z) = (zeta - r zeta^3)(1 - s zeta + t zeta^3)^-1, cached per precision."""
    one = GammaElem({0: LocElem.one(prec, mode)}, prec, mode)
    num = GammaTors({1: one, 3: -r_elem(prec, mode)}, prec, mode)
    den = GammaTors({0: one, 1: -s_elem(prec, mode), 3: t_elem(prec, mode)}, prec, mode)
    return num * hensel_invert(den)


@lru_cache(maxsize=None)
def coaction_z_power(j: int, prec: int = 8, mode: str = "z2") -> GammaTors:
    if j == 0:
        return GammaTors.one(prec, mode)
    return coaction_z_power(j - 1, prec, mode) * coaction_z(prec, mode)


@lru_cache(maxsize=None)
def coaction_basis(tag: str, j: int, prec: int = 8, mode: str = "z2") -> TensorElem:
    """psi of a basis element z^j of TorsM or MBar as an arity-1 tensor."""
    x = coaction_z_power(j, prec, mode).to_tensor("tors")
    if tag == "tors":
        return x
    return quotient_tensor(x)


def coaction(m: ComoduleElem) -> TensorElem:
    acc: dict = {}
    for j, c in m.coeffs.items():
        for k, v in coaction_basis(m.tag, j, m.prec, m.mode).terms.items():
            acc.setdefault(k, []).append(c * v)
    return TensorElem(1, m.tag, {k: _loc_sum(cs) for k, cs in acc.items()}, m.prec, m.mode)


def quotient_tensor(x: TensorElem) -> TensorElem:
    """Apply TorsM -> MBar in the comodule factor of a chain."""
    if x.tag == "mbar":
        return x
    if x.tag != "tors":
        raise ValueError("quotient applies to TorsM chains")
    ratio = (LocElem.a1(x.prec, x.mode) * LocElem.a3inv(x.prec, x.mode))
    acc: dict = {}
    for (ws, j), c in x.terms.items():
        if j == 0:
            continue
        if j in (1, 2):
            acc.setdefault((ws, j), []).append(c)
            continue
        for pre, q in absorb_loc(ws, ratio).items():
            acc.setdefault((pre, 1), []).append(c * q)
    return TensorElem(x.arity, "mbar", {k: _loc_sum(cs).reduce() for k, cs in acc.items()}, x.prec, x.mode)


def unit_tensor(m: ComoduleElem) -> TensorElem:
    """1 (x) m, i.e. sum_j eta_R(c_j) (x) z^j."""
    acc: dict = {}
    for j, c in m.coeffs.items():
        for w, e in eta_R(c).coeffs.items():
            acc.setdefault(((w,), j), []).append(e)
    return TensorElem(1, m.tag, {k: _loc_sum(cs) for k, cs in acc.items()}, m.prec, m.mode)


def tensor_in_b_basis(x: TensorElem) -> dict[str, TensorElem]:
    """Rewrite an MBar chain as sum g_b (x) b over b in {b1, b5} (Unit-tagged g_b)."""
    if x.tag != "mbar":
        raise ValueError("b-basis applies to MBar chains")
    a3inv = LocElem.a3inv(x.prec, x.mode)
    acc: dict[str, dict] = {"b1": {}, "b5": {}}
    for (ws, j), c in x.terms.items():
        name, factor = ("b1", a3inv) if j == 2 else ("b5", a3inv * a3inv)
        for pre, q in absorb_loc(ws, factor).items():
            acc[name].setdefault((pre, 0), []).append(c * q)
    return {name: TensorElem(x.arity, "unit", {k: _loc_sum(cs).reduce() for k, cs in d.items()}, x.prec, x.mode) for name, d in acc.items()}
