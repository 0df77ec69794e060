"""The ring Z/2^N[a1, a3, a3^-1, v2^-1] as fractions with a3 and v2 denominators."""
from __future__ import annotations

from functools import lru_cache

from .coeff import ModeError
from .poly import BasePoly, divmod_v2

__all__ = ["LocElem", "loc_add", "loc_mul", "reduce_fraction", "v2_power", "delta_power"]


@lru_cache(maxsize=None)
def v2_power(k: int, prec: int, mode: str) -> BasePoly:
    return BasePoly.v2(prec, mode) ** k


@lru_cache(maxsize=None)
def delta_power(k: int, prec: int, mode: str) -> BasePoly:
    return BasePoly.delta(prec, mode) ** k


class LocElem:
    """numerator / (a3^da3 * v2^dv2).

    Fractions are not reduced automatically; ``reduce`` cancels common factors
    of a3 and v2, and equality uses cross-multiplication.
    """

    __slots__ = ("num", "da3", "dv2")

    def __init__(self, num: BasePoly, da3: int = 0, dv2: int = 0):
        if da3 < 0 or dv2 < 0:
            raise ValueError("denominator exponents must be non-negative")
        self.num = num
        self.da3 = da3
        self.dv2 = dv2

    # constructors
    @classmethod
    def const(cls, c: int, prec: int = 8, mode: str = "z2") -> "LocElem":
        return cls(BasePoly.const(c, prec, mode))

    @classmethod
    def zero(cls, prec: int = 8, mode: str = "z2") -> "LocElem":
        return cls(BasePoly({}, prec, mode))

    @classmethod
    def one(cls, prec: int = 8, mode: str = "z2") -> "LocElem":
        return cls.const(1, prec, mode)

    @classmethod
    def a1(cls, prec: int = 8, mode: str = "z2") -> "LocElem":
        return cls(BasePoly.mono(1, 0, 1, prec, mode))

    @classmethod
    def a3(cls, prec: int = 8, mode: str = "z2") -> "LocElem":
        return cls(BasePoly.mono(0, 1, 1, prec, mode))

    @classmethod
    def a3inv(cls, prec: int = 8, mode: str = "z2") -> "LocElem":
        return cls(BasePoly.const(1, prec, mode), 1, 0)

    @classmethod
    def v2(cls, prec: int = 8, mode: str = "z2") -> "LocElem":
        return cls(BasePoly.v2(prec, mode))

    @classmethod
    def v2inv(cls, prec: int = 8, mode: str = "z2") -> "LocElem":
        return cls(BasePoly.const(1, prec, mode), 0, 1)

    @classmethod
    def delta(cls, prec: int = 8, mode: str = "z2") -> "LocElem":
        return cls(BasePoly.delta(prec, mode))

    @classmethod
    def delta_inv(cls, k: int = 1, prec: int = 8, mode: str = "z2") -> "LocElem":
        return cls(BasePoly.const(1, prec, mode), 3 * k, k)

    # basic attributes
    @property
    def prec(self) -> int:
        return self.num.prec

    @property
    def mode(self) -> str:
        return self.num.mode

    def _coerce(self, other) -> "LocElem":
        if isinstance(other, LocElem):
            if other.mode != self.mode:
                raise ModeError("cannot mix F2 and Z/2^N elements")
            return other
        if isinstance(other, BasePoly):
            if other.mode != self.mode:
                raise ModeError("cannot mix F2 and Z/2^N elements")
            return LocElem(other)
        if isinstance(other, int):
            return LocElem(BasePoly.const(other, self.prec, self.mode))
        raise TypeError(f"cannot combine LocElem with {type(other).__name__}")

    def expand_to(self, da3: int, dv2: int) -> BasePoly:
        """Numerator over the larger denominator a3^da3 v2^dv2."""
        num = self.num
        if da3 > self.da3:
            num = num.shift(0, da3 - self.da3)
        if dv2 > self.dv2:
            num = num * v2_power(dv2 - self.dv2, num.prec, num.mode)
        return num

    # arithmetic
    def __add__(self, other) -> "LocElem":
        o = self._coerce(other)
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        da3, dv2 = max(self.da3, o.da3), max(self.dv2, o.dv2)
        return LocElem(self.expand_to(da3, dv2) + o.expand_to(da3, dv2), da3, dv2)

    __radd__ = __add__

    def __neg__(self) -> "LocElem":
        return LocElem(-self.num, self.da3, self.dv2)

    def __sub__(self, other) -> "LocElem":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LocElem":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LocElem":
        if isinstance(other, int):
            return LocElem(self.num * other, self.da3, self.dv2)
        o = self._coerce(other)
        return LocElem(self.num * o.num, self.da3 + o.da3, self.dv2 + o.dv2)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "LocElem":
        if e < 0:
            return self.inverse_monomial() ** (-e)
        return LocElem(self.num ** e, self.da3 * e, self.dv2 * e)

    def inverse_monomial(self) -> "LocElem":
        """Inverse of a unit of the form c * a3^i * v2^j with c odd."""
        r = self.reduce()
        num, j = r.num, 0
        while True:
            q, rem = divmod_v2(num)
            if not rem.is_zero() or q.is_zero():
                break
            num, j = q, j + 1
        if len(num.terms) != 1:
            raise ValueError("element is not a unit of the form c a3^i v2^j")
        ((e1, i), c), = num.terms.items()
        if e1 != 0 or c % 2 == 0:
            raise ValueError("element is not a unit of the form c a3^i v2^j")
        inv = BasePoly.const(pow(c, -1, num.modulus), r.prec, r.mode)
        return LocElem(inv.shift(0, r.da3) * v2_power(r.dv2, r.prec, r.mode), i, j)

    # reduction and comparisons
    def reduce(self) -> "LocElem":
        num, da3, dv2 = self.num, self.da3, self.dv2
        if num.is_zero():
            return LocElem(num, 0, 0)
        k = min(da3, num.min_a3())
        if k:
            num = num.shift(0, -k)
            da3 -= k
        while dv2:
            q, r = divmod_v2(num)
            if not r.is_zero():
                break
            num, dv2 = q, dv2 - 1
        return LocElem(num, da3, dv2)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, (LocElem, BasePoly, int)):
            return NotImplemented
        return (self - self._coerce(other)).is_zero()

    def __hash__(self) -> int:
        r = self.reduce()
        return hash((r.num, r.da3, r.dv2))

    def degree(self) -> int | None:
        d = self.num.degree()
        return None if d is None else d - 6 * (self.da3 + self.dv2)

    def delta_form(self) -> tuple[BasePoly, int]:
        """(p, m) with self = p / Delta^m, Delta = a3^3 v2."""
        m = max(self.dv2, -(-self.da3 // 3))
        return self.expand_to(3 * m, m), m

    def valuation(self) -> int:
        return self.num.valuation()

    def divisible_by_2k(self, k: int) -> bool:
        return self.num.divisible_by_2k(k)

    def div_2k(self, k: int) -> "LocElem":
        return LocElem(self.num.div_2k(k), self.da3, self.dv2)

    def truncate(self, n: int) -> "LocElem":
        return LocElem(self.num.truncate(n), self.da3, self.dv2)

    def to_f2(self) -> "LocElem":
        return LocElem(self.num.to_f2(), self.da3, self.dv2)

    def lift(self, n: int) -> "LocElem":
        return LocElem(self.num.lift(n), self.da3, self.dv2)

    def is_polynomial(self) -> bool:
        r = self.reduce()
        return r.da3 == 0 and r.dv2 == 0

    def __repr__(self) -> str:
        from ..expr import format_loc

        return f"LocElem({format_loc(self)!r})"


def loc_add(a: LocElem, b: LocElem) -> LocElem:
    return (a + b).reduce()


def loc_mul(a: LocElem, b: LocElem) -> LocElem:
    return (a * b).reduce()


def reduce_fraction(x: LocElem) -> LocElem:
    return x.reduce()
