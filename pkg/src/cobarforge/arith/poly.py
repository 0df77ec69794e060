"""Polynomials in a1, a3 with coefficients in Z/2^N or F2."""
from __future__ import annotations

from typing import Iterable, Mapping

from .coeff import ModeError, PrecisionError

__all__ = ["BasePoly", "Mono", "check_mode", "mono_degree"]

Mono = tuple[int, int]


def mono_degree(m: Mono) -> int:
    return 2 * m[0] + 6 * m[1]


def check_mode(mode: str, prec: int) -> None:
    if mode not in ("z2", "f2"):
        raise ModeError(f"unknown coefficient mode {mode!r}")
    if mode == "f2" and prec != 1:
        raise ModeError("F2 mode has precision 1")
    if prec < 1:
        raise PrecisionError("precision must be positive")


def _clean(terms: Mapping[Mono, int], mod: int) -> dict[Mono, int]:
    out = {}
    for m, c in terms.items():
        c %= mod
        if c:
            out[m] = c
    return out


def _mul_raw(p: Mapping[Mono, int], q: Mapping[Mono, int], mod: int) -> dict[Mono, int]:
    out: dict[Mono, int] = {}
    get = out.get
    for (i, j), c in p.items():
        for (k, l), d in q.items():
            m = (i + k, j + l)
            out[m] = (get(m, 0) + c * d) % mod
    return {m: c for m, c in out.items() if c}


class BasePoly:
    """Element of Z/2^N[a1, a3] (or F2[a1, a3]); a1 has degree 2 and a3 degree 6."""

    __slots__ = ("terms", "prec", "mode")

    def __init__(self, terms: Mapping[Mono, int] | None = None, prec: int = 8, mode: str = "z2", *, clean: bool = True):
        check_mode(mode, prec)
        self.prec = prec
        self.mode = mode
        if terms is None:
            self.terms: dict[Mono, int] = {}
        elif clean:
            self.terms = _clean(terms, 1 << prec)
        else:
            self.terms = dict(terms)

    # construction helpers
    @classmethod
    def const(cls, c: int, prec: int = 8, mode: str = "z2") -> "BasePoly":
        return cls({(0, 0): c}, prec, mode)

    @classmethod
    def mono(cls, i: int, j: int, c: int = 1, prec: int = 8, mode: str = "z2") -> "BasePoly":
        return cls({(i, j): c}, prec, mode)

    @classmethod
    def v2(cls, prec: int = 8, mode: str = "z2") -> "BasePoly":
        return cls({(3, 0): 1, (0, 1): -27}, prec, mode)

    @classmethod
    def delta(cls, prec: int = 8, mode: str = "z2") -> "BasePoly":
        return cls({(3, 3): 1, (0, 4): -27}, prec, mode)

    def _like(self, terms: Mapping[Mono, int], clean: bool = True) -> "BasePoly":
        return BasePoly(terms, self.prec, self.mode, clean=clean)

    @property
    def modulus(self) -> int:
        return 1 << self.prec

    def _coerce(self, other) -> "BasePoly":
        if isinstance(other, BasePoly):
            if other.mode != self.mode:
                raise ModeError("cannot mix F2 and Z/2^N polynomials")
            return other
        if isinstance(other, int):
            return self._like({(0, 0): other})
        raise TypeError(f"cannot combine BasePoly with {type(other).__name__}")

    def _pair(self, other) -> tuple["BasePoly", "BasePoly", int]:
        o = self._coerce(other)
        n = min(self.prec, o.prec)
        return self, o, n

    # arithmetic
    def __add__(self, other) -> "BasePoly":
        a, b, n = self._pair(other)
        out = dict(a.terms)
        for m, c in b.terms.items():
            out[m] = out.get(m, 0) + c
        return BasePoly(out, n, self.mode)

    __radd__ = __add__

    def __neg__(self) -> "BasePoly":
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "BasePoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "BasePoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "BasePoly":
        if isinstance(other, int):
            return self._like({m: c * other for m, c in self.terms.items()})
        a, b, n = self._pair(other)
        return BasePoly(_mul_raw(a.terms, b.terms, 1 << n), n, self.mode, clean=False)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "BasePoly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out = self._like({(0, 0): 1})
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def shift(self, di: int, dj: int) -> "BasePoly":
        """Multiply by a1^di a3^dj."""
        return self._like({(i + di, j + dj): c for (i, j), c in self.terms.items()}, clean=False)

    # predicates and queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self._like({(0, 0): other})
        if not isinstance(other, BasePoly):
            return NotImplemented
        if other.mode != self.mode:
            raise ModeError("cannot compare F2 and Z/2^N polynomials")
        return (self - other).is_zero()

    def __hash__(self) -> int:
        return hash((frozenset(self.terms.items()), self.prec, self.mode))

    def degrees(self) -> set[int]:
        return {mono_degree(m) for m in self.terms}

    def degree(self) -> int | None:
        """Internal degree if homogeneous, None for zero; raises if mixed."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"inhomogeneous polynomial with degrees {sorted(ds)}")
        return ds.pop()

    def truncate(self, n: int) -> "BasePoly":
        if n > self.prec:
            raise PrecisionError(f"cannot raise precision {self.prec} to {n}")
        if self.mode == "f2":
            return self
        return BasePoly(self.terms, n, self.mode)

    def to_f2(self) -> "BasePoly":
        return BasePoly(self.terms, 1, "f2")

    def lift(self, n: int) -> "BasePoly":
        """Reinterpret the stored representatives at precision n (any lift is fine)."""
        return BasePoly(self.terms, n, "z2")

    def valuation(self) -> int:
        """Minimal 2-adic valuation of the coefficients (precision if zero)."""
        v = self.prec
        for c in self.terms.values():
            v = min(v, (c & -c).bit_length() - 1)
        return v

    def divisible_by_2k(self, k: int) -> bool:
        return self.valuation() >= k

    def div_2k(self, k: int) -> "BasePoly":
        """Exact division by 2^k, losing k bits of precision."""
        if k == 0:
            return self
        if self.mode == "f2" or k >= self.prec:
            raise PrecisionError("not enough precision to divide by 2^k")
        if not self.divisible_by_2k(k):
            raise ValueError("polynomial is not divisible by 2^k")
        return BasePoly({m: c >> k for m, c in self.terms.items()}, self.prec - k, "z2")

    def sorted_terms(self) -> list[tuple[Mono, int]]:
        """Terms in graded lexicographic order with a1 < a3."""
        return sorted(self.terms.items(), key=lambda mc: (mono_degree(mc[0]), mc[0][1], mc[0][0]))

    def min_a3(self) -> int:
        return min((j for _, j in self.terms), default=0)

    def signed(self, c: int) -> int:
        """Symmetric representative of a coefficient."""
        mod = self.modulus
        return c - mod if c > mod // 2 else c

    def __repr__(self) -> str:
        from ..expr import format_basepoly

        return f"BasePoly({format_basepoly(self)!r}, prec={self.prec}, mode={self.mode!r})"


def divmod_v2(p: BasePoly) -> tuple[BasePoly, BasePoly]:
    """Divide by v2 = a1^3 - 27 a3 as a polynomial in a3; returns (quotient, remainder)."""
    mod = p.modulus
    inv = pow(-27, -1, mod)
    rem = dict(p.terms)
    quo: dict[Mono, int] = {}
    while True:
        top = [m for m in rem if m[1] > 0]
        if not top:
            break
        i, j = max(top, key=lambda m: (m[1], m[0]))
        c = rem.pop((i, j))
        q = c * inv % mod
        quo[(i, j - 1)] = (quo.get((i, j - 1), 0) + q) % mod
        # subtract q * a1^i a3^(j-1) * a1^3 ; the a3 part cancels exactly
        k = (i + 3, j - 1)
        rem[k] = (rem.get(k, 0) - q) % mod
        if rem[k] == 0:
            del rem[k]
    return p._like(quo), p._like(rem)


def sum_polys(polys: Iterable[BasePoly], prec: int, mode: str) -> BasePoly:
    out: dict[Mono, int] = {}
    for p in polys:
        for m, c in p.terms.items():
            out[m] = out.get(m, 0) + c
    return BasePoly(out, prec, mode)
