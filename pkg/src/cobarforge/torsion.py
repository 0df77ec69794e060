"""From the Weierstrass curve y^2 z' + a1 x y z' + a3 y z'^2 = x^3 to the 2-torsion relation.

The projective coordinate is called ``zp`` internally so that ``z`` can mean
the affine chart coordinate -x/y.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .arith import BasePoly

__all__ = [
    "VARS",
    "SymPoly",
    "ChartRelation",
    "TorsionConsistencyError",
    "curve",
    "inversion",
    "equalizer_equations",
    "to_affine_chart",
    "eliminate_w",
    "derive_coaction_fraction",
    "derivation_steps",
]

VARS = ("a1", "a3", "s", "r", "t", "x", "y", "zp", "z", "w")
_POS = {v: i for i, v in enumerate(VARS)}
# internal degrees; the chart coordinates have |z| = -2, |w| = -6
DEGREES = {"a1": 2, "a3": 6, "s": 2, "r": 4, "t": 6, "x": -4, "y": -6, "zp": 0, "z": -2, "w": -6}

Exps = tuple[int, ...]


class TorsionConsistencyError(ArithmeticError):
    pass


class SymPoly:
    """Integer polynomial in the fixed variable list VARS."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Exps, int] | None = None):
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def var(cls, name: str) -> "SymPoly":
        e = [0] * len(VARS)
        e[_POS[name]] = 1
        return cls({tuple(e): 1})

    @classmethod
    def const(cls, c: int) -> "SymPoly":
        return cls({(0,) * len(VARS): c})

    def _coerce(self, other) -> "SymPoly":
        return other if isinstance(other, SymPoly) else SymPoly.const(other)

    def __add__(self, other) -> "SymPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return SymPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "SymPoly":
        return SymPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "SymPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SymPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "SymPoly":
        other = self._coerce(other)
        out: dict[Exps, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SymPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SymPoly":
        out = SymPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = SymPoly.const(other)
        return isinstance(other, SymPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def subs(self, name: str, value: "SymPoly | int") -> "SymPoly":
        value = self._coerce(value)
        i = _POS[name]
        out = SymPoly()
        cache: dict[int, SymPoly] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k not in cache:
                cache[k] = value ** k
            rest = list(e)
            rest[i] = 0
            out = out + SymPoly({tuple(rest): c}) * cache[k]
        return out

    def degree_in(self, name: str) -> int:
        i = _POS[name]
        return max((e[i] for e in self.terms), default=-1)

    def coeff_in(self, name: str, k: int) -> "SymPoly":
        i = _POS[name]
        out = {}
        for e, c in self.terms.items():
            if e[i] == k:
                rest = list(e)
                rest[i] = 0
                out[tuple(rest)] = c
        return SymPoly(out)

    def internal_degrees(self) -> set[int]:
        return {sum(k * DEGREES[v] for k, v in zip(e, VARS)) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.internal_degrees()) <= 1

    def variables(self) -> set[str]:
        return {v for e in self.terms for v, k in zip(VARS, e) if k}

    def div_mono(self, name: str) -> "SymPoly":
        """Exact division by a single variable."""
        i = _POS[name]
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                raise ArithmeticError(f"not divisible by {name}")
            rest = list(e)
            rest[i] -= 1
            out[tuple(rest)] = c
        return SymPoly(out)

    def to_basepoly_in_z(self, prec: int = 8) -> dict[int, BasePoly]:
        """Coefficients of z^k as polynomials in a1, a3."""
        allowed = {"a1", "a3", "z"}
        if not self.variables() <= allowed:
            raise ValueError("only a1, a3, z may appear")
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            out.setdefault(e[_POS["z"]], {})[(e[_POS["a1"]], e[_POS["a3"]])] = c
        return {k: BasePoly(v, prec) for k, v in out.items()}

    def __str__(self) -> str:
        return format_sympoly(self)

    def __repr__(self) -> str:
        return f"SymPoly({format_sympoly(self)})"


_COEFF_VARS = ("a1", "a3", "s", "r", "t")
_MAIN_VARS = ("x", "y", "zp", "z", "w")
_PRINT_NAME = {"zp": "z'"}


def _mono(e: Exps, names: tuple[str, ...]) -> str:
    parts = []
    for v in names:
        k = e[_POS[v]]
        if k:
            n = _PRINT_NAME.get(v, v)
            parts.append(n if k == 1 else f"{n}^{k}")
    return "*".join(parts)


def format_sympoly(p: SymPoly) -> str:
    """Ascending in the degree of the coefficient, higher powers of the variables first on ties."""
    if p.is_zero():
        return "0"

    def key(item):
        e, _ = item
        main = tuple(e[_POS[v]] for v in _MAIN_VARS)
        coeff = tuple(e[_POS[v]] for v in _COEFF_VARS)
        cdeg = sum(k * DEGREES[v] for k, v in zip(coeff, _COEFF_VARS))
        return (cdeg, -sum(main), coeff, tuple(-k for k in main))

    out = []
    for e, c in sorted(p.terms.items(), key=key):
        body = "*".join(x for x in (_mono(e, _COEFF_VARS), _mono(e, _MAIN_VARS)) if x)
        mag = abs(c)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        if not out:
            out.append(text if c > 0 else f"-{text}")
        else:
            out.append(("+ " if c > 0 else "- ") + text)
    return " ".join(out)


@dataclass(frozen=True)
class ChartRelation:
    poly: SymPoly
    label: str

    def __post_init__(self) -> None:
        if not self.poly.is_homogeneous():
            raise ValueError(f"relation {self.label} is not homogeneous")

    def __str__(self) -> str:
        return format_sympoly(self.poly)


def _v(name: str) -> SymPoly:
    return SymPoly.var(name)


def curve() -> SymPoly:
    """y^2 z' + a1 x y z' + a3 y z'^2 - x^3."""
    x, y, zp, a1, a3 = _v("x"), _v("y"), _v("zp"), _v("a1"), _v("a3")
    return y * y * zp + a1 * x * y * zp + a3 * y * zp * zp - x ** 3


def inversion() -> tuple[SymPoly, SymPoly, SymPoly]:
    x, y, zp, a1, a3 = _v("x"), _v("y"), _v("zp"), _v("a1"), _v("a3")
    return (x, -y - a1 * x - a3 * zp, zp)


@dataclass(frozen=True)
class EqualizerRelation:
    """coordinate * linear form, the factored shape of a projective equalizer relation."""

    coordinate: str
    linear: SymPoly

    @property
    def poly(self) -> SymPoly:
        return _v(self.coordinate) * self.linear

    def __str__(self) -> str:
        return f"{_PRINT_NAME.get(self.coordinate, self.coordinate)}*({format_sympoly(self.linear)})"


def equalizer_equations(other: tuple[SymPoly, SymPoly, SymPoly] | None = None) -> list[EqualizerRelation]:
    """Locus where the identity and ``other`` (default: inversion) agree projectively.

    The 2x2 minors of [[x, y, z'], other] that do not vanish identically are
    coordinate * (y - y'); the sign is a unit and is dropped.
    """
    ident = (_v("x"), _v("y"), _v("zp"))
    img = inversion() if other is None else other
    out = []
    for (i, j), coord in (((0, 1), "x"), ((1, 2), "zp")):
        minor = ident[i] * img[j] - ident[j] * img[i]
        if minor.is_zero():
            out.append(EqualizerRelation(coord, SymPoly()))
            continue
        lin = minor.div_mono(coord)
        # choose the sign making the y coefficient positive
        if lin.coeff_in("y", 1).terms and next(iter(lin.coeff_in("y", 1).terms.values())) < 0:
            lin = -lin
        out.append(EqualizerRelation(coord, lin))
    return out


def _chart(p: SymPoly) -> SymPoly:
    """y = 1, x = -z, z' = -w."""
    return p.subs("y", 1).subs("x", -_v("z")).subs("zp", -_v("w"))


def to_affine_chart() -> list[ChartRelation]:
    """The curve and the two equalizer relations in the chart z = -x/y, w = -z'/y."""
    rels = [ChartRelation(_chart(curve()), "curve")]
    lin = {e.coordinate: _chart(e.linear) for e in equalizer_equations()}
    # x -> -z and z' -> -w: the factor -1 is a unit and is dropped
    rels.append(ChartRelation(_v("z") * lin["x"], "equalizer x"))
    rels.append(ChartRelation(_v("w") * lin["zp"], "equalizer z'"))
    return rels


def eliminate_w(relations: list[ChartRelation] | None = None) -> SymPoly:
    """Substitute w = -z^3 (from relation 1 + relation 3) into relation 2.

    Raises TorsionConsistencyError when relation 3 does not reduce to a
    multiple of the result.
    """
    rels = relations or to_affine_chart()
    sum13 = rels[0].poly + rels[2].poly
    z, w = _v("z"), _v("w")
    if sum13 != z ** 3 + w:
        raise TorsionConsistencyError(f"relation 1 + relation 3 = {sum13}, expected z^3 + w")
    sub = -(z ** 3)
    result = rels[1].poly.subs("w", sub)
    third = rels[2].poly.subs("w", sub)
    if _remainder(third, result) != SymPoly():
        raise TorsionConsistencyError("relation 3 is not a multiple of the derived relation")
    if result.internal_degrees() != {-2}:
        raise TorsionConsistencyError("derived relation is not homogeneous of degree -2")
    return result


def _remainder(p: SymPoly, f: SymPoly) -> SymPoly:
    """Remainder of p by f in z, requiring the leading coefficient of f to be a monomial dividing what it must."""
    n = f.degree_in("z")
    lead = f.coeff_in("z", n)
    if len(lead.terms) != 1:
        raise ValueError("leading coefficient must be a monomial")
    (le, lc), = lead.terms.items()
    z = _v("z")
    while not p.is_zero() and p.degree_in("z") >= n:
        k = p.degree_in("z")
        top = p.coeff_in("z", k)
        q = {}
        for e, c in top.terms.items():
            if c % lc or any(a < b for a, b in zip(e, le)):
                return p
            q[tuple(a - b for a, b in zip(e, le))] = c // lc
        p = p - SymPoly(q) * z ** (k - n) * f
    return p


def derive_coaction_fraction(expand_r: bool = False) -> tuple[SymPoly, SymPoly]:
    """psi(z) as numerator/denominator after x -> x + r z', y -> y + s x + t z'.

    With ``expand_r`` the symbol r is replaced by (s^2 + a1 s)/3, scaled so the
    pair stays integral.
    """
    x, y, zp = _v("x"), _v("y"), _v("zp")
    r, s, t = _v("r"), _v("s"), _v("t")
    # -x/y after the coordinate change, as (numerator, denominator)
    num = -(x + r * zp)
    den = y + s * x + t * zp
    num, den = _chart(num), _chart(den)
    num = num.subs("w", -(_v("z") ** 3))
    den = den.subs("w", -(_v("z") ** 3))
    if expand_r:
        a1 = _v("a1")
        num = num.subs("r", 0) * 3 + (num.coeff_in("r", 1)) * (s * s + a1 * s)
        den = den * 3
    return num, den


def derivation_steps() -> list[tuple[str, str]]:
    """Human-readable trace of the pipeline, ending in the derived relation."""
    steps = [("curve", format_sympoly(curve()))]
    inv = inversion()
    steps.append(("inversion", "[" + " : ".join(format_sympoly(c) for c in inv) + "]"))
    for i, e in enumerate(equalizer_equations(), 1):
        steps.append((f"equalizer {i}", str(e)))
    rels = to_affine_chart()
    for i, rel in enumerate(rels, 1):
        steps.append((f"chart relation {i}", str(rel)))
    steps.append(("relation 1 + relation 3", format_sympoly(rels[0].poly + rels[2].poly)))
    num, den = derive_coaction_fraction()
    steps.append(("coaction numerator", format_sympoly(num)))
    steps.append(("coaction denominator", format_sympoly(den)))
    steps.append(("relation", format_sympoly(eliminate_w(rels))))
    return steps
