"""Ext of the connective Hopf algebroid in bounded bidegrees.

Chains are dicts ``{(mono, words, b): int}`` where ``mono = (i, j)`` is the
coefficient a1^i a3^j (stored leftmost), ``words`` indexes the Gamma basis and
``b`` the comodule basis.  Over F2 chains become bitsets on the deglex basis.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

from .arith import Echelon, PrecisionError, snf
from .hopf import (
    REDUCED_WORDS,
    WORD_DEGREE,
    WORDS,
    absorb,
    coproduct_word,
    eta_R_mono,
    r_elem,
)

__all__ = [
    "Comodule",
    "unit_comodule",
    "mbar2_comodule",
    "comodule_by_name",
    "RangeError",
    "ExtClass",
    "ExtEngine",
    "IntegralGroup",
    "integral_ext",
    "BocksteinResult",
    "bockstein_d1",
    "unit_labels",
    "mbar_labels",
    "h1_chain",
    "h2_chain",
    "delta_chain",
    "r2_chain",
]

Key = tuple  # (mono, words, b)
Chain = dict


class RangeError(ValueError):
    """Raised when a bidegree is outside the computable range."""


@dataclass(frozen=True)
class Comodule:
    """A connective comodule free on ``degrees`` with basis coaction ``psi``.

    ``psi[b]`` lists ``(word, {mono: int}, b2)``: psi(e_b) = sum coeff [word] e_b2.
    """

    name: str
    degrees: tuple[int, ...]
    psi: tuple[tuple[tuple[int, tuple[tuple[tuple[int, int], int], ...], int], ...], ...]
    integral: bool = True


def unit_comodule() -> Comodule:
    return Comodule("unit", (0,), ((((0, (((0, 0), 1),), 0)),),))


def _r2_mod2() -> dict[int, dict[tuple[int, int], int]]:
    r = r_elem(1, "f2")
    sq = (r * r).reduce()
    out = {}
    for w, c in sq.coeffs.items():
        if c.is_zero():
            continue
        c = c.reduce()
        if not c.is_polynomial():
            raise AssertionError("r^2 has denominators mod 2")
        out[w] = {m: v & 1 for m, v in c.num.terms.items() if v & 1}
    return out


def mbar2_comodule() -> Comodule:
    """The reduced comodule mod 2 on b1 = a3 z^2 (degree 2) and b5 = a3^2 z (degree 10)."""
    r2 = _r2_mod2()
    psi_b5 = [(0, (((0, 0), 1),), 1)]
    for w, poly in sorted(r2.items()):
        psi_b5.append((w, tuple(sorted(poly.items())), 0))
    return Comodule("mbar", (2, 10), ((((0, (((0, 0), 1),), 0)),), tuple(psi_b5)), integral=False)


def comodule_by_name(name: str) -> Comodule:
    if name == "unit":
        return unit_comodule()
    if name == "mbar":
        return mbar2_comodule()
    raise ValueError(f"unknown comodule {name!r} (expected unit or mbar)")


@lru_cache(maxsize=None)
def _monos(deg: int) -> tuple[tuple[int, int], ...]:
    if deg < 0 or deg % 2:
        return ()
    half = deg // 2
    return tuple(sorted(((half - 3 * j, j) for j in range(half // 3 + 1)), reverse=True))


@lru_cache(maxsize=None)
def _word_tuples(s: int, deg: int, alphabet: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    if s == 0:
        return ((),) if deg == 0 else ()
    out = []
    for w in alphabet:
        d = WORD_DEGREE[w]
        if d <= deg:
            out.extend((w,) + rest for rest in _word_tuples(s - 1, deg - d, alphabet))
    return tuple(out)


@dataclass
class ExtClass:
    s: int
    t: int
    coords: int
    rep: Chain
    label: str | None = None
    comodule: str = "unit"

    @property
    def stem(self) -> int:
        return self.t - self.s

    def is_zero(self) -> bool:
        return self.coords == 0


@dataclass
class _ExtData:
    n: int
    rank_prev: int
    rank: int
    image: Echelon
    full: Echelon
    reps: list[Chain]

    @property
    def dim(self) -> int:
        return len(self.reps)


class ExtEngine:
    """Cobar complex of a connective comodule over Z/2^prec (prec = 1 is F2)."""

    def __init__(self, comodule: Comodule | str = "unit", prec: int = 1, normalized: bool = True,
                 max_basis: int = 200_000, reverse: bool = False):
        if isinstance(comodule, str):
            comodule = comodule_by_name(comodule)
        if prec > 1 and not comodule.integral:
            raise PrecisionError(f"the {comodule.name} comodule is only connective mod 2")
        self.comodule = comodule
        self.prec = prec
        self.mode = "f2" if prec == 1 else "z2"
        self.mask = (1 << prec) - 1
        self.normalized = normalized
        self.max_basis = max_basis
        self.reverse = reverse
        self.alphabet = REDUCED_WORDS if normalized else tuple(range(len(WORDS)))
        self._basis: dict[tuple[int, int], tuple[Key, ...]] = {}
        self._index: dict[tuple[int, int], dict[Key, int]] = {}
        self._diff: dict[Key, Chain] = {}
        self._ext: dict[tuple[int, int], _ExtData] = {}

    # -------------------------------------------------------------- basis
    def basis(self, s: int, t: int) -> tuple[Key, ...]:
        if s < 0 or t < 0:
            raise RangeError("connective mode needs s >= 0 and t >= 0")
        got = self._basis.get((s, t))
        if got is not None:
            return got
        keys = []
        for b, db in enumerate(self.comodule.degrees):
            rest = t - db
            if rest < 0:
                continue
            for wdeg in range(0, rest + 1, 2):
                for ws in _word_tuples(s, wdeg, self.alphabet):
                    for m in _monos(rest - wdeg):
                        keys.append((m, ws, b))
                        if len(keys) > self.max_basis:
                            raise RangeError(f"basis of C^({s},{t}) exceeds {self.max_basis}")
        keys.sort(key=lambda k: (sum(WORD_DEGREE[w] for w in k[1]), k[1], k[2], k[0]), reverse=self.reverse)
        out = tuple(keys)
        self._basis[(s, t)] = out
        self._index[(s, t)] = {k: i for i, k in enumerate(out)}
        return out

    def index(self, s: int, t: int) -> dict[Key, int]:
        self.basis(s, t)
        return self._index[(s, t)]

    # -------------------------------------------------------------- differential
    def d_key(self, key: Key) -> Chain:
        got = self._diff.get(key)
        if got is not None:
            return got
        (mi, mj), ws, b = key
        prec, mode, mask = self.prec, self.mode, self.mask
        k = len(ws)
        out: dict[Key, int] = {}

        def put(sign: int, k2: Key, c: int) -> None:
            out[k2] = out.get(k2, 0) + sign * c

        # face 0: the leftmost coefficient crosses a new unit slot
        for v, p in eta_R_mono(mi, mj, prec, mode):
            for q, c in p.terms.items():
                put(-1, (q, (v,) + ws, b), c)
        # inner faces: coproduct on slot i
        for i in range(1, k + 1):
            sign = 1 if i % 2 else -1
            head, tail = ws[: i - 1], ws[i:]
            for (u, v), p in coproduct_word(ws[i - 1], prec, mode):
                for q, c in p.terms.items():
                    for pre, poly in absorb(head, q, prec, mode):
                        for (ri, rj), c2 in poly.terms.items():
                            put(sign, ((mi + ri, mj + rj), pre + (u, v) + tail, b), c * c2)
        # last face: the coaction
        sign = 1 if (k + 1) % 2 else -1
        for u, coeff, b2 in self.comodule.psi[b]:
            for q, c in coeff:
                for pre, poly in absorb(ws, q, prec, mode):
                    for (ri, rj), c2 in poly.terms.items():
                        put(sign, ((mi + ri, mj + rj), pre + (u,), b2), c * c2)
        res = {k2: c & mask for k2, c in out.items() if c & mask}
        if self.normalized:
            for k2 in res:
                if 0 in k2[1]:
                    raise AssertionError(f"normalized differential produced a unit word at {k2}")
        self._diff[key] = res
        return res

    def d_chain(self, x: Chain) -> Chain:
        out: dict[Key, int] = {}
        for key, c in x.items():
            for k2, c2 in self.d_key(key).items():
                out[k2] = (out.get(k2, 0) + c * c2) & self.mask
        return {k: v for k, v in out.items() if v}

    # -------------------------------------------------------------- F2 helpers
    def to_bits(self, x: Chain, s: int, t: int) -> int:
        idx = self.index(s, t)
        v = 0
        for key, c in x.items():
            if c & 1:
                try:
                    v ^= 1 << idx[key]
                except KeyError:
                    raise RangeError(f"{key} is not a basis element of C^({s},{t})") from None
        return v

    def from_bits(self, v: int, s: int, t: int) -> Chain:
        basis = self.basis(s, t)
        out = {}
        while v:
            low = v & -v
            out[basis[low.bit_length() - 1]] = 1
            v ^= low
        return out

    def _d_bits(self, s: int, t: int) -> list[int]:
        self._require_f2()
        idx = self.index(s + 1, t)
        rows = []
        for key in self.basis(s, t):
            v = 0
            for k2, c in self.d_key(key).items():
                if c & 1:
                    v ^= 1 << idx[k2]
            rows.append(v)
        return rows

    def _require_f2(self) -> None:
        if self.prec != 1:
            raise PrecisionError("this operation works over F2 only")

    # -------------------------------------------------------------- Ext over F2
    def _data(self, s: int, t: int) -> _ExtData:
        got = self._ext.get((s, t))
        if got is not None:
            return got
        n = len(self.basis(s, t))
        image = Echelon()
        if s > 0:
            for v in self._d_bits(s - 1, t):
                image.add(v)
        kernel = []
        ker_ech = Echelon()
        for i, v in enumerate(self._d_bits(s, t)):
            indep, _, tag = ker_ech.add(v, 1 << i)
            if not indep:
                kernel.append(tag)
        rank = n - len(kernel)
        full = Echelon()
        full.pivots = dict(image.pivots)
        reps = []
        for kv in kernel:
            indep, _, _ = full.add(kv, 1 << len(reps)) if not image.contains(kv) else (False, 0, 0)
            if indep:
                reps.append(kv)
        # full was built from kv's reduced against image rows (tag 0), so tags are rep bits
        data = _ExtData(n, len(image), rank, image, full, [self.from_bits(v, s, t) for v in reps])
        if data.dim != n - rank - data.rank_prev:
            raise AssertionError("rank-nullity bookkeeping failed")
        self._ext[(s, t)] = data
        return data

    def dim(self, s: int, t: int) -> int:
        return self._data(s, t).dim

    def ext_basis(self, s: int, t: int) -> list[ExtClass]:
        data = self._data(s, t)
        return [ExtClass(s, t, 1 << i, rep, None, self.comodule.name) for i, rep in enumerate(data.reps)]

    def ranks(self, s: int, t: int) -> tuple[int, int, int]:
        """(dim C^{s,t}, rank d_{s-1}, rank d_s)."""
        data = self._data(s, t)
        return data.n, data.rank_prev, data.rank

    def is_cocycle(self, x: Chain) -> bool:
        return not {k: v for k, v in self.d_chain(x).items() if v & 1}

    def coords(self, x: Chain, s: int, t: int) -> int:
        """Coordinates of a mod-2 cocycle in the representative basis."""
        if not self.is_cocycle(x):
            raise ValueError("not a cocycle mod 2")
        data = self._data(s, t)
        v = self.to_bits(x, s, t)
        residue, tag = data.full.reduce(v)
        if residue:
            raise AssertionError("cocycle outside kernel span")
        return tag

    def cls(self, x: Chain, s: int, t: int, label: str | None = None) -> ExtClass:
        return ExtClass(s, t, self.coords(x, s, t), {k: 1 for k, v in x.items() if v & 1}, label, self.comodule.name)

    def rep_of(self, coords: int, s: int, t: int) -> Chain:
        data = self._data(s, t)
        out: dict[Key, int] = {}
        i = 0
        while coords:
            if coords & 1:
                for k in data.reps[i]:
                    out[k] = out.get(k, 0) ^ 1
            coords >>= 1
            i += 1
        return {k: 1 for k, v in out.items() if v}

    def in_image(self, x: Chain, s: int, t: int) -> bool:
        return self._data(s, t).image.contains(self.to_bits(x, s, t))

    # -------------------------------------------------------------- products
    def product(self, u: ExtClass, v: ExtClass) -> ExtClass:
        """u * v with u in the Unit comodule; the result lives in v's comodule."""
        if u.comodule != "unit":
            raise ValueError("the left factor must be a Unit class")
        chain = multiply_chains(u.rep, v.rep, self.prec, self.mode, self.mask)
        return self.cls(chain, u.s + v.s, u.t + v.t)

    def times_chain(self, left: Chain, s_left: int, t_left: int, v: ExtClass) -> ExtClass:
        return self.product(ExtClass(s_left, t_left, 0, left), v)

    def multiplication_matrix(self, left: Chain, s_left: int, t_left: int, s: int, t: int) -> list[int]:
        """Images of the representative basis of Ext^{s,t} under left-multiplication."""
        return [self.times_chain(left, s_left, t_left, c).coords for c in self.ext_basis(s, t)]


def multiply_chains(u: Chain, v: Chain, prec: int = 1, mode: str = "f2", mask: int = 1) -> Chain:
    """Cobar concatenation [u | v], the coefficient of v moved across u."""
    out: dict[Key, int] = {}
    for (m1, ws1, _), c1 in u.items():
        for (m2, ws2, b), c2 in v.items():
            for pre, poly in absorb(ws1, m2, prec, mode):
                for (ri, rj), c3 in poly.terms.items():
                    key = ((m1[0] + ri, m1[1] + rj), pre + ws2, b)
                    out[key] = (out.get(key, 0) + c1 * c2 * c3) & mask
    return {k: c for k, c in out.items() if c}


def _span_contains(vectors: Iterable[int], target: int) -> tuple[bool, int]:
    ech = Echelon()
    for i, v in enumerate(vectors):
        ech.add(v, 1 << i)
    residue, tag = ech.reduce(target)
    return residue == 0, tag


# ------------------------------------------------------------------ named chains

def h1_chain() -> Chain:
    return {((0, 0), (1,), 0): 1}


def h2_chain() -> Chain:
    """[r] mod 2 with r = 3^-1 (s^2 + a1 s)."""
    return {((0, 0), (2,), 0): 1, ((1, 0), (1,), 0): 1}


def delta_chain(b: int = 0) -> Chain:
    """Delta = a3^3 (a1^3 - 27 a3) mod 2."""
    return {((3, 3), (), b): 1, ((0, 4), (), b): 1}


def r2_chain() -> Chain:
    out = {}
    for w, poly in _r2_mod2().items():
        for m in poly:
            out[(m, (w,), 0)] = 1
    return out


def _power(engine: ExtEngine, x: Chain, s: int, k: int) -> Chain:
    acc: Chain = {((0, 0), (), 0): 1}
    for _ in range(k):
        acc = multiply_chains(x, acc)
    return acc


@dataclass
class LabelReport:
    classes: dict[str, ExtClass]
    facts: dict[str, object] = field(default_factory=dict)


def unit_labels(engine: ExtEngine) -> LabelReport:
    """Attach h1, h2, x, Delta and g by their defining properties."""
    if engine.comodule.name != "unit":
        raise ValueError("Unit labels need the Unit comodule")
    classes: dict[str, ExtClass] = {}
    facts: dict[str, object] = {}
    one = {((0, 0), (), 0): 1}
    classes["1"] = engine.cls(one, 0, 0, "1")
    classes["h1"] = engine.cls(h1_chain(), 1, 2, "h1")
    classes["h2"] = engine.cls(h2_chain(), 1, 4, "h2")
    classes["Delta"] = engine.cls(delta_chain(), 0, 24, "Delta")
    a1sq = {((2, 0), (), 0): 1}
    a1_4 = {((4, 0), (), 0): 1}

    # x: the kernel of a1^2 on Ext^{1,8}
    images = engine.multiplication_matrix(a1sq, 0, 4, 1, 8)
    ker = Echelon()
    kernel = []
    for i, v in enumerate(images):
        indep, _, tag = ker.add(v, 1 << i)
        if not indep:
            kernel.append(tag)
    facts["ker_a1sq_dim_1_8"] = len(kernel)
    r2 = engine.cls(r2_chain(), 1, 8)
    facts["r2_class_nonzero"] = not r2.is_zero()
    facts["r2_in_ker_a1sq"] = bool(kernel) and _span_contains(kernel, r2.coords)[0]
    if len(kernel) == 1:
        classes["x"] = ExtClass(1, 8, kernel[0], engine.rep_of(kernel[0], 1, 8), "x")

    # g: a1^4 y = Delta h1^4 with y in Ext^{4,24}
    h1_4 = _power(engine, h1_chain(), 1, 4)
    target = engine.cls(multiply_chains(delta_chain(), h1_4), 4, 32)
    facts["delta_h1_4_nonzero"] = not target.is_zero()
    images = engine.multiplication_matrix(a1_4, 0, 8, 4, 24)
    ok, tag = _span_contains(images, target.coords)
    facts["g_solvable"] = ok and not target.is_zero()
    if ok:
        g = ExtClass(4, 24, tag, engine.rep_of(tag, 4, 24), "g")
        classes["g"] = g
        # indecomposability against a1 and h1 multiples
        decomposables = engine.multiplication_matrix({((1, 0), (), 0): 1}, 0, 2, 4, 22)
        decomposables += engine.multiplication_matrix(h1_chain(), 1, 2, 3, 22)
        facts["g_indecomposable"] = not _span_contains(decomposables, g.coords)[0]
    return LabelReport(classes, facts)


def sqrt_delta_b1_chain() -> Chain:
    """sqrtDelta b1 = a3^2 b1 + a1^2 b5 mod 2 in the b-basis."""
    return {((0, 2), (), 0): 1, ((2, 0), (), 1): 1}


def mbar_labels(engine: ExtEngine) -> LabelReport:
    if engine.comodule.name != "mbar":
        raise ValueError("MBar labels need the mbar comodule")
    classes = {
        "b1": engine.cls({((0, 0), (), 0): 1}, 0, 2, "b1"),
        "sqrtDelta_b1": engine.cls(sqrt_delta_b1_chain(), 0, 14, "sqrtDelta b1"),
    }
    return LabelReport(classes, {})


# ------------------------------------------------------------------ integral Ext

@dataclass
class IntegralGroup:
    s: int
    t: int
    free: int
    torsion: tuple[int, ...]
    precision: int

    def orders(self) -> list[str]:
        return ["Z"] * self.free + [f"Z/{o}" for o in self.torsion]

    def as_dict(self) -> dict:
        return {"s": self.s, "t": self.t, "orders": self.orders(), "precision": self.precision}


def _int_matrix(engine: ExtEngine, s: int, t: int) -> list[list[int]]:
    rows = engine.basis(s, t)
    idx = engine.index(s + 1, t)
    ncols = len(idx)
    mat = []
    for key in rows:
        row = [0] * ncols
        for k2, c in engine.d_key(key).items():
            row[idx[k2]] = c
        mat.append(row)
    return mat


def _valuations(engine: ExtEngine, s: int, t: int) -> list[int]:
    if s < 0:
        return []
    mat = _int_matrix(engine, s, t)
    if not mat or not mat[0]:
        return []
    return snf(mat, engine.prec)


@lru_cache(maxsize=None)
def _integral_engine(name: str, prec: int) -> ExtEngine:
    return ExtEngine(name, prec=prec)


def integral_ext(s: int, t: int, comodule: str = "unit", prec: int = 8) -> IntegralGroup:
    """Ext^{s,t} over Z/2^prec read off from Smith normal forms.

    Elementary divisors 2^v with v < prec count towards rank; those with
    v >= 1 feed the torsion.  Anything not detected is reported as free.
    """
    if prec < 4:
        raise PrecisionError("integral Ext needs precision at least 4")
    engine = _integral_engine(comodule, prec)
    n = len(engine.basis(s, t))
    prev = _valuations(engine, s - 1, t) if s > 0 else []
    cur = _valuations(engine, s, t)
    free = n - len(prev) - len(cur)
    torsion = tuple(sorted(1 << v for v in prev if v >= 1))
    return IntegralGroup(s, t, free, torsion, prec)


# ------------------------------------------------------------------ Bockstein

@dataclass
class BocksteinResult:
    source: tuple[int, int]
    value: ExtClass
    indeterminacy_dim: int

    @property
    def is_zero(self) -> bool:
        return self.value.is_zero()


def bockstein_d1(engine: ExtEngine, lift: Chain, s: int, t: int, prec: int = 4) -> BocksteinResult:
    """d1 of the mod-2 class of ``lift``: the class of d(lift)/2 mod 2.

    The lift is an integral chain whose boundary is even.  The indeterminacy
    from changing the lift by 2y is d(y), which is a boundary, so it is zero
    in Ext; the reported dimension is therefore 0.
    """
    engine._require_f2()
    name = engine.comodule.name
    if name == "unit":
        integral = ExtEngine("unit", prec=prec)
        d = integral.d_chain(lift)
    else:
        d = _mbar_integral_boundary(lift, prec)
    if any(c & 1 for c in d.values()):
        raise ValueError("lift is not a cocycle mod 2")
    half = {k: (c >> 1) & 1 for k, c in d.items() if (c >> 1) & 1}
    value = engine.cls(half, s + 1, t)
    return BocksteinResult((s, t), value, 0)


def _mbar_integral_boundary(lift: Chain, prec: int) -> Chain:
    """Boundary of an integral MBar 0-chain given on the b-basis, read in the b-basis mod 4.

    The integral coaction has a3 and v2 denominators; callers pass Delta-multiples
    so that the boundary comes out polynomial.
    """
    from .arith import LocElem
    from .cobar import chain as make_chain, cobar_d
    from .comodule import ComoduleElem, tensor_in_b_basis

    total = ComoduleElem("mbar", {}, prec)
    for ((i, j), ws, b), c in lift.items():
        if ws:
            raise ValueError("Bockstein on MBar is implemented for 0-chains")
        coeff = LocElem.a1(prec) ** i * LocElem.a3(prec) ** j * c
        # b1 = a3 z^2, b5 = a3^2 z
        if b == 0:
            total = total + ComoduleElem("mbar", {2: coeff * LocElem.a3(prec)}, prec)
        else:
            total = total + ComoduleElem("mbar", {1: coeff * LocElem.a3(prec) ** 2}, prec)
    d = cobar_d(make_chain(total))
    out: dict[Key, int] = {}
    mask = (1 << prec) - 1
    for b, name in ((0, "b1"), (1, "b5")):
        part = tensor_in_b_basis(d)[name]
        for ((ws, _), c) in part.terms.items():
            c = c.reduce()
            if c.is_zero():
                continue
            if not c.is_polynomial():
                raise ValueError("boundary has denominators; multiply the lift by a power of Delta")
            for m, v in c.num.terms.items():
                if v & mask:
                    out[(m, ws, b)] = v & mask
    return out
