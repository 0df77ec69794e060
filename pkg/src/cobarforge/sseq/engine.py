"""Generic spectral-sequence bookkeeping: pages, seeded differentials, operator closure, folding."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

__all__ = [
    "OPERATOR_SHIFTS",
    "SseqError",
    "SeedError",
    "SeedConflictError",
    "NonPeriodicError",
    "SseqClass",
    "OperatorAction",
    "DifferentialSeed",
    "SseqPage",
    "close_seeds",
    "apply_differentials",
    "leibniz_seeds",
    "fold_periodic",
    "fold_seeds",
    "order_exponent",
]

OPERATOR_SHIFTS: dict[str, tuple[int, int | None]] = {
    "h1": (1, 1),
    "h2": (3, 1),
    "a1": (2, 0),
    "v1sq": (4, 0),
    "g": (20, 4),
    "Delta": (24, 0),
    "sqrtDeltaAux": (12, 0),
    "w": (5, None),
}


class SseqError(ValueError):
    pass


class SeedError(SseqError):
    """A seed whose endpoints are dead or whose bidegree is wrong."""


class SeedConflictError(SseqError):
    """Seeds that cannot all hold; carries the offending pair."""

    def __init__(self, message: str, counterexample: tuple):
        super().__init__(f"{message}: {counterexample}")
        self.counterexample = counterexample


class NonPeriodicError(SseqError):
    pass


def order_exponent(order: str) -> int | None:
    """F2 -> 1, Z/2^k -> k, Z -> None."""
    if order == "F2":
        return 1
    if order == "Z":
        return None
    if order.startswith("Z/2^"):
        return int(order[4:])
    if order == "Z/2":
        return 1
    raise SseqError(f"unknown order tag {order!r}")


def _order_tag(k: int | None) -> str:
    if k is None:
        return "Z"
    return "F2" if k == 1 else f"Z/2^{k}"


@dataclass(frozen=True)
class SseqClass:
    id: str
    stem: int
    filt: int
    order: str = "F2"
    label: str = ""
    layer: str = "main"
    coords: tuple = ()

    def __post_init__(self) -> None:
        order_exponent(self.order)

    @property
    def bidegree(self) -> tuple[int, int]:
        return (self.stem, self.filt)

    def as_dict(self) -> dict:
        return {"stem": self.stem, "filt": self.filt, "order": self.order, "label": self.label, "id": self.id}


@dataclass(frozen=True)
class DifferentialSeed:
    page: int
    source: str
    target: str
    cite: str = ""


@dataclass
class OperatorAction:
    """A partial map on generator ids with a bidegree shift."""

    name: str
    shift: tuple[int, int | None]
    mapping: Mapping[str, str]

    def __call__(self, gid: str) -> str | None:
        return self.mapping.get(gid)

    def inverse(self) -> "OperatorAction":
        return OperatorAction(self.name + "^-1", (-self.shift[0], None if self.shift[1] is None else -self.shift[1]),
                              {v: k for k, v in self.mapping.items()})

    def power(self, k: int) -> "OperatorAction":
        out = {}
        for src in self.mapping:
            cur: str | None = src
            for _ in range(k):
                cur = self.mapping.get(cur) if cur is not None else None
            if cur is not None:
                out[src] = cur
        f = self.shift[1]
        return OperatorAction(f"{self.name}^{k}", (self.shift[0] * k, None if f is None else f * k), out)

    def restricted(self, alive: Iterable[str]) -> "OperatorAction":
        keep = set(alive)
        return OperatorAction(self.name, self.shift, {a: b for a, b in self.mapping.items() if a in keep and b in keep})


@dataclass
class SseqPage:
    r: int
    classes: dict[str, SseqClass]
    structlines: list[tuple[str, str, str]] = field(default_factory=list)
    differentials: list[tuple[int, str, str]] = field(default_factory=list)
    annotations: list[dict] = field(default_factory=list)
    stem_period: int | None = None

    def copy(self, **changes) -> "SseqPage":
        base = dict(
            r=self.r,
            classes=dict(self.classes),
            structlines=list(self.structlines),
            differentials=list(self.differentials),
            annotations=list(self.annotations),
            stem_period=self.stem_period,
        )
        base.update(changes)
        return SseqPage(**base)

    def norm_stem(self, stem: int) -> int:
        return stem % self.stem_period if self.stem_period else stem

    def at(self, stem: int, filt: int) -> list[SseqClass]:
        stem = self.norm_stem(stem)
        return sorted((c for c in self.classes.values() if self.norm_stem(c.stem) == stem and c.filt == filt), key=lambda c: c.id)

    def dims(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for c in self.classes.values():
            key = (self.norm_stem(c.stem), c.filt)
            out[key] = out.get(key, 0) + 1
        return out

    def by_coords(self) -> dict[tuple, str]:
        return {c.coords: c.id for c in self.classes.values() if c.coords}

    def layer(self, *names: str) -> "SseqPage":
        keep = {k: c for k, c in self.classes.items() if c.layer in names}
        return self.copy(
            classes=keep,
            structlines=[s for s in self.structlines if s[1] in keep and s[2] in keep],
            differentials=[d for d in self.differentials if d[1] in keep and d[2] in keep],
            annotations=[a for a in self.annotations if a.get("from") in keep and a.get("to") in keep],
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, SseqPage):
            return NotImplemented
        return (
            self.r == other.r
            and self.classes == other.classes
            and sorted(self.structlines) == sorted(other.structlines)
            and sorted(self.differentials) == sorted(other.differentials)
            and sorted(map(_freeze, self.annotations)) == sorted(map(_freeze, other.annotations))
        )


def _freeze(d: dict) -> tuple:
    return tuple(sorted(d.items()))


def _check_seed(page: SseqPage, r: int, src: str, tgt: str) -> None:
    if src not in page.classes:
        raise SeedError(f"source {src} is not alive on E_{page.r}")
    if tgt not in page.classes:
        raise SeedError(f"target {tgt} is not alive on E_{page.r}")
    a, b = page.classes[src], page.classes[tgt]
    if b.filt != a.filt + r or page.norm_stem(b.stem - a.stem + 1) != 0:
        raise SeedError(f"d_{r} from {src} {a.bidegree} to {tgt} {b.bidegree} has the wrong bidegree")


def close_seeds(page: SseqPage, seeds: Sequence[DifferentialSeed], operators: Sequence[OperatorAction] = ()) -> list[tuple[str, str]]:
    """Validate seeds and close them under operators that commute with d_r."""
    r = page.r
    pairs: set[tuple[str, str]] = set()
    queue = []
    for sd in seeds:
        if sd.page != r:
            raise SeedError(f"seed {sd.source}->{sd.target} is for page {sd.page}, not {r}")
        _check_seed(page, r, sd.source, sd.target)
        if (sd.source, sd.target) not in pairs:
            pairs.add((sd.source, sd.target))
            queue.append((sd.source, sd.target))
    ops = [op.restricted(page.classes) for op in operators]
    while queue:
        src, tgt = queue.pop()
        for op in ops:
            s2, t2 = op(src), op(tgt)
            if s2 is None or t2 is None or (s2, t2) in pairs:
                continue
            _check_seed(page, r, s2, t2)
            pairs.add((s2, t2))
            queue.append((s2, t2))
    out = sorted(pairs)
    targets: dict[str, str] = {}
    for src, tgt in out:
        if targets.get(src, tgt) != tgt:
            raise SeedConflictError("one source with two targets", (src, targets[src], tgt))
        targets[src] = tgt
    hit = {t for _, t in out}
    for src, _ in out:
        if src in hit:
            raise SeedConflictError("a class is both a source and a target", (src,))
    return out


def apply_differentials(page: SseqPage, seeds: Sequence[DifferentialSeed], operators: Sequence[OperatorAction] = ()) -> SseqPage:
    """Turn E_r into E_{r+1}."""
    r = page.r
    pairs = close_seeds(page, seeds, operators)
    classes = dict(page.classes)
    renamed: dict[str, str] = {}
    by_target: dict[str, list[str]] = {}
    ordered: list[tuple[str, str]] = []
    for src, tgt in pairs:
        a, b = page.classes[src], page.classes[tgt]
        if a.order == "F2" and b.order == "F2":
            by_target.setdefault(tgt, []).append(src)
        else:
            ordered.append((src, tgt))
    touched = [x for pair in ordered for x in pair]
    if len(touched) != len(set(touched)) or set(touched) & ({t for t in by_target} | {s for ss in by_target.values() for s in ss}):
        raise SeedConflictError("a non-F2 class meets more than one differential", tuple(sorted(touched)))
    for src, tgt in ordered:
        a, b = page.classes[src], page.classes[tgt]
        ka, kb = order_exponent(a.order), order_exponent(b.order)
        if kb is None:
            raise SeedConflictError("differential into a free class", (src, tgt))
        if ka is not None and ka < kb:
            raise SeedConflictError("source order smaller than target order", (src, tgt))
        del classes[tgt]
        del classes[src]
        if ka is None or ka > kb:
            rest = None if ka is None else ka - kb
            mult = 1 << kb
            new = replace(a, id=f"{mult}*{a.id}", label=f"{mult}{a.label}", order=_order_tag(rest))
            classes[new.id] = new
            renamed[src] = new.id
    for tgt, srcs in by_target.items():
        srcs = sorted(srcs)
        del classes[tgt]
        first = srcs[0]
        del classes[first]
        for other in srcs[1:]:
            a, b = page.classes[other], page.classes[first]
            del classes[other]
            combo = SseqClass(f"{other}+{first}", a.stem, a.filt, "F2", f"{a.label} + {b.label}", a.layer, a.coords)
            classes[combo.id] = combo
            renamed[other] = combo.id
    structlines = []
    for op, x, y in page.structlines:
        x2, y2 = renamed.get(x, x), renamed.get(y, y)
        if x2 in classes and y2 in classes and x2 == x and y2 == y:
            structlines.append((op, x, y))
    annotations = [a for a in page.annotations if a.get("from") in classes and a.get("to") in classes]
    diffs = list(page.differentials) + [(r, s, t) for s, t in pairs]
    return page.copy(r=r + 1, classes=classes, structlines=structlines, differentials=diffs, annotations=annotations)


def leibniz_seeds(page: SseqPage, unit: str, value: Sequence[str], operators: Mapping[str, OperatorAction], cite: str = "") -> list[DifferentialSeed]:
    """Seeds from d_r(unit) = product of ``value`` operators and d_r = 0 on the other generators.

    Uses each class's coordinate exponent e of ``unit``:
    d(unit^e x) = e * value * unit^(e-1) x over F2.
    """
    r = page.r
    inv = operators[unit].inverse().restricted(page.classes)
    ops = {k: v.restricted(page.classes) for k, v in operators.items()}
    seeds = []
    for cid in sorted(page.classes):
        c = page.classes[cid]
        if c.order != "F2":
            continue
        e = dict(c.coords[1]).get(unit, 0) if len(c.coords) > 1 else 0
        if e % 2 == 0:
            continue
        cur = inv(cid)
        for name in value:
            if cur is None:
                break
            cur = ops[name](cur)
        if cur is None or page.classes[cur].order != "F2":
            continue
        seeds.append(DifferentialSeed(r, cid, cur, cite))
    return seeds


def _orbit_rep(page: SseqPage, op: OperatorAction, period: int) -> dict[str, str]:
    if not page.stem_period or page.stem_period % period:
        raise NonPeriodicError("folding needs a cyclic stem range that the period divides")
    rep: dict[str, str] = {}
    for cid in sorted(page.classes):
        if cid in rep:
            continue
        orbit = [cid]
        cur = op(cid)
        while cur is not None and cur != cid:
            orbit.append(cur)
            cur = op(cur)
        if cur is None:
            raise NonPeriodicError(f"{orbit[-1]} has no partner under {op.name}")
        best = min(orbit, key=lambda x: (page.norm_stem(page.classes[x].stem), x))
        for x in orbit:
            rep[x] = best
    return rep


def fold_periodic(page: SseqPage, period: tuple[int, int], op: OperatorAction) -> SseqPage:
    """Quotient a periodic page to one fundamental domain of stems [0, period)."""
    if tuple(op.shift) != tuple(period):
        raise NonPeriodicError(f"operator {op.name} shifts by {op.shift}, not {period}")
    op = op.restricted(page.classes)
    for cid, c in page.classes.items():
        img = op(cid)
        if img is None:
            raise NonPeriodicError(f"{cid} has no partner under {op.name}")
        d = page.classes[img]
        if d.filt != c.filt + period[1] or page.norm_stem(d.stem - c.stem - period[0]) != 0 or d.order != c.order:
            raise NonPeriodicError(f"{cid} and its partner {img} do not match")
    rep = _orbit_rep(page, op, period[0])
    lines = set(page.structlines)
    for name, x, y in lines:
        if (name, op(x), op(y)) not in lines:
            raise NonPeriodicError(f"structure line {name}: {x} -> {y} is not periodic")
    classes = {}
    for cid in set(rep.values()):
        c = page.classes[cid]
        classes[cid] = replace(c, stem=c.stem % period[0] if page.stem_period else c.stem)
    structlines = sorted({(n, rep[x], rep[y]) for n, x, y in page.structlines})
    diffs = sorted({(r, rep.get(x, x), rep.get(y, y)) for r, x, y in page.differentials})
    seen = set()
    annotations = []
    for a in page.annotations:
        b = dict(a, **{"from": rep.get(a["from"], a["from"]), "to": rep.get(a["to"], a["to"])})
        if _freeze(b) not in seen:
            seen.add(_freeze(b))
            annotations.append(b)
    return page.copy(classes=classes, structlines=structlines, differentials=diffs, annotations=annotations, stem_period=period[0])


def fold_seeds(page: SseqPage, seeds: Sequence[DifferentialSeed], op: OperatorAction, period: int) -> list[DifferentialSeed]:
    rep = _orbit_rep(page, op.restricted(page.classes), period)
    out = {DifferentialSeed(s.page, rep[s.source], rep[s.target], s.cite) for s in seeds}
    return sorted(out, key=lambda s: (s.page, s.source, s.target))
