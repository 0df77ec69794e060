"""Replay of the descent spectral sequence for the reduced summand from a seed fixture.

The E_3 page is stored as generators of an F2[g, Delta^+-1]-module.  The
expanded model keeps Delta exponents in [-8, 8) with Delta^16 identified with 1
(so stems live mod 384) and g powers 0..K.  Conclusions are only drawn at
filtrations where every differential target is still inside the model.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .engine import (
    DifferentialSeed,
    OperatorAction,
    SseqClass,
    SseqError,
    SseqPage,
    apply_differentials,
    fold_periodic,
    leibniz_seeds,
)

__all__ = [
    "DELTA_RANGE",
    "STEM_PERIOD",
    "ReplayError",
    "ReplayResult",
    "build_fixture",
    "load_fixture",
    "write_fixture",
    "fixture_path",
    "expand_e3",
    "model_operators",
    "delta_power",
    "w_chain",
    "long_seeds",
    "run_replay",
    "homotopy_table",
]

DELTA_RANGE = (-8, 8)
DELTA_ORDER = DELTA_RANGE[1] - DELTA_RANGE[0]
STEM_PERIOD = 24 * DELTA_ORDER
DEFAULT_G = 12


class ReplayError(SseqError):
    pass


def _base(id_: str, stem: int, filt: int, label: str, order: str = "F2", layer: str = "main",
          h1: str | None = None, h2: str | None = None, tower: str | None = None) -> dict:
    out = {"stem": stem, "filt": filt, "order": order, "label": label, "id": id_, "layer": layer}
    if h1:
        out["h1"] = h1
    if h2:
        out["h2"] = h2
    if tower:
        out["tower"] = tower
    return out


def build_fixture() -> dict:
    """The E_3 generators, tower families and differential seeds as plain data."""
    classes = [
        _base("t", 1, 1, "t", h1="h1t", h2="h2t"),
        _base("h1t", 2, 2, "h1 t", h1="h1^2t"),
        _base("h2t", 4, 2, "h2 t", h2="h2^2t"),
        _base("h2^2t", 7, 3, "h2^2 t"),
        _base("sqrtDt", 13, 1, "sqrtDelta t", h1="h1sqrtDt", h2="h2sqrtDt"),
        _base("h2sqrtDt", 16, 2, "h2 sqrtDelta t", h2="h2^2sqrtDt"),
        _base("h2^2sqrtDt", 19, 3, "h2^2 sqrtDelta t"),
        _base("x12_4", 12, 4, "x_{12,4}", h1="h1x12_4"),
        _base("x4_0", 4, 0, "x_{4,0}", order="Z", layer="ko", h1="h1x4_0"),
        _base("x0_0", 0, 0, "x_{0,0}", order="Z", layer="ko"),
        _base("x8_0", 8, 0, "x_{8,0}", order="Z", layer="ko"),
        _base("x12_0", 12, 0, "x_{12,0}", order="Z", layer="ko", h1="h1x12_0"),
        _base("x16_0", 16, 0, "x_{16,0}", order="Z", layer="ko"),
        _base("x20_0", 20, 0, "x_{20,0}", order="Z", layer="ko", h1="h1x20_0"),
        _base("y9_1", 9, 1, "y_{9,1}", layer="ko", h1="h1y9_1"),
        _base("y17_1", 17, 1, "y_{17,1}", layer="ko", h1="h1y17_1"),
    ]
    # h1-towers: base id, first member id, start bidegree, label stem, layer
    towers = [
        {"id": "h1^kt", "first": "h1^2t", "start": [3, 3], "label": "h1^{k} t", "k0": 2, "layer": "main"},
        {"id": "h1^kx4_0", "first": "h1x4_0", "start": [5, 1], "label": "h1^{k} x_{4,0}", "k0": 1, "layer": "main"},
        {"id": "h1^ksqrtDt", "first": "h1sqrtDt", "start": [14, 2], "label": "h1^{k} sqrtDelta t", "k0": 1, "layer": "main"},
        {"id": "h1^kx12_4", "first": "h1x12_4", "start": [13, 5], "label": "h1^{k} x_{12,4}", "k0": 1, "layer": "main"},
        {"id": "h1^kx12_0", "first": "h1x12_0", "start": [13, 1], "label": "h1^{k} x_{12,0}", "k0": 1, "layer": "ko"},
        {"id": "h1^kx20_0", "first": "h1x20_0", "start": [21, 1], "label": "h1^{k} x_{20,0}", "k0": 1, "layer": "ko"},
        {"id": "h1^ky9_1", "first": "h1y9_1", "start": [10, 2], "label": "h1^{k} y_{9,1}", "k0": 1, "layer": "ko"},
        {"id": "h1^ky17_1", "first": "h1y17_1", "start": [18, 2], "label": "h1^{k} y_{17,1}", "k0": 1, "layer": "ko"},
    ]
    seeds = [
        {"page": 3, "from": "x4_0", "to": "h1^2t", "cite": "d3(x_{4,0}) = h1^2 t"},
        {"page": 3, "from": "sqrtDt", "to": "x12_4", "cite": "d3(sqrtDelta t) = x_{12,4}"},
        {"page": 3, "from": "x12_0", "to": "h1^2y9_1", "cite": "ko-like layer, v1^4 translate of the x_{4,0} differential"},
        {"page": 3, "from": "x20_0", "to": "h1^2y17_1", "cite": "ko-like layer, drawn d3 from (20,0) to (19,3)"},
        {"page": 5, "rule": "leibniz", "unit": "Delta", "value": ["h2", "g"], "cite": "d5(Delta) = h2 g"},
        {"page": 7, "from": "Delta h2^2sqrtDt", "to": "g^2 h1t", "closure": ["Delta^2", "g"],
         "cite": "d7 forced by the hidden nu extension from h2^2 sqrtDelta t to h1 g t"},
        {"page": "long", "rule": "w-chain", "z": ["Delta^0 t", "Delta^2 t"], "period": "Delta^8", "shift": "Delta^4",
         "k": "0 and k >= 3", "cite": "d(Delta^4 w^k z) = w^{k+19} z"},
    ]
    annotations = [{"kind": "hidden-ext", "op": "h2", "from": "h2^2sqrtDt", "to": "g h1t",
                    "cite": "hidden nu extension from h2^2 sqrtDelta t to h1 g t"}]
    return {
        "description": "E_3 generators of the reduced descent spectral sequence as an F2[g, Delta^+-1]-module",
        "operators": {"g": [20, 4], "Delta": [24, 0], "h1": [1, 1], "h2": [3, 1]},
        "forbidden_d3_sources": "(8k, 0)",
        "classes": classes,
        "towers": towers,
        "structlines": [],
        "differentials": [],
        "seeds": seeds,
        "annotations": annotations,
    }


def fixture_path() -> Path:
    return Path(str(resources.files("cobarforge.sseq") / "data" / "dss_fixture.json"))


def load_fixture(path: str | Path | None = None) -> dict:
    with open(path or fixture_path(), encoding="utf-8") as fh:
        return json.load(fh)


def write_fixture(path: str | Path | None = None) -> None:
    with open(path or fixture_path(), "w", encoding="utf-8") as fh:
        json.dump(build_fixture(), fh, indent=1, sort_keys=True)
        fh.write("\n")


# ------------------------------------------------------------------ expansion

def _cid(base: str, m: int, n: int) -> str:
    return f"{base}|D{m}|g{n}"


def _wrap(m: int) -> int:
    lo, hi = DELTA_RANGE
    return (m - lo) % DELTA_ORDER + lo


def _label(base_label: str, m: int, n: int) -> str:
    parts = []
    if m:
        parts.append("Delta" if m == 1 else f"Delta^{m}")
    if n:
        parts.append("g" if n == 1 else f"g^{n}")
    parts.append(base_label)
    return " ".join(parts)


@dataclass
class Model:
    page: SseqPage
    g_max: int
    fmax: int
    bases: dict[str, dict]

    @property
    def valid_filtration(self) -> int:
        return 4 * self.g_max + 5 - 24


def _bases(fixture: dict, fmax: int) -> dict[str, dict]:
    bases = {c["id"]: dict(c) for c in fixture["classes"]}
    for tw in fixture["towers"]:
        stem, filt = tw["start"]
        k = tw["k0"]
        prev = None
        while filt <= fmax:
            bid = tw["first"] if k == tw["k0"] else f"{tw['id']}^{k}"
            label = tw["label"].replace("{k}", str(k))
            bases[bid] = {"stem": stem, "filt": filt, "order": "F2", "label": label, "id": bid, "layer": tw["layer"]}
            if prev is not None:
                bases[prev]["h1"] = bid
            prev = bid
            stem, filt, k = stem + 1, filt + 1, k + 1
    # seeds may refer to tower members by their h1-power name
    alias = {}
    for tw in fixture["towers"]:
        root = tw["first"]
        k = tw["k0"]
        bid = root
        while bid in bases:
            alias[_power_name(tw, k)] = bid
            bid = bases[bid].get("h1")
            k += 1
            if bid is None:
                break
    for a, b in alias.items():
        bases.setdefault(a, {**bases[b], "alias_of": b})
    return bases


def _power_name(tw: dict, k: int) -> str:
    body = tw["first"][2:] if tw["first"].startswith("h1") else tw["first"]
    return f"h1^{k}{body}" if k > 1 else f"h1{body}"


def expand_e3(fixture: dict | None = None, g_max: int = DEFAULT_G) -> Model:
    fixture = fixture or load_fixture()
    fmax = 4 * g_max + 8
    bases = _bases(fixture, fmax)
    classes: dict[str, SseqClass] = {}
    structlines = []
    for bid, b in sorted(bases.items()):
        if "alias_of" in b:
            continue
        for m in range(*DELTA_RANGE):
            for n in range(g_max + 1):
                filt = b["filt"] + 4 * n
                if filt > fmax:
                    continue
                order = b["order"] if n == 0 else "F2"
                cid = _cid(bid, m, n)
                classes[cid] = SseqClass(
                    cid, (b["stem"] + 24 * m + 20 * n) % STEM_PERIOD, filt, order,
                    _label(b["label"], m, n), b["layer"], (bid, (("Delta", m), ("g", n))),
                )
    for cid, c in classes.items():
        bid = c.coords[0]
        m, n = dict(c.coords[1])["Delta"], dict(c.coords[1])["g"]
        for op in ("h1", "h2"):
            tgt = bases[bid].get(op)
            if tgt is not None:
                tid = _cid(bases[tgt].get("alias_of", tgt), m, n)
                if tid in classes:
                    structlines.append((op, cid, tid))
    ann = []
    for a in fixture.get("annotations", []):
        for m in range(*DELTA_RANGE):
            for n in range(g_max + 1):
                src = _cid(a["from"], m, n)
                tgt = _resolve(bases, a["to"], m, n)
                if src in classes and tgt in classes:
                    ann.append({"kind": a["kind"], "op": a["op"], "from": src, "to": tgt})
    page = SseqPage(3, classes, sorted(structlines), [], ann, STEM_PERIOD)
    return Model(page, g_max, fmax, bases)


def _resolve(bases: dict, text: str, m: int, n: int) -> str:
    """Parse 'Delta^a g^b base' relative to (m, n)."""
    dm = dn = 0
    base = None
    for tok in text.split():
        if tok.startswith("Delta"):
            dm = int(tok.split("^")[1]) if "^" in tok else 1
        elif tok == "g" or tok.startswith("g^"):
            dn = int(tok.split("^")[1]) if "^" in tok else 1
        else:
            base = tok
    if base is None or base not in bases:
        raise ReplayError(f"unknown class {text!r}")
    base = bases[base].get("alias_of", base)
    return _cid(base, _wrap(m + dm), n + dn)


# ------------------------------------------------------------------ operators

def delta_power(model: Model, page: SseqPage, k: int) -> OperatorAction:
    """Delta^k read off from coordinates, so dead intermediate translates do not matter."""
    index = page.by_coords()
    out = {}
    for cid, c in page.classes.items():
        if not c.coords:
            continue
        bid, ex = c.coords
        m, n = dict(ex)["Delta"], dict(ex)["g"]
        hit = index.get((bid, (("Delta", _wrap(m + k)), ("g", n))))
        if hit:
            out[cid] = hit
    return OperatorAction("Delta" if k == 1 else f"Delta^{k}", (24 * k, 0), out)


def model_operators(model: Model, page: SseqPage | None = None) -> dict[str, OperatorAction]:
    page = page or model.page
    index = page.by_coords()
    maps: dict[str, dict[str, str]] = {"h1": {}, "h2": {}, "g": {}, "Delta": {}}
    for cid, c in page.classes.items():
        if not c.coords:
            continue
        bid, ex = c.coords
        m, n = dict(ex)["Delta"], dict(ex)["g"]
        for op in ("h1", "h2"):
            tgt = model.bases[bid].get(op)
            if tgt is not None:
                tgt = model.bases[tgt].get("alias_of", tgt)
                hit = index.get((tgt, (("Delta", m), ("g", n))))
                if hit:
                    maps[op][cid] = hit
        hit = index.get((bid, (("Delta", m), ("g", n + 1))))
        if hit:
            maps["g"][cid] = hit
        hit = index.get((bid, (("Delta", _wrap(m + 1)), ("g", n))))
        if hit:
            maps["Delta"][cid] = hit
    shifts = {"h1": (1, 1), "h2": (3, 1), "g": (20, 4), "Delta": (24, 0)}
    return {k: OperatorAction(k, shifts[k], v) for k, v in maps.items()}


# ------------------------------------------------------------------ w-chains

def w_chain(model: Model, page: SseqPage, delta_power: int) -> dict[int, str]:
    """k -> id of w^k z for z = Delta^delta_power t, wherever the class exists on ``page``."""
    out = {}
    m0 = delta_power
    n = 0
    while True:
        entries = {
            0 + 4 * n: ("t", m0, n),
            3 + 4 * n: ("h2sqrtDt", m0, n),
            5 + 4 * n: ("h1t", _wrap(m0 + 1), n),
            6 + 4 * n: ("h2^2t", _wrap(m0 + 1), n),
        }
        if n > model.g_max:
            break
        for k, (b, m, nn) in entries.items():
            cid = _cid(b, m, nn)
            if cid in page.classes:
                out[k] = cid
        n += 1
    # w^4 z = g z is the k = 4 entry of the first family
    return dict(sorted(out.items()))


def long_seeds(model: Model, page: SseqPage) -> list[DifferentialSeed]:
    """d(Delta^4 w^k z) = w^{k+19} z for k = 0 and k >= 3, z = Delta^{8j} t and Delta^{8j+2} t."""
    seeds = []
    for base_m in range(DELTA_RANGE[0], DELTA_RANGE[1]):
        if base_m % 8 not in (0, 2):
            continue
        low = w_chain(model, page, base_m)
        high = w_chain(model, page, _wrap(base_m + 4))
        for k, src in high.items():
            if k in (1, 2):
                continue
            tgt = low.get(k + 19)
            if tgt is None:
                continue
            a, b = page.classes[src], page.classes[tgt]
            r = b.filt - a.filt
            seeds.append(DifferentialSeed(r, src, tgt, "d(Delta^4 w^k z) = w^{k+19} z"))
    return seeds


# ------------------------------------------------------------------ replay

@dataclass
class ReplayResult:
    pages: dict[str, SseqPage]
    model: Model
    checks: dict[str, bool]
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def e_infinity(self) -> SseqPage:
        return self.pages["Einf"]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _turn(page: SseqPage, seeds, ops=()) -> SseqPage:
    return apply_differentials(page, seeds, ops)


def run_replay(fixture: dict | None = None, g_max: int = DEFAULT_G, ko: bool = False) -> ReplayResult:
    start = time.perf_counter()
    fixture = fixture or load_fixture()
    model = expand_e3(fixture, g_max)
    page = model.page
    pages = {"E3": page}

    # d3
    d3 = []
    for sd in fixture["seeds"]:
        if sd["page"] != 3:
            continue
        for m in range(*DELTA_RANGE):
            src, tgt = _resolve(model.bases, sd["from"], m, 0), _resolve(model.bases, sd["to"], m, 0)
            d3.append(DifferentialSeed(3, src, tgt, sd["cite"]))
    for sd in d3:
        c = page.classes[sd.source]
        if c.filt == 0 and c.stem % 8 == 0:
            raise ReplayError(f"d3 seed from the 0-line at stem {c.stem} is not allowed")
    ops = model_operators(model, page)
    page = _turn(page, d3, [ops["h1"], ops["g"], ops["Delta"]])
    for sd in page.differentials:
        c = pages["E3"].classes[sd[1]]
        if c.filt == 0 and c.stem % 8 == 0:
            raise ReplayError(f"d3 would leave the 0-line at {c.bidegree}")
    page = _turn(page, [])
    pages["E5"] = page

    # d5 through the Leibniz rule
    rule = next(sd for sd in fixture["seeds"] if sd["page"] == 5)
    ops = model_operators(model, page)
    d5 = leibniz_seeds(page, rule["unit"], rule["value"], ops, rule["cite"])
    page = _turn(page, d5)
    page = _turn(page, [])
    pages["E7"] = page

    # d7
    ops = model_operators(model, page)
    d7 = []
    for sd in fixture["seeds"]:
        if sd["page"] != 7:
            continue
        src = _resolve(model.bases, sd["from"], 0, 0)
        tgt = _resolve(model.bases, sd["to"], 0, 0)
        d7.append(DifferentialSeed(7, src, tgt, sd["cite"]))
    closure = [delta_power(model, page, 2), ops["g"]]
    page = _turn(page, d7, closure)
    page = _turn(page, [])
    pages["E9"] = page

    # long differentials
    longs = long_seeds(model, page)
    by_page: dict[int, list[DifferentialSeed]] = {}
    for sd in longs:
        by_page.setdefault(sd.page, []).append(sd)
    pages_used = sorted(by_page)
    while page.r <= max(pages_used):
        page = _turn(page, by_page.get(page.r, []))
    pages["Einf"] = page

    checks, details = _structural_checks(model, pages)
    details["long_differential_pages"] = pages_used
    if not ko:
        pages = {k: v.layer("main") for k, v in pages.items()}
    return ReplayResult(pages, model, checks, details, time.perf_counter() - start)


def _structural_checks(model: Model, pages: dict[str, SseqPage]) -> tuple[dict[str, bool], dict]:
    v = model.valid_filtration
    einf = pages["Einf"].layer("main")
    visible = [c for c in einf.classes.values() if c.filt <= v]
    details: dict = {"valid_filtration": v}
    high = sorted((c.stem % 192, c.filt, c.id) for c in visible if c.filt > 24)
    details["above_24"] = high[:5]
    bad_stems = sorted({c.stem % 192 for c in visible} & {192 - 5, 192 - 3, 192 - 2, 192 - 1})
    details["forbidden_stems_hit"] = bad_stems
    def periodic(k: int) -> tuple[bool, str | None]:
        op = delta_power(model, einf, k)
        for c in visible:
            img = op(c.id)
            if img is None:
                return False, c.id
        return True, None

    p8, w8 = periodic(8)
    p4, w4 = periodic(4)
    details["delta8_witness"] = w8
    details["delta4_witness"] = w4
    folds = {}
    for name, k in (("E9", 2), ("Einf", 8)):
        pg = pages[name]
        op = delta_power(model, pg, k)
        try:
            fold_periodic(pg, (24 * k, 0), op)
            folds[name] = True
        except SseqError as exc:
            folds[name] = False
            details[f"fold_{name}"] = str(exc)
    checks = {
        "no_class_above_24": not high,
        "stems_minus_5_3_2_1_empty": not bad_stems,
        "delta8_periodic": p8,
        "not_delta4_periodic": not p4,
        "fold_E9_by_Delta2": folds["E9"],
        "fold_Einf_by_Delta8": folds["Einf"],
        "max_filtration": max((c.filt for c in visible), default=0) <= 24,
    }
    details["max_filtration"] = max((c.filt for c in visible), default=0)
    return checks, details


def homotopy_table(result: ReplayResult, lo: int = 0, hi: int = 192) -> dict[int, list[dict]]:
    """E_infinity classes per stem in [lo, hi) inside the valid range, with extension notes."""
    page = result.e_infinity
    v = result.model.valid_filtration
    ext = {}
    for a in page.annotations:
        ext.setdefault(a["from"], []).append(f"hidden {a['op']} to {page.classes[a['to']].label}")
    table: dict[int, list[dict]] = {}
    for c in sorted(page.classes.values(), key=lambda c: (c.stem, c.filt, c.id)):
        if c.filt > v or not lo <= c.stem < hi:
            continue
        entry = {"filt": c.filt, "order": c.order, "label": c.label}
        if c.id in ext:
            entry["extensions"] = ext[c.id]
        table.setdefault(c.stem, []).append(entry)
    return table
