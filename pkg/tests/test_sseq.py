from __future__ import annotations

import json
import random

import pytest

from _sseq_random import expected_dims, periodic_fixture, random_fixture
from cobarforge.sseq import (
    DifferentialSeed,
    NonPeriodicError,
    OperatorAction,
    SeedConflictError,
    SeedError,
    SseqClass,
    SseqError,
    SseqPage,
    apply_differentials,
    build_fixture,
    chart_json,
    chart_svg,
    close_seeds,
    export_chart,
    fold_periodic,
    fold_seeds,
    homotopy_table,
    import_chart,
    leibniz_seeds,
    load_fixture,
    run_replay,
)
from cobarforge.sseq.replay import STEM_PERIOD

CASES = range(200)


def _page(*specs, r=2, **kw) -> SseqPage:
    return SseqPage(r, {cid: SseqClass(cid, s, f, *rest) for cid, s, f, *rest in specs}, **kw)


# -------------------------------------------------------------- examples

def test_empty_seed_list_is_identity():
    page = _page(("x", 1, 0), ("y", 0, 2))
    nxt = apply_differentials(page, [])
    assert nxt.classes == page.classes and nxt.r == 3


def test_single_differential_drops_both_ends():
    page = _page(("x", 1, 0), ("y", 0, 2), ("z", 5, 5))
    nxt = apply_differentials(page, [DifferentialSeed(2, "x", "y")])
    assert set(nxt.classes) == {"z"}
    assert nxt.differentials == [(2, "x", "y")]


def test_two_sources_one_target_leaves_their_sum():
    page = _page(("x", 1, 0), ("x2", 1, 0), ("y", 0, 2))
    nxt = apply_differentials(page, [DifferentialSeed(2, "x", "y"), DifferentialSeed(2, "x2", "y")])
    assert list(nxt.classes) == ["x2+x"]


def test_integral_differential_leaves_a_multiple():
    page = _page(("x", 1, 0, "Z"), ("y", 0, 2, "Z/2^2"))
    nxt = apply_differentials(page, [DifferentialSeed(2, "x", "y")])
    assert list(nxt.classes) == ["4*x"] and nxt.classes["4*x"].order == "Z"


def test_differential_into_free_class_rejected():
    page = _page(("x", 1, 0, "Z"), ("y", 0, 2, "Z"))
    with pytest.raises(SeedConflictError):
        apply_differentials(page, [DifferentialSeed(2, "x", "y")])


def test_leibniz_on_three_generators():
    """d5(Delta^(k+1) u) = Delta^k h2 g u, checked against a hand list."""
    gens = {"u": (0, 0), "v": (1, 1), "w": (8, 2)}
    specs, delta, h2, g = [], {}, {}, {}
    for name, (s, f) in gens.items():
        for e in range(4):
            specs.append((f"D{e}{name}", s + 24 * e, f, "F2", "", "main", ((name,), (("Delta", e),))))
            specs.append((f"H{e}{name}", s + 24 * e + 3, f + 1))
            specs.append((f"HG{e}{name}", s + 24 * e + 23, f + 5))
            h2[f"D{e}{name}"] = f"H{e}{name}"
            g[f"H{e}{name}"] = f"HG{e}{name}"
            if e < 3:
                delta[f"D{e}{name}"] = f"D{e + 1}{name}"
    page = _page(*specs, r=5)
    ops = {"Delta": OperatorAction("Delta", (24, 0), delta), "h2": OperatorAction("h2", (3, 1), h2),
           "g": OperatorAction("g", (20, 4), g)}
    seeds = leibniz_seeds(page, "Delta", ["h2", "g"], ops)
    got = {(s.source, s.target) for s in seeds}
    want = {(f"D{e}{n}", f"HG{e - 1}{n}") for n in gens for e in (1, 3)}
    assert got == want
    nxt = apply_differentials(page, seeds)
    assert len(nxt.classes) == len(page.classes) - 2 * len(want)


def test_seed_closure_under_operator():
    page = _page(("x0", 1, 0), ("y0", 0, 2), ("x1", 25, 0), ("y1", 24, 2))
    op = OperatorAction("Delta", (24, 0), {"x0": "x1", "y0": "y1"})
    assert close_seeds(page, [DifferentialSeed(2, "x0", "y0")], [op]) == [("x0", "y0"), ("x1", "y1")]


def test_fold_by_period_relabels_canonically():
    page = _page(("a", 0, 0), ("b", 24, 0), ("c", 3, 1), ("d", 27, 1), stem_period=48)
    op = OperatorAction("Delta", (24, 0), {"a": "b", "b": "a", "c": "d", "d": "c"})
    folded = fold_periodic(page, (24, 0), op)
    assert set(folded.classes) == {"a", "c"}
    assert folded.stem_period == 24


def test_fold_rejects_missing_partner():
    page = _page(("a", 0, 0), ("b", 24, 0), ("c", 3, 1), stem_period=48)
    op = OperatorAction("Delta", (24, 0), {"a": "b", "b": "a"})
    with pytest.raises(NonPeriodicError):
        fold_periodic(page, (24, 0), op)


def test_fold_rejects_wrong_shift():
    page = _page(("a", 0, 0), stem_period=24)
    with pytest.raises(NonPeriodicError):
        fold_periodic(page, (24, 0), OperatorAction("h1", (1, 1), {}))


# -------------------------------------------------------------- seed validation

def test_seed_wrong_bidegree():
    page = _page(("x", 1, 0), ("y", 1, 2))
    with pytest.raises(SeedError):
        apply_differentials(page, [DifferentialSeed(2, "x", "y")])


def test_seed_dead_endpoint():
    page = _page(("x", 1, 0))
    with pytest.raises(SeedError):
        apply_differentials(page, [DifferentialSeed(2, "x", "gone")])


def test_seed_wrong_page():
    page = _page(("x", 1, 0), ("y", 0, 2))
    with pytest.raises(SeedError):
        apply_differentials(page, [DifferentialSeed(3, "x", "y")])


def test_seed_conflicts_carry_counterexample():
    page = _page(("x", 2, 0), ("y", 1, 2), ("z", 0, 4), ("y2", 1, 2))
    with pytest.raises(SeedConflictError) as info:
        apply_differentials(page, [DifferentialSeed(2, "x", "y"), DifferentialSeed(2, "y", "z")])
    assert info.value.counterexample == ("y",)
    with pytest.raises(SeedConflictError) as info:
        apply_differentials(page, [DifferentialSeed(2, "x", "y"), DifferentialSeed(2, "x", "y2")])
    assert info.value.counterexample[0] == "x"


@pytest.mark.parametrize("case", CASES)
def test_random_invalid_bidegree_rejected(case):
    rng = random.Random(10_000 + case)
    fx = random_fixture(case)
    page = fx.page
    ids = sorted(page.classes)
    if len(ids) < 2:
        return
    a, b = rng.sample(ids, 2)
    ca, cb = page.classes[a], page.classes[b]
    valid = cb.filt == ca.filt + page.r and cb.stem == ca.stem - 1
    if valid:
        close_seeds(page, [DifferentialSeed(page.r, a, b)])
    else:
        with pytest.raises(SeedError):
            close_seeds(page, [DifferentialSeed(page.r, a, b)])


# -------------------------------------------------------------- properties

@pytest.mark.parametrize("case", CASES)
def test_dimension_law(case):
    fx = random_fixture(case)
    nxt = apply_differentials(fx.page, fx.seeds)
    assert nxt.dims() == expected_dims(fx.page, fx.seeds)
    assert len(nxt.classes) <= len(fx.page.classes)


@pytest.mark.parametrize("case", CASES)
def test_turn_is_order_independent(case):
    page, op, seeds, _ = periodic_fixture(case)
    rng = random.Random(case)
    ref = apply_differentials(page, seeds, [op])
    for _ in range(3):
        shuffled = seeds[:]
        rng.shuffle(shuffled)
        assert apply_differentials(page, shuffled, [op, op.power(2)]) == ref


@pytest.mark.parametrize("case", CASES)
def test_fold_commutes_with_turn(case):
    page, op, seeds, period = periodic_fixture(case)
    turned = apply_differentials(page, seeds, [op])
    a = fold_periodic(turned, (period, 0), op.restricted(turned.classes))
    folded = fold_periodic(page, (period, 0), op)
    b = apply_differentials(folded, fold_seeds(page, seeds, op, period))
    assert a.dims() == b.dims()
    assert set(a.classes) == set(b.classes)


# -------------------------------------------------------------- replay

def test_fixture_file_matches_builder():
    assert load_fixture() == json.loads(json.dumps(build_fixture()))


def test_fixture_seeds_are_cited():
    fx = load_fixture()
    assert fx["seeds"] and all(sd.get("cite") for sd in fx["seeds"])


@pytest.fixture(scope="module")
def replay():
    return run_replay()


def test_replay_checks(replay):
    assert replay.passed, replay.checks
    assert set(replay.pages) == {"E3", "E5", "E7", "E9", "Einf"}
    assert replay.seconds < 10


def test_replay_einf_facts(replay):
    einf = replay.e_infinity
    v = replay.model.valid_filtration
    visible = [c for c in einf.classes.values() if c.filt <= v]
    assert max(c.filt for c in visible) <= 24
    assert not {c.stem % STEM_PERIOD for c in visible} & {STEM_PERIOD - k for k in (5, 3, 2, 1)}


def test_replay_pages_shrink(replay):
    sizes = [len(replay.pages[k].classes) for k in ("E3", "E5", "E7", "E9", "Einf")]
    assert sizes == sorted(sizes, reverse=True) and sizes[0] > sizes[-1]


def test_homotopy_table_range(replay):
    table = homotopy_table(replay, 0, 30)
    assert set(table) <= set(range(30))
    assert all(entry["filt"] <= 24 for rows in table.values() for entry in rows)


def test_ko_layer_is_opt_in(replay):
    assert {c.layer for c in replay.e_infinity.classes.values()} == {"main"}


# -------------------------------------------------------------- charts

def test_empty_page_chart():
    doc = chart_json(SseqPage(2, {}))
    assert doc["classes"] == [] and doc["differentials"] == []
    assert chart_svg(SseqPage(2, {})).startswith("<svg")


def test_single_class_svg():
    svg = chart_svg(_page(("t", 1, 1, "F2", "t")))
    assert svg.count("<circle") == 1
    # margin 2: x = (1 - (-1)) * 20, y = (3 - 1) * 20
    assert '<circle cx="40.0" cy="40.0"' in svg
    assert svg == chart_svg(_page(("t", 1, 1, "F2", "t")))


def test_order_glyphs():
    svg = chart_svg(_page(("a", 0, 0, "Z"), ("b", 2, 0, "Z/2^3")))
    assert svg.count("<rect") == 2  # background plus the free class
    assert svg.count("<circle") == 3


def test_json_round_trip(replay):
    page = replay.pages["E9"]
    again = import_chart(export_chart(page, "json"))
    assert chart_json(again) == chart_json(page)
    small = _page(("x", 1, 0, "Z/2^2", "x"), ("y", 0, 2), structlines=[("h1", "x", "y")],
                  annotations=[{"kind": "hidden-ext", "op": "h2", "from": "x", "to": "y"}])
    assert import_chart(export_chart(small)) == small


def test_unknown_format():
    with pytest.raises(SseqError):
        export_chart(SseqPage(2, {}), "png")
