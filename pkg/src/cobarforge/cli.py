"""Command-line entry point ``cobarforge``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from .arith import ModeError, PrecisionError

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2
ENV_PRECISION = "COBARFORGE_PRECISION"


class InvalidInput(ValueError):
    pass


def _default_precision() -> int:
    raw = os.environ.get(ENV_PRECISION)
    if raw is None:
        return 8
    try:
        val = int(raw)
    except ValueError:
        raise InvalidInput(f"{ENV_PRECISION} must be an integer, got {raw!r}") from None
    if val < 1:
        raise InvalidInput(f"{ENV_PRECISION} must be positive")
    return val


def _emit(args: argparse.Namespace, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True)


# ------------------------------------------------------------------ subcommands

def cmd_derive_torsion(args) -> int:
    from .torsion import derivation_steps

    steps = derivation_steps()
    if args.format == "json":
        _emit(args, _dump({"steps": [{"step": k, "value": v} for k, v in steps], "relation": steps[-1][1]}))
    else:
        lines = [f"{k}: {v}" for k, v in steps[:-1]]
        lines.append(steps[-1][1])
        _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .cobar import CheckId, verify

    if args.all == bool(args.id):
        raise InvalidInput("give exactly one check id or --all")
    if args.all:
        ids = list(CheckId)
    else:
        try:
            ids = [CheckId(args.id)]
        except ValueError:
            raise InvalidInput(f"unknown check {args.id!r}; known: {', '.join(c.value for c in CheckId)}") from None
    reports = [verify(c, args.precision) for c in ids]
    if args.format == "json":
        body = [r.as_dict() for r in reports]
        _emit(args, _dump(body if args.all else body[0]))
    else:
        lines = []
        for r in reports:
            lines.append(f"{r.id}: {'PASS' if r.passed else 'FAIL'} (mod {r.modulus}, N={r.precision}) {r.cite}")
            lines.append(f"  residual: {r.residual}")
        _emit(args, "\n".join(lines))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _parse_mod(text: str | None, prec: int) -> int | None:
    if text is None:
        return None
    body = text[2:] if text.startswith("2^") else None
    if body is None or not body.isdigit() or int(body) < 1:
        raise InvalidInput(f"--mod expects 2^k, got {text!r}")
    k = int(body)
    if k > prec:
        raise InvalidInput(f"--mod 2^{k} exceeds the working precision {prec}")
    return k


def cmd_coaction(args) -> int:
    from .comodule import coaction, quotient_to_mbar
    from .expr import format_comodule, format_tensor, parse_value

    k = _parse_mod(args.mod, args.precision)
    m = parse_value(args.element, "comodule", args.precision)
    if args.comodule == "mbar":
        m = quotient_to_mbar(m)
    psi = coaction(m).reduce()
    if k is not None:
        psi = psi.truncate(k).reduce()
    text = format_tensor(psi)
    if args.format == "json":
        _emit(args, _dump({"element": format_comodule(m), "comodule": args.comodule, "precision": args.precision,
                           "modulus": 1 << (k or args.precision), "coaction": text}))
    else:
        _emit(args, text)
    return EXIT_OK


def _parse_coeff(text: str) -> int:
    if text == "f2":
        return 1
    if text.startswith("z2:") and text[3:].isdigit():
        return int(text[3:])
    raise InvalidInput(f"--coeff expects f2 or z2:N, got {text!r}")


def cmd_ext(args) -> int:
    from .ext import ExtEngine, integral_ext, mbar_labels, unit_labels

    n = _parse_coeff(args.coeff)
    rows = []
    labels: dict[tuple[int, int], list[str]] = {}
    if n == 1:
        engine = ExtEngine(args.comodule)
        if args.labels:
            rep = unit_labels(engine) if args.comodule == "unit" else mbar_labels(engine)
            for name, c in rep.classes.items():
                labels.setdefault((c.s, c.t), []).append(name)
    for s in range(args.max_filt + 1):
        for t in range(s, args.max_stem + s + 1):
            if n == 1:
                d = engine.dim(s, t)
                if d:
                    rows.append({"s": s, "t": t, "dim": d, "labels": sorted(labels.get((s, t), []))})
            else:
                g = integral_ext(s, t, args.comodule, n)
                if g.orders():
                    rows.append({"s": s, "t": t, "orders": g.orders(), "labels": []})
    if args.chart:
        from .sseq import SseqClass, SseqPage, export_chart

        classes = {}
        for row in rows:
            count = row.get("dim", len(row.get("orders", [])))
            for i in range(count):
                cid = f"e{row['s']}_{row['t']}_{i}"
                order = "F2" if n == 1 else _order_tag(row["orders"][i])
                classes[cid] = SseqClass(cid, row["t"] - row["s"], row["s"], order, ",".join(row["labels"]) if i == 0 else "")
        Path(args.chart).write_text(export_chart(SseqPage(2, classes), "json"), encoding="utf-8")
    if args.format == "json":
        _emit(args, _dump(rows))
    else:
        out = []
        for row in rows:
            val = row.get("dim", None)
            val = f"dim {val}" if val is not None else " + ".join(row["orders"])
            lab = f"  [{', '.join(row['labels'])}]" if row["labels"] else ""
            out.append(f"s={row['s']} t={row['t']} stem={row['t'] - row['s']}: {val}{lab}")
        _emit(args, "\n".join(out) if out else "(empty)")
    return EXIT_OK


def _order_tag(text: str) -> str:
    if text == "Z":
        return "Z"
    order = int(text.split("/")[1])
    k = order.bit_length() - 1
    return "F2" if k == 1 else f"Z/2^{k}"


def _lift_chain(text: str, comodule: str, prec: int) -> tuple[dict, int]:
    """An integral 0-chain from an expression; returns (chain, t)."""
    from .expr import parse_value

    if comodule == "unit":
        x = parse_value(text, "base", prec).reduce()
        if not x.is_polynomial():
            raise InvalidInput("the lift must be a polynomial in a1, a3")
        chain = {(m, (), 0): c for m, c in x.num.terms.items() if c}
    else:
        from .comodule import quotient_to_mbar

        m = quotient_to_mbar(parse_value(text, "comodule", prec))
        chain = {}
        for j, b, shift in ((2, 0, 1), (1, 1, 2)):
            c = m.coeff(j).reduce()
            if c.is_zero():
                continue
            if not c.is_polynomial():
                raise InvalidInput("the lift must have polynomial coefficients")
            for (i, e), v in c.num.terms.items():
                if e < shift:
                    raise InvalidInput("coefficients must be divisible by a3 (z^2) and a3^2 (z)")
                chain[((i, e - shift), (), b)] = v
    if not chain:
        raise InvalidInput("the lift is zero")
    degs = {2 * i + 6 * j + (0 if comodule == "unit" else (2, 10)[b]) for ((i, j), _, b) in chain}
    if len(degs) != 1:
        raise InvalidInput("the lift is not homogeneous")
    return chain, degs.pop()


def cmd_bockstein(args) -> int:
    from .ext import ExtEngine, bockstein_d1

    prec = max(args.precision, 4)
    chain, t = _lift_chain(args.lift, args.comodule, prec)
    engine = ExtEngine(args.comodule)
    res = bockstein_d1(engine, chain, 0, t, prec)
    coords = [i for i in range(engine.dim(1, t)) if res.value.coords >> i & 1]
    body = {"lift": args.lift, "comodule": args.comodule, "s": 1, "t": t, "dim": engine.dim(1, t),
            "coords": coords, "zero": res.is_zero, "indeterminacy_dim": res.indeterminacy_dim}
    if args.format == "json":
        _emit(args, _dump(body))
    else:
        _emit(args, f"d1({args.lift}) in Ext^(1,{t}) = " + ("0" if res.is_zero else f"basis classes {coords}"))
    return EXIT_OK


def cmd_product(args) -> int:
    from .ext import ExtEngine, unit_labels

    engine = ExtEngine("unit")
    named = unit_labels(engine).classes

    def resolve(name: str):
        if name in named:
            return named[name]
        chain, t = _lift_chain(name, "unit", 1)
        return engine.cls({k: 1 for k, v in chain.items() if v & 1}, 0, t, name)

    try:
        u, v = resolve(args.left), resolve(args.right)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    w = engine.product(u, v)
    coords = [i for i in range(engine.dim(w.s, w.t)) if w.coords >> i & 1]
    body = {"left": args.left, "right": args.right, "s": w.s, "t": w.t, "stem": w.t - w.s,
            "dim": engine.dim(w.s, w.t), "coords": coords, "zero": w.is_zero()}
    if args.format == "json":
        _emit(args, _dump(body))
    else:
        _emit(args, f"{args.left} * {args.right} in Ext^({w.s},{w.t}) = " + ("0" if w.is_zero() else f"basis classes {coords}"))
    return EXIT_OK


def cmd_sseq(args) -> int:
    from .sseq import export_chart, homotopy_table, load_fixture, run_replay

    fixture = load_fixture(args.fixture) if args.fixture else None
    res = run_replay(fixture, g_max=args.g_max, ko=args.ko)
    page = res.pages[args.page]
    if args.format == "svg":
        _emit(args, export_chart(page, "svg"))
    elif args.format == "json":
        body = {
            "checks": res.checks,
            "details": {k: v for k, v in res.details.items()},
            "homotopy": {str(k): v for k, v in homotopy_table(res).items()},
            "chart": json.loads(export_chart(page, "json")),
        }
        _emit(args, _dump(body))
    else:
        lines = [f"{k}: {'PASS' if v else 'FAIL'}" for k, v in res.checks.items()]
        lines.append(f"valid filtration range: s <= {res.model.valid_filtration}")
        for stem, entries in homotopy_table(res).items():
            lines.append(f"stem {stem}: " + ", ".join(f"{e['label']} ({e['order']}, s={e['filt']})" for e in entries))
        _emit(args, "\n".join(lines))
    return EXIT_OK if res.passed else EXIT_FAIL


def cmd_chart(args) -> int:
    from .sseq import SseqError, export_chart, import_chart

    try:
        page = import_chart(Path(args.input).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError, KeyError, SseqError) as exc:
        raise InvalidInput(f"cannot read chart: {exc}") from None
    fmt = "svg" if args.format in (None, "text", "svg") else "json"
    _emit(args, export_chart(page, fmt))
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=argparse.SUPPRESS, help="2-adic precision N (default 8 or $%s)" % ENV_PRECISION)
    common.add_argument("--format", choices=("json", "text", "svg"), default=argparse.SUPPRESS)
    common.add_argument("--output", default=argparse.SUPPRESS, help="write output to this path")

    p = argparse.ArgumentParser(prog="cobarforge", description="Cobar complexes, Ext and descent spectral sequences.")
    p.add_argument("--precision", type=int, default=None)
    p.add_argument("--format", choices=("json", "text", "svg"), default=None)
    p.add_argument("--output", default=None)
    sub = p.add_subparsers(dest="command", metavar="command")
    sub.required = True

    s = sub.add_parser("derive-torsion", parents=[common], help="derive the 2-torsion relation")
    s.set_defaults(func=cmd_derive_torsion)

    s = sub.add_parser("verify", parents=[common], help="run cocycle checks")
    s.add_argument("id", nargs="?")
    s.add_argument("--all", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("coaction", parents=[common], help="coaction of a comodule element")
    s.add_argument("--element", required=True)
    s.add_argument("--mod", default=None, help="reduce modulo 2^k")
    s.add_argument("--comodule", choices=("tors", "mbar"), default="tors")
    s.set_defaults(func=cmd_coaction)

    s = sub.add_parser("ext", parents=[common], help="Ext table in a bidegree range")
    s.add_argument("--comodule", choices=("unit", "mbar"), default="unit")
    s.add_argument("--coeff", default="f2")
    s.add_argument("--max-stem", type=int, default=24)
    s.add_argument("--max-filt", type=int, default=4)
    s.add_argument("--labels", action="store_true")
    s.add_argument("--chart", default=None, help="also write a chart JSON file")
    s.set_defaults(func=cmd_ext)

    s = sub.add_parser("bockstein", parents=[common], help="2-Bockstein d1 of a 0-line class")
    s.add_argument("--comodule", choices=("unit", "mbar"), default="unit")
    s.add_argument("--lift", required=True, help="integral lift, e.g. a1 or a3^4*(a1^3 - 27*a3)*z^2")
    s.set_defaults(func=cmd_bockstein)

    s = sub.add_parser("product", parents=[common], help="product of Ext classes")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("sseq", parents=[common], help="spectral sequence replay")
    ssub = s.add_subparsers(dest="action", metavar="action")
    ssub.required = True
    r = ssub.add_parser("run", parents=[common], help="replay the seed fixture")
    r.add_argument("--fixture", default=None)
    r.add_argument("--g-max", type=int, default=12)
    r.add_argument("--ko", action="store_true", help="keep the ko-like layer")
    r.add_argument("--page", choices=("E3", "E5", "E7", "E9", "Einf"), default="Einf")
    r.set_defaults(func=cmd_sseq)

    s = sub.add_parser("chart", parents=[common], help="render a chart JSON file")
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_chart)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        if args.precision is None:
            args.precision = _default_precision()
        if args.precision < 1:
            raise InvalidInput("--precision must be positive")
        if args.format is None:
            args.format = "text"
        return args.func(args)
    except (InvalidInput, PrecisionError, ModeError, KeyError) as exc:
        print(f"cobarforge: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"cobarforge: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
