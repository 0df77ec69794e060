"""Expression grammar shared by the CLI and the pretty-printers.

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := atom ['^' nat]
    atom   := a1 | a3 | a3inv | v2inv | z | s | t | r | integer | '(' expr ')'
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .arith import BasePoly, LocElem
from .arith.poly import mono_degree

__all__ = [
    "ExprSyntaxError",
    "ExprContextError",
    "Num",
    "Sym",
    "Neg",
    "BinOp",
    "Pow",
    "Group",
    "Expr",
    "parse_expr",
    "print_expr",
    "eval_expr",
    "parse_value",
    "format_basepoly",
    "format_loc",
    "format_gamma",
    "format_comodule",
    "format_tensor",
    "SYMBOLS",
    "CONTEXTS",
]

SYMBOLS = ("a1", "a3", "a3inv", "v2inv", "z", "s", "t", "r")
CONTEXT_SYMBOLS = {
    "base": {"a1", "a3", "a3inv", "v2inv"},
    "gamma": {"a1", "a3", "a3inv", "v2inv", "s", "t", "r"},
    "comodule": {"a1", "a3", "a3inv", "v2inv", "z"},
}
CONTEXTS = tuple(CONTEXT_SYMBOLS)


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        pointer = " " * pos + "^"
        super().__init__(f"{message} at position {pos}\n  {text}\n  {pointer}")


class ExprContextError(ValueError):
    """A symbol is not allowed in the requested evaluation context."""


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int


@dataclass(frozen=True)
class Group:
    inner: "Expr"


Expr = Union[Num, Sym, Neg, BinOp, Pow, Group]

_TOKEN = re.compile(r"\s*(?:(\d+)|(a3inv|v2inv|a1|a3|z|s|t|r)|([-+*^()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[start]!r}", text, start)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("num", m.group(1), start))
        elif m.group(2):
            end = m.end(2)
            if end < len(text) and (text[end].isalnum() or text[end] == "_"):
                raise ExprSyntaxError("unknown identifier", text, start)
            toks.append(("sym", m.group(2), start))
        else:
            toks.append(("op", m.group(3), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg: str) -> None:
        raise ExprSyntaxError(msg, self.text, self.peek()[2])

    def expr(self) -> Expr:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            node: Expr = Neg(self.term())
        else:
            node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            node = BinOp("*", node, self.factor())
        return node

    def factor(self) -> Expr:
        node = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, val, _ = self.peek()
            if kind != "num":
                self.fail("expected a natural-number exponent")
            self.take()
            node = Pow(node, int(val))
        return node

    def atom(self) -> Expr:
        kind, val, _ = self.peek()
        if kind == "num":
            self.take()
            return Num(int(val))
        if kind == "sym":
            self.take()
            return Sym(val)
        if (kind, val) == ("op", "("):
            self.take()
            inner = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return Group(inner)
        if kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected token {val!r}")
        raise AssertionError


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    node = p.expr()
    if p.peek()[0] != "end":
        p.fail(f"unexpected token {p.peek()[1]!r}")
    return node


def print_expr(e: Expr) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Group):
        return f"({print_expr(e.inner)})"
    if isinstance(e, Neg):
        return f"-{print_expr(e.operand)}"
    if isinstance(e, Pow):
        return f"{print_expr(e.base)}^{e.exp}"
    if e.op == "*":
        return f"{print_expr(e.left)}*{print_expr(e.right)}"
    return f"{print_expr(e.left)} {e.op} {print_expr(e.right)}"


def _symbols(e: Expr) -> set[str]:
    if isinstance(e, Sym):
        return {e.name}
    if isinstance(e, Num):
        return set()
    if isinstance(e, (Group, Neg)):
        return _symbols(e.inner if isinstance(e, Group) else e.operand)
    if isinstance(e, Pow):
        return _symbols(e.base)
    return _symbols(e.left) | _symbols(e.right)


def _atoms(context: str, prec: int, mode: str) -> dict:
    from . import comodule, hopf

    base = {
        "a1": LocElem.a1(prec, mode),
        "a3": LocElem.a3(prec, mode),
        "a3inv": LocElem.a3inv(prec, mode),
        "v2inv": LocElem.v2inv(prec, mode),
    }
    if context == "base":
        return base
    if context == "gamma":
        out = {k: hopf.GammaElem.scalar(v) for k, v in base.items()}
        out.update(s=hopf.s_elem(prec, mode), t=hopf.t_elem(prec, mode), r=hopf.r_elem(prec, mode))
        return out
    out = {k: comodule.ComoduleElem.scalar(v) for k, v in base.items()}
    out["z"] = comodule.ComoduleElem.z(prec, mode)
    return out


def eval_expr(e: Expr, context: str = "base", prec: int = 8, mode: str = "z2"):
    """Evaluate to a LocElem (base), GammaElem (gamma) or ComoduleElem (comodule)."""
    if context not in CONTEXT_SYMBOLS:
        raise ExprContextError(f"unknown context {context!r}")
    bad = _symbols(e) - CONTEXT_SYMBOLS[context]
    if bad:
        raise ExprContextError(f"symbols {sorted(bad)} not allowed in {context} context")
    atoms = _atoms(context, prec, mode)
    one = atoms["a1"] * 0 + 1 if context != "base" else LocElem.one(prec, mode)

    def ev(node: Expr):
        if isinstance(node, Num):
            return one * node.value
        if isinstance(node, Sym):
            return atoms[node.name]
        if isinstance(node, Group):
            return ev(node.inner)
        if isinstance(node, Neg):
            return -ev(node.operand)
        if isinstance(node, Pow):
            b = ev(node.base)
            out = one
            for _ in range(node.exp):
                out = out * b
            return out
        left, right = ev(node.left), ev(node.right)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        return left * right

    val = ev(e)
    return val.reduce() if hasattr(val, "reduce") else val


def parse_value(text: str, context: str = "base", prec: int = 8, mode: str = "z2"):
    return eval_expr(parse_expr(text), context, prec, mode)


# ---------------------------------------------------------------- printing

def _coeff_str(c: int, mod: int, mode: str) -> int:
    if mode == "f2":
        return c % 2
    c %= mod
    return c - mod if c > mod // 2 else c


def _join(terms: list[tuple[int, str]]) -> str:
    """terms: (signed integer, monomial string or '') -> canonical sum."""
    if not terms:
        return "0"
    parts = []
    for k, (c, mono) in enumerate(terms):
        neg = c < 0
        a = -c if neg else c
        body = mono if a == 1 and mono else (f"{a}*{mono}" if mono else str(a))
        if k == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def _mono_str(factors: list[tuple[str, int]]) -> str:
    out = []
    for name, e in factors:
        if e == 0:
            continue
        out.append(name if e == 1 else f"{name}^{e}")
    return "*".join(out)


def format_basepoly(p: BasePoly) -> str:
    terms = [(_coeff_str(c, p.modulus, p.mode), _mono_str([("a1", i), ("a3", j)])) for (i, j), c in p.sorted_terms()]
    return _join([t for t in terms if t[0]])


def _loc_terms(x: LocElem) -> list[tuple[int, str, tuple]]:
    r = x.reduce()
    out = []
    for (i, j), c in r.num.sorted_terms():
        c = _coeff_str(c, r.num.modulus, r.mode)
        if not c:
            continue
        e3 = j - r.da3
        factors = [("a1", i)]
        factors.append(("a3", e3) if e3 >= 0 else ("a3inv", -e3))
        factors.append(("v2inv", r.dv2))
        out.append((c, _mono_str(factors), (mono_degree((i, j)), j, i)))
    return out


def format_loc(x: LocElem) -> str:
    return _join([(c, m) for c, m, _ in _loc_terms(x)])


def _with_basis(coeff_terms: list[tuple[int, str, tuple]], basis: str) -> list[tuple[int, str]]:
    out = []
    for c, m, _ in coeff_terms:
        mono = "*".join(x for x in (m, basis) if x)
        out.append((c, mono))
    return out


def format_gamma(g) -> str:
    from .hopf import word_name

    terms = []
    for w in sorted(g.coeffs):
        name = word_name(w)
        terms += _with_basis(_loc_terms(g.coeffs[w]), "" if name == "1" else name)
    return _join(terms)


def format_comodule(m) -> str:
    terms = []
    for j in sorted(m.coeffs):
        zname = "" if j == 0 else ("z" if j == 1 else f"z^{j}")
        terms += _with_basis(_loc_terms(m.coeffs[j]), zname)
    return _join(terms)


def format_tensor(x) -> str:
    """Bracket notation, e.g. (a1)[s|t] z^2; not parseable."""
    from .hopf import word_name

    parts = []
    for (ws, j), c in sorted(x.terms.items()):
        if c.is_zero():
            continue
        bracket = "[" + "|".join(word_name(w) for w in ws) + "]"
        tail = ""
        if x.tag != "unit":
            tail = " " + ("1" if j == 0 else ("z" if j == 1 else f"z^{j}"))
        parts.append(f"({format_loc(c)}){bracket}{tail}")
    return " + ".join(parts) if parts else "0"
