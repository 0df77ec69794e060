from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from cobarforge.arith import LocElem
from cobarforge.comodule import ComoduleElem, sqrt_delta, trace_element
from cobarforge.expr import (
    BinOp,
    ExprContextError,
    ExprSyntaxError,
    Group,
    Sym,
    format_comodule,
    format_loc,
    parse_expr,
    parse_value,
    print_expr,
)

TORSION = "2*z - a1*z^2 + a3*z^4"


def test_torsion_relation_parses_and_vanishes():
    assert print_expr(parse_expr(TORSION)) == TORSION
    assert parse_value(TORSION, "comodule").is_zero()


def test_sqrt_delta_expression():
    assert parse_value("a3^2*(1 + a1*z)", "comodule") == sqrt_delta()


def test_trace_expression():
    assert parse_value("2 - a1*z + a3*z^3", "comodule") == trace_element()


def test_parenthesized_atom():
    e = parse_expr("(z)")
    assert e == Group(Sym("z")) and print_expr(e) == "(z)"
    assert parse_value("(z)", "comodule") == ComoduleElem.z()


def test_left_associative_subtraction():
    e = parse_expr("a1 - a3 - 1")
    assert isinstance(e, BinOp) and e.op == "-" and isinstance(e.left, BinOp)
    assert parse_value("a1 - a3 - 1") == LocElem.a1() - LocElem.a3() - 1


def test_whitespace_is_normalized():
    assert print_expr(parse_expr(" a3 ^2*( 1+a1 *z) ")) == "a3^2*(1 + a1*z)"


def test_leading_minus():
    assert parse_value("-a1 + a1").is_zero()
    assert print_expr(parse_expr("-2*a1")) == "-2*a1"


@pytest.mark.parametrize("text,pos", [("a1 +", 4), ("a1 ** a3", 4), ("(a1", 3), ("a1 $ a3", 3), ("a1^-1", 3)])
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr(text)
    assert info.value.pos == pos


def test_context_violations():
    with pytest.raises(ExprContextError):
        parse_value("z", "base")
    with pytest.raises(ExprContextError):
        parse_value("s*z", "comodule")
    parse_value("s*t + r", "gamma")


def test_inverse_symbols():
    assert parse_value("a3*a3inv") == 1
    delta = parse_value("a3^3*(a1^3 - 27*a3)")
    assert delta * parse_value("a3inv^3*v2inv") == 1


def test_pretty_printers_reparse():
    for text in ("a1^2*a3inv + 3", "v2inv*a1 - 5*a3^2"):
        x = parse_value(text)
        assert parse_value(format_loc(x)) == x
    m = parse_value("a3^2*(1 + a1*z) + a1*z^3", "comodule")
    assert parse_value(format_comodule(m), "comodule") == m


_atoms = st.sampled_from(["a1", "a3", "a3inv", "v2inv", "1", "2", "7"])


@st.composite
def expressions(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        return draw(_atoms)
    kind = draw(st.sampled_from(["+", "-", "*", "^", "()"]))
    a = draw(expressions(depth=depth - 1))
    if kind == "^":
        return f"({a})^{draw(st.integers(0, 3))}"
    if kind == "()":
        return f"({a})"
    b = draw(expressions(depth=depth - 1))
    return f"{a}*{b}" if kind == "*" else f"{a} {kind} {b}"


@given(expressions())
def test_print_parse_identity(text):
    e = parse_expr(text)
    assert print_expr(e) == text
    assert parse_expr(print_expr(e)) == e
    assert parse_value(print_expr(e)) == parse_value(text)
