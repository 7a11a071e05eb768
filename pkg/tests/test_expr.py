import math

import pytest
from hypothesis import given, settings, strategies as st

from secantplane.expr import (
    MAX_DEPTH,
    Add,
    Const,
    Div,
    EvalError,
    ExprSyntaxError,
    Mul,
    Neg,
    Pow,
    Sub,
    Var,
    depth,
    deriv_fd,
    eval1,
    eval2,
    grad_fd,
    parse,
    to_source,
    tokenize,
    variables,
)
from secantplane.ga2 import Vector2

X, Y = Var("x"), Var("y")

# --- strategies ------------------------------------------------------------------

constants = st.floats(0.0, 1e6, allow_nan=False, allow_infinity=False).map(Const)
leaves = st.one_of(constants, st.sampled_from([X, Y]))


def _extend(children):
    binary = st.sampled_from([Add, Sub, Mul, Div])
    return st.one_of(
        st.builds(lambda op, l, r: op(l, r), binary, children, children),
        st.builds(Neg, children),
        st.builds(Pow, children, st.integers(0, 4)),
    )


expressions = st.recursive(leaves, _extend, max_leaves=24).filter(lambda e: depth(e) <= 6)


# --- tokens ----------------------------------------------------------------------


def test_token_positions_increase():
    toks = tokenize("  2.5e3*x ^ 2 - (y)")
    assert [t.kind for t in toks] == ["number", "star", "ident", "caret", "number", "minus", "lparen", "ident", "rparen"]
    positions = [t.pos for t in toks]
    assert positions == sorted(set(positions))
    assert toks[0].pos == 2


# --- parse -----------------------------------------------------------------------


def test_parse_examples():
    assert parse("x^2 + y^2") == Add(Pow(X, 2), Pow(Y, 2))
    assert parse("2*x + 3*y + 1") == Add(Add(Mul(Const(2.0), X), Mul(Const(3.0), Y)), Const(1.0))


@pytest.mark.parametrize(
    "src, tree",
    [
        ("x - y - 1", Sub(Sub(X, Y), Const(1.0))),
        ("x / y / 2", Div(Div(X, Y), Const(2.0))),
        ("-x^2", Neg(Pow(X, 2))),
        ("(-x)^2", Pow(Neg(X), 2)),
        ("--x", Neg(Neg(X))),
        ("2^3^2", Pow(Const(2.0), 9)),
        ("(x^2)^3", Pow(Pow(X, 2), 3)),
        ("x*-y", Mul(X, Neg(Y))),
        ("1e-3 * x", Mul(Const(0.001), X)),
        (".5", Const(0.5)),
    ],
)
def test_precedence_and_associativity(src, tree):
    assert parse(src) == tree


@pytest.mark.parametrize(
    "src, pos",
    [
        ("x^-1", 2),
        ("x^1.5", 2),
        ("x^y", 2),
        ("x^", 2),
        ("(x + 1", 6),
        ("x + 1)", 5),
        ("sin(x)", 0),
        ("z", 0),
        ("x y", 2),
        ("2 $ x", 2),
        ("", 0),
        ("   ", 0),
        ("x +", 3),
        ("x^2000", 2),
        ("x^2^3^4", 1),
        ("1e999", 0),
    ],
)
def test_syntax_errors_carry_a_position(src, pos):
    with pytest.raises(ExprSyntaxError) as info:
        parse(src)
    assert info.value.pos == pos


def test_depth_limit():
    ok = "(" * (MAX_DEPTH - 1) + "x" + ")" * (MAX_DEPTH - 1)
    assert parse(ok) == X
    with pytest.raises(ExprSyntaxError):
        parse("(" * (MAX_DEPTH + 1) + "x" + ")" * (MAX_DEPTH + 1))
    with pytest.raises(ExprSyntaxError):
        parse("-" * (MAX_DEPTH + 1) + "x")
    with pytest.raises(ExprSyntaxError):
        parse(" + ".join(["x"] * (MAX_DEPTH + 2)))
    deep = parse("-" * (MAX_DEPTH - 1) + "x")
    assert depth(deep) == MAX_DEPTH


# --- printing ---------------------------------------------------------------------


@settings(max_examples=300)
@given(expressions)
def test_print_then_parse_round_trip(tree):
    assert parse(to_source(tree)) == tree


@given(expressions, st.floats(-3, 3), st.floats(-3, 3))
def test_reparsed_tree_evaluates_identically(tree, x, y):
    reparsed = parse(to_source(tree))
    try:
        expected = eval2(tree, x, y)
    except EvalError:
        with pytest.raises(EvalError):
            eval2(reparsed, x, y)
        return
    assert eval2(reparsed, x, y) == expected


def test_printer_uses_minimal_parentheses():
    assert to_source(Sub(X, Sub(Y, Const(1.0)))) == "x - (y - 1.0)"
    assert to_source(Sub(Sub(X, Y), Const(1.0))) == "x - y - 1.0"
    assert to_source(Mul(Add(X, Y), X)) == "(x + y) * x"
    assert to_source(Pow(Neg(X), 2)) == "(-x)^2"
    assert to_source(Neg(Pow(X, 2))) == "-x^2"


@pytest.mark.parametrize("value", [-1.0, -0.0, math.inf, math.nan])
def test_printer_rejects_constants_without_source_form(value):
    with pytest.raises(ValueError):
        to_source(Const(value))


# --- evaluation ------------------------------------------------------------------


def test_eval_examples():
    assert eval2(parse("x^2 + y^2"), 1.0, 2.0) == 5.0
    assert eval2(parse("2*x + 3*y + 1"), 0.0, 0.0) == 1.0
    with pytest.raises(EvalError):
        eval2(parse("x/y"), 1.0, 0.0)


def test_eval_rejects_overflow():
    with pytest.raises(EvalError):
        eval2(parse("x^1000"), 10.0, 0.0)
    with pytest.raises(EvalError):
        eval2(parse("x*x*x"), 1e200, 0.0)


def test_eval1_binds_y_to_zero():
    assert eval1(parse("x^2 + y + 1"), 3.0) == 10.0


def test_variables():
    assert variables(parse("x^2 + 1")) == {"x"}
    assert variables(parse("-(y)")) == {"y"}
    assert variables(parse("3")) == set()


# --- finite-difference derivatives ---------------------------------------------------


@pytest.mark.parametrize(
    "src, p, expected, tol",
    [
        ("x^2 + y^2", Vector2(0, 0), Vector2(0, 0), 1e-9),
        ("2*x + 3*y + 1", Vector2(0, 0), Vector2(2, 3), 1e-9),
        ("2*x + 3*y + 1", Vector2(-37.5, 12.25), Vector2(2, 3), 1e-9),
        ("x^2 + y^2", Vector2(1, 2), Vector2(2, 4), 1e-8),
    ],
)
def test_gradient_examples(src, p, expected, tol):
    assert (grad_fd(parse(src), p) - expected).norm() <= tol


def test_one_variable_derivative():
    assert deriv_fd(parse("x^2"), 1.0) == pytest.approx(2.0, abs=1e-9)
    assert deriv_fd(parse("x^3 - x"), -2.0) == pytest.approx(11.0, rel=1e-8)


coefficient = st.floats(-5, 5, allow_nan=False)
monomials = st.lists(
    st.tuples(coefficient, st.integers(0, 4), st.integers(0, 4)).filter(lambda m: m[1] + m[2] <= 4),
    min_size=1,
    max_size=6,
)


@given(monomials, st.floats(-2, 2), st.floats(-2, 2))
def test_gradient_of_random_polynomial(terms, px, py):
    src = " + ".join(f"{abs(c)!r}*x^{i}*y^{j}" if c >= 0 else f"-{abs(c)!r}*x^{i}*y^{j}" for c, i, j in terms)
    gx = sum(c * i * px ** (i - 1) * py**j for c, i, j in terms if i)
    gy = sum(c * j * px**i * py ** (j - 1) for c, i, j in terms if j)
    g = grad_fd(parse(src), Vector2(px, py))
    assert abs(g.x - gx) <= 1e-6 * max(1.0, abs(gx))
    assert abs(g.y - gy) <= 1e-6 * max(1.0, abs(gy))
