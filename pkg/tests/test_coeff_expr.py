import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdse.coeff_expr import BinOp, Call, Num, Var, evaluate, parse, pretty
from tdse.errors import DomainError, ParseError, UnknownIdentifierError


def test_zero_constant():
    e = parse("0")
    assert e.ast == Num(0.0)
    assert e.is_constant
    assert e(3.0) == 0.0


def test_product_structure():
    e = parse("0.5*cos(2*t)")
    assert e.ast == BinOp("*", Num(0.5), Call("cos", BinOp("*", Num(2.0), Var())))


def test_unbalanced_paren_offset():
    with pytest.raises(ParseError) as info:
        parse("1/(1+t^2")
    assert info.value.offset == 9


def test_empty_source():
    with pytest.raises(ParseError):
        parse("   ")


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError):
        parse("sinh(t)")
    with pytest.raises(UnknownIdentifierError):
        parse("x + 1")


@pytest.mark.parametrize("src,t,expected", [
    ("t^2", 3, 9.0),
    ("cos(0*t)", 7, 1.0),
    ("-t^2", 2, -4.0),
    ("2^3^2", 0, 512.0),
    ("2*pi", 0, 2 * math.pi),
    ("abs(-3) + sqrt(16) - ln(exp(1))", 0, 6.0),
    ("tanh(0) + 1e-3", 0, 1e-3),
    ("8/2/2", 0, 2.0),
    ("1-2-3", 0, -4.0),
])
def test_eval_values(src, t, expected):
    assert evaluate(parse(src), t) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("src,t", [("1/t", 0.0), ("ln(t)", 0.0), ("ln(t)", -1.0),
                                   ("sqrt(t)", -1.0), ("t^(-1)", 0.0),
                                   ("exp(t)", 1000.0), ("(0-1)^0.5", 0.0)])
def test_domain_errors(src, t):
    with pytest.raises(DomainError):
        evaluate(parse(src), t)


def test_domain_error_in_array():
    with pytest.raises(DomainError):
        parse("1/t")(np.array([1.0, 0.0, 2.0]))


def test_vectorised_and_constant_broadcast():
    t = np.linspace(0, 1, 5)
    assert np.allclose(parse("t*2")(t), 2 * t)
    assert parse("3")(t).shape == t.shape


# --- property tests -------------------------------------------------------

_leaf = st.one_of(st.floats(0.1, 5.0).map(lambda v: repr(round(v, 6))), st.just("t"))


def _combine(children):
    bin_ = st.tuples(children, st.sampled_from("+-*"), children).map(
        lambda a: f"({a[0]}{a[1]}{a[2]})")
    fn = st.tuples(st.sampled_from(["sin", "cos", "tanh", "abs"]), children).map(
        lambda a: f"{a[0]}({a[1]})")
    neg = children.map(lambda s: f"-{s}")
    return st.one_of(bin_, fn, neg)


sources = st.recursive(_leaf, _combine, max_leaves=12)


@settings(max_examples=150, deadline=None)
@given(sources)
def test_pretty_round_trip(src):
    e = parse(src)
    again = parse(pretty(e))
    assert again.ast == e.ast
    ts = np.random.default_rng(0).uniform(-3, 3, 100)
    a, b = e(ts), again(ts)
    assert np.all(np.abs(a - b) <= 1e-12 * np.maximum(1.0, np.abs(a)))


nums = st.floats(-100, 100, allow_nan=False).map(lambda v: round(v, 4))


@given(nums, nums, nums)
def test_precedence(a, b, c):
    def lit(v):
        return f"({v!r})"
    lhs = evaluate(parse(f"{lit(a)}+{lit(b)}*{lit(c)}"), 0.0)
    rhs = evaluate(parse(f"{lit(a)}+({lit(b)}*{lit(c)})"), 0.0)
    assert lhs == rhs


@given(nums, nums)
def test_power_binds_tighter_than_unary_minus(a, b):
    b = abs(b) % 3
    if a == 0:
        return
    v = evaluate(parse(f"-{abs(a)!r}^{b!r}"), 0.0)
    assert v == pytest.approx(-(abs(a) ** b))
