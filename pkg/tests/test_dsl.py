import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bislant import dsl
from bislant.dsl import Binary, Const, Num, Pow, Unary, Var
from bislant.errors import ArityError, DomainError, ParseError, UnknownIdentifier


def test_precedence_and_associativity():
    t = dsl.parse_expression("u1 - u2 - u3")
    assert t == Binary("-", Binary("-", Var(0), Var(1)), Var(2))
    t = dsl.parse_expression("1 + 2*u1^2")
    assert t == Binary("+", Num(1.0), Binary("*", Num(2.0), Pow(Var(0), 2)))
    assert dsl.evaluate(dsl.parse_expression("8/4/2")) == 1.0


def test_unary_minus():
    assert dsl.parse_expression("-u1") == Unary("neg", Var(0))
    assert dsl.evaluate(dsl.parse_expression("-u1^2"), (3.0,)) == -9.0
    assert dsl.evaluate(dsl.parse_expression("2*-u1"), (3.0,)) == -6.0


def test_constants_bound_at_evaluation():
    t = dsl.parse_expression("sigma + sigma_bar")
    assert t == Binary("+", Const("sigma"), Const("sigma_bar"))
    assert dsl.evaluate(t, (), {"sigma": 2.0, "sigma_bar": -1.0}) == 1.0
    assert dsl.evaluate(dsl.parse_expression("pi")) == math.pi
    with pytest.raises(UnknownIdentifier):
        dsl.evaluate(t)


def test_example_component():
    t = dsl.parse_expression("cos(u1)*sin(u2)")
    assert dsl.evaluate(t, (0.0, math.pi / 2)) == pytest.approx(1.0)
    assert dsl.variables(t) == {0, 1}


@pytest.mark.parametrize(
    "text,column,cls",
    [
        ("sin(u1", 7, ParseError),
        ("u1 +", 5, ParseError),
        ("u1 $ u2", 4, ParseError),
        ("foo(u1)", 1, UnknownIdentifier),
        ("x + 1", 1, UnknownIdentifier),
        ("u0", 1, UnknownIdentifier),
        ("sin(u1, u2)", 7, ArityError),
        ("cos()", 5, ArityError),
        ("u1^u2", 4, ParseError),
        ("u1 u2", 4, ParseError),
    ],
)
def test_errors_carry_position(text, column, cls):
    with pytest.raises(cls) as info:
        dsl.parse_expression(text, line=3)
    err = info.value
    assert err.line == 3
    assert err.column == column
    assert str(err).startswith(f"line 3, column {column}:")


def test_evaluation_domain_errors():
    with pytest.raises(DomainError):
        dsl.evaluate(dsl.parse_expression("1/(u1 - 1)"), (1.0,))
    with pytest.raises(DomainError):
        dsl.evaluate(dsl.parse_expression("ln(u1)"), (0.0,))


# round trip ---------------------------------------------------------------

_leaf = st.one_of(
    st.builds(Var, st.integers(0, 3)),
    st.builds(Const, st.sampled_from(dsl.CONSTANTS)),
    st.builds(Num, st.floats(0, 1e6, allow_nan=False, allow_infinity=False)),
)
_tree = st.recursive(
    _leaf,
    lambda sub: st.one_of(
        st.builds(Unary, st.sampled_from(dsl.FUNCTIONS + ("neg",)), sub),
        st.builds(Binary, st.sampled_from("+-*/"), sub, sub),
        st.builds(Pow, sub, st.integers(0, 9)),
    ),
    max_leaves=12,
)


@settings(max_examples=300, deadline=None)
@given(_tree)
def test_print_parse_round_trip(tree):
    src = dsl.to_source(tree)
    assert dsl.parse_expression(src) == tree


@settings(max_examples=100, deadline=None)
@given(_tree)
def test_round_trip_is_idempotent(tree):
    once = dsl.to_source(tree)
    assert dsl.to_source(dsl.parse_expression(once)) == once
