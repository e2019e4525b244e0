import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from canonsys.expr import (FUNCTIONS, BinOp, Call, EvaluationError, ExprSyntaxError, Neg, Num,
                           UnknownIdentifierError, Var, parse_density, to_source)


def test_examples():
    e = parse_density("1 + cos(x)")
    assert e.ast == BinOp("+", Num(1.0), Call("cos", Var()))
    assert e(0.0) == 2.0
    assert parse_density("1 + sin(x)/x")(math.pi) == pytest.approx(1.0, abs=1e-15)
    assert parse_density("1 + abs(x)^0.5")(4.0) == 3.0


def test_precedence_and_associativity():
    assert parse_density("2^3^2")(0.0) == 512.0
    assert parse_density("1 - 2 - 3")(0.0) == -4.0
    assert parse_density("8 / 4 / 2")(0.0) == 1.0
    assert parse_density("2 * 3 + 4 * 5")(0.0) == 26.0
    # unary minus binds tighter than '^' in this grammar
    assert parse_density("-x^2")(3.0) == 9.0
    assert parse_density("-(x^2)")(3.0) == -9.0


def test_vectorised():
    x = np.linspace(-3, 3, 7)
    np.testing.assert_allclose(parse_density("exp(-x*x)")(x), np.exp(-x * x))
    assert parse_density("2")(x).shape == x.shape


@pytest.mark.parametrize("source, offset", [("1 +", 3), ("1 + * 2", 4), ("(1", 2), ("1 $ 2", 2), ("1 2", 2)])
def test_syntax_errors(source, offset):
    with pytest.raises(ExprSyntaxError) as err:
        parse_density(source)
    assert err.value.offset == offset


def test_byte_offsets():
    with pytest.raises(ExprSyntaxError) as err:
        parse_density("1 + é")
    assert err.value.offset == 4


@pytest.mark.parametrize("source", ["y + 1", "Sin(x)", "tan(x)", "pi"])
def test_unknown_identifiers(source):
    with pytest.raises(UnknownIdentifierError):
        parse_density(source)


def test_empty():
    with pytest.raises(ExprSyntaxError):
        parse_density("   ")


@pytest.mark.parametrize("source, x", [("1/x", 0.0), ("sqrt(x)", -1.0), ("exp(x)", 1000.0)])
def test_evaluation_errors(source, x):
    with pytest.raises(EvaluationError):
        parse_density(source)(x)


def nodes():
    leaves = st.one_of(
        st.builds(Var),
        st.floats(min_value=0, max_value=1e6, allow_nan=False).map(Num),
    )
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            st.builds(Neg, kids),
            st.builds(BinOp, st.sampled_from("+-*/^"), kids, kids),
            st.builds(Call, st.sampled_from(FUNCTIONS), kids),
        ),
        max_leaves=20,
    )


@given(nodes())
def test_print_parse_round_trip(node):
    assert parse_density(to_source(node)).ast == node
