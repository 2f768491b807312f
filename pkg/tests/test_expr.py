import pytest

from superconf import EvaluationError, ExpressionError
from superconf.expr import (
    Bin,
    CurveExpr,
    Lit,
    Neg,
    Pow,
    Var,
    const_node,
    parse_curve,
    print_node,
)

ROUNDTRIP = [
    "(cos(z), sin(z), -i*z, 0)",
    "(z, 1/z)",
    "(z - z^3/3, i*(z + z^3/3), z^2, 0)",
    "(1/(4*z), i/(4*z), z/4, i*z/4)",
    "(sin(z), i*sin(z), cos(z), i*cos(z))",
    "(z, i*z, 0, 0)",
    "(exp(z), log(z + 3), sqrt(z + 2), sinh(z))",
    "(cosh(z), z^-2, 2.5*z, 0.125)",
    "(z^2^3, -z^2, (-z)^2, -(z + 1))",
    "(a1 , 0)".replace("a1", "1e-3*z"),
    "(z*(z + 1)*(z - 1), z/(z*z), 0, 0)",
    "(i, -i, 2*i, -2*i)",
    "(z - 1 - 2, z - (1 - 2), 0, 0)",
    "(z/2/3, z/(2/3), 0, 0)",
    "(5*i/(-24 - z^2), cos(2*z), 0.25*z, 1)",
    "(sqrt(z + 5), log(exp(z)), 0, 0)",
    "(z + i*z + 3, 1 + 2*i, 0, 0)",
    "(-z^-3, z^10, 0, 0)",
    "(sin(z)*cos(z), sin(z)/cos(z), 0, 0)",
    "(0.5, .25*z, 1.25e2, 0)",
]


@pytest.mark.parametrize("text", ROUNDTRIP)
def test_parse_print_parse_idempotent(text):
    ast = parse_curve(text)
    printed = print_node(ast)
    assert parse_curve(printed) == ast
    # printing is a fixed point after one pass
    assert print_node(parse_curve(printed)) == printed


MALFORMED = [
    ("(z, ", 1, 5),
    ("(z", 1, 3),
    ("z", 1, 1),
    ("(z, w)", 1, 5),
    ("(z, 1/)", 1, 7),
    ("(z, z, z)", 1, 1),
    ("(z^z, 0)", 1, 4),
    ("(z^1.5, 0)", 1, 4),
    ("(z + , 0)", 1, 6),
    ("(z, 0) extra", 1, 8),
]


@pytest.mark.parametrize("text,line,col", MALFORMED)
def test_malformed_positions(text, line, col):
    with pytest.raises(ExpressionError) as exc:
        parse_curve(text)
    assert exc.value.line == line
    assert exc.value.col == col


def test_unexpected_character():
    with pytest.raises(ExpressionError) as exc:
        parse_curve("(z; 0)")
    assert exc.value.col == 3


def test_expected_token_set_reported():
    with pytest.raises(ExpressionError) as exc:
        parse_curve("(z, ")
    assert "expression" in str(exc.value) or exc.value.expected


def test_two_tuple_zero_padded():
    curve = CurveExpr.parse("(z, 1/z)")
    vals = curve.eval_values(1 + 0j)
    assert vals == [1 + 0j, 1 + 0j, 0j, 0j]
    assert curve.to_text() == "(z, 1/z)"


def test_eval_simple_curve():
    curve = CurveExpr.parse("(cos(z), sin(z), -i*z, 0)")
    vals = curve.eval_values(0j)
    assert vals == [1 + 0j, 0j, 0j, 0j]
    jets = curve.eval_jets(0j)
    assert jets[0].coeffs == (1, 0, -1, 0)
    assert jets[2].coeffs == (0, -1j, 0, 0)


def test_precedence_and_unary():
    curve = CurveExpr.parse("(-z^2, 0)")
    # unary minus binds below ^: -(z^2)
    assert curve.eval_values(2 + 0j)[0] == -4 + 0j
    curve = CurveExpr.parse("(z^2^3, 0)")
    # left associative: (z^2)^3 = z^6
    assert curve.eval_values(2 + 0j)[0] == 64 + 0j


def test_pole_error_names_subexpression():
    curve = CurveExpr.parse("(1/z, 0)")
    with pytest.raises(EvaluationError) as exc:
        curve.eval_jets(0j)
    assert exc.value.reason == "pole"
    assert "1/z" in str(exc.value)


def test_branch_cut_error():
    curve = CurveExpr.parse("(log(z), 0)")
    with pytest.raises(EvaluationError) as exc:
        curve.eval_jets(-2 + 0j)
    assert exc.value.reason == "branch cut"
    assert "log(z)" in str(exc.value)


def test_negative_power_pole():
    curve = CurveExpr.parse("(z^-2, 0)")
    with pytest.raises(EvaluationError) as exc:
        curve.eval_jets(0j)
    assert exc.value.reason == "pole"


def test_const_node_shapes():
    assert const_node(3.0) == Lit(3.0)
    assert const_node(-3.0) == Neg(Lit(3.0))
    assert const_node(1j) == Lit(0.0, 1.0)
    assert const_node(-2j) == Neg(Bin("*", Lit(2.0), Lit(0.0, 1.0)))
    node = const_node(1 - 2j)
    assert node == Bin("-", Lit(1.0), Bin("*", Lit(2.0), Lit(0.0, 1.0)))
    # canonical shapes survive the printer and reparse identically
    for c in (3.0, -3.0, 1j, -2j, 1 - 2j, -1.5 + 1j):
        printed = print_node(
            parse_curve("(z, 0)").__class__((const_node(c), Lit(0.0), Lit(0.0), Lit(0.0)))
        )
        assert parse_curve(printed).components[0] == const_node(c)


def test_programmatic_curve_round_trip():
    from superconf.expr import Curve

    comps = (Bin("*", Var(), const_node(2j)), Lit(0.0), Lit(0.0), Lit(0.0))
    curve = CurveExpr(Curve(comps))
    text = curve.to_text()
    assert CurveExpr.parse(text).ast.components == comps
