from fractions import Fraction

import pytest
from hypothesis import given, settings

from alambda.semiring import SemiringId, coeff
from alambda.syntax import (
    App,
    Lam,
    ParseError,
    Scale,
    Sum,
    Var,
    Zero,
    abstract,
    alpha_eq,
    free_names,
    instantiate,
    is_pure,
    parse,
    positions,
    replace_at,
    shift,
    show,
    size,
    subst,
    subterm,
)
from strategies import pure_terms, raw_terms

NAT = SemiringId.NAT


def test_parse_examples():
    assert parse("(λx.(x)x)(y+z)") == App(Lam(App(Var(0), Var(0))), Sum(Var("y"), Var("z")))
    assert parse("x") == Var("x")
    assert parse("2.x + 3.x") == Sum(Scale(coeff(NAT, 2), Var("x")), Scale(coeff(NAT, 3), Var("x")))


def test_backslash_and_lambda_agree():
    assert parse("\\x.\\y.(x)y") == parse("λx.λy.(x)y")


def test_juxtaposition_is_left_associative():
    assert parse("f a b") == App(App(Var("f"), Var("a")), Var("b"))
    assert parse("f a b") == parse("((f)a)b")
    assert parse("f (a b)") == parse("(f)(a)b")


def test_lambda_body_extends_right():
    assert parse("λx.x y") == Lam(App(Var(0), Var("y")))
    assert parse("λx.x + y") == Lam(Sum(Var(0), Var("y")))
    assert parse("(λx.x) + y") == Sum(Lam(Var(0)), Var("y"))


def test_scaling_precedence():
    two = coeff(NAT, 2)
    assert parse("2.(x)y") == Scale(two, App(Var("x"), Var("y")))
    assert parse("(2.x)y") == App(Scale(two, Var("x")), Var("y"))
    assert parse("2.x + y") == Sum(Scale(two, Var("x")), Var("y"))
    assert parse("2.3.x") == Scale(two, Scale(coeff(NAT, 3), Var("x")))


def test_zero_and_coefficients_per_semiring():
    assert parse("0") == Zero()
    assert parse("0.x") == Scale(coeff(NAT, 0), Var("x"))
    rat = SemiringId.NONNEG_RAT
    assert parse("1/2.x", rat) == Scale(coeff(rat, Fraction(1, 2)), Var("x"))
    assert parse("-1.x", SemiringId.INT) == Scale(coeff(SemiringId.INT, -1), Var("x"))
    assert parse("−1.x", SemiringId.INT) == parse("-1.x", SemiringId.INT)  # typeset minus
    assert parse("T.x + F.y", SemiringId.BOOL) == Sum(
        Scale(coeff(SemiringId.BOOL, 1), Var("x")), Scale(coeff(SemiringId.BOOL, 0), Var("y"))
    )


@pytest.mark.parametrize("text,sr", [("-1.x", NAT), ("1/2.x", NAT), ("T.x", NAT), ("2.x", SemiringId.BOOL)])
def test_coefficient_outside_semiring(text, sr):
    with pytest.raises(ValueError):
        parse(text, sr)


@pytest.mark.parametrize("text", ["", "(x", "λ.x", "x +", "λx x", ")", "x ) y", "2.", "λx.", "@"])
def test_syntax_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_error_location():
    with pytest.raises(ParseError) as e:
        parse("(x\n  +)")
    assert (e.value.line, e.value.col) == (2, 4)


def test_alpha_eq_examples():
    assert alpha_eq(parse("λx.x"), parse("λy.y"))
    assert alpha_eq(parse("λx.λy.(x)y"), parse("λy.λx.(y)x"))
    assert not alpha_eq(parse("λx.λy.x"), parse("λx.λy.y"))
    assert not alpha_eq(parse("λx.y"), parse("λx.z"))


def test_is_pure_examples():
    assert is_pure(parse("λx.(x)x"))
    assert not is_pure(parse("y + z"))
    assert not is_pure(parse("1.x"))
    assert not is_pure(parse("λx.0"))


def test_printer_uses_krivine_form_and_avoids_capture():
    assert show(parse("f a b")) == "((f)a)b"
    assert show(parse("f (a b)")) == "(f)(a)b"
    # the bound name must not capture the free y
    t = Lam(App(Var(0), Var("x")), "x")
    out = show(t)
    assert alpha_eq(parse(out), t) and out != "λx.(x)x"


def test_size_and_free_names():
    t = parse("(λx.(x)y)z")
    assert size(t) == 6
    assert free_names(t) == {"y", "z"}


def test_positions_and_replace():
    t = parse("(λx.(x)y)z")
    pos = [p for p, _ in positions(t)]
    assert pos == [(), (0,), (0, 0), (0, 0, 0), (0, 0, 1), (1,)]
    depths = dict(positions(t))
    assert depths[(0, 0, 0)] == 1 and depths[(1,)] == 0
    assert subterm(t, (0, 0, 1)) == Var("y")
    assert replace_at(t, (1,), Var("w")) == parse("(λx.(x)y)w")


def test_shift_instantiate_abstract():
    body = parse("λy.(x)y")  # contains free x
    opened = abstract(body, "x")
    assert opened == Lam(App(Var(1), Var(0)))
    assert instantiate(opened, 0, Var("z")) == parse("λy.(z)y")
    assert shift(Lam(App(Var(1), Var(0))), 2) == Lam(App(Var(3), Var(0)))
    # substituting a term with a bound-looking name under a binder is capture free
    assert alpha_eq(subst(parse("λy.(x)y"), "x", parse("y")), parse("λw.(y)w"))


@settings(max_examples=1000)
@given(raw_terms(NAT, max_leaves=10))
def test_parse_print_round_trip(t):
    assert alpha_eq(parse(show(t)), t)


def test_parse_print_round_trip_other_semirings():
    @settings(max_examples=300)
    @given(raw_terms(SemiringId.NONNEG_RAT) | raw_terms(SemiringId.BOOL) | raw_terms(SemiringId.INT))
    def run(t):
        sr = next((n.coeff.semiring for n in _scales(t)), NAT)
        assert alpha_eq(parse(show(t), sr), t)

    run()


def _scales(t):
    if isinstance(t, Scale):
        yield t
        yield from _scales(t.body)
    elif isinstance(t, Lam):
        yield from _scales(t.body)
    elif isinstance(t, App):
        yield from _scales(t.fun)
        yield from _scales(t.arg)
    elif isinstance(t, Sum):
        yield from _scales(t.left)
        yield from _scales(t.right)


@given(pure_terms(), pure_terms(), pure_terms())
def test_alpha_eq_is_an_equivalence(a, b, c):
    assert alpha_eq(a, a)
    assert alpha_eq(a, b) == alpha_eq(b, a)
    if alpha_eq(a, b) and alpha_eq(b, c):
        assert alpha_eq(a, c)


@given(pure_terms())
def test_pure_terms_survive_the_round_trip(m):
    assert is_pure(m)
    assert parse(show(m)) == m


@given(pure_terms(), pure_terms())
def test_named_substitution_matches_instantiate(m, p):
    assert subst(m, "x", p) == instantiate(abstract(m, "x"), 0, p)
    if "x" not in free_names(m):
        assert subst(m, "x", p) == m
