import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alambda import algebra as alg
from alambda import gen
from alambda.algebra import embed
from alambda.reduction import (
    FULL,
    AlgTrace,
    BetaTrace,
    InvalidStep,
    SplitPolicy,
    Unknown,
    alg_reaches,
    alg_reducts,
    alg_steps,
    beta_reaches,
    beta_reducts,
    contract_at,
    find_simple_step,
    is_normal,
    joinable,
    make_alg_step,
    parallel_pure,
    parallel_reduce,
    reduction_graph,
    simple_reducts,
    validate_alg_step,
)
from alambda.semiring import PositivityRequired, SemiringId, coeff, one
from alambda.syntax import Lam, Var, parse
from strategies import POSITIVE, pure_terms, raw_terms

NAT, RAT, BOOL, INT = SemiringId.NAT, SemiringId.NONNEG_RAT, SemiringId.BOOL, SemiringId.INT
UNIT, HALF = SplitPolicy("unit"), SplitPolicy("half")
OMEGA = "(λx.(x)x)λx.(x)x"


def canon(text, s=NAT):
    return alg.canonicalize(parse(text, s), s)


def simple(text, s=NAT):
    (u, _), = canon(text, s).items
    return u


# Independent oracle: named terms as tuples, capture-avoiding substitution
# with explicit renaming.  ('v', x) | ('l', x, body) | ('a', f, arg)


def to_named(t, env=()):
    if isinstance(t, Var):
        return ("v", env[t.name] if isinstance(t.name, int) else t.name)
    if isinstance(t, Lam):
        x = f"b{len(env)}"
        return ("l", x, to_named(t.body, (x,) + env))
    return ("a", to_named(t.fun, env), to_named(t.arg, env))


def fv(n):
    if n[0] == "v":
        return {n[1]}
    if n[0] == "l":
        return fv(n[2]) - {n[1]}
    return fv(n[1]) | fv(n[2])


_fresh = itertools.count()


def nsubst(n, x, p):
    if n[0] == "v":
        return p if n[1] == x else n
    if n[0] == "a":
        return ("a", nsubst(n[1], x, p), nsubst(n[2], x, p))
    y, body = n[1], n[2]
    if y == x:
        return n
    if y in fv(p):
        z = f"r{next(_fresh)}"
        body, y = nsubst(body, y, ("v", z)), z
    return ("l", y, nsubst(body, x, p))


def nreducts(n):
    out = []
    if n[0] == "l":
        out += [("l", n[1], r) for r in nreducts(n[2])]
    elif n[0] == "a":
        if n[1][0] == "l":
            out.append(nsubst(n[1][2], n[1][1], n[2]))
        out += [("a", r, n[2]) for r in nreducts(n[1])]
        out += [("a", n[1], r) for r in nreducts(n[2])]
    return out


def nalpha(a, b, ea=(), eb=()):
    if a[0] != b[0]:
        return False
    if a[0] == "v":
        ia = ea.index(a[1]) if a[1] in ea else None
        ib = eb.index(b[1]) if b[1] in eb else None
        return ia == ib and (ia is not None or a[1] == b[1])
    if a[0] == "l":
        return nalpha(a[2], b[2], (a[1],) + ea, (b[1],) + eb)
    return nalpha(a[1], b[1], ea, eb) and nalpha(a[2], b[2], ea, eb)


# -- examples -------------------------------------------------------------------


def test_beta_reducts_examples():
    assert [t for _, t in beta_reducts(parse("(λx.x)y"))] == [parse("y")]
    assert beta_reducts(parse("λx.x")) == []
    got = beta_reducts(parse("(λx.(x)x)((λy.y)z)"))
    assert got == [((), parse("((λy.y)z)((λy.y)z)")), ((1,), parse("(λx.(x)x)z"))]


def test_contract_at_rejects_non_redex():
    with pytest.raises(InvalidStep):
        contract_at(parse("(x)y"), ())
    with pytest.raises(InvalidStep):
        contract_at(parse("(λx.x)y"), (1,))


def test_beta_reaches_examples():
    tr = beta_reaches(parse("(λx.x)y"), parse("y"), 10)
    assert len(tr) == 1 and tr.replay() is None
    assert len(beta_reaches(parse("y"), parse("y"), 0)) == 0
    tr = beta_reaches(parse("(λx.(x)x)y"), parse("(y)y"), 10)
    assert len(tr) == 1 and tr.end == parse("(y)y")


def test_beta_reaches_distinguishes_no_from_unknown():
    assert beta_reaches(parse("(λx.(x)x)y"), parse("(y)z"), 10) is None
    assert beta_reaches(parse(OMEGA), parse("y"), 10) is None  # Ω only reaches itself
    big = "(λx.((x)x)x)λx.((x)x)x"
    res = beta_reaches(parse(big), parse("y"), 20)
    assert isinstance(res, Unknown) and not res


def test_reduction_graph():
    g = reduction_graph(parse("(λx.(x)x)((λy.y)z)"), 50)
    assert len(g) == 6
    assert isinstance(reduction_graph(parse("(λx.((x)x)x)λx.((x)x)x"), 5), Unknown)


def test_beta_trace_replay_detects_bad_steps():
    m = parse("(λx.(x)x)((λy.y)z)")
    good = BetaTrace(m, (((1,), parse("(λx.(x)x)z")), ((), parse("(z)z"))))
    assert good.replay() is None
    bad = BetaTrace(m, (((), parse("(z)z")),))
    assert bad.replay() is not None
    wrong_pos = BetaTrace(m, (((0,), parse("(λx.(x)x)z")),))
    assert wrong_pos.replay() is not None


def test_simple_reducts_examples():
    assert simple_reducts(simple("(λx.(x)x)(y+z)"), NAT) == [canon("(y+z)(y+z)")]
    assert simple_reducts(simple("x"), NAT) == []
    assert simple_reducts(simple("λx.(λy.y)x"), NAT) == [embed(parse("λx.x"))]


def test_alg_reducts_examples():
    m = canon("(λx.x)y", RAT)
    results = [r for _, r in alg_reducts(m, HALF)]
    assert canon("1/2.y + 1/2.(λx.x)y", RAT) in results
    assert alg_reducts(canon("0")) == []
    two = canon("2.(λx.x)y")
    results = [r for _, r in alg_reducts(two, UNIT)]
    assert results == [canon("2.y"), canon("y + (λx.x)y")]


def test_unit_split_is_capped():
    s = canon("20.(λx.x)y")
    assert len(alg_steps(s, SplitPolicy("unit", cap=3))) == 4
    assert len(alg_steps(s, UNIT)) == 9


def test_policies_checked_against_semiring():
    with pytest.raises(ValueError):
        alg_steps(canon("(λx.x)y"), HALF)
    with pytest.raises(ValueError):
        alg_steps(canon("(λx.x)y", RAT), UNIT)
    with pytest.raises(ValueError):
        SplitPolicy("thirds")


def test_bool_steps_use_full_split_only():
    s = canon("T.(λx.x)y", BOOL)
    assert [r for _, r in alg_reducts(s)] == [canon("y", BOOL)]


def test_int_is_refused():
    s = canon("(λx.x)y", INT)
    for f in (alg_steps, is_normal):
        with pytest.raises(PositivityRequired):
            f(s)
    with pytest.raises(PositivityRequired):
        joinable(s, s, 10)


def test_parallel_examples():
    assert parallel_reduce(embed(parse("(λx.x)y"))) == embed(parse("y"))
    om = embed(parse(OMEGA))
    assert parallel_reduce(om) == om
    m = parse("((λx.x)λy.(λz.z)y)w")
    # redexes inside the function and the body contract, the created one does not
    assert parallel_pure(m) == parse("(λy.y)w")


def test_is_normal_examples():
    assert is_normal(embed(parse("λx.x")))
    assert not is_normal(embed(parse("(λx.x)y")))
    assert is_normal(canon("y + z"))
    assert not is_normal(canon("(x)((λx.x)y)"))


def test_joinable_examples():
    j = joinable(canon("(λx.x)y"), canon("y"), 10)
    assert j.meet == canon("y")
    s = canon("(λx.(x)x)((λy.y)z)")
    j = joinable(s, s, 0)
    assert j.meet == s and len(j.left) == len(j.right) == 0
    a, b = [r for _, r in alg_reducts(s)]
    j = joinable(a, b, 100)
    assert j.meet == canon("(z)z")
    assert j.left.validate() is None and j.right.validate() is None
    assert j.left.end == j.right.end == j.meet


def test_joinable_definite_failure():
    assert joinable(canon("y"), canon("z"), 10) is None


def test_alg_reaches():
    s = canon("2.(λx.x)y")
    tr = alg_reaches(s, canon("y + (λx.x)y"), 10, UNIT)
    assert tr and tr.validate() is None and len(tr) == 1
    assert alg_reaches(s, canon("y + (λx.x)y"), 10, FULL) is None


def test_tampered_steps_fail_validation():
    s = canon("3.(λx.x)y")
    (st,) = [x for x in alg_steps(s, UNIT) if x.split == coeff(NAT, 1)]
    assert validate_alg_step(st) is None
    from dataclasses import replace

    assert validate_alg_step(replace(st, rest=coeff(NAT, 1))) is not None
    assert validate_alg_step(replace(st, split=coeff(NAT, 0), rest=coeff(NAT, 3))) is not None
    assert validate_alg_step(replace(st, result=canon("3.y"))) is not None
    tr = AlgTrace(s, (st, st))
    assert tr.validate() is not None


def test_general_reading_of_residual():
    # ρ keeps part of τ's weight: 3.τ = 1.τ + (2.τ)
    s = canon("3.(λx.x)y")
    inner = find_simple_step(simple("(λx.x)y"), canon("y"))
    st = make_alg_step(s, inner, coeff(NAT, 1), coeff(NAT, 2))
    assert st.result == canon("y + 2.(λx.x)y")
    assert validate_alg_step(st) is None


# -- properties -------------------------------------------------------------------


@settings(max_examples=300)
@given(pure_terms())
def test_beta_reducts_match_named_oracle(m):
    ours = [to_named(t) for _, t in beta_reducts(m)]
    theirs = nreducts(to_named(m))
    assert len(ours) == len(theirs)
    for a, b in zip(ours, theirs):
        assert nalpha(a, b)


@given(pure_terms())
def test_beta_reducts_positions_are_consistent(m):
    for pos, t in beta_reducts(m):
        assert contract_at(m, pos) == t


@given(pure_terms())
def test_embedding_commutes_with_one_step(m):
    got = sorted((r for _, r in alg_reducts(embed(m))), key=lambda s: s.items)
    want = sorted({embed(t) for _, t in beta_reducts(m)}, key=lambda s: s.items)
    assert sorted(set(got), key=lambda s: s.items) == want


def _policies(s):
    return {NAT: [FULL, UNIT], RAT: [FULL, HALF], BOOL: [FULL]}[s]


@given(st.sampled_from(POSITIVE).flatmap(lambda s: st.tuples(st.just(s), raw_terms(s))), st.randoms())
def test_random_walks_validate(pair, rnd):
    s, t = pair
    for pol in _policies(s):
        tr = gen.random_walk(alg.canonicalize(t, s), random.Random(rnd.random()), 4, pol)
        assert tr.validate() is None


@given(st.sampled_from(POSITIVE).flatmap(lambda s: st.tuples(st.just(s), raw_terms(s))))
def test_is_normal_iff_no_reducts(pair):
    s, t = pair
    c = alg.canonicalize(t, s)
    for pol in _policies(s):
        assert is_normal(c) == (alg_steps(c, pol) == [])


@given(pure_terms())
def test_parallel_reduce_commutes_with_embed(m):
    assert parallel_reduce(embed(m)) == embed(parallel_pure(m))


@given(raw_terms(NAT))
def test_parallel_reduce_is_linear(t):
    c = alg.canonicalize(t, NAT)
    two = alg.scale(coeff(NAT, 2), c)
    assert parallel_reduce(alg.add(c, two)) == alg.scale(coeff(NAT, 3), parallel_reduce(c))


@given(raw_terms(NAT))
def test_steps_never_select_outside_support(t):
    c = alg.canonicalize(t, NAT)
    for st_ in alg_steps(c, UNIT):
        assert st_.selected in c.support()
        assert not st_.split.is_zero()
        assert st_.split + st_.rest == c.coefficient(st_.selected)


def test_half_split_values():
    s = canon("3/2.(λx.x)y", RAT)
    splits = sorted(st_.split.value for st_ in alg_steps(s, HALF))
    assert splits == [Fraction(3, 4), Fraction(3, 2)]
    assert one(RAT).value == 1
