import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alambda import algebra as alg
from alambda import gen, mashup
from alambda.algebra import SLam, SVar, embed
from alambda.mashup import (
    AppNode,
    DerivationError,
    LamNode,
    PlusNode,
    VNode,
    ZeroNode,
    admissible_app,
    admissible_lam,
    admissible_plus,
    admissible_s,
    check,
    extract,
    precompose,
    prove,
    refl,
    refl_simple,
    step_derivation,
    subst_derivation,
    support_join,
    support_split,
)
from alambda.reduction import BetaTrace, SplitPolicy, Unknown, alg_steps, beta_reducts
from alambda.semiring import PositivityRequired, SemiringId, coeff, one
from alambda.syntax import parse
from strategies import pure_terms

NAT, RAT, BOOL, INT = SemiringId.NAT, SemiringId.NONNEG_RAT, SemiringId.BOOL, SemiringId.INT


def canon(text, s=NAT):
    return alg.canonicalize(parse(text, s), s)


def concludes(d, subject, rhs):
    v = check(d)
    assert v, str(v)
    assert v.judgement.subject == subject
    got = v.judgement.as_algebraic(rhs.semiring) if isinstance(rhs, alg.AlgebraicTerm) else v.judgement.rhs
    assert got == rhs, f"{got} != {rhs}"


def one_step(m):
    (pos, n), *_ = beta_reducts(m)
    return BetaTrace(m, ((pos, n),))


# -- check ---------------------------------------------------------------------------


def test_check_examples():
    m = parse("(λx.(x)x)y")
    v = check(ZeroNode(m, NAT))
    assert v and v.judgement.rhs == canon("0") and not v.judgement.simple
    d = VNode(one_step(parse("(λx.x)y")), "y", NAT)
    v = check(d)
    assert v and v.judgement.simple and v.judgement.rhs == SVar("y")
    bad = VNode(BetaTrace(parse("z")), "x", NAT)
    v = check(bad)
    assert not v and "claimed variable" in v.reason


def test_check_reports_paths_and_never_raises():
    m = parse("(λx.x)y")
    broken_arg = PlusNode(one(NAT), VNode(BetaTrace(m), "y", NAT), ZeroNode(m, NAT))
    d = AppNode(BetaTrace(parse("(f)((λx.x)y)")), refl_simple(parse("f")), broken_arg)
    v = check(d)
    assert not v and v.path == ("arg", "left")
    forged = BetaTrace(m, (((), parse("z")),))
    assert not check(VNode(forged, "z", NAT))
    assert not check(LamNode(BetaTrace(parse("x")), refl_simple(parse("x"))))
    assert not check(PlusNode(one(NAT), refl(parse("x")), ZeroNode(parse("x"), NAT)))
    assert not check(PlusNode(one(NAT), refl_simple(parse("x")), ZeroNode(parse("y"), NAT)))
    assert not check(PlusNode(one(RAT), refl_simple(parse("x")), ZeroNode(parse("x"), NAT)))
    assert not check(AppNode(BetaTrace(parse("(x)y")), refl_simple(parse("x")), refl_simple(parse("y"))))
    assert not check("not a derivation")


# -- prove -------------------------------------------------------------------------


def test_prove_examples():
    m = parse("(λx.(x)x)y")
    d = prove(m, canon("0"), 0)
    assert isinstance(d, ZeroNode)
    d = prove(m, embed(parse("(y)y")), 100)
    concludes(d, m, embed(parse("(y)y")))
    assert isinstance(d.left, AppNode) and len(d.left.trace) == 1
    m = parse("(λx.x)((λy.y)z)")
    goal = canon("(λy.y)z + z")
    d = prove(m, goal, 100)
    concludes(d, m, goal)
    lengths = sorted(len(extract(p, alg.as_pure(alg.single(u, NAT)))) for u, p in support_split(d).items())
    assert lengths == [1, 2]


def test_prove_negative_and_unknown():
    assert prove(parse("(λx.(x)x)y"), canon("(y)z"), 100) is None
    wide = parse("(λx.((x)x)x)λx.((x)x)x")
    res = prove(wide, canon("y"), 30)
    assert isinstance(res, Unknown)


def test_prove_simple_goal():
    m = parse("λx.(λy.y)x")
    d = prove(m, SLam(SVar(0)), 10, NAT)
    concludes(d, m, SLam(SVar(0)))
    with pytest.raises(ValueError):
        prove(m, SLam(SVar(0)), 10)


def test_prove_is_monotone_in_fuel():
    m = parse("(λx.(x)x)((λy.y)z)")
    goal = canon("(z)z + 2.((λy.y)z)z")
    found_at = None
    for fuel in range(0, 40):
        res = prove(m, goal, fuel)
        if found_at is None and res:
            found_at = fuel
        if found_at is not None:
            assert res and check(res).judgement.rhs == goal
    assert found_at is not None


def test_check_of_prove_on_random_goals():
    rng = random.Random(11)
    done = 0
    while done < 500:
        m = gen.pure_term(rng, 8)
        pieces = []
        for _ in range(rng.randint(0, 3)):
            pieces.append((gen.beta_walk(rng, m, 3).end, gen.coefficient(rng, NAT)))
        goal = alg.combination(NAT, [(alg.simple_of(n), c) for n, c in pieces])
        d = prove(m, goal, 2000)
        if isinstance(d, Unknown):
            continue
        assert d is not None
        concludes(d, m, goal)
        # support decomposition both ways: per-support search agrees
        for u in goal.support():
            assert prove(m, u, 2000, NAT)
        done += 1


def test_prove_fails_iff_some_support_element_fails():
    m = parse("(λx.(x)x)y")
    goal = canon("(y)y + (y)z")
    assert prove(m, goal, 100) is None
    assert prove(m, alg.support(goal)[0], 100, NAT) is not None or prove(m, alg.support(goal)[1], 100, NAT) is not None
    assert any(prove(m, u, 100, NAT) is None for u in goal.support())


# -- support decomposition -----------------------------------------------------------------------


def test_support_split_and_join_examples():
    m = parse("(λx.x)y")
    d = prove(m, canon("y + (λx.x)y"), 10)
    parts = support_split(d)
    assert set(parts) == set(canon("y + (λx.x)y").support())
    for u, p in parts.items():
        concludes(p, m, u)
    assert isinstance(support_join(m, canon("0"), {}), ZeroNode)
    with pytest.raises(DerivationError):
        support_join(m, canon("y + z"), parts)


def test_split_ignores_zero_weight_pieces():
    m = parse("x")
    d = PlusNode(coeff(NAT, 0), refl_simple(m), ZeroNode(m, NAT))
    concludes(d, m, canon("0"))
    assert support_split(d) == {}


# -- admissible rules ---------------------------------------------------------------------


def test_admissible_examples():
    m = parse("(λx.x)y")
    dy = VNode(one_step(m), "y", NAT)
    concludes(admissible_s(dy), m, canon("y"))
    tau = prove(m, canon("2.y + (λx.x)y"), 10)
    concludes(admissible_plus(one(NAT), ZeroNode(m, NAT), tau), m, canon("2.y + (λx.x)y"))
    concludes(admissible_plus(coeff(NAT, 3), tau, tau), m, canon("8.y + 4.(λx.x)y"))
    # (λ'): M →* λx.N with N ⊩ u + v
    n = parse("(λz.z)y")
    body = prove(n, canon("y + (λz.z)y"), 10)
    lam_m = parse("(λq.q)λx.(λz.z)y")
    tr = one_step(lam_m)
    concludes(admissible_lam(tr, body), lam_m, canon("(λx.y) + (λx.(λz.z)y)"))
    # (a'): M →* (N)P
    app_m = parse("(λq.q)((λz.z)y)w")
    tr = BetaTrace(app_m, ())
    fun = prove(parse("λq.q"), canon("λq.q"), 5)
    arg = prove(parse("((λz.z)y)w"), canon("((λz.z)y)w + (y)w"), 10)
    concludes(admissible_app(tr, fun, arg), app_m, canon("(λq.q)(((λz.z)y)w + (y)w)"))


def test_admissible_shape_errors():
    m = parse("x")
    with pytest.raises(DerivationError):
        admissible_lam(BetaTrace(m), refl(m))
    with pytest.raises(DerivationError):
        admissible_app(BetaTrace(m), refl(m), refl(m))
    with pytest.raises(DerivationError):
        admissible_plus(one(NAT), refl(m), refl(parse("y")))
    with pytest.raises(DerivationError):
        admissible_s(refl(m))


# -- reflexivity, extraction, precomposition ----------------------------------------------------------------


def test_refl_examples():
    d = refl(parse("x"))
    assert isinstance(d, PlusNode) and isinstance(d.left, VNode) and len(d.left.trace) == 0
    d = refl_simple(parse("λx.x"))
    assert isinstance(d, LamNode) and isinstance(d.body, VNode)
    m = parse("(λx.(x)x)y")
    d = refl_simple(m)
    assert isinstance(d, AppNode) and isinstance(d.fun, LamNode)
    concludes(refl(m), m, embed(m))


def test_extract_examples():
    m = parse("(λx.(x)x)y")
    assert len(extract(refl(m), m)) == 0
    d = admissible_s(VNode(one_step(parse("(λx.x)y")), "y", NAT))
    assert len(extract(d, parse("y"))) == 1
    m = parse("(λx.(x)x)((λy.y)z)")
    d = prove(m, embed(parse("(z)z")), 100)
    tr = extract(d, parse("(z)z"))
    assert tr.replay() is None and tr.start == m and tr.end == parse("(z)z") and len(tr) >= 2
    with pytest.raises(DerivationError):
        extract(d, parse("(z)y"))


def test_precompose_examples():
    m = parse("(λx.x)((λy.y)z)")
    d = refl(m)
    assert precompose(BetaTrace(m), d) is d
    tr = one_step(m)
    concludes(precompose(tr, refl(tr.end)), m, embed(tr.end))
    two = BetaTrace(m, tr.steps + (((), parse("z")),))
    assert two.replay() is None
    v = precompose(two, VNode(BetaTrace(parse("z")), "z", NAT))
    assert isinstance(v, VNode) and len(v.trace) == 2
    concludes(v, m, SVar("z"))
    with pytest.raises(DerivationError):
        precompose(tr, refl(m))


# -- substitution ---------------------------------------------------------------------------


def test_subst_examples():
    p = parse("(λq.q)y")
    dp = prove(p, canon("y + (λq.q)y"), 10)
    concludes(subst_derivation(refl(parse("x")), "x", dp), p, canon("y + (λq.q)y"))
    concludes(subst_derivation(refl(parse("y")), "x", dp), parse("y"), canon("y"))
    d = subst_derivation(refl(parse("(x)x")), "x", refl(parse("y")))
    concludes(d, parse("(y)y"), embed(parse("(y)y")))
    d = subst_derivation(refl(parse("(x)x")), "x", dp)
    concludes(d, parse("((λq.q)y)(λq.q)y"), canon("(y)(y + (λq.q)y) + ((λq.q)y)(y + (λq.q)y)"))


def test_subst_under_binders_avoids_capture():
    m = parse("λy.(x)y")
    dp = refl(parse("y"))
    d = subst_derivation(refl(m), "x", dp)
    concludes(d, parse("λw.(y)w"), canon("λw.(y)w"))


# -- compatibility with reduction -----------------------------------------------------------------------------


def test_step_examples():
    m = parse("(λx.x)y")
    (st_,) = alg_steps(embed(m))
    concludes(step_derivation(refl(m), st_), m, canon("y"))
    m = parse("(λx.(x)x)y")
    (st_,) = alg_steps(embed(m))
    concludes(step_derivation(refl(m), st_), m, canon("(y)y"))
    m = parse("(λx.x)y")
    d = prove(m, canon("2.(λx.x)y"), 5)
    unit = [s for s in alg_steps(mashup.rhs(d), SplitPolicy("unit")) if s.split == one(NAT)]
    concludes(step_derivation(d, unit[0]), m, canon("y + (λx.x)y"))


def test_step_refuses_non_positive_and_mismatch():
    m = parse("(λx.x)y")
    d = refl(m, INT)
    (st_,) = alg_steps(embed(m))
    with pytest.raises(PositivityRequired):
        step_derivation(d, st_)
    with pytest.raises(DerivationError):
        step_derivation(refl(parse("(λx.x)z")), st_)


def test_step_on_simple_step():
    m = parse("λx.(λy.y)x")
    d = refl_simple(m)
    (st_,) = alg_steps(embed(m))
    concludes(step_derivation(d, st_.inner), m, embed(parse("λx.x")))


# -- properties ---------------------------------------------------------------------------


@settings(max_examples=100)
@given(pure_terms(), st.randoms(use_true_random=False), st.sampled_from([NAT, RAT, BOOL]))
def test_split_join_round_trip(m, rnd, s):
    d = gen.derivation(random.Random(rnd.random()), m, s)
    sigma = mashup.rhs(d)
    parts = support_split(d)
    assert set(parts) == set(sigma.support())
    concludes(support_join(m, sigma, parts), m, sigma)


@settings(max_examples=100)
@given(pure_terms(), st.randoms(use_true_random=False))
def test_extract_is_sound_along_random_traces(m, rnd):
    rng = random.Random(rnd.random())
    d = refl(m)
    for _ in range(rng.randint(0, 5)):
        options = alg_steps(mashup.rhs(d))
        if not options:
            break
        d = step_derivation(d, rng.choice(options))
    n = alg.as_pure(mashup.rhs(d))
    tr = extract(d, n)
    assert tr.replay() is None and tr.start == m and tr.end == n
