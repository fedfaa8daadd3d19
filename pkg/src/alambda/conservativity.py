"""End-to-end pipelines built on the mashup transformers.

:func:`conserve` turns an algebraic reduction between two pure terms into
an ordinary beta-reduction, carrying every intermediate derivation as a
certificate.  :func:`equiv_check` is a bounded equivalence probe, and the
three ``*_demo``/``*_witness`` functions reproduce the classic examples
around this result as structured reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional, Union

from . import algebra as alg
from . import mashup, syntax
from .algebra import AlgebraicTerm, SLam, SVar
from .reduction import (
    AlgStep,
    AlgTrace,
    BetaTrace,
    FULL,
    SplitPolicy,
    Unknown,
    alg_reaches,
    alg_steps,
    beta_reaches,
    joinable,
    make_alg_step,
    parallel_reduce,
    reduction_graph,
    simple_steps,
    validate_alg_step,
)
from .semiring import SemiringId, coeff, require_positive
from .syntax import App, Lam, RawTerm, Var, parse

__all__ = [
    "ConservativityCertificate",
    "ConservativityError",
    "conserve",
    "Equivalent",
    "equiv_check",
    "parallel_trace",
    "Report",
    "claim21_counterexample",
    "non_sub_ars_witness",
    "inconsistency_demo",
    "CURRY_Y",
]


class ConservativityError(ValueError):
    pass


@dataclass(frozen=True)
class ConservativityCertificate:
    source: RawTerm
    target: RawTerm
    alg: AlgTrace
    derivations: tuple[mashup.Derivation, ...]
    beta: BetaTrace

    def verify(self) -> Optional[str]:
        """Recheck every component from scratch; None when all is well."""
        s = self.alg.semiring
        if self.alg.start != alg.embed(self.source, s) or self.alg.end != alg.embed(self.target, s):
            return "algebraic trace endpoints are not the embedded source/target"
        why = self.alg.validate()
        if why:
            return f"algebraic trace: {why}"
        states = [self.alg.start] + [st.result for st in self.alg.steps]
        if len(self.derivations) != len(states):
            return "expected one derivation per trace state"
        for i, (d, state) in enumerate(zip(self.derivations, states)):
            v = mashup.check(d)
            if not v:
                return f"derivation {i}: {v}"
            j = v.judgement
            if j.subject != self.source or j.as_algebraic(s) != state:
                return f"derivation {i} does not conclude source ⊩ state {i}"
        why = self.beta.replay()
        if why:
            return f"beta trace: {why}"
        if self.beta.start != self.source or self.beta.end != self.target:
            return "beta trace does not connect source to target"
        return None


def conserve(trace: AlgTrace) -> ConservativityCertificate:
    """Certificate that the pure endpoints of ``trace`` are beta-related."""
    require_positive(trace.semiring, "conserve")
    src = alg.as_pure(trace.start)
    tgt = alg.as_pure(trace.end)
    if src is None or tgt is None:
        raise ConservativityError("both endpoints of the trace must be pure terms")
    why = trace.validate()
    if why:
        raise ConservativityError(f"invalid algebraic trace: {why}")
    d = mashup.refl(src, trace.semiring)
    ds = [d]
    for st in trace.steps:
        d = mashup.step_derivation(d, st)
        ds.append(d)
    beta = mashup.extract(d, tgt)
    return ConservativityCertificate(src, tgt, trace, tuple(ds), beta)


def parallel_trace(m: RawTerm) -> BetaTrace:
    """A beta trace from ``m`` to its full parallel reduct.

    Redexes are contracted innermost-first, right to left, so that each
    contraction leaves the positions of the remaining ones unchanged.
    """

    def go(t: RawTerm) -> BetaTrace:
        if isinstance(t, Var):
            return BetaTrace(t)
        if isinstance(t, Lam):
            hint = t.hint
            return go(t.body).in_context((0,), lambda x: Lam(x, hint))
        f, a = t.fun, t.arg
        ta = go(a).in_context((1,), lambda x: App(f, x))
        a2 = ta.end.arg
        if isinstance(f, Lam):
            hint = f.hint
            tb = go(f.body).in_context((0, 0), lambda x: App(Lam(x, hint), a2))
            done = tb.end
            contracted = syntax.instantiate(done.fun.body, 0, a2)
            return ta.then(BetaTrace(tb.start, tb.steps + (((), contracted),)))
        tf = go(f).in_context((0,), lambda x: App(x, a2))
        return ta.then(tf)

    return go(m)


@dataclass(frozen=True)
class Equivalent:
    k: int
    join_left: AlgTrace
    join_right: AlgTrace
    to_parallel: AlgTrace
    parallel: BetaTrace
    beta: BetaTrace

    @property
    def meet(self) -> AlgebraicTerm:
        return self.join_left.end


def equiv_check(m: RawTerm, n: RawTerm, fuel: int, policy: SplitPolicy = FULL,
                semiring: SemiringId = SemiringId.NAT) -> Union[Equivalent, Unknown]:
    """Bounded check that ``m`` and ``n`` are equivalent, with witnesses.

    After a common reduct ``σ`` with ``m ~>^k σ`` is found, ``σ`` is reduced
    on to the ``k``-fold parallel reduct of ``m`` and ``n`` is shown to
    beta-reduce there too.
    """
    require_positive(semiring, "equiv_check")
    sm, sn = alg.embed(m, semiring), alg.embed(n, semiring)
    j = joinable(sm, sn, fuel, policy)
    if j is None:
        # a finished search is still not a proof of inequivalence here
        return Unknown(fuel, reason="no common reduct within the explored graphs")
    if not j:
        return j
    k = len(j.left)
    target_pure = m
    ptrace = BetaTrace(m)
    for _ in range(k):
        ptrace = ptrace.then(parallel_trace(target_pure))
        target_pure = ptrace.end
    target = parallel_reduce_k(sm, k)
    if target != alg.embed(target_pure, semiring):
        raise AssertionError("parallel reduction does not commute with embedding")
    to_par = alg_reaches(j.meet, target, fuel, policy)
    if not to_par:
        return Unknown(fuel)
    beta = beta_reaches(n, target_pure, fuel)
    if not beta:
        return Unknown(fuel)
    return Equivalent(k, j.left, j.right, to_par, ptrace, beta)


def parallel_reduce_k(s: AlgebraicTerm, k: int) -> AlgebraicTerm:
    for _ in range(k):
        s = parallel_reduce(s)
    return s


# -- reports ------------------------------------------------------------------------------------


@dataclass
class Report:
    """Structured demo output: named sections plus a verdict."""

    name: str
    inputs: dict[str, Any] = field(default_factory=dict)
    traces: dict[str, Any] = field(default_factory=dict)
    digests: dict[str, Any] = field(default_factory=dict)
    verdict: str = ""
    ok: bool = False

    def to_record(self) -> dict[str, Any]:
        return {
            "version": 1,
            "kind": "report",
            "name": self.name,
            "inputs": self.inputs,
            "traces": self.traces,
            "digests": self.digests,
            "verdict": self.verdict,
            "ok": self.ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), ensure_ascii=False, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"== {self.name} =="]
        for title, sec in (("inputs", self.inputs), ("traces", self.traces), ("digests", self.digests)):
            if not sec:
                continue
            lines.append(f"[{title}]")
            for key, val in sec.items():
                if isinstance(val, list):
                    lines.append(f"  {key}:")
                    lines.extend(f"    {_fmt(v)}" for v in val)
                else:
                    lines.append(f"  {key}: {_fmt(val)}")
        lines.append(f"[verdict] {self.verdict}")
        return "\n".join(lines)


def _fmt(v: Any) -> str:
    if isinstance(v, dict):
        return "; ".join(f"{k}={_fmt(x)}" for k, x in v.items())
    if isinstance(v, list):
        return "{" + ", ".join(_fmt(x) for x in v) + "}"
    return str(v)


def _step_row(st: AlgStep) -> dict[str, str]:
    return {
        "source": str(st.source),
        "selected": str(st.selected),
        "split": str(st.split),
        "rest": str(st.rest),
        "result": str(st.result),
    }


CLAIM21_FUEL = 100


def claim21_counterexample(fuel: int = CLAIM21_FUEL) -> Report:
    """The step (λx.(x)x)(y+z) ~> (y+z)(y+z) breaks the naive lifting claim.

    ``(y)z`` is in Λ(σ') but no element of Λ(σ) beta-reduces to it; both
    reduct graphs are finite and are exhausted to confirm it.
    """
    s = SemiringId.NAT
    sigma = alg.canonicalize(parse("(λx.(x)x)(y+z)", s), s)
    sigma2 = alg.canonicalize(parse("(y+z)(y+z)", s), s)
    step = next(st for st in alg_steps(sigma) if st.result == sigma2)
    m2 = parse("(y)z")
    lam_s = sorted(alg.lambda_support(sigma), key=syntax.show)
    lam_s2 = sorted(alg.lambda_support(sigma2), key=syntax.show)
    rep = Report("claim21")
    rep.inputs = {"sigma": str(sigma), "sigma'": str(sigma2), "M'": syntax.show(m2), "fuel": fuel}
    rep.traces = {"step": [_step_row(step)]}
    rep.digests["Λ(σ)"] = [syntax.show(t) for t in lam_s]
    rep.digests["Λ(σ')"] = [syntax.show(t) for t in lam_s2]
    rep.digests["M' ∈ Λ(σ')"] = m2 in set(lam_s2)
    unreachable = True
    graphs = []
    for m in lam_s:
        g = reduction_graph(m, fuel)
        if isinstance(g, Unknown):
            unreachable = False
            graphs.append(f"{syntax.show(m)}: graph larger than fuel")
            continue
        normal = [t for t, succ in g.items() if not succ]
        graphs.append(
            f"{syntax.show(m)}: {len(g)} terms {{{', '.join(syntax.show(t) for t in g)}}}; "
            f"normal forms {{{', '.join(syntax.show(t) for t in normal)}}}"
        )
        if m2 in g:
            unreachable = False
    rep.digests["reduction graphs"] = graphs
    rep.digests["step validates"] = validate_alg_step(step) is None
    rep.ok = bool(rep.digests["M' ∈ Λ(σ')"] and unreachable and rep.digests["step validates"])
    rep.verdict = (
        "counterexample confirmed: no element of Λ(σ) beta-reduces to (y)z"
        if rep.ok else "counterexample NOT confirmed"
    )
    return rep


def non_sub_ars_witness() -> Report:
    """Over rat+, M = ½M + ½M ~> ½M + ½M' leaves the pure fragment."""
    s = SemiringId.NONNEG_RAT
    m = parse("(λx.x)y", s)
    start = alg.embed(m, s)
    policy = SplitPolicy("half")
    step = next(st for st in alg_steps(start, policy) if not st.rest.is_zero())
    rep = Report("subars")
    rep.inputs = {"semiring": s.value, "M": syntax.show(m), "policy": policy.name}
    rep.traces = {"step": [_step_row(step)]}
    back = alg.as_pure(start)
    rep.digests = {
        "as_pure(M)": syntax.show(back) if back is not None else "None",
        "result": str(step.result),
        "as_pure(result)": "None" if alg.as_pure(step.result) is None else syntax.show(alg.as_pure(step.result)),
        "step validates": validate_alg_step(step) is None,
    }
    rep.ok = back == m and alg.as_pure(step.result) is None and rep.digests["step validates"]
    rep.verdict = (
        "a pure term reduces outside the pure fragment: not a sub-ARS"
        if rep.ok else "witness NOT confirmed"
    )
    return rep


CURRY_Y = "λf.(λx.(f)(x)x)(λx.(f)(x)x)"


def _head_step(s: AlgebraicTerm, u) -> AlgStep:
    """Full-weight contraction of the head redex of support element ``u``."""
    for st in simple_steps(u, s.semiring):
        if st.kind == "beta":
            return make_alg_step(s, st, s.coefficient(u))
    raise ValueError(f"{u} has no head redex")


def _int_step(s: AlgebraicTerm, nat_step: AlgStep) -> AlgStep:
    """Replay a step in a ring: same selected term and weight, any residual."""
    u = alg.recast(alg.single(nat_step.selected, nat_step.source.semiring), s.semiring).items[0][0]
    st = next(st for st in simple_steps(u, s.semiring) if st.kind == "beta")
    a = coeff(s.semiring, nat_step.split.value)
    rest = coeff(s.semiring, s.coefficient(u).value - a.value)
    return make_alg_step(s, st, a, rest)


def inconsistency_demo(sigma: Optional[AlgebraicTerm] = None) -> Report:
    """∞σ = (Y)λx.(σ + x) satisfies ∞σ ↔ σ + ∞σ; with −1 available, 0 ↔ σ."""
    if sigma is None:
        sigma = alg.embed(Var("y"), SemiringId.NAT)
    s = sigma.semiring
    require_positive(s, "the forward chain of the inconsistency demo")
    y = alg.embed(parse(CURRY_Y), s)
    x0 = alg.single(SVar(0), s)
    f = alg.alam(alg.add(alg.shift_alg(sigma, 1), x0))
    inf = alg.aapp(y, f)
    g = alg.alam(alg.aapp(alg.shift_alg(f, 1), alg.aapp(x0, x0)))
    w = alg.aapp(g, g)

    # forward: ∞σ ~> W, then unfold each summand (G_i)G; the λx.x summand goes last
    steps = [_head_step(inf, inf.items[0][0])]
    state = steps[-1].result
    order = sorted(w.support(), key=lambda u: u.fun.body.fun == SLam(SVar(0)))
    for u in order:
        st1 = _head_step(state, u)
        state = st1.result
        st2 = _head_step(state, st1.reduct.items[0][0])
        state = st2.result
        steps += [st1, st2]
    forward = AlgTrace(inf, tuple(steps))
    sum_side = alg.add(sigma, inf)
    back = AlgTrace(sum_side, (_head_step(sum_side, inf.items[0][0]),))
    meet = alg.add(sigma, w)

    rep = Report("inconsistency")
    rep.inputs = {"sigma": str(sigma), "Y": CURRY_Y, "∞σ": str(inf), "semiring": s.value}
    rep.traces["∞σ ~>* σ + W"] = [_step_row(st) for st in forward.steps]
    rep.traces["σ + ∞σ ~> σ + W"] = [_step_row(st) for st in back.steps]
    fwd_ok = forward.validate() is None and back.validate() is None
    fwd_ok = fwd_ok and forward.end == meet and back.end == meet
    rep.digests["W"] = str(w)
    rep.digests["forward chain validates"] = fwd_ok

    # over the integers: 0 = ∞σ + (−1).∞σ ~>* σ + W − ∞σ <~ σ + ∞σ − ∞σ = σ
    Z = SemiringId.INT
    sz, infz = alg.recast(sigma, Z), alg.recast(inf, Z)
    neg = alg.scale(coeff(Z, -1), infz)
    zero_term = alg.add(infz, neg)
    chain = []
    state = zero_term
    int_ok = not zero_term  # the canonical identity ∞σ + (−1).∞σ = 0
    for nat_step in forward.steps:
        st = _int_step(state, nat_step)
        int_ok = int_ok and validate_alg_step(st) is None
        chain.append(("~>", st))
        state = st.result
    top = state
    int_ok = int_ok and top == alg.add(alg.recast(meet, Z), neg)
    sz_plus = alg.add(alg.add(sz, infz), neg)
    int_ok = int_ok and sz_plus == sz
    st = _int_step(sz, back.steps[0])
    int_ok = int_ok and validate_alg_step(st) is None and st.result == top
    chain.append(("<~", st))
    rep.digests["∞σ + (−1).∞σ"] = str(zero_term)
    rep.traces["0 ↔* σ over int"] = [dict(dir=d, **_step_row(st)) for d, st in chain]
    rep.digests["int chain endpoint"] = str(sz)
    rep.digests["int chain validates"] = int_ok
    rep.ok = fwd_ok and int_ok
    rep.verdict = (
        "∞σ ↔ σ + ∞σ validated; over int 0 ↔ σ: the theory collapses"
        if rep.ok else "chain NOT validated"
    )
    return rep
