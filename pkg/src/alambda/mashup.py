"""Mashup derivations relating a pure term to the algebraic terms it can become.

Two judgements are defined by mutual induction:

    M ⊢ σ   (σ simple)          M ⊩ σ   (σ any algebraic term)

with rules

    (v)   M →* x                         ⟹  M ⊢ x
    (λ)   M →* λx.N,  N ⊢ τ              ⟹  M ⊢ λx.τ
    (a)   M →* (N)P,  N ⊢ τ,  P ⊩ ρ      ⟹  M ⊢ (τ)ρ
    (0)                                  ⟹  M ⊩ 0
    (+)   M ⊢ σ,  M ⊩ τ                  ⟹  M ⊩ a.σ + τ

Derivations carry an explicit beta trace for every ``→*`` premise, so
:func:`check` needs no search.  The transformers below build new valid
derivations from old ones; together they turn an algebraic reduction
between pure terms into an ordinary beta-reduction (see
:mod:`alambda.conservativity`).

Subjects under a binder have a dangling de Bruijn index 0; every function
here is stated for a derivation in an arbitrary context.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional, Union

from . import algebra as alg
from . import syntax
from .algebra import AlgebraicTerm, SApp, SimpleTerm, SLam, SVar
from .reduction import (
    AlgStep,
    BetaTrace,
    InvalidStep,
    SimpleStep,
    Unknown,
    beta_reducts,
)
from .semiring import Coefficient, SemiringId, one, require_positive
from .syntax import App, Lam, RawTerm, Var

__all__ = [
    "Derivation",
    "VNode",
    "LamNode",
    "AppNode",
    "ZeroNode",
    "PlusNode",
    "Judgement",
    "Valid",
    "Invalid",
    "DerivationError",
    "check",
    "conclusion",
    "rhs",
    "prove",
    "support_split",
    "support_join",
    "admissible_s",
    "admissible_lam",
    "admissible_app",
    "admissible_plus",
    "refl",
    "refl_simple",
    "extract",
    "precompose",
    "subst_derivation",
    "step_derivation",
    "shift_derivation",
]


class DerivationError(ValueError):
    """A transformer was handed something it cannot work with."""


class Derivation:
    subject: RawTerm
    semiring: SemiringId
    # True for ⊢ (simple conclusion), False for ⊩
    simple: bool = False


@dataclass(frozen=True)
class VNode(Derivation):
    trace: BetaTrace
    var: Union[int, str]
    semiring: SemiringId
    simple = True

    @property
    def subject(self):
        return self.trace.start


@dataclass(frozen=True)
class LamNode(Derivation):
    trace: BetaTrace
    body: Derivation
    simple = True

    @property
    def subject(self):
        return self.trace.start

    @property
    def semiring(self):
        return self.body.semiring


@dataclass(frozen=True)
class AppNode(Derivation):
    trace: BetaTrace
    fun: Derivation
    arg: Derivation
    simple = True

    @property
    def subject(self):
        return self.trace.start

    @property
    def semiring(self):
        return self.fun.semiring


@dataclass(frozen=True)
class ZeroNode(Derivation):
    subject: RawTerm
    semiring: SemiringId


@dataclass(frozen=True)
class PlusNode(Derivation):
    coeff: Coefficient
    left: Derivation
    right: Derivation

    @property
    def subject(self):
        return self.left.subject

    @property
    def semiring(self):
        return self.coeff.semiring


@dataclass(frozen=True)
class Judgement:
    subject: RawTerm
    simple: bool
    rhs: Union[SimpleTerm, AlgebraicTerm]

    def as_algebraic(self, semiring: SemiringId) -> AlgebraicTerm:
        return alg.single(self.rhs, semiring) if self.simple else self.rhs

    def __str__(self):
        turnstile = "⊢" if self.simple else "⊩"
        return f"{syntax.show(self.subject)} {turnstile} {self.rhs}"


@dataclass(frozen=True)
class Valid:
    judgement: Judgement

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Invalid:
    path: tuple[str, ...]
    reason: str

    def __bool__(self):
        return False

    def __str__(self):
        where = "/".join(self.path) or "root"
        return f"invalid at {where}: {self.reason}"


# -- checking ------------------------------------------------------------------------


class _Bad(Exception):
    def __init__(self, path, reason):
        self.path = path
        self.reason = reason


def _check(d: Derivation, path: tuple[str, ...]) -> Judgement:
    if isinstance(d, VNode):
        why = d.trace.replay()
        if why:
            raise _Bad(path, f"(v) trace: {why}")
        if d.trace.end != Var(d.var):
            raise _Bad(path, f"(v) trace ends at {syntax.show(d.trace.end)}, not at the claimed variable")
        return Judgement(d.subject, True, SVar(d.var))
    if isinstance(d, LamNode):
        why = d.trace.replay()
        if why:
            raise _Bad(path, f"(λ) trace: {why}")
        end = d.trace.end
        if not isinstance(end, Lam):
            raise _Bad(path, "(λ) trace does not end at an abstraction")
        j = _check(d.body, path + ("body",))
        if not j.simple:
            raise _Bad(path, "(λ) premise must be a ⊢ judgement")
        if j.subject != end.body:
            raise _Bad(path, "(λ) premise subject is not the body of the reached abstraction")
        return Judgement(d.subject, True, SLam(j.rhs, end.hint))
    if isinstance(d, AppNode):
        why = d.trace.replay()
        if why:
            raise _Bad(path, f"(a) trace: {why}")
        end = d.trace.end
        if not isinstance(end, App):
            raise _Bad(path, "(a) trace does not end at an application")
        jf = _check(d.fun, path + ("fun",))
        ja = _check(d.arg, path + ("arg",))
        if not jf.simple:
            raise _Bad(path, "(a) function premise must be a ⊢ judgement")
        if ja.simple:
            raise _Bad(path, "(a) argument premise must be a ⊩ judgement")
        if jf.subject != end.fun or ja.subject != end.arg:
            raise _Bad(path, "(a) premise subjects do not match the reached application")
        if ja.rhs.semiring is not d.fun.semiring:
            raise _Bad(path, "(a) premises live in different semirings")
        return Judgement(d.subject, True, SApp(jf.rhs, ja.rhs))
    if isinstance(d, ZeroNode):
        return Judgement(d.subject, False, alg.AlgebraicTerm(d.semiring, ()))
    if isinstance(d, PlusNode):
        jl = _check(d.left, path + ("left",))
        jr = _check(d.right, path + ("right",))
        if not jl.simple:
            raise _Bad(path, "(+) left premise must be a ⊢ judgement")
        if jr.simple:
            raise _Bad(path, "(+) right premise must be a ⊩ judgement")
        if jl.subject != jr.subject:
            raise _Bad(path, "(+) premises have different subjects")
        if jr.rhs.semiring is not d.coeff.semiring:
            raise _Bad(path, "(+) coefficient and premises live in different semirings")
        rhs = alg.add(alg.single(jl.rhs, d.coeff.semiring, d.coeff), jr.rhs)
        return Judgement(jl.subject, False, rhs)
    raise _Bad(path, f"unknown node {type(d).__name__}")


def check(d: Derivation) -> Union[Valid, Invalid]:
    """Validate every node against its rule, replaying all embedded traces."""
    try:
        return Valid(_check(d, ()))
    except _Bad as e:
        return Invalid(e.path, e.reason)
    except InvalidStep as e:
        return Invalid((), str(e))
    except (AttributeError, TypeError, ValueError, IndexError) as e:
        return Invalid((), f"malformed derivation: {e}")


def conclusion(d: Derivation) -> Judgement:
    """The judgement ``d`` proves; raises :class:`DerivationError` if it is invalid."""
    v = check(d)
    if not v:
        raise DerivationError(str(v))
    return v.judgement


def rhs(d: Derivation):
    """Right-hand side ``d`` claims, read off the tree without replaying traces."""
    return _rhs(d)


def _rhs(d: Derivation):
    if isinstance(d, VNode):
        return SVar(d.var)
    if isinstance(d, LamNode):
        return SLam(_rhs(d.body), d.trace.end.hint)
    if isinstance(d, AppNode):
        return SApp(_rhs(d.fun), _rhs(d.arg))
    if isinstance(d, ZeroNode):
        return alg.AlgebraicTerm(d.semiring, ())
    return alg.add(alg.single(_rhs(d.left), d.coeff.semiring, d.coeff), _rhs(d.right))


# -- support decomposition -------------------------------------------------------------


def support_split(d: Derivation) -> dict[SimpleTerm, Derivation]:
    """From ``M ⊩ σ``, a derivation of ``M ⊢ u`` for each ``u`` in the support of ``σ``."""
    if d.simple:
        return {_rhs(d): d}
    target = _rhs(d)
    avail: dict[SimpleTerm, Derivation] = {}
    node = d
    while isinstance(node, PlusNode):
        avail.setdefault(_rhs(node.left), node.left)
        node = node.right
    if not isinstance(node, ZeroNode):
        raise DerivationError("a ⊩ derivation must be a chain of (+) nodes ending in (0)")
    return {u: avail[u] for u in target.support()}


def support_join(m: RawTerm, sigma: AlgebraicTerm, parts: dict[SimpleTerm, Derivation]) -> Derivation:
    """Rebuild ``M ⊩ σ`` from one ``M ⊢ u`` per support element ``u``."""
    out: Derivation = ZeroNode(m, sigma.semiring)
    for u, c in reversed(sigma.items):
        p = parts.get(u)
        if p is None:
            raise DerivationError(f"no derivation supplied for support element {u}")
        if not p.simple:
            raise DerivationError("support parts must be ⊢ derivations")
        if p.subject != m:
            raise DerivationError("support part has the wrong subject")
        out = PlusNode(c, p, out)
    return out


def _multi(d: Derivation) -> Derivation:
    return admissible_s(d) if d.simple else d


# -- admissible rules ------------------------------------------------------------------


def admissible_s(d: Derivation) -> Derivation:
    """(s): ``M ⊢ σ`` gives ``M ⊩ 1.σ + 0``."""
    if not d.simple:
        raise DerivationError("(s) expects a ⊢ derivation")
    return PlusNode(one(d.semiring), d, ZeroNode(d.subject, d.semiring))


def _expect_end(trace: BetaTrace, kind, what: str):
    if not isinstance(trace.end, kind):
        raise DerivationError(f"trace must end at {what}")
    return trace.end


def admissible_lam(trace: BetaTrace, d: Derivation) -> Derivation:
    """(λ'): ``M →* λx.N`` and ``N ⊩ τ`` give ``M ⊩ λx.τ``."""
    end = _expect_end(trace, Lam, "an abstraction")
    if d.subject != end.body:
        raise DerivationError("premise subject is not the body of the abstraction")
    tau = _rhs(_multi(d))
    parts = {SLam(u, end.hint): LamNode(trace, p) for u, p in support_split(_multi(d)).items()}
    return support_join(trace.start, alg.alam(tau, end.hint), parts)


def admissible_app(trace: BetaTrace, d1: Derivation, d2: Derivation) -> Derivation:
    """(a'): ``M →* (N)P``, ``N ⊩ τ``, ``P ⊩ ρ`` give ``M ⊩ (τ)ρ``."""
    end = _expect_end(trace, App, "an application")
    if d1.subject != end.fun or d2.subject != end.arg:
        raise DerivationError("premise subjects do not match the application")
    d1, d2 = _multi(d1), _multi(d2)
    tau, rho = _rhs(d1), _rhs(d2)
    parts = {SApp(u, rho): AppNode(trace, p, d2) for u, p in support_split(d1).items()}
    return support_join(trace.start, alg.aapp(tau, rho), parts)


def admissible_plus(a: Coefficient, d1: Derivation, d2: Derivation) -> Derivation:
    """(+'): ``M ⊩ σ`` and ``M ⊩ τ`` give ``M ⊩ a.σ + τ``."""
    if d1.subject != d2.subject:
        raise DerivationError("premises have different subjects")
    d1, d2 = _multi(d1), _multi(d2)
    target = alg.add(alg.scale(a, _rhs(d1)), _rhs(d2))
    parts = support_split(d2)
    for u, p in support_split(d1).items():
        parts.setdefault(u, p)
    return support_join(d1.subject, target, {u: parts[u] for u in target.support()})


# -- reflexivity and precomposition ----------------------------------------------------------------------


def refl_simple(m: RawTerm, semiring: SemiringId = SemiringId.NAT) -> Derivation:
    """``M ⊢ M`` by induction on ``M`` with empty traces."""
    empty = BetaTrace(m)
    if isinstance(m, Var):
        return VNode(empty, m.name, semiring)
    if isinstance(m, Lam):
        return LamNode(empty, refl_simple(m.body, semiring))
    if isinstance(m, App):
        return AppNode(empty, refl_simple(m.fun, semiring), refl(m.arg, semiring))
    raise DerivationError(f"not a pure term: {m!r}")


def refl(m: RawTerm, semiring: SemiringId = SemiringId.NAT) -> Derivation:
    """``M ⊩ M``."""
    return admissible_s(refl_simple(m, semiring))


def precompose(trace: BetaTrace, d: Derivation) -> Derivation:
    """From ``M →* M'`` and a derivation about ``M'``, the same judgement about ``M``."""
    if trace.end != d.subject:
        raise DerivationError("trace does not end at the derivation's subject")
    if not trace.steps:
        return d
    if isinstance(d, VNode):
        return VNode(trace.then(d.trace), d.var, d.semiring)
    if isinstance(d, LamNode):
        return LamNode(trace.then(d.trace), d.body)
    if isinstance(d, AppNode):
        return AppNode(trace.then(d.trace), d.fun, d.arg)
    if isinstance(d, ZeroNode):
        return ZeroNode(trace.start, d.semiring)
    return PlusNode(d.coeff, precompose(trace, d.left), precompose(trace, d.right))


# -- extraction --------------------------------------------------------------------


def _extract_simple(d: Derivation, n: RawTerm) -> BetaTrace:
    if isinstance(d, VNode):
        return d.trace
    if isinstance(d, LamNode):
        end = d.trace.end
        hint = end.hint
        inner = _extract_simple(d.body, n.body)
        return d.trace.then(inner.in_context((0,), lambda t: Lam(t, hint)))
    if isinstance(d, AppNode):
        end = d.trace.end
        p = end.arg
        left = _extract_simple(d.fun, n.fun)
        nf = left.end
        right = _extract_multi(d.arg, n.arg)
        return (
            d.trace
            .then(left.in_context((0,), lambda t: App(t, p)))
            .then(right.in_context((1,), lambda t: App(nf, t)))
        )
    raise DerivationError(f"unexpected {type(d).__name__} in a ⊢ position")


def _extract_multi(d: Derivation, n: RawTerm) -> BetaTrace:
    u = alg.simple_of(n, d.semiring)
    parts = support_split(d)
    if u not in parts:
        raise DerivationError("right-hand side does not contain the requested term")
    return _extract_simple(parts[u], n)


def extract(d: Derivation, n: RawTerm) -> BetaTrace:
    """From ``M ⊩ N`` (``N`` pure), a beta trace ``M →* N``."""
    if not syntax.is_pure(n):
        raise DerivationError("extraction target must be a pure term")
    expected = alg.embed(n, d.semiring)
    got = _rhs(_multi(d))
    if got != expected:
        raise DerivationError(f"derivation concludes {got}, not the embedding of {syntax.show(n)}")
    trace = _extract_multi(d, n) if not d.simple else _extract_simple(d, n)
    if trace.end != n:
        raise DerivationError("extracted trace does not reach the target")
    return trace


# -- context manipulation -----------------------------------------------------------------


def _map_derivation(
    d: Derivation,
    fterm: Callable[[RawTerm, int], RawTerm],
    fvar: Callable[[Union[int, str], int], Union[int, str]],
    depth: int = 0,
) -> Derivation:
    """Apply a beta-compatible renaming to every term, knowing the binder depth."""
    tr = lambda trace: trace.map_terms(lambda t: fterm(t, depth))  # noqa: E731
    if isinstance(d, VNode):
        return VNode(tr(d.trace), fvar(d.var, depth), d.semiring)
    if isinstance(d, LamNode):
        return LamNode(tr(d.trace), _map_derivation(d.body, fterm, fvar, depth + 1))
    if isinstance(d, AppNode):
        return AppNode(tr(d.trace), _map_derivation(d.fun, fterm, fvar, depth), _map_derivation(d.arg, fterm, fvar, depth))
    if isinstance(d, ZeroNode):
        return ZeroNode(fterm(d.subject, depth), d.semiring)
    return PlusNode(d.coeff, _map_derivation(d.left, fterm, fvar, depth), _map_derivation(d.right, fterm, fvar, depth))


def shift_derivation(d: Derivation, k: int) -> Derivation:
    """Weaken by ``k`` binders: every dangling index grows by ``k``."""
    if k == 0:
        return d

    def fvar(v, depth):
        return v + k if isinstance(v, int) and v >= depth else v

    return _map_derivation(d, lambda t, depth: syntax.shift(t, k, depth), fvar)


def _abstract_derivation(d: Derivation, x: str) -> Derivation:
    def fvar(v, depth):
        if v == x:
            return depth
        return v + 1 if isinstance(v, int) and v >= depth else v

    return _map_derivation(d, lambda t, depth: syntax.abstract(t, x, depth), fvar)


# -- substitution -----------------------------------------------------------------


def _inst(d: Derivation, j: int, dp: Derivation) -> Derivation:
    """``M[P/j] ⊩ σ[ρ/j]`` from ``M ⊢/⊩ σ`` and ``P ⊩ ρ``."""
    sub = lambda t: syntax.instantiate(t, j, dp.subject)  # noqa: E731
    if isinstance(d, VNode):
        trace = d.trace.map_terms(sub)
        if d.var == j:
            # hit: M[P/j] →* P, which already ⊩ ρ
            return precompose(trace, shift_derivation(dp, j))
        v = d.var
        if isinstance(v, int) and v > j:
            v -= 1
        return admissible_s(VNode(trace, v, d.semiring))
    if isinstance(d, LamNode):
        trace = d.trace.map_terms(sub)
        return admissible_lam(trace, _inst(d.body, j + 1, dp))
    if isinstance(d, AppNode):
        trace = d.trace.map_terms(sub)
        return admissible_app(trace, _inst(d.fun, j, dp), _inst(d.arg, j, dp))
    if isinstance(d, ZeroNode):
        return ZeroNode(sub(d.subject), d.semiring)
    if isinstance(d, PlusNode):
        return admissible_plus(d.coeff, _inst(d.left, j, dp), _inst(d.right, j, dp))
    raise DerivationError(f"unknown node {type(d).__name__}")


def subst_derivation(dm: Derivation, x: Union[int, str], dp: Derivation) -> Derivation:
    """From ``M ⊢/⊩ σ`` and ``P ⊩ ρ``, a derivation of ``M[P/x] ⊩ σ[ρ/x]``.

    ``x`` is a free variable name, or a de Bruijn index to instantiate (the
    substituted index disappears and the ones above it move down).
    """
    if dm.semiring is not dp.semiring:
        raise DerivationError("derivations live in different semirings")
    dp = _multi(dp)
    if isinstance(x, str):
        return _inst(_abstract_derivation(dm, x), 0, dp)
    return _inst(dm, x, dp)


# -- compatibility with reduction ----------------------------------------------------


def _step_simple(d: Derivation, st: SimpleStep) -> Derivation:
    if st.kind == "beta":
        if not (isinstance(d, AppNode) and isinstance(d.fun, LamNode)):
            raise DerivationError("a head redex must be derived by (a) over (λ)")
        outer, lam = d.trace, d.fun
        p = outer.end.arg
        n_body = lam.trace.end.body
        # M →* (N)P →* (λx.N')P → N'[P/x]
        to_lam = lam.trace.in_context((0,), lambda t: App(t, p))
        contracted = syntax.instantiate(n_body, 0, p)
        trace = outer.then(to_lam)
        trace = BetaTrace(trace.start, trace.steps + (((), contracted),))
        return precompose(trace, subst_derivation(lam.body, 0, d.arg))
    if st.kind == "lam":
        if not isinstance(d, LamNode):
            raise DerivationError("step under a binder needs a (λ) derivation")
        return admissible_lam(d.trace, _step_simple(d.body, st.inner))
    if st.kind == "fun":
        if not isinstance(d, AppNode):
            raise DerivationError("step in function position needs an (a) derivation")
        return admissible_app(d.trace, _step_simple(d.fun, st.inner), d.arg)
    if st.kind == "arg":
        if not isinstance(d, AppNode):
            raise DerivationError("step in argument position needs an (a) derivation")
        return admissible_app(d.trace, d.fun, _step_alg(d.arg, st.inner))
    raise DerivationError(f"unknown step kind {st.kind!r}")


def _step_alg(d: Derivation, st: AlgStep) -> Derivation:
    d = _multi(d)
    parts = support_split(d)
    # by positivity the selected term, carrying nonzero weight, is in the support
    dt = parts.get(st.selected)
    if dt is None:
        raise DerivationError("selected term is not in the support of the derived term")
    reduced = _step_simple(dt, st.inner)
    rho = st.residual()
    d_rho = support_join(d.subject, rho, {u: parts[u] for u in rho.support()})
    return admissible_plus(st.split, reduced, d_rho)


def step_derivation(dm: Derivation, step: Union[SimpleStep, AlgStep]) -> Derivation:
    """From ``M ⊢/⊩ σ`` and a step ``σ → σ'``, a derivation of ``M ⊩ σ'``."""
    require_positive(dm.semiring, "step_derivation")
    if isinstance(step, AlgStep):
        if _rhs(_multi(dm)) != step.source:
            raise DerivationError("step does not start at the derived term")
        return _step_alg(dm, step)
    if dm.simple:
        if _rhs(dm) != step.source:
            raise DerivationError("step does not start at the derived term")
        return _step_simple(dm, step)
    parts = support_split(dm)
    if _rhs(dm) != alg.single(step.source, dm.semiring):
        raise DerivationError("step does not start at the derived term")
    return _step_simple(parts[step.source], step)


# -- bounded proof search ---------------------------------------------------------------------


class _OutOfFuel(Exception):
    pass


class _Prover:
    def __init__(self, fuel: int, semiring: SemiringId):
        self.fuel = fuel
        self.semiring = semiring
        self.graphs: dict[RawTerm, tuple[list[RawTerm], dict, deque]] = {}
        self.memo: dict[tuple[RawTerm, SimpleTerm], Optional[Derivation]] = {}

    def _nodes(self, m: RawTerm):
        """Reducts of ``m`` in breadth-first order, expanded lazily against the shared budget."""
        order, parents, queue = self.graphs.setdefault(m, ([m], {m: None}, deque([m])))
        i = 0
        while True:
            while i < len(order):
                yield order[i], parents
                i += 1
            if not queue:
                return
            if self.fuel <= 0:
                raise _OutOfFuel
            self.fuel -= 1
            cur = queue.popleft()
            for pos, t in beta_reducts(cur):
                if t not in parents:
                    parents[t] = (cur, pos)
                    order.append(t)
                    queue.append(t)

    def trace(self, m: RawTerm, parents: dict, t: RawTerm) -> BetaTrace:
        steps = []
        while parents[t] is not None:
            prev, pos = parents[t]
            steps.append((pos, t))
            t = prev
        steps.reverse()
        return BetaTrace(m, tuple(steps))

    def simple(self, m: RawTerm, u: SimpleTerm) -> Optional[Derivation]:
        key = (m, u)
        if key in self.memo:
            return self.memo[key]
        found = None
        for t, parents in self._nodes(m):
            if isinstance(u, SVar):
                if t == Var(u.name):
                    found = VNode(self.trace(m, parents, t), u.name, self.semiring)
            elif isinstance(u, SLam):
                if isinstance(t, Lam):
                    body = self.simple(t.body, u.body)
                    if body is not None:
                        found = LamNode(self.trace(m, parents, t), body)
            elif isinstance(t, App):
                fun = self.simple(t.fun, u.fun)
                if fun is not None:
                    arg = self.multi(t.arg, u.arg)
                    if arg is not None:
                        found = AppNode(self.trace(m, parents, t), fun, arg)
            if found is not None:
                break
        self.memo[key] = found
        return found

    def multi(self, m: RawTerm, s: AlgebraicTerm) -> Optional[Derivation]:
        parts = {}
        for u in s.support():
            p = self.simple(m, u)
            if p is None:
                return None
            parts[u] = p
        return support_join(m, s, parts)


def prove(m: RawTerm, s: Union[AlgebraicTerm, SimpleTerm], fuel: int, semiring: Optional[SemiringId] = None) -> Union[Derivation, None, Unknown]:
    """Search for ``M ⊩ s`` (or ``M ⊢ s`` for a simple ``s``).

    Returns a derivation, ``None`` if every relevant reduct graph was
    exhausted without success, or :class:`Unknown` when ``fuel`` beta-reduct
    expansions (shared across the whole search) ran out.
    """
    if semiring is None:
        if not isinstance(s, AlgebraicTerm):
            raise ValueError("pass the semiring when proving a simple goal")
        semiring = s.semiring
    prover = _Prover(fuel, semiring)
    try:
        if isinstance(s, AlgebraicTerm):
            return prover.multi(m, s)
        return prover.simple(m, s)
    except _OutOfFuel:
        return Unknown(fuel, fuel)
