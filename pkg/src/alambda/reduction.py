"""Reduction relations and bounded searches over them.

* ``beta_*``: ordinary one-step beta-reduction on pure terms.
* ``simple_steps``: the relation from a simple term to an algebraic term,
  contextual with beta as its base case.
* ``alg_steps``: the relation on algebraic terms: rewrite ``a.τ + ρ`` to
  ``a.τ' + ρ`` for a nonzero ``a``.  Since ``ρ`` may itself carry some weight
  on ``τ``, a coefficient ``c`` may be split as ``a + b``; which splits are
  enumerated is governed by a :class:`SplitPolicy`.

All searches are breadth-first with a global expansion budget and answer
:class:`Unknown` when the budget runs out, which is not the same as "no".
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from . import algebra as alg
from .algebra import AlgebraicTerm, SApp, SimpleTerm, SLam, SVar
from .semiring import Coefficient, SemiringId, coeff, require_positive, zero
from .syntax import App, Lam, RawTerm, Var, instantiate

__all__ = [
    "Unknown",
    "Position",
    "BetaTrace",
    "beta_reducts",
    "contract_at",
    "beta_reaches",
    "reduction_graph",
    "SplitPolicy",
    "SimpleStep",
    "AlgStep",
    "AlgTrace",
    "simple_steps",
    "simple_reducts",
    "alg_steps",
    "alg_reducts",
    "make_alg_step",
    "validate_simple_step",
    "validate_alg_step",
    "find_simple_step",
    "parallel_pure",
    "parallel_simple",
    "parallel_reduce",
    "is_normal",
    "joinable",
    "alg_reaches",
    "InvalidStep",
]

Position = tuple[int, ...]


@dataclass(frozen=True)
class Unknown:
    """Search budget exhausted before an answer was found."""

    fuel: int
    explored: int = 0
    reason: str = "budget exhausted"

    def __bool__(self):
        return False


class InvalidStep(ValueError):
    pass


# -- pure beta-reduction -------------------------------------------------------------


def beta_reducts(m: RawTerm) -> list[tuple[Position, RawTerm]]:
    """All one-step beta-reducts, leftmost-outermost first."""
    out: list[tuple[Position, RawTerm]] = []

    def go(t: RawTerm, pos: Position, plug: Callable[[RawTerm], RawTerm]):
        if isinstance(t, App):
            if isinstance(t.fun, Lam):
                out.append((pos, plug(instantiate(t.fun.body, 0, t.arg))))
            f, a = t.fun, t.arg
            go(f, pos + (0,), lambda x: plug(App(x, a)))
            go(a, pos + (1,), lambda x: plug(App(f, x)))
        elif isinstance(t, Lam):
            hint = t.hint
            go(t.body, pos + (0,), lambda x: plug(Lam(x, hint)))
        elif not isinstance(t, Var):
            raise ValueError(f"not a pure term: {t!r}")

    go(m, (), lambda x: x)
    return out


def contract_at(m: RawTerm, pos: Position) -> RawTerm:
    """Contract the redex at ``pos``; raises :class:`InvalidStep` if there is none."""
    if not pos:
        if isinstance(m, App) and isinstance(m.fun, Lam):
            return instantiate(m.fun.body, 0, m.arg)
        raise InvalidStep("no beta-redex at the given position")
    i, rest = pos[0], pos[1:]
    if isinstance(m, Lam) and i == 0:
        return Lam(contract_at(m.body, rest), m.hint)
    if isinstance(m, App) and i == 0:
        return App(contract_at(m.fun, rest), m.arg)
    if isinstance(m, App) and i == 1:
        return App(m.fun, contract_at(m.arg, rest))
    raise InvalidStep(f"position {pos} does not exist")


@dataclass(frozen=True)
class BetaTrace:
    """A witness of ``start →* end``: each step names the contracted redex."""

    start: RawTerm
    steps: tuple[tuple[Position, RawTerm], ...] = ()

    @property
    def end(self) -> RawTerm:
        return self.steps[-1][1] if self.steps else self.start

    def __len__(self) -> int:
        return len(self.steps)

    def __bool__(self) -> bool:
        # a found trace is a positive answer even when it is empty
        return True

    def terms(self) -> list[RawTerm]:
        return [self.start] + [t for _, t in self.steps]

    def replay(self) -> Optional[str]:
        """None if every step is a genuine contraction, else a reason."""
        cur = self.start
        for i, (pos, t) in enumerate(self.steps):
            try:
                nxt = contract_at(cur, pos)
            except InvalidStep as e:
                return f"step {i}: {e}"
            if nxt != t:
                return f"step {i}: contracting at {pos} does not give the recorded term"
            cur = nxt
        return None

    def then(self, other: "BetaTrace") -> "BetaTrace":
        if other.start != self.end:
            raise ValueError("traces do not compose: endpoint mismatch")
        return BetaTrace(self.start, self.steps + other.steps)

    def in_context(self, prefix: Position, plug: Callable[[RawTerm], RawTerm]) -> "BetaTrace":
        return BetaTrace(plug(self.start), tuple((prefix + p, plug(t)) for p, t in self.steps))

    def map_terms(self, f: Callable[[RawTerm], RawTerm]) -> "BetaTrace":
        """Apply a redex-preserving renaming (shift, substitution) to every term."""
        return BetaTrace(f(self.start), tuple((p, f(t)) for p, t in self.steps))


def _path(parents: dict, node) -> list:
    steps = []
    while parents[node] is not None:
        prev, label = parents[node]
        steps.append((label, node))
        node = prev
    steps.reverse()
    return steps


def beta_reaches(m: RawTerm, n: RawTerm, fuel: int) -> Union[BetaTrace, None, Unknown]:
    """Breadth-first search for ``m →* n``.

    Returns a trace, ``None`` when the whole (finite) reduct graph was
    explored without meeting ``n``, or :class:`Unknown`.
    """
    if m == n:
        return BetaTrace(m)
    parents: dict[RawTerm, object] = {m: None}
    queue = deque([m])
    used = 0
    while queue:
        if used >= fuel:
            return Unknown(fuel, used)
        cur = queue.popleft()
        used += 1
        for pos, t in beta_reducts(cur):
            if t in parents:
                continue
            parents[t] = (cur, pos)
            if t == n:
                return BetaTrace(m, tuple(_path(parents, t)))
            queue.append(t)
    return None


def reduction_graph(m: RawTerm, fuel: int) -> Union[dict[RawTerm, list[RawTerm]], Unknown]:
    """The full reduct graph of ``m`` if it has at most ``fuel`` nodes."""
    graph: dict[RawTerm, list[RawTerm]] = {}
    queue = deque([m])
    seen = {m}
    while queue:
        if len(graph) >= fuel:
            return Unknown(fuel, len(graph))
        cur = queue.popleft()
        succ = [t for _, t in beta_reducts(cur)]
        graph[cur] = succ
        for t in succ:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return graph


# -- split policies ---------------------------------------------------------------------


@dataclass(frozen=True)
class SplitPolicy:
    """Which decompositions ``c = a + b`` of a support coefficient are tried.

    ``full`` only takes ``a = c``.  ``unit`` (nat) also takes every
    ``a = 1 .. c-1`` up to ``cap``; ``half`` (rat+) also takes ``a = c/2``.
    The full relation quantifies over all decompositions, which is
    infinite over rat+; this is a deliberate, finite under-approximation.
    """

    name: str = "full"
    cap: int = 8

    def __post_init__(self):
        if self.name not in ("full", "unit", "half"):
            raise ValueError(f"unknown split policy {self.name!r}")

    def check(self, semiring: SemiringId) -> None:
        if self.name == "unit" and semiring is not SemiringId.NAT:
            raise ValueError("the unit split policy only applies to nat")
        if self.name == "half" and semiring is not SemiringId.NONNEG_RAT:
            raise ValueError("the half split policy only applies to rat+")

    def splits(self, c: Coefficient) -> list[tuple[Coefficient, Coefficient]]:
        s = c.semiring
        out = [(c, zero(s))]
        if self.name == "unit" and s is SemiringId.NAT:
            for a in range(1, min(c.value - 1, self.cap) + 1):
                out.append((coeff(s, a), coeff(s, c.value - a)))
        elif self.name == "half" and s is SemiringId.NONNEG_RAT:
            h = coeff(s, Fraction(c.value) / 2)
            out.append((h, h))
        return out


FULL = SplitPolicy("full")


# -- steps on simple and algebraic terms --------------------------------------------------


@dataclass(frozen=True)
class SimpleStep:
    """One step ``source → result`` on a simple term, with its derivation.

    ``kind`` is ``beta`` (head redex), ``lam`` (under the binder), ``fun``
    (in function position) or ``arg`` (an algebraic step in the argument).
    """

    kind: str
    source: SimpleTerm
    result: AlgebraicTerm
    inner: Union["SimpleStep", "AlgStep", None] = None

    def position(self) -> Position:
        if self.kind == "beta":
            return ()
        if self.kind in ("lam", "fun"):
            return (0,) + self.inner.position()
        return (1,)


@dataclass(frozen=True)
class AlgStep:
    """``source = split.selected + ρ  ~>  split.reduct + ρ``.

    ``ρ`` is ``source`` with the coefficient of ``selected`` replaced by
    ``rest``; ``split + rest`` must equal that coefficient.
    """

    source: AlgebraicTerm
    selected: SimpleTerm
    split: Coefficient
    rest: Coefficient
    inner: SimpleStep
    result: AlgebraicTerm

    @property
    def reduct(self) -> AlgebraicTerm:
        return self.inner.result

    def residual(self) -> AlgebraicTerm:
        return _residual(self.source, self.selected, self.rest)


def _residual(s: AlgebraicTerm, u: SimpleTerm, rest: Coefficient) -> AlgebraicTerm:
    pairs = [(v, c) for v, c in s.items if v != u]
    pairs.append((u, rest))
    return alg.combination(s.semiring, pairs)


def make_alg_step(s: AlgebraicTerm, inner: SimpleStep, split: Coefficient, rest: Optional[Coefficient] = None) -> AlgStep:
    u = inner.source
    if rest is None:
        rest = zero(s.semiring)
    result = alg.add(alg.scale(split, inner.result), _residual(s, u, rest))
    return AlgStep(s, u, split, rest, inner, result)


def simple_steps(u: SimpleTerm, semiring: SemiringId, policy: SplitPolicy = FULL) -> list[SimpleStep]:
    """All one-step reducts of a simple term, leftmost-outermost first."""
    out: list[SimpleStep] = []
    if isinstance(u, SLam):
        for st in simple_steps(u.body, semiring, policy):
            out.append(SimpleStep("lam", u, alg.alam(st.result, u.hint), st))
    elif isinstance(u, SApp):
        if isinstance(u.fun, SLam):
            out.append(SimpleStep("beta", u, alg.instantiate_simple(u.fun.body, 0, u.arg, semiring)))
        for st in simple_steps(u.fun, semiring, policy):
            out.append(SimpleStep("fun", u, alg.aapp(st.result, u.arg), st))
        for ast in _alg_steps(u.arg, policy):
            out.append(SimpleStep("arg", u, alg.single(SApp(u.fun, ast.result), semiring), ast))
    return out


def simple_reducts(u: SimpleTerm, semiring: SemiringId, policy: SplitPolicy = FULL) -> list[AlgebraicTerm]:
    return [st.result for st in simple_steps(u, semiring, policy)]


def _alg_steps(s: AlgebraicTerm, policy: SplitPolicy) -> list[AlgStep]:
    out = []
    for u, c in s.items:
        inner_steps = simple_steps(u, s.semiring, policy)
        if not inner_steps:
            continue
        splits = policy.splits(c)
        for st in inner_steps:
            for a, b in splits:
                out.append(make_alg_step(s, st, a, b))
    return out


def alg_steps(s: AlgebraicTerm, policy: SplitPolicy = FULL) -> list[AlgStep]:
    require_positive(s.semiring, "algebraic reduction")
    policy.check(s.semiring)
    return _alg_steps(s, policy)


def alg_reducts(s: AlgebraicTerm, policy: SplitPolicy = FULL) -> list[tuple[AlgStep, AlgebraicTerm]]:
    return [(st, st.result) for st in alg_steps(s, policy)]


def validate_simple_step(st: SimpleStep) -> Optional[str]:
    """Re-derive the step from scratch; None when it is sound."""
    u = st.source
    semiring = st.result.semiring
    if st.kind == "beta":
        if not (isinstance(u, SApp) and isinstance(u.fun, SLam)):
            return "beta step on a non-redex"
        expected = alg.instantiate_simple(u.fun.body, 0, u.arg, semiring)
    elif st.kind == "lam":
        if not isinstance(u, SLam) or not isinstance(st.inner, SimpleStep) or st.inner.source != u.body:
            return "lam step does not match its source"
        why = validate_simple_step(st.inner)
        if why:
            return why
        expected = alg.alam(st.inner.result)
    elif st.kind == "fun":
        if not isinstance(u, SApp) or not isinstance(st.inner, SimpleStep) or st.inner.source != u.fun:
            return "fun step does not match its source"
        why = validate_simple_step(st.inner)
        if why:
            return why
        expected = alg.aapp(st.inner.result, u.arg)
    elif st.kind == "arg":
        if not isinstance(u, SApp) or not isinstance(st.inner, AlgStep) or st.inner.source != u.arg:
            return "arg step does not match its source"
        why = validate_alg_step(st.inner)
        if why:
            return why
        expected = alg.single(SApp(u.fun, st.inner.result), semiring)
    else:
        return f"unknown step kind {st.kind!r}"
    if expected != st.result:
        return f"{st.kind} step: recorded result differs from the recomputed one"
    return None


def validate_alg_step(st: AlgStep) -> Optional[str]:
    """Recheck split arithmetic, the inner step, and the recombination."""
    s = st.source
    if st.split.is_zero():
        return "selected weight is zero"
    c = s.coefficient(st.selected)
    if st.split + st.rest != c:
        return f"split {st.split} + {st.rest} does not recompose coefficient {c}"
    if st.inner.source != st.selected:
        return "inner step does not start at the selected simple term"
    why = validate_simple_step(st.inner)
    if why:
        return why
    expected = alg.add(alg.scale(st.split, st.inner.result), st.residual())
    if expected != st.result:
        return "recorded result is not the canonical recombination"
    return None


def find_simple_step(u: SimpleTerm, reduct: AlgebraicTerm, policy: SplitPolicy = FULL) -> Optional[SimpleStep]:
    """Recover a derivation of ``u → reduct``, if the policy can see one."""
    for st in simple_steps(u, reduct.semiring, policy):
        if st.result == reduct:
            return st
    return None


@dataclass(frozen=True)
class AlgTrace:
    start: AlgebraicTerm
    steps: tuple[AlgStep, ...] = ()

    @property
    def end(self) -> AlgebraicTerm:
        return self.steps[-1].result if self.steps else self.start

    @property
    def semiring(self) -> SemiringId:
        return self.start.semiring

    def __len__(self) -> int:
        return len(self.steps)

    def __bool__(self) -> bool:
        # a found trace is a positive answer even when it is empty
        return True

    def validate(self) -> Optional[str]:
        cur = self.start
        for i, st in enumerate(self.steps):
            if st.source != cur:
                return f"step {i}: source is not the previous state"
            why = validate_alg_step(st)
            if why:
                return f"step {i}: {why}"
            cur = st.result
        return None

    def then(self, other: "AlgTrace") -> "AlgTrace":
        if other.start != self.end:
            raise ValueError("traces do not compose: endpoint mismatch")
        return AlgTrace(self.start, self.steps + other.steps)


# -- parallel reduction -------------------------------------------------------------


def parallel_pure(m: RawTerm) -> RawTerm:
    """Contract every redex of ``m`` simultaneously."""
    if isinstance(m, Var):
        return m
    if isinstance(m, Lam):
        return Lam(parallel_pure(m.body), m.hint)
    if isinstance(m, App):
        a = parallel_pure(m.arg)
        if isinstance(m.fun, Lam):
            return instantiate(parallel_pure(m.fun.body), 0, a)
        return App(parallel_pure(m.fun), a)
    raise ValueError(f"not a pure term: {m!r}")


def parallel_simple(u: SimpleTerm, semiring: SemiringId) -> AlgebraicTerm:
    if isinstance(u, SVar):
        return alg.single(u, semiring)
    if isinstance(u, SLam):
        return alg.alam(parallel_simple(u.body, semiring), u.hint)
    a = parallel_reduce(u.arg)
    if isinstance(u.fun, SLam):
        return alg.instantiate_alg(parallel_simple(u.fun.body, semiring), 0, a)
    return alg.aapp(parallel_simple(u.fun, semiring), a)


def parallel_reduce(s: AlgebraicTerm) -> AlgebraicTerm:
    out = []
    for u, c in s.items:
        for v, e in parallel_simple(u, s.semiring).items:
            out.append((v, c * e))
    return alg.combination(s.semiring, out)


def is_normal(s: AlgebraicTerm) -> bool:
    require_positive(s.semiring, "normal-form detection")
    return all(not simple_steps(u, s.semiring) for u in s.support())


# -- searches -------------------------------------------------------------------------------


def _trace_from(parents: dict, start: AlgebraicTerm, node: AlgebraicTerm) -> AlgTrace:
    return AlgTrace(start, tuple(label for label, _ in _path(parents, node)))


def alg_reaches(s: AlgebraicTerm, t: AlgebraicTerm, fuel: int, policy: SplitPolicy = FULL) -> Union[AlgTrace, None, Unknown]:
    require_positive(s.semiring, "algebraic reachability")
    if s == t:
        return AlgTrace(s)
    parents: dict[AlgebraicTerm, object] = {s: None}
    queue = deque([s])
    used = 0
    while queue:
        if used >= fuel:
            return Unknown(fuel, used)
        cur = queue.popleft()
        used += 1
        for st in alg_steps(cur, policy):
            r = st.result
            if r in parents:
                continue
            parents[r] = (cur, st)
            if r == t:
                return _trace_from(parents, s, r)
            queue.append(r)
    return None


@dataclass(frozen=True)
class Join:
    meet: AlgebraicTerm
    left: AlgTrace
    right: AlgTrace


def joinable(s: AlgebraicTerm, t: AlgebraicTerm, fuel: int, policy: SplitPolicy = FULL) -> Union[Join, None, Unknown]:
    """Bidirectional breadth-first search for a common reduct.

    ``None`` means both reduct graphs were exhausted without meeting.
    """
    require_positive(s.semiring, "joinability search")
    if s.semiring is not t.semiring:
        raise ValueError("terms live in different semirings")
    if s == t:
        return Join(s, AlgTrace(s), AlgTrace(t))
    par = ({s: None}, {t: None})
    queues = (deque([s]), deque([t]))
    roots = (s, t)
    used = 0
    side = 0
    while queues[0] or queues[1]:
        if not queues[side]:
            side = 1 - side
        if used >= fuel:
            return Unknown(fuel, used)
        cur = queues[side].popleft()
        used += 1
        mine, other = par[side], par[1 - side]
        for st in alg_steps(cur, policy):
            r = st.result
            if r in mine:
                continue
            mine[r] = (cur, st)
            if r in other:
                a = _trace_from(par[0], roots[0], r)
                b = _trace_from(par[1], roots[1], r)
                return Join(r, a, b)
            queues[side].append(r)
        side = 1 - side
    return None
