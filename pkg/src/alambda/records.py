"""Lossless JSON-ready records for terms, traces and derivations.

Terms are nested records (``kind`` plus children); coefficients are exact
strings in the literal syntax of their semiring.  Every top-level record
has a ``version`` and a ``kind`` field.  Loading re-derives everything it
can and rejects records whose stored results disagree with the recomputed
ones.
"""

from __future__ import annotations

import json
from typing import Any, Iterable

from . import algebra as alg
from . import mashup, syntax
from .algebra import AlgebraicTerm, SApp, SimpleTerm, SLam, SVar
from .reduction import AlgStep, AlgTrace, BetaTrace, SimpleStep, make_alg_step
from .semiring import Coefficient, SemiringId, parse_coefficient, semiring_from_name
from .syntax import App, Lam, RawTerm, Scale, Sum, Var, Zero

VERSION = 1

__all__ = [
    "RecordError",
    "VERSION",
    "term_to",
    "term_from",
    "alg_to",
    "alg_from",
    "simple_to",
    "simple_from",
    "beta_trace_to",
    "beta_trace_from",
    "alg_trace_to",
    "alg_trace_from",
    "derivation_to",
    "derivation_from",
    "read_records",
    "find_record",
]


class RecordError(ValueError):
    """Malformed or inconsistent record."""


def _var_to(name) -> dict:
    return {"kind": "var", "index": name} if isinstance(name, int) else {"kind": "var", "name": name}


def _var_from(rec: dict):
    if "index" in rec:
        if not isinstance(rec["index"], int) or rec["index"] < 0:
            raise RecordError("variable index must be a non-negative integer")
        return rec["index"]
    if not isinstance(rec.get("name"), str):
        raise RecordError("variable record needs a name or an index")
    return rec["name"]


def _get(rec: Any, key: str):
    if not isinstance(rec, dict) or key not in rec:
        raise RecordError(f"missing field {key!r}")
    return rec[key]


def _coeff_from(text: Any, semiring: SemiringId) -> Coefficient:
    if not isinstance(text, str):
        raise RecordError("coefficients are stored as strings")
    try:
        return parse_coefficient(text, semiring)
    except ValueError as e:
        raise RecordError(str(e)) from None


# -- terms --------------------------------------------------------------------------------


def term_to(t: RawTerm) -> dict:
    if isinstance(t, Var):
        return _var_to(t.name)
    if isinstance(t, Lam):
        return {"kind": "lam", "hint": t.hint, "body": term_to(t.body)}
    if isinstance(t, App):
        return {"kind": "app", "fun": term_to(t.fun), "arg": term_to(t.arg)}
    if isinstance(t, Zero):
        return {"kind": "zero"}
    if isinstance(t, Sum):
        return {"kind": "sum", "left": term_to(t.left), "right": term_to(t.right)}
    return {"kind": "scale", "coeff": str(t.coeff), "body": term_to(t.body)}


def term_from(rec: Any, semiring: SemiringId = SemiringId.NAT) -> RawTerm:
    kind = _get(rec, "kind")
    if kind == "var":
        return Var(_var_from(rec))
    if kind == "lam":
        return Lam(term_from(_get(rec, "body"), semiring), rec.get("hint", "x"))
    if kind == "app":
        return App(term_from(_get(rec, "fun"), semiring), term_from(_get(rec, "arg"), semiring))
    if kind == "zero":
        return Zero()
    if kind == "sum":
        return Sum(term_from(_get(rec, "left"), semiring), term_from(_get(rec, "right"), semiring))
    if kind == "scale":
        return Scale(_coeff_from(_get(rec, "coeff"), semiring), term_from(_get(rec, "body"), semiring))
    raise RecordError(f"unknown term kind {kind!r}")


def simple_to(u: SimpleTerm) -> dict:
    if isinstance(u, SVar):
        return _var_to(u.name)
    if isinstance(u, SLam):
        return {"kind": "lam", "hint": u.hint, "body": simple_to(u.body)}
    return {"kind": "app", "fun": simple_to(u.fun), "arg": alg_to(u.arg)}


def simple_from(rec: Any, semiring: SemiringId) -> SimpleTerm:
    kind = _get(rec, "kind")
    if kind == "var":
        return SVar(_var_from(rec))
    if kind == "lam":
        return SLam(simple_from(_get(rec, "body"), semiring), rec.get("hint", "x"))
    if kind == "app":
        return SApp(simple_from(_get(rec, "fun"), semiring), alg_from(_get(rec, "arg"), semiring))
    raise RecordError(f"unknown simple-term kind {kind!r}")


def alg_to(s: AlgebraicTerm) -> dict:
    return {
        "kind": "combination",
        "terms": [{"coeff": str(c), "simple": simple_to(u)} for u, c in s.items],
    }


def alg_from(rec: Any, semiring: SemiringId) -> AlgebraicTerm:
    if _get(rec, "kind") != "combination":
        raise RecordError("expected a combination record")
    terms = _get(rec, "terms")
    if not isinstance(terms, list):
        raise RecordError("combination terms must be a list")
    pairs = [(simple_from(_get(t, "simple"), semiring), _coeff_from(_get(t, "coeff"), semiring)) for t in terms]
    s = alg.combination(semiring, pairs)
    if len(s) != len(pairs):
        raise RecordError("combination record is not in canonical form")
    return s


# -- traces --------------------------------------------------------------------------------


def beta_trace_to(tr: BetaTrace) -> dict:
    return {
        "start": term_to(tr.start),
        "steps": [{"position": list(p), "term": term_to(t), "text": syntax.show(t)} for p, t in tr.steps],
    }


def beta_trace_from(rec: Any) -> BetaTrace:
    steps = []
    for st in _get(rec, "steps"):
        pos = _get(st, "position")
        if not isinstance(pos, list) or not all(isinstance(i, int) for i in pos):
            raise RecordError("positions are lists of integers")
        steps.append((tuple(pos), term_from(_get(st, "term"))))
    return BetaTrace(term_from(_get(rec, "start")), tuple(steps))


def _simple_step_to(st: SimpleStep) -> dict:
    if st.kind == "beta":
        return {"kind": "beta"}
    if st.kind == "arg":
        return {"kind": "arg", "inner": _alg_step_to(st.inner)}
    return {"kind": st.kind, "inner": _simple_step_to(st.inner)}


def _simple_step_from(u: SimpleTerm, rec: Any, semiring: SemiringId) -> SimpleStep:
    kind = _get(rec, "kind")
    if kind == "beta":
        if not (isinstance(u, SApp) and isinstance(u.fun, SLam)):
            raise RecordError("beta step recorded on a non-redex")
        return SimpleStep("beta", u, alg.instantiate_simple(u.fun.body, 0, u.arg, semiring))
    if kind == "lam" and isinstance(u, SLam):
        inner = _simple_step_from(u.body, _get(rec, "inner"), semiring)
        return SimpleStep("lam", u, alg.alam(inner.result, u.hint), inner)
    if kind == "fun" and isinstance(u, SApp):
        inner = _simple_step_from(u.fun, _get(rec, "inner"), semiring)
        return SimpleStep("fun", u, alg.aapp(inner.result, u.arg), inner)
    if kind == "arg" and isinstance(u, SApp):
        inner = _alg_step_from(u.arg, _get(rec, "inner"))
        return SimpleStep("arg", u, alg.single(SApp(u.fun, inner.result), semiring), inner)
    raise RecordError(f"step kind {kind!r} does not fit its source")


def _alg_step_to(st: AlgStep) -> dict:
    return {
        "selected": simple_to(st.selected),
        "selected_text": str(st.selected),
        "split": str(st.split),
        "rest": str(st.rest),
        "step": _simple_step_to(st.inner),
        "reduct": alg_to(st.reduct),
        "result": alg_to(st.result),
        "result_text": str(st.result),
    }


def _alg_step_from(source: AlgebraicTerm, rec: Any) -> AlgStep:
    s = source.semiring
    selected = simple_from(_get(rec, "selected"), s)
    split = _coeff_from(_get(rec, "split"), s)
    rest = _coeff_from(_get(rec, "rest"), s)
    inner = _simple_step_from(selected, _get(rec, "step"), s)
    st = make_alg_step(source, inner, split, rest)
    if "result" in rec and alg_from(rec["result"], s) != st.result:
        raise RecordError("recorded result differs from the recomputed one")
    if "reduct" in rec and alg_from(rec["reduct"], s) != st.reduct:
        raise RecordError("recorded reduct differs from the recomputed one")
    return st


def alg_trace_to(tr: AlgTrace, **extra) -> dict:
    rec = {
        "version": VERSION,
        "kind": "alg-trace",
        "semiring": tr.semiring.value,
        "start": alg_to(tr.start),
        "start_text": str(tr.start),
        "steps": [_alg_step_to(st) for st in tr.steps],
    }
    rec.update(extra)
    return rec


def alg_trace_from(rec: Any) -> AlgTrace:
    if _get(rec, "kind") != "alg-trace":
        raise RecordError("expected an alg-trace record")
    s = _semiring(rec)
    cur = start = alg_from(_get(rec, "start"), s)
    steps = []
    for st_rec in _get(rec, "steps"):
        st = _alg_step_from(cur, st_rec)
        steps.append(st)
        cur = st.result
    return AlgTrace(start, tuple(steps))


def _semiring(rec: Any) -> SemiringId:
    try:
        return semiring_from_name(_get(rec, "semiring"))
    except ValueError as e:
        raise RecordError(str(e)) from None


# -- derivations --------------------------------------------------------------------------


def _node_to(d: mashup.Derivation) -> dict:
    base = {"subject": term_to(d.subject), "subject_text": syntax.show(d.subject)}
    if isinstance(d, mashup.VNode):
        base.update(rule="v", trace=beta_trace_to(d.trace), var=_var_to(d.var))
    elif isinstance(d, mashup.LamNode):
        base.update(rule="lam", trace=beta_trace_to(d.trace), body=_node_to(d.body))
    elif isinstance(d, mashup.AppNode):
        base.update(rule="app", trace=beta_trace_to(d.trace), fun=_node_to(d.fun), arg=_node_to(d.arg))
    elif isinstance(d, mashup.ZeroNode):
        base.update(rule="zero")
    else:
        base.update(rule="plus", coeff=str(d.coeff), left=_node_to(d.left), right=_node_to(d.right))
    base["conclusion"] = str(mashup.rhs(d))
    return base


def _node_from(rec: Any, s: SemiringId) -> mashup.Derivation:
    rule = _get(rec, "rule")
    if rule == "v":
        return mashup.VNode(beta_trace_from(_get(rec, "trace")), _var_from(_get(rec, "var")), s)
    if rule == "lam":
        return mashup.LamNode(beta_trace_from(_get(rec, "trace")), _node_from(_get(rec, "body"), s))
    if rule == "app":
        return mashup.AppNode(
            beta_trace_from(_get(rec, "trace")), _node_from(_get(rec, "fun"), s), _node_from(_get(rec, "arg"), s)
        )
    if rule == "zero":
        return mashup.ZeroNode(term_from(_get(rec, "subject")), s)
    if rule == "plus":
        return mashup.PlusNode(
            _coeff_from(_get(rec, "coeff"), s), _node_from(_get(rec, "left"), s), _node_from(_get(rec, "right"), s)
        )
    raise RecordError(f"unknown rule {rule!r}")


def derivation_to(d: mashup.Derivation) -> dict:
    return {
        "version": VERSION,
        "kind": "derivation",
        "semiring": d.semiring.value,
        "judgement": "⊢" if d.simple else "⊩",
        "root": _node_to(d),
    }


def derivation_from(rec: Any) -> mashup.Derivation:
    if _get(rec, "kind") != "derivation":
        raise RecordError("expected a derivation record")
    return _node_from(_get(rec, "root"), _semiring(rec))


# -- files ----------------------------------------------------------------------------------


def read_records(text: str) -> list[dict]:
    """Parse a JSON document or JSON-lines stream into records."""
    text = text.strip()
    if not text:
        raise RecordError("empty input")
    try:
        doc = json.loads(text)
        return doc if isinstance(doc, list) else [doc]
    except json.JSONDecodeError:
        pass
    out = []
    for i, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            out.append(json.loads(line))
        except json.JSONDecodeError as e:
            raise RecordError(f"line {i}: {e}") from None
    return out


def find_record(records: Iterable[dict], kind: str) -> dict:
    for r in records:
        if isinstance(r, dict) and r.get("kind") == kind:
            if r.get("version") != VERSION:
                raise RecordError(f"unsupported record version {r.get('version')!r}")
            return r
    raise RecordError(f"no {kind!r} record found")
