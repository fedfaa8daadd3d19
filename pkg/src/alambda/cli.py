"""Command-line interface.

Exit codes: 0 success, 1 negative verdict, 2 input error, 3 normal form
reached early, 4 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import algebra as alg
from . import conservativity as cons
from . import mashup, records, syntax
from .reduction import SplitPolicy, Unknown, alg_steps, beta_reaches, beta_reducts
from .semiring import PositivityRequired, SemiringId, semiring_from_name

OK, NEGATIVE, INPUT_ERROR, NORMAL_EARLY, UNKNOWN = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


class Session:
    def __init__(self, args: argparse.Namespace):
        if args.fuel <= 0:
            raise InputError("--fuel must be positive")
        self.semiring: SemiringId = semiring_from_name(args.semiring)
        self.fuel: int = args.fuel
        self.policy = SplitPolicy(args.split)
        try:
            self.policy.check(self.semiring)
        except ValueError as e:
            raise InputError(str(e)) from None
        self.json = args.format == "json-lines"
        self.out = sys.stdout

    def header(self, command: str) -> None:
        if self.json:
            self.emit({"kind": "header", "command": command, "semiring": self.semiring.value,
                       "fuel": self.fuel, "split": self.policy.name})
        else:
            print(f"# {command}: semiring={self.semiring.value} fuel={self.fuel} split={self.policy.name}", file=self.out)

    def emit(self, rec: dict) -> None:
        rec = {"version": records.VERSION, **rec}
        print(json.dumps(rec, ensure_ascii=False, sort_keys=True), file=self.out)

    def say(self, text: str) -> None:
        print(text, file=self.out)

    def term(self, text: str) -> syntax.RawTerm:
        if text.startswith("@"):
            try:
                text = Path(text[1:]).read_text(encoding="utf-8")
            except OSError as e:
                raise InputError(str(e)) from None
        try:
            return syntax.parse(text, self.semiring)
        except ValueError as e:
            raise InputError(f"parse error: {e}") from None

    def pure(self, text: str) -> syntax.RawTerm:
        t = self.term(text)
        if not syntax.is_pure(t):
            raise InputError(f"{text!r} is not a pure lambda-term")
        return t

    def load(self, path: str, kind: str) -> dict:
        try:
            text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
            return records.find_record(records.read_records(text), kind)
        except (OSError, records.RecordError) as e:
            raise InputError(str(e)) from None


def _show_trace(sess: Session, trace) -> None:
    sess.say(f"0: {syntax.show(trace.start)}")
    for i, (pos, t) in enumerate(trace.steps, 1):
        where = ".".join(map(str, pos)) or "ε"
        sess.say(f"{i}: {syntax.show(t)}    [at {where}]")


def _show_derivation(d: mashup.Derivation, indent: str = "") -> list[str]:
    turn = "⊢" if d.simple else "⊩"
    head = f"{indent}{syntax.show(d.subject)} {turn} {mashup.rhs(d)}"
    if isinstance(d, mashup.VNode):
        return [f"{head}   (v, {len(d.trace)} β)"]
    if isinstance(d, mashup.LamNode):
        return [f"{head}   (λ, {len(d.trace)} β)"] + _show_derivation(d.body, indent + "  ")
    if isinstance(d, mashup.AppNode):
        return ([f"{head}   (a, {len(d.trace)} β)"] + _show_derivation(d.fun, indent + "  ")
                + _show_derivation(d.arg, indent + "  "))
    if isinstance(d, mashup.ZeroNode):
        return [f"{head}   (0)"]
    return [f"{head}   (+, a={d.coeff})"] + _show_derivation(d.left, indent + "  ") + _show_derivation(d.right, indent + "  ")


def cmd_canon(sess: Session, args) -> int:
    s = alg.canonicalize(sess.term(args.term), sess.semiring)
    if sess.json:
        sess.emit({"kind": "combination", "text": str(s), "term": records.alg_to(s)})
    else:
        sess.say(str(s))
    return OK


def cmd_support(sess: Session, args) -> int:
    s = alg.canonicalize(sess.term(args.term), sess.semiring)
    items = [str(u) for u in alg.support(s)]
    if sess.json:
        sess.emit({"kind": "support", "terms": items})
    else:
        for u in items:
            sess.say(u)
    return OK


def cmd_lambda_support(sess: Session, args) -> int:
    s = alg.canonicalize(sess.term(args.term), sess.semiring)
    items = sorted(syntax.show(m) for m in alg.lambda_support(s))
    if sess.json:
        sess.emit({"kind": "lambda-support", "terms": items})
    else:
        for m in items:
            sess.say(m)
    return OK


def cmd_reduce(sess: Session, args) -> int:
    from .reduction import AlgTrace

    if args.steps < 0:
        raise InputError("--steps must be non-negative")
    cur = start = alg.canonicalize(sess.term(args.term), sess.semiring)
    steps = []
    early = False
    for _ in range(args.steps):
        options = alg_steps(cur, sess.policy)
        if not options:
            early = True
            break
        steps.append(options[0])
        cur = options[0].result
    trace = AlgTrace(start, tuple(steps))
    sess.header("reduce")
    if sess.json:
        sess.emit(records.alg_trace_to(trace, normal_form_reached=early))
    else:
        sess.say(f"0: {start}")
        for i, st in enumerate(steps, 1):
            sess.say(f"{i}: {st.result}    [{st.split}.{st.selected}]")
        if early:
            sess.say(f"note: normal form reached after {len(steps)} step(s)")
    return NORMAL_EARLY if early else OK


def cmd_beta(sess: Session, args) -> int:
    m = sess.pure(args.term)
    sess.header("beta")
    if args.target is None:
        reducts = beta_reducts(m)
        if sess.json:
            sess.emit({"kind": "beta-reducts", "reducts": [
                {"position": list(p), "text": syntax.show(t)} for p, t in reducts]})
        else:
            for p, t in reducts:
                sess.say(f"[at {'.'.join(map(str, p)) or 'ε'}] {syntax.show(t)}")
        return OK
    n = sess.pure(args.target)
    res = beta_reaches(m, n, sess.fuel)
    if isinstance(res, Unknown):
        return _unknown(sess, res)
    if res is None:
        sess.emit({"kind": "verdict", "verdict": "unreachable"}) if sess.json else sess.say(
            "unreachable: the reduct graph was exhausted")
        return NEGATIVE
    if sess.json:
        sess.emit({"kind": "beta-trace", **records.beta_trace_to(res)})
    else:
        _show_trace(sess, res)
    return OK


def _unknown(sess: Session, res: Unknown) -> int:
    if sess.json:
        sess.emit({"kind": "verdict", "verdict": "unknown", "reason": res.reason})
    else:
        sess.say(f"unknown: {res.reason}")
    return UNKNOWN


def cmd_prove(sess: Session, args) -> int:
    m = sess.pure(args.term)
    goal = alg.canonicalize(sess.term(args.goal), sess.semiring)
    sess.header("prove")
    res = mashup.prove(m, goal, sess.fuel)
    if isinstance(res, Unknown):
        return _unknown(sess, res)
    if res is None:
        sess.emit({"kind": "verdict", "verdict": "no derivation"}) if sess.json else sess.say(
            "no derivation: all relevant reduct graphs exhausted")
        return NEGATIVE
    if sess.json:
        sess.emit(records.derivation_to(res))
    else:
        for line in _show_derivation(res):
            sess.say(line)
    return OK


def cmd_check(sess: Session, args) -> int:
    rec = sess.load(args.file, "derivation")
    try:
        d = records.derivation_from(rec)
    except (records.RecordError, ValueError) as e:
        raise InputError(str(e)) from None
    v = mashup.check(d)
    claimed = rec.get("root", {}).get("conclusion")
    if v and claimed is not None and claimed != str(v.judgement.rhs):
        v = mashup.Invalid((), f"recorded conclusion {claimed!r} differs from the derived {v.judgement.rhs}")
    if sess.json:
        sess.emit({"kind": "verdict", "verdict": "valid" if v else "invalid",
                   "detail": str(v.judgement) if v else str(v)})
    else:
        sess.say(f"valid: {v.judgement}" if v else str(v))
    return OK if v else NEGATIVE


def cmd_conserve(sess: Session, args) -> int:
    rec = sess.load(args.file, "alg-trace")
    try:
        trace = records.alg_trace_from(rec)
    except (records.RecordError, ValueError) as e:
        raise InputError(str(e)) from None
    sess.header("conserve")
    try:
        cert = cons.conserve(trace)
    except (cons.ConservativityError, mashup.DerivationError, PositivityRequired) as e:
        sess.emit({"kind": "verdict", "verdict": "rejected", "detail": str(e)}) if sess.json else sess.say(
            f"rejected: {e}")
        return NEGATIVE
    if sess.json:
        sess.emit({
            "kind": "certificate",
            "source": syntax.show(cert.source),
            "target": syntax.show(cert.target),
            "alg_steps": len(cert.alg),
            "derivations": [str(mashup.rhs(d)) for d in cert.derivations],
            "beta": records.beta_trace_to(cert.beta),
        })
    else:
        sess.say(f"{syntax.show(cert.source)} ~>* {syntax.show(cert.target)} in {len(cert.alg)} algebraic step(s)")
        for i, d in enumerate(cert.derivations):
            sess.say(f"  derivation {i}: {syntax.show(cert.source)} ⊩ {mashup.rhs(d)}")
        sess.say("beta trace:")
        _show_trace(sess, cert.beta)
    return OK


def cmd_equiv(sess: Session, args) -> int:
    m, n = sess.pure(args.left), sess.pure(args.right)
    sess.header("equiv")
    res = cons.equiv_check(m, n, sess.fuel, sess.policy, sess.semiring)
    if isinstance(res, Unknown):
        return _unknown(sess, res)
    if sess.json:
        sess.emit({
            "kind": "verdict", "verdict": "equivalent", "k": res.k, "meet": str(res.meet),
            "join_left": records.alg_trace_to(res.join_left),
            "join_right": records.alg_trace_to(res.join_right),
            "to_parallel": records.alg_trace_to(res.to_parallel),
            "beta": records.beta_trace_to(res.beta),
        })
    else:
        sess.say(f"equivalent: meet {res.meet} (k = {res.k})")
        sess.say(f"common reduct of the parallel reducts: {syntax.show(res.beta.end)}")
        sess.say("beta trace of the right-hand term:")
        _show_trace(sess, res.beta)
    return OK


DEMOS = {
    "claim21": cons.claim21_counterexample,
    "subars": cons.non_sub_ars_witness,
    "inconsistency": cons.inconsistency_demo,
}


def cmd_demo(sess: Session, args) -> int:
    rep = DEMOS[args.name]()
    sess.header(f"demo {args.name}")
    if sess.json:
        sess.emit(rep.to_record())
    else:
        sess.say(rep.to_text())
    return OK if rep.ok else NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--semiring", default="nat", choices=[s.value for s in SemiringId])
    common.add_argument("--fuel", type=int, default=10000)
    common.add_argument("--split", default="full", choices=["full", "unit", "half"])
    common.add_argument("--format", default="text", choices=["text", "json-lines"])

    p = argparse.ArgumentParser(prog="alambda", description="Algebraic lambda-calculus toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    add("canon", cmd_canon, "print the canonical form of a term").add_argument("term")
    add("support", cmd_support, "print the support of a term").add_argument("term")
    add("lambda-support", cmd_lambda_support, "print the pure terms selected by Λ(σ)").add_argument("term")
    sp = add("reduce", cmd_reduce, "leftmost algebraic reduction")
    sp.add_argument("term")
    sp.add_argument("--steps", type=int, default=1)
    sp = add("beta", cmd_beta, "one-step beta-reducts, or a search for a target")
    sp.add_argument("term")
    sp.add_argument("target", nargs="?")
    sp = add("prove", cmd_prove, "search for a mashup derivation TERM ⊩ GOAL")
    sp.add_argument("term")
    sp.add_argument("goal")
    add("check", cmd_check, "re-check a serialized derivation").add_argument("file")
    add("conserve", cmd_conserve, "turn an algebraic trace into a beta trace").add_argument("file")
    sp = add("equiv", cmd_equiv, "bounded equivalence check of two pure terms")
    sp.add_argument("left")
    sp.add_argument("right")
    add("demo", cmd_demo, "run a built-in demonstration").add_argument("name", choices=sorted(DEMOS))
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else OK
    try:
        sess = Session(args)
        return args.fn(sess, args)
    except (InputError, PositivityRequired) as e:
        print(f"alambda: error: {e}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
