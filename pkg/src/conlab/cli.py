"""Command-line front end: ``conlab <subcommand> ...``.

Exit status 0 on success, 1 when the input is well formed but the operation
fails (bad formula, missing valuation entry, ...), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import contextlib
import hashlib
import json
import sys
from dataclasses import dataclass
from typing import Optional

from conlab import arithmetization as A
from conlab import construction as C
from conlab import entailment as E
from conlab import gl
from conlab import modal as m
from conlab import operators as O
from conlab import syntax as sx


@dataclass(frozen=True)
class RunConfig:
    mode: str = "modal"
    valuation: Optional[str] = None
    stages: int = 2
    budget: Optional[int] = None
    enumeration: str = "atoms"
    format: str = "text"


class UsageError(Exception):
    pass


class DomainError(Exception):
    pass


def _config(args) -> RunConfig:
    cfg = RunConfig(
        mode=getattr(args, "mode", "modal"),
        valuation=getattr(args, "valuation", None),
        stages=getattr(args, "stages", 2),
        budget=getattr(args, "budget", None),
        enumeration=getattr(args, "enumeration", "atoms"),
        format=getattr(args, "format", "text"),
    )
    if cfg.mode == "modal" and cfg.budget is not None:
        raise UsageError("--budget only applies in arith mode")
    if cfg.stages is not None and cfg.stages < 0:
        raise UsageError("--stages must be at least 0")
    return cfg


def _valuation(path: Optional[str], others: Optional[str]) -> m.Valuation:
    default = None if others is None else others == "true"
    if path is None:
        if default is None:
            raise UsageError("this command needs --valuation FILE or --others true|false")
        return m.Valuation((), default)
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read valuation {path}: {exc}") from None
    if not isinstance(data, dict):
        raise DomainError("a valuation file holds a JSON object like {\"p0\": true}")
    return m.Valuation.from_json(data, default)


def _modal(text: str) -> m.ModalFormula:
    return m.parse_modal(text)


def _arith(text: str) -> sx.Formula:
    return sx.parse_formula(text)


def _emit(cfg: RunConfig, text: str, data: dict) -> str:
    if cfg.format == "json":
        return json.dumps(data, indent=2, sort_keys=True)
    return text


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _summary(f: sx.Formula) -> dict:
    return {"level": str(sx.classify(f)), "size": sx.size(f), "closed": sx.is_sentence(f),
            "digest": _digest(sx.print_formula(f))}


def _summary_text(name: str, f: sx.Formula) -> str:
    s = _summary(f)
    return f"{name}: {s['level']}, {s['size']} nodes, digest {s['digest']}"


# ---------------------------------------------------------------- commands


def cmd_parse(args, cfg):
    if cfg.mode == "modal":
        f = _modal(args.text)
        return _emit(cfg, str(f), {"formula": str(f), "size": m.size(f)})
    f = _arith(args.text)
    return _emit(cfg, sx.print_formula(f), {"formula": sx.print_formula(f), "size": sx.size(f),
                                           "free": sorted(sx.free_variables(f))})


def cmd_classify(args, cfg):
    f = _arith(args.text)
    level = str(sx.classify(f))
    return _emit(cfg, level, {"formula": sx.print_formula(f), "level": level})


def cmd_con(args, cfg):
    if cfg.mode == "modal":
        f = m.mock_con(_modal(args.phi))
        return _emit(cfg, str(f), {"formula": str(f)})
    f = A.build_con(A.ea_theory(), _arith(args.phi))
    if args.full:
        return sx.print_formula(f)
    return _emit(cfg, _summary_text("Con", f), _summary(f))


def _ordinal(text: str):
    if text == "omega":
        return A.OMEGA
    try:
        n = int(text)
    except ValueError:
        raise UsageError("--alpha takes a natural number or 'omega'") from None
    if n < 0:
        raise UsageError("--alpha takes a natural number or 'omega'")
    return n


def cmd_itcon(args, cfg):
    alpha = _ordinal(args.alpha)
    if cfg.mode == "modal":
        if alpha == A.OMEGA:
            raise DomainError("the modal surrogate has no omega-iterated consistency")
        f = m.mock_iterated_con(alpha, _modal(args.phi))
        return _emit(cfg, str(f), {"formula": str(f)})
    f = A.build_iterated_con(A.ea_theory(), alpha, _arith(args.phi))
    if args.full:
        return sx.print_formula(f)
    return _emit(cfg, _summary_text(f"Con^{args.alpha}", f), _summary(f))


def cmd_diagonal(args, cfg):
    psi = _arith(args.psi)
    d = A.diagonal(psi)
    inst = d.instance()
    data = {"shape_ok": d.shape_ok(), "sentence": _summary(d.sentence)}
    if sx.is_delta0(inst):
        data["instance_true"] = sx.evaluate_bounded(inst)
    lines = [f"shape identity: {'ok' if data['shape_ok'] else 'FAILED'}", _summary_text("fixed point", d.sentence)]
    if "instance_true" in data:
        lines.append(f"instance evaluates to {str(data['instance_true']).lower()}")
    return _emit(cfg, "\n".join(lines), data)


def cmd_gl(args, cfg):
    f = _modal(args.prove)
    if args.oracle is not None:
        verdict = gl.kripke_oracle(f, args.oracle)
    else:
        verdict = gl.gl_prove(f)
    data = {"formula": str(f), "verdict": str(verdict)}
    text = str(verdict)
    if verdict.countermodel is not None:
        data["countermodel"] = verdict.countermodel.describe()
        if args.countermodel:
            text += "\n" + verdict.countermodel.describe()
    if args.normal_form:
        if m.atoms(f):
            raise DomainError("normal forms are only defined for sentences without atoms")
        nf = gl.closed_normal_form(f).to_formula()
        data["normal_form"] = str(nf)
        text += f"\nnormal form: {nf}"
    return _emit(cfg, text, data)


def _no_truth_in_arith(cfg):
    if cfg.mode == "arith":
        raise UsageError("truth is only decidable in modal mode")


def cmd_truth(args, cfg):
    _no_truth_in_arith(cfg)
    f = _modal(args.formula)
    v = _valuation(cfg.valuation, args.others)
    value = gl.truth(f, v)
    return _emit(cfg, str(value).lower(), {"formula": str(f), "truth": value})


def cmd_build_a(args, cfg):
    T = A.ea_theory()
    graphs = {"identity": A.graph_identity, "const_top": A.graph_const_top, "con_op": lambda: A.graph_con(T)}
    f = A.build_sentence_A(graphs[args.graph](), args.k, T)
    if args.full:
        return sx.print_formula(f)
    return _emit(cfg, _summary_text("A", f), _summary(f))


def _trace(cfg) -> C.ConstructionTrace:
    if cfg.mode == "arith":
        T = A.ea_theory()
        return C.run_stages(C.arith_enumeration(), cfg.stages, lambda f: A.build_con(T, f))
    return C.run_stages(C.ENUMERATIONS[cfg.enumeration](), cfg.stages)


def cmd_construct(args, cfg):
    if cfg.mode == "arith" and cfg.stages > 1:
        raise UsageError("arith traces are limited to --stages 1")
    tr = _trace(cfg)
    if cfg.format == "json":
        return tr.dumps()
    lines = []
    for s in tr.stages:
        lines.append(f"stage {s.stage}")
        for label, items in (("numerated", s.numerated), ("activated", s.activated), ("deactivated", s.deactivated)):
            for f in items:
                lines.append(f"  {label}: {C._text(f)}")
    lines.append(f"total numerated: {len(tr.numerated())}")
    return "\n".join(lines)


def cmd_tree(args, cfg):
    if cfg.mode == "arith":
        raise UsageError("the tree needs decidable consistency; use --mode modal")
    tr = _trace(cfg)
    forest = C.tree(tr)
    marked = []
    if cfg.valuation or args.others:
        marked = C.true_branch(tr, _valuation(cfg.valuation, args.others))
    if cfg.format == "dot":
        return forest.to_dot(marked)
    if cfg.format == "json":
        return json.dumps({"nodes": [
            {"sentence": str(nd.sentence), "parent": None if nd.parent is None else str(nd.parent),
             "stage": nd.stage, "true_branch": nd.sentence in marked}
            for nd in forest.nodes]}, indent=2, sort_keys=True)
    lines = []

    def walk(s, depth):
        lines.append("  " * depth + str(s) + (" *" if s in marked else ""))
        for child in forest.node(s).children:
            walk(child, depth + 1)

    for root in forest.roots:
        walk(root, 0)
    return "\n".join(lines)


def cmd_g_apply(args, cfg):
    if cfg.mode == "arith":
        raise UsageError("g-apply runs on the modal surrogate")
    tr = _trace(cfg)
    out = O.thm13_g(_modal(args.input), tr)
    return _emit(cfg, str(out), {"input": args.input, "output": str(out)})


def cmd_dichotomy(args, cfg):
    _no_truth_in_arith(cfg)
    ops = dict(O.OPERATORS)
    ops.update({f"con_{n}_op": O.con_n_op(n) for n in range(1, 5)})
    if args.operator not in ops:
        raise UsageError(f"unknown operator {args.operator}; choose from {', '.join(sorted(ops))}")
    v = _valuation(cfg.valuation, args.others)
    report = O.dichotomy(ops[args.operator], v, samples=args.samples)
    text = f"{report.case} generator={report.generator} samples={len(report.samples)} failures={len(report.failures)}"
    return _emit(cfg, text, report.to_json())


def cmd_claims(args, cfg):
    _no_truth_in_arith(cfg)
    tr = _trace(cfg)
    v = _valuation(cfg.valuation, args.others)
    results = O.thm13_claims_suite(tr, v)
    if cfg.format == "json":
        return json.dumps([r.to_json() for r in results], indent=2, sort_keys=True)
    lines = [f"{'ok  ' if r.verdict else 'FAIL'} {r.claim}: {r.instance}" for r in results]
    failed = sum(not r.verdict for r in results)
    lines.append(f"{len(results)} checks, {failed} failed")
    return "\n".join(lines)


def cmd_certify(args, cfg):
    T = A.ea_theory()
    ops = O.arith_operators(T)
    g = ops[args.operator]
    sentence_a = A.build_sentence_A(g.graph, args.k, T)
    phi = sentence_a if args.phi is None else _arith(args.phi)
    store = E.FactStore([O.cone_fact(phi, sentence_a)])
    try:
        cert = O.thm4_certificate(phi, g, args.k, T, store)
    except O.CertificateError as exc:
        raise DomainError(str(exc)) from None
    result = E.check_certificate(cert, store)
    dump = E.dump_certificate(cert)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dump)
    data = {"accepted": result.ok, "steps": len(cert), "failed_step": result.failed_step,
            "digest": _digest(dump), "justifications": [type(s.justification).__name__ for s in cert.steps]}
    status = "accepted" if result.ok else f"rejected at step {result.failed_step}: {result.reason}"
    text = f"certificate {status}; {len(cert)} steps; digest {data['digest']}\n" + "\n".join(
        f"  {i} {name}" for i, name in enumerate(data["justifications"], 1))
    return _emit(cfg, text, data)


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conlab", description="Consistency operators and the Lindenbaum algebra, at desk scale.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, mode=True, fmt=("text", "json")):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(fn=fn, usage=sp.format_usage)
        if mode:
            sp.add_argument("--mode", choices=("modal", "arith"), default="modal")
        sp.add_argument("--format", choices=fmt, default="text")
        return sp

    sp = add("parse", cmd_parse, "parse and print a formula")
    sp.add_argument("text")
    sp = add("classify", cmd_classify, "arithmetical hierarchy level of a formula", mode=False)
    sp.add_argument("text")
    sp = add("con", cmd_con, "the consistency statement of a sentence")
    sp.add_argument("--phi", required=True)
    sp.add_argument("--full", action="store_true", help="print the whole arithmetic formula")
    sp = add("itcon", cmd_itcon, "iterated consistency")
    sp.add_argument("--alpha", required=True, help="a natural number or omega")
    sp.add_argument("--phi", required=True)
    sp.add_argument("--full", action="store_true")
    sp = add("diagonal", cmd_diagonal, "fixed point of a one-variable formula", mode=False)
    sp.add_argument("--psi", required=True)
    sp = add("gl", cmd_gl, "decide a modal formula in GL", mode=False)
    sp.add_argument("--prove", required=True)
    sp.add_argument("--oracle", type=int, metavar="MAX_WORLDS", help="use the Kripke oracle instead")
    sp.add_argument("--countermodel", action="store_true")
    sp.add_argument("--normal-form", action="store_true")
    sp = add("truth", cmd_truth, "truth of a surrogate sentence under a valuation")
    sp.add_argument("--formula", required=True)
    sp.add_argument("--valuation")
    sp.add_argument("--others", choices=("true", "false"))
    sp = add("build-a", cmd_build_a, "the sentence A for a registered graph", mode=False)
    sp.add_argument("--graph", choices=("identity", "const_top", "con_op"), default="con_op")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--full", action="store_true")
    for name, fn, help_text, fmt in (
        ("construct", cmd_construct, "run the stages of the construction", ("text", "json")),
        ("tree", cmd_tree, "the tree of consistent numerated sentences", ("text", "json", "dot")),
        ("g-apply", cmd_g_apply, "apply the vacillating operator", ("text", "json")),
        ("claims", cmd_claims, "check the claims along the true branch", ("text", "json")),
    ):
        sp = add(name, fn, help_text, fmt=fmt)
        sp.add_argument("--stages", type=int, default=2, help="index of the last stage")
        sp.add_argument("--enumeration", choices=tuple(C.ENUMERATIONS), default="atoms")
        sp.add_argument("--budget", type=int)
        if name in ("tree", "claims"):
            sp.add_argument("--valuation")
            sp.add_argument("--others", choices=("true", "false"))
        if name == "g-apply":
            sp.add_argument("--input", required=True)
    sp = add("dichotomy", cmd_dichotomy, "run the dichotomy experiment for an operator")
    sp.add_argument("--operator", required=True)
    sp.add_argument("--samples", type=int, default=25)
    sp.add_argument("--valuation")
    sp.add_argument("--others", choices=("true", "false"))
    sp = add("certify", cmd_certify, "generate and check the cone certificate", mode=False)
    sp.add_argument("--operator", choices=("con_op", "identity", "const_top"), default="con_op")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--phi", help="input sentence (default: A itself)")
    sp.add_argument("--out", help="write the serialized certificate here")
    return p


DOMAIN_ERRORS = (sx.ParseError, m.ModalParseError, m.MissingAtom, A.ArithmetizationError, C.NotOnTrueBranch,
                 C.TreeError, E.OracleRequired, gl.NotClosed, ValueError, DomainError)


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))
    try:
        cfg = _config(args)
        text = args.fn(args, cfg)
    except UsageError as exc:
        print(args.usage(), end="", file=err)
        print(f"conlab {args.command}: {exc}", file=err)
        return 2
    except DOMAIN_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"conlab {args.command}: error: {msg}", file=err)
        return 1
    print(text, file=out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
