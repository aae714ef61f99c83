"""Operators on sentences, cones, and the experiments around them.

An operator maps sentences to sentences.  The surrogate built-ins work on
modal sentences (``Con`` = ``<>``); :func:`arith_operators` gives arithmetic
versions carrying a Sigma1 graph formula, which the certificate generator
needs.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from conlab import arithmetization as A
from conlab import construction as C
from conlab import entailment as E
from conlab import gl
from conlab import modal as m
from conlab import syntax as sx


@dataclass(frozen=True)
class Operator:
    name: str
    apply: Callable = field(compare=False)
    level: Optional[sx.HierarchyLevel] = None  # declared output level (arithmetic)
    graph: Optional[sx.Formula] = None  # Sigma1 graph in x0 (input) and x1 (output)
    monotone: bool = False  # declared, not checked; see monotone_check

    def __call__(self, f):
        return self.apply(f)


class LevelViolation(ValueError):
    pass


def apply_operator(g: Operator, f):
    out = g.apply(f)
    if g.level is not None and isinstance(out, sx.Formula) and not sx.classify(out).within(g.level):
        raise LevelViolation(f"{g.name} produced a {sx.classify(out)} sentence, declared {g.level}")
    return out


def _bot(f):
    return m.BOT if isinstance(f, m.ModalFormula) else sx.BOT


def _top(f):
    return m.TOP if isinstance(f, m.ModalFormula) else sx.TOP


def _and(a, b):
    return m.And(a, b) if isinstance(a, m.ModalFormula) else sx.And(a, b)


# ---------------------------------------------------------------- built-ins


identity = Operator("identity", lambda f: f, monotone=True)
const_top = Operator("const_top", lambda f: m.TOP, monotone=True)
con_op = Operator("con_op", m.mock_con, monotone=True)
const_con_top = Operator("const_con_top", lambda f: m.mock_con(m.TOP), monotone=True)


def con_n_op(n: int) -> Operator:
    return Operator(f"con_{n}_op", lambda f: m.mock_iterated_con(n, f), monotone=True)


def _swap(f):
    if f == m.TOP:
        return m.BOT
    if f == m.BOT:
        return m.TOP
    return f


broken = Operator("broken", _swap)

OPERATORS = {op.name: op for op in (identity, const_top, con_op, const_con_top, broken)}


def arith_operators(T: A.TheoryDescriptor) -> dict[str, Operator]:
    """Arithmetic counterparts with their registered graph formulas."""
    ops = [
        Operator("identity", lambda f: f, graph=A.graph_identity(), monotone=True),
        Operator("const_top", lambda f: sx.TOP, level=sx.DELTA0, graph=A.graph_const_top(), monotone=True),
        Operator("con_op", lambda f: A.build_con(T, f), level=sx.Pi(1), graph=A.graph_con(T), monotone=True),
    ]
    return {op.name: op for op in ops}


# --------------------------------------------------------- Lindenbaum order


def _verdict(context, goal, provider, **kw):
    v = E.entails(context, goal, provider, **kw)
    if v is E.UNKNOWN:
        raise E.OracleRequired(f"{context} => {goal}")
    return v


def implies(a, b, provider: str = "gl", **kw) -> bool:
    return _verdict([a], b, provider, **kw) is E.PROVABLE


def class_equal(a, b, provider: str = "gl", **kw) -> bool:
    """[a] = [b]: each proves the other over T."""
    return implies(a, b, provider, **kw) and implies(b, a, provider, **kw)


def strict_implies(phi, psi, provider: str = "gl", **kw) -> bool:
    """phi proves psi but not conversely, or both are inconsistent."""
    forward = implies(phi, psi, provider, **kw)
    if forward and not implies(psi, phi, provider, **kw):
        return True
    bot = _bot(phi)
    return implies(phi, bot, provider, **kw) and implies(psi, bot, provider, **kw)


@dataclass(frozen=True)
class ConeSpec:
    """Sentences proving ``generator``; a true cone when the generator is true."""

    generator: object
    true: Optional[bool] = None

    def member(self, f, provider: str = "gl", **kw) -> bool:
        return implies(f, self.generator, provider, **kw)


def cone(generator, v=None) -> ConeSpec:
    return ConeSpec(generator, None if v is None else gl.truth(generator, v))


# --------------------------------------------------------------- the 𝔤 of the vacillation theorem


def stage_bound(f, trace: C.ConstructionTrace) -> int:
    """Stage by which the algorithm looks for entailed members of 𝔄.

    With the atom enumeration p_n first shows up at stage n, so a sentence is
    handled with the largest atom index it mentions (0 without atoms).  Other
    enumerations use the whole trace.
    """
    if trace.enumeration.name == "atoms" and isinstance(f, m.ModalFormula):
        return max(m.atoms(f), default=0)
    return trace.last_stage


def thm13_g(phi, trace: C.ConstructionTrace, provider: str = "gl", con: Callable = m.mock_con,
            stage: Optional[int] = None, **kw):
    """⊥ if phi is inconsistent; otherwise the conjunction of Con(ζ) over the
    members ζ of 𝔄 numerated by the stage bound that phi proves (⊤ if none).

    An Unknown answer from the provider raises :class:`OracleRequired`.
    """
    n = stage_bound(phi, trace) if stage is None else stage
    if n > trace.last_stage:
        raise ValueError(f"the trace stops at stage {trace.last_stage} but the input needs stage {n}")
    if implies(phi, _bot(phi), provider, **kw):
        return _bot(phi)
    zetas = [z for s in trace.stages[: n + 1] for z in s.numerated if implies(phi, z, provider, **kw)]
    if isinstance(phi, m.ModalFormula):
        return m.conj([con(z) for z in zetas])
    return sx.conjoin([con(z) for z in zetas])


def thm13_operator(trace: C.ConstructionTrace, provider: str = "gl", **kw) -> Operator:
    return Operator("thm13_g", lambda f: thm13_g(f, trace, provider, **kw), monotone=True)


# ------------------------------------------------------------- monotonicity


@dataclass(frozen=True)
class MonotoneReport:
    operator: str
    checked: int
    violations: tuple
    inconclusive: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def monotone_check(g: Operator, pairs, provider: str = "gl", **kw) -> MonotoneReport:
    """For each (phi, psi) with phi proving psi, check g(phi) proves g(psi)."""
    checked, bad, unsure = 0, [], []
    for phi, psi in pairs:
        if E.entails([phi], psi, provider, **kw) is not E.PROVABLE:
            continue
        checked += 1
        v = E.entails([g.apply(phi)], g.apply(psi), provider, **kw)
        if v is E.UNKNOWN:
            unsure.append((phi, psi))
        elif v is not E.PROVABLE:
            bad.append((phi, psi))
    return MonotoneReport(g.name, checked, tuple(bad), tuple(unsure))


# ---------------------------------------------------------------- dichotomy


EVENTUALLY_TRIVIAL = "EventuallyTrivial"
EVENTUALLY_CON_LIKE = "EventuallyConLike"


@dataclass(frozen=True)
class Sample:
    sentence: object
    ok: bool
    verdict: str


@dataclass(frozen=True)
class DichotomyReport:
    operator: str
    case: str
    generator: object
    samples: tuple
    exhausted: bool = False

    @property
    def failures(self) -> list:
        return [s for s in self.samples if not s.ok]

    def to_json(self) -> dict:
        return {
            "operator": self.operator,
            "case": self.case,
            "generator": str(self.generator),
            "samples": [{"sentence": str(s.sentence), "verdict": s.verdict, "ok": s.ok} for s in self.samples],
            "failures": len(self.failures),
            "exhausted": self.exhausted,
        }


def seed_from_env(default: int = 0) -> int:
    return int(os.environ.get("CONLAB_SEED", default))


def sample_pool(size: int = 4, atoms=(0, 1), seed: Optional[int] = None) -> list:
    """Modal sentences up to ``size`` nodes, shuffled within each size by ``seed``."""
    rng = random.Random(seed_from_env() if seed is None else seed)
    out = []
    for k in range(1, size + 1):
        layer = list(m.formulas_of_size(k, atoms))
        rng.shuffle(layer)
        out += layer
    return out


def cone_samples(generator, count: int, seed: Optional[int] = None) -> list:
    return [m.And(generator, chi) for chi in sample_pool(seed=seed)[:count]]


def dichotomy(g: Operator, v, provider: str = "gl", samples: int = 25, candidate=m.TOP,
              seed: Optional[int] = None) -> DichotomyReport:
    """Split on the truth of g(⊥).

    True: g(⊥) generates a true cone on which g is trivial; check every
    sampled phi proves g(phi).  False: on the candidate true cone check that
    phi + g(phi) proves Con(phi).
    """
    a = g.apply(m.BOT)
    trivial = gl.truth(a, v)
    gen = a if trivial else candidate
    pool = cone_samples(gen, samples, seed)
    results = []
    for phi in pool:
        if trivial:
            verdict = E.entails([phi], g.apply(phi), provider)
        else:
            verdict = E.entails([phi, g.apply(phi)], m.mock_con(phi), provider)
        results.append(Sample(phi, verdict is E.PROVABLE, str(verdict)))
    case = EVENTUALLY_TRIVIAL if trivial else EVENTUALLY_CON_LIKE
    return DichotomyReport(g.name, case, gen, tuple(results), exhausted=len(pool) < samples)


# ------------------------------------------------------------- certificate


class CertificateError(ValueError):
    pass


def cone_fact(phi: sx.Formula, sentence_a: sx.Formula) -> E.SchematicFact:
    """The assumption "T + phi proves A" that puts phi in the cone of A."""
    return E.SchematicFact(sentence_a, "cone-membership", hypotheses=(phi,))


def reflection_fact(psi: sx.Formula, truth_instance: sx.Formula) -> E.SchematicFact:
    """psi -> True(quote psi), for psi of the matching level."""
    return E.SchematicFact(sx.Implies(psi, truth_instance), "partial-truth-reflection")


def thm4_certificate(phi: sx.Formula, g: Operator, k: int, T: A.TheoryDescriptor,
                     store: E.FactStore) -> E.Certificate:
    """Derive T + phi + g(phi) proves ConPred_T(quote phi) from phi being in the cone of A.

    Needs the cone fact in ``store`` (see :func:`cone_fact`); adds the graph
    fact and the reflection fact it uses.
    """
    if g.graph is None:
        raise CertificateError(f"operator {g.name} has no registered graph")
    sentence_a = A.build_sentence_A(g.graph, k, T)
    cone_f = store.find(sentence_a, (phi,))
    if cone_f is None:
        raise CertificateError("no registered fact puts the input in the cone of A")
    psi = g.apply(phi)
    if not sx.classify(psi).within(sx.Pi(k)):
        raise CertificateError(f"g(phi) is {sx.classify(psi)}, not within Pi({k})")
    terms = (sx.Quoted(phi), sx.Quoted(psi))
    inst = sentence_a
    for t in terms:
        inst = sx.substitute(inst.body, inst.var, t)
    graph_part, truth_part = inst.left.left, inst.left.right
    con_part = inst.right
    star = A.sigma1_fact(g, phi, psi, store)
    if star.sentence != graph_part:
        raise CertificateError("the graph fact does not match the instantiated sentence A")
    tarski = store.add(reflection_fact(psi, truth_part))
    steps = (
        E.Step((phi,), sentence_a, E.Fact(cone_f.id)),
        E.Step((phi,), inst, E.Instantiation(1, terms)),
        E.Step((), graph_part, E.Fact(star.id)),
        E.Step((phi,), sx.Implies(truth_part, con_part), E.Logic((2, 3))),
        E.Step((phi, psi), con_part, E.Logic((4,), (tarski.id,))),
        E.Step((phi, g.apply(phi)), con_part, E.PriorStep(5)),
    )
    return E.Certificate((phi, g.apply(phi)), con_part, steps)


# ------------------------------------------------------ claims of the theorem


@dataclass(frozen=True)
class ClaimResult:
    claim: str
    instance: str
    verdict: bool
    countermodel: Optional[str] = None

    def to_json(self) -> dict:
        out = {"claim": self.claim, "instance": self.instance, "verdict": self.verdict}
        if self.countermodel is not None:
            out["countermodel"] = self.countermodel
        return out


def _equal_result(claim, a, b, provider) -> ClaimResult:
    ok = class_equal(a, b, provider)
    cm = None
    if not ok:
        for x, y in ((a, b), (b, a)):
            d = E.decide([x], y, provider)
            if d.verdict is not E.PROVABLE and d.countermodels:
                cm = d.countermodels[0].describe()
                break
    return ClaimResult(claim, f"[{a}] = [{b}]", ok, cm)


def thm13_claims_suite(trace: C.ConstructionTrace, v, provider: str = "gl") -> list[ClaimResult]:
    """The intermediate claims and the final identity along the true branch.

    ``g-is-con``: [ψ ∧ 𝔤(ψ)] = [ψ ∧ Con(ψ)], at every true-branch node.
    Where (♯) holds, with φ = ψ ∧ Con(ψ):
    ``conservative``: every member of 𝔄 that φ proves, ψ already proves;
    ``g-from-psi``: [φ ∧ 𝔤(φ)] = [φ ∧ ⋀{Con(ζ) : ψ proves ζ}];
    ``identity``: [φ ∧ 𝔤(φ)] = [φ].
    """
    out = []
    for psi in C.true_branch(trace, v):
        out.append(_equal_result("g-is-con", m.And(psi, thm13_g(psi, trace, provider)),
                                 m.And(psi, m.mock_con(psi)), provider))
        sharp = C.check_sharp(psi, trace, v, provider)
        out.append(ClaimResult("sharp", str(psi), sharp))
        if not sharp:
            continue
        phi = m.And(psi, m.mock_con(psi))
        bound = stage_bound(phi, trace)
        members = [z for s in trace.stages[: bound + 1] for z in s.numerated]
        for z in trace.numerated():
            if implies(phi, z, provider):
                out.append(ClaimResult("conservative", f"{psi} proves {z}", implies(psi, z, provider)))
        g_phi = thm13_g(phi, trace, provider)
        from_psi = m.conj([m.mock_con(z) for z in members if implies(psi, z, provider)])
        out.append(_equal_result("g-from-psi", m.And(phi, g_phi), m.And(phi, from_psi), provider))
        out.append(_equal_result("identity", m.And(phi, g_phi), phi, provider))
    return out
