"""Does T plus a context entail a goal?

Two providers answer the question.  ``"gl"`` decides it for modal surrogate
sentences through the provability logic GL and never gives up.  ``"schematic"``
works on arithmetic sentences: it abstracts non-propositional subformulas to
letters, instantiates universal premises at the closed terms in sight, and
checks tautologies by truth tables until its step budget runs out.

The module also holds schematic facts (assumptions such as Sigma1
completeness instances, used only as premises) and the checker for
line-oriented derivation certificates.
"""

from __future__ import annotations

import hashlib
import itertools
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

from conlab import gl
from conlab import modal as m
from conlab import syntax as sx


class EntailmentVerdict(Enum):
    PROVABLE = "Provable"
    REFUTABLE = "Refutable"
    INDEPENDENT = "Independent"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


PROVABLE = EntailmentVerdict.PROVABLE
REFUTABLE = EntailmentVerdict.REFUTABLE
INDEPENDENT = EntailmentVerdict.INDEPENDENT
UNKNOWN = EntailmentVerdict.UNKNOWN


@dataclass(frozen=True)
class Budget:
    max_steps: int = 10_000

    def __post_init__(self):
        if not isinstance(self.max_steps, int) or self.max_steps <= 0:
            raise ValueError("a budget must allow a positive number of steps")


class KindMismatch(TypeError):
    pass


class OracleRequired(RuntimeError):
    """A query the budgeted provider could not settle."""

    def __init__(self, what: str):
        super().__init__(f"undecided within budget: {what}")
        self.what = what


@dataclass(frozen=True)
class Decision:
    verdict: EntailmentVerdict
    countermodels: tuple = ()  # GL: models refuting each failed direction
    steps: int = 0


AnySentence = Union[sx.Formula, m.ModalFormula]


def _kind(items: Iterable[AnySentence]) -> str:
    kinds = set()
    for f in items:
        if isinstance(f, m.ModalFormula):
            kinds.add("modal")
        elif isinstance(f, sx.Formula):
            kinds.add("arith")
        else:
            raise KindMismatch(f"not a sentence: {f!r}")
    if len(kinds) > 1:
        raise KindMismatch("context and goal mix modal and arithmetic sentences")
    return kinds.pop() if kinds else "modal"


# ------------------------------------------------------------------ GL


def _gl(context, goal, valuation) -> Decision:
    premise = m.conj(context)
    forward = m.Implies(premise, goal)
    backward = m.Implies(premise, m.Not(goal))
    if valuation is not None:
        forward, backward = valuation.apply(forward), valuation.apply(backward)
    yes = gl.gl_prove(forward)
    if yes:
        return Decision(PROVABLE)
    no = gl.gl_prove(backward)
    if no:
        return Decision(REFUTABLE)
    return Decision(INDEPENDENT, (yes.countermodel, no.countermodel))


# ------------------------------------------------------------- schematic


def letters(f: sx.Formula, out: Optional[list] = None) -> list:
    """Maximal non-propositional subformulas, in order of first appearance."""
    out = [] if out is None else out
    if isinstance(f, (sx.Bottom, sx.Top)):
        return out
    if isinstance(f, sx.Not):
        return letters(f.body, out)
    if isinstance(f, sx.BINARY):
        letters(f.left, out)
        return letters(f.right, out)
    if f not in out:
        out.append(f)
    return out


def _value(f: sx.Formula, row: dict) -> bool:
    if isinstance(f, sx.Bottom):
        return False
    if isinstance(f, sx.Top):
        return True
    if isinstance(f, sx.Not):
        return not _value(f.body, row)
    if isinstance(f, sx.And):
        return _value(f.left, row) and _value(f.right, row)
    if isinstance(f, sx.Or):
        return _value(f.left, row) or _value(f.right, row)
    if isinstance(f, sx.Implies):
        return (not _value(f.left, row)) or _value(f.right, row)
    return row[f]


class _Meter:
    def __init__(self, budget: Budget):
        self.left = budget.max_steps
        self.used = 0

    def spend(self, k: int = 1) -> bool:
        if k > self.left:
            self.used += self.left
            self.left = 0
            return False
        self.left -= k
        self.used += k
        return True


def _tautology(premises: Sequence[sx.Formula], goal: sx.Formula, meter: _Meter) -> Optional[bool]:
    """True/False, or None when the budget runs out first."""
    atoms: list = []
    for f in list(premises) + [goal]:
        letters(f, atoms)
    for bits in itertools.product((False, True), repeat=len(atoms)):
        if not meter.spend():
            return None
        row = dict(zip(atoms, bits))
        if all(_value(p, row) for p in premises) and not _value(goal, row):
            return False
    return True


def _closed_terms(fs: Iterable[sx.Formula]) -> list[sx.Term]:
    seen: list = []
    for f in fs:
        for g in sx.subformulas(f, into_quotes=False):
            if isinstance(g, (sx.Equal, sx.Less)):
                parts = (g.left, g.right)
            elif isinstance(g, sx.BOUNDED):
                parts = (g.bound,)
            else:
                continue
            for t in parts:
                for s in sx.subterms(t):
                    if isinstance(s, sx.Quoted) and s not in seen:
                        seen.append(s)
    return seen


def _instances(f: sx.Formula, terms: Sequence[sx.Term], meter: _Meter) -> Optional[list[sx.Formula]]:
    """Instantiate a leading universal block at every tuple of the given terms
    (one step each); None when the budget runs out."""
    block = []
    body = f
    while isinstance(body, sx.ForAll):
        block.append(body.var)
        body = body.body
    if not block:
        return []
    out = []
    for choice in itertools.product(terms, repeat=len(block)):
        if not meter.spend():
            return None
        g = body
        for v, t in zip(block, choice):
            g = sx.substitute(g, v, t)
        out.append(g)
    return out


def _schematic(context, goal, facts, budget: Budget) -> Decision:
    meter = _Meter(budget)
    premises = list(context)
    if facts is not None:
        ctx = set(context)
        for fact in facts:
            if set(fact.hypotheses) <= ctx:
                premises.append(fact.sentence)
    rounds = [premises]
    terms = _closed_terms(premises + [goal])
    extra = []
    for p in premises:
        found = _instances(p, terms, meter)
        if found is None:
            return Decision(UNKNOWN, steps=meter.used)
        extra += [g for g in found if g not in premises]
    if extra:
        rounds.append(premises + extra)
    for ps in rounds:
        yes = _tautology(ps, goal, meter)
        if yes is None:
            return Decision(UNKNOWN, steps=meter.used)
        if yes:
            return Decision(PROVABLE, steps=meter.used)
        no = _tautology(ps, sx.Not(goal), meter)
        if no is None:
            return Decision(UNKNOWN, steps=meter.used)
        if no:
            return Decision(REFUTABLE, steps=meter.used)
    return Decision(UNKNOWN, steps=meter.used)


PROVIDERS = ("gl", "schematic")


def decide(context: Sequence[AnySentence], goal: AnySentence, provider: str = "gl",
           budget: Optional[Budget] = None, valuation=None, facts=None) -> Decision:
    """Full answer including countermodels (GL) and steps spent (schematic).

    ``valuation`` (GL only) first replaces every atom by top or bot; without
    it atoms stay free, i.e. they range over all sentences.
    """
    kind = _kind(list(context) + [goal])
    if provider == "gl":
        if kind != "modal":
            raise KindMismatch("the GL provider takes modal sentences")
        return _gl(tuple(context), goal, valuation)
    if provider == "schematic":
        if kind != "arith":
            raise KindMismatch("the schematic provider takes arithmetic sentences")
        for f in list(context) + [goal]:
            sx.require_sentence(f)
        return _schematic(list(context), goal, facts, budget or Budget())
    raise ValueError(f"unknown provider {provider!r}; choose from {', '.join(PROVIDERS)}")


def entails(context: Sequence[AnySentence], goal: AnySentence, provider: str = "gl",
            budget: Optional[Budget] = None, valuation=None, facts=None) -> EntailmentVerdict:
    return decide(context, goal, provider, budget, valuation, facts).verdict


def provable(context, goal, provider="gl", **kw) -> bool:
    """Like :func:`entails` but a yes/no answer; Unknown raises :class:`OracleRequired`."""
    verdict = entails(context, goal, provider, **kw)
    if verdict is UNKNOWN:
        raise OracleRequired(f"{', '.join(map(str, context))} => {goal}")
    return verdict is PROVABLE


def consistent(f: AnySentence, provider="gl", **kw) -> bool:
    bot = m.BOT if isinstance(f, m.ModalFormula) else sx.BOT
    return not provable([f], bot, provider, **kw)


# ------------------------------------------------------------- translation


def to_modal(f: sx.Formula, T, table: Optional[dict] = None) -> m.ModalFormula:
    """Read an arithmetic sentence as a modal one: Con_T(phi) becomes <>phi and
    every other non-propositional piece becomes an atom (shared via ``table``)."""
    from conlab.arithmetization import is_con_sentence

    table = {} if table is None else table
    if isinstance(f, sx.Bottom):
        return m.BOT
    if isinstance(f, sx.Top):
        return m.TOP
    if isinstance(f, sx.Not):
        return m.Not(to_modal(f.body, T, table))
    if isinstance(f, sx.BINARY):
        cls = {sx.And: m.And, sx.Or: m.Or, sx.Implies: m.Implies}[type(f)]
        return cls(to_modal(f.left, T, table), to_modal(f.right, T, table))
    inner = is_con_sentence(f, T)
    if inner is not None:
        return m.Diamond(to_modal(inner, T, table))
    if f not in table:
        table[f] = m.Atom(len(table))
    return table[f]


# ------------------------------------------------------------------ facts


def _digest(*parts: str) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode())
        h.update(b"\0")
    return h.hexdigest()[:12]


@dataclass(frozen=True)
class SchematicFact:
    """An assumption "T + hypotheses proves sentence", with where it came from.
    Facts are premises for the checker and the schematic provider, never theorems."""

    sentence: sx.Formula
    provenance: str
    hypotheses: tuple = ()
    id: str = ""

    def __post_init__(self):
        if not self.id:
            key = _digest(self.provenance, sx.print_formula(self.sentence),
                          *map(sx.print_formula, self.hypotheses))
            object.__setattr__(self, "id", f"{self.provenance.split(':')[0]}-{key}")


class FactStore:
    """Append-only collection of facts keyed by id."""

    def __init__(self, facts: Iterable[SchematicFact] = ()):
        self._facts: dict[str, SchematicFact] = {}
        for f in facts:
            self.add(f)

    def add(self, fact: SchematicFact) -> SchematicFact:
        old = self._facts.get(fact.id)
        if old is not None and old != fact:
            raise ValueError(f"fact id {fact.id} already names a different fact")
        self._facts[fact.id] = fact
        return fact

    def get(self, fact_id: str) -> Optional[SchematicFact]:
        return self._facts.get(fact_id)

    def find(self, sentence, hypotheses=()) -> Optional[SchematicFact]:
        for f in self._facts.values():
            if f.sentence == sentence and set(f.hypotheses) <= set(hypotheses):
                return f
        return None

    def __contains__(self, fact_id):
        return fact_id in self._facts

    def __iter__(self):
        return iter(self._facts.values())

    def __len__(self):
        return len(self._facts)


# ----------------------------------------------------------- certificates


@dataclass(frozen=True)
class Fact:
    fact_id: str


@dataclass(frozen=True)
class Instantiation:
    step: int
    terms: tuple


@dataclass(frozen=True)
class Logic:
    steps: tuple = ()
    facts: tuple = ()


@dataclass(frozen=True)
class Monotonicity:
    operator: str
    step: int


@dataclass(frozen=True)
class PriorStep:
    step: int


Justification = Union[Fact, Instantiation, Logic, Monotonicity, PriorStep]


@dataclass(frozen=True)
class Step:
    """``hypotheses`` proves ``claim`` over T, for the stated reason.  Steps are numbered from 1."""

    hypotheses: tuple
    claim: sx.Formula
    justification: Justification


@dataclass(frozen=True)
class Certificate:
    hypotheses: tuple
    goal: sx.Formula
    steps: tuple

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    failed_step: Optional[int] = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _cited(steps, i: int, j: int) -> Step:
    if not (isinstance(j, int) and 1 <= j < i):
        raise _Reject(f"cites step {j}, which is not an earlier step")
    return steps[j - 1]


class _Reject(Exception):
    pass


def _check_step(cert: Certificate, i: int, store: FactStore, operators, budget: Budget):
    step = cert.steps[i - 1]
    hyps = set(step.hypotheses)
    j = step.justification
    if isinstance(j, Fact):
        fact = store.get(j.fact_id)
        if fact is None:
            raise _Reject(f"fact {j.fact_id} is not registered")
        if fact.sentence != step.claim:
            raise _Reject("claim differs from the cited fact")
        if not set(fact.hypotheses) <= hyps:
            raise _Reject("the cited fact needs hypotheses the step lacks")
    elif isinstance(j, Instantiation):
        prior = _cited(cert.steps, i, j.step)
        body = prior.claim
        for t in j.terms:
            if not isinstance(body, sx.ForAll):
                raise _Reject("instantiates more quantifiers than the cited claim has")
            body = sx.substitute(body.body, body.var, t)
        if not j.terms or body != step.claim:
            raise _Reject("claim is not the instance of the cited step at the given terms")
        if not set(prior.hypotheses) <= hyps:
            raise _Reject("hypotheses of the cited step are missing")
    elif isinstance(j, Logic):
        premises = list(step.hypotheses)
        for k in j.steps:
            prior = _cited(cert.steps, i, k)
            if not set(prior.hypotheses) <= hyps:
                raise _Reject(f"hypotheses of step {k} are missing")
            premises.append(prior.claim)
        for fid in j.facts:
            fact = store.get(fid)
            if fact is None:
                raise _Reject(f"fact {fid} is not registered")
            if not set(fact.hypotheses) <= hyps:
                raise _Reject(f"fact {fid} needs hypotheses the step lacks")
            premises.append(fact.sentence)
        verdict = _tautology(premises, step.claim, _Meter(budget))
        if verdict is None:
            raise _Reject("propositional check ran out of budget")
        if not verdict:
            raise _Reject("claim does not follow propositionally from the cited lines")
    elif isinstance(j, Monotonicity):
        op = (operators or {}).get(j.operator)
        if op is None or not getattr(op, "monotone", False):
            raise _Reject(f"operator {j.operator} is not registered as monotone")
        prior = _cited(cert.steps, i, j.step)
        if prior.hypotheses or not isinstance(prior.claim, sx.Implies):
            raise _Reject("monotonicity needs an unconditional implication")
        want = sx.Implies(op.apply(prior.claim.left), op.apply(prior.claim.right))
        if step.claim != want:
            raise _Reject("claim is not the operator image of the cited implication")
    elif isinstance(j, PriorStep):
        prior = _cited(cert.steps, i, j.step)
        if prior.claim != step.claim:
            raise _Reject("claim differs from the cited step")
        if not set(prior.hypotheses) <= hyps:
            raise _Reject("hypotheses of the cited step are missing")
    else:
        raise _Reject(f"unknown justification {j!r}")


def check_certificate(cert: Certificate, store: FactStore, operators=None,
                      budget: Budget = Budget(1 << 16)) -> CheckResult:
    """Check every step in order; report the first one that is not licensed.

    Step ``len + 1`` stands for the final comparison with the declared goal.
    """
    for i in range(1, len(cert.steps) + 1):
        try:
            _check_step(cert, i, store, operators, budget)
        except _Reject as exc:
            return CheckResult(False, i, str(exc))
    if not cert.steps:
        return CheckResult(False, 1, "empty certificate")
    last = cert.steps[-1]
    if last.claim != cert.goal or not set(last.hypotheses) <= set(cert.hypotheses):
        return CheckResult(False, len(cert.steps) + 1, "last step does not establish the goal")
    return CheckResult(True)


# ---------------------------------------------------------- serialization


def _justification_text(j: Justification) -> str:
    if isinstance(j, Fact):
        return f"fact {j.fact_id}"
    if isinstance(j, Instantiation):
        return f"inst {j.step} " + " ; ".join(sx.print_term(t) for t in j.terms)
    if isinstance(j, Logic):
        return " ".join(["logic", *map(str, j.steps)] + (["facts", *j.facts] if j.facts else []))
    if isinstance(j, Monotonicity):
        return f"mono {j.operator} {j.step}"
    return f"prior {j.step}"


def _parse_justification(text: str) -> Justification:
    word, _, rest = text.partition(" ")
    if word == "fact":
        return Fact(rest)
    if word == "inst":
        idx, _, terms = rest.partition(" ")
        return Instantiation(int(idx), tuple(sx.parse_term(t) for t in terms.split(" ; ")))
    if word == "logic":
        steps, _, facts = rest.partition("facts")
        return Logic(tuple(int(s) for s in steps.split()), tuple(facts.split()))
    if word == "mono":
        op, idx = rest.rsplit(" ", 1)
        return Monotonicity(op, int(idx))
    if word == "prior":
        return PriorStep(int(rest))
    raise ValueError(f"unknown justification {text!r}")


_JUSTIFICATION = re.compile(r" \| (?=(fact|inst|logic|mono|prior)( |$))")


def _sequent(hyps, claim) -> str:
    return " ; ".join(map(sx.print_formula, hyps)) + " => " + sx.print_formula(claim)


def _parse_sequent(text: str):
    left, _, right = text.rpartition("=>")
    hyps = tuple(sx.parse_formula(h) for h in left.split(";") if h.strip())
    return hyps, sx.parse_formula(right.strip())


def dump_certificate(cert: Certificate) -> str:
    """One line per step: ``<idx> | <hyps> => <claim> | <justification>``,
    preceded by a ``goal`` line."""
    lines = ["goal | " + _sequent(cert.hypotheses, cert.goal)]
    for i, s in enumerate(cert.steps, 1):
        lines.append(f"{i} | {_sequent(s.hypotheses, s.claim)} | {_justification_text(s.justification)}")
    return "\n".join(lines) + "\n"


def load_certificate(text: str) -> Certificate:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head, _, goal_text = lines[0].partition(" | ")
    if head != "goal":
        raise ValueError("a certificate starts with its goal line")
    hyps, goal = _parse_sequent(goal_text)
    steps = []
    for i, ln in enumerate(lines[1:], 1):
        idx, _, rest = ln.partition(" | ")
        # formula text may contain " | " (disjunction) but never right before a keyword
        cut = _JUSTIFICATION.search(rest)
        if cut is None:
            raise ValueError(f"step {idx} has no justification")
        body, just = rest[: cut.start()], rest[cut.start() + 3:]
        if int(idx) != i:
            raise ValueError(f"step {idx} out of order")
        h, c = _parse_sequent(body)
        steps.append(Step(h, c, _parse_justification(just)))
    return Certificate(hyps, goal, tuple(steps))
