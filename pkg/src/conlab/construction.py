"""The staged set 𝔄: numeration ledger, tree, true branch, θ_ψ and (♯).

Stage 0 numerates φ0 and ¬φ0 and activates φ ∧ Con(φ) for both.  Stage n+1
takes every active ψ, numerates ψ ∧ φ(n+1) and ψ ∧ ¬φ(n+1), deactivates ψ,
and activates θ ∧ Con(θ) for the two new sentences θ.  Everything works on
modal surrogate sentences (``Con`` = ``<>``) or on arithmetic sentences with
a ``build_con`` of choice.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from conlab import entailment as E
from conlab import gl
from conlab import modal as m
from conlab import syntax as sx


def _not(f):
    return m.Not(f) if isinstance(f, m.ModalFormula) else sx.Not(f)


def _and(a, b):
    return m.And(a, b) if isinstance(a, m.ModalFormula) else sx.And(a, b)


def _text(f) -> str:
    return str(f) if isinstance(f, m.ModalFormula) else sx.print_formula(f)


# ------------------------------------------------------------- enumerations


@dataclass(frozen=True)
class Enumeration:
    """A total, deterministic stream φ0, φ1, ... of sentences."""

    name: str
    item: Callable[[int], object] = field(compare=False)

    def __call__(self, n: int):
        return self.item(n)


def atom_enumeration() -> Enumeration:
    """φ_n = p_n."""
    return Enumeration("atoms", m.Atom)


def _closed_sentences() -> Iterator[sx.Formula]:
    for size in itertools.count(1):
        for f in sx.formulas_of_size(size):
            if sx.is_sentence(f):
                yield f


_ARITH: list = []
_ARITH_SOURCE = _closed_sentences()


def _arith_item(n: int) -> sx.Formula:
    while len(_ARITH) <= n:
        _ARITH.append(next(_ARITH_SOURCE))
    return _ARITH[n]


def arith_enumeration() -> Enumeration:
    """Sentences over the variables x0, x1 by size, in the enumerator's fixed order."""
    return Enumeration("arith", _arith_item)


def doctored(base: Enumeration, overrides: dict) -> Enumeration:
    """``base`` with some positions replaced, for experiments."""
    fixed = dict(overrides)
    name = base.name + "+" + ",".join(f"{k}={_text(v)}" for k, v in sorted(fixed.items()))
    return Enumeration(name, lambda n: fixed[n] if n in fixed else base(n))


ENUMERATIONS = {"atoms": atom_enumeration, "arith": arith_enumeration}


# -------------------------------------------------------------- the stages


@dataclass(frozen=True)
class StageState:
    stage: int
    numerated: tuple
    activated: tuple
    deactivated: tuple

    @property
    def active(self) -> tuple:
        """Active sentences once this stage is over: every earlier one was just deactivated."""
        return self.activated


@dataclass(frozen=True)
class ConstructionTrace:
    enumeration: Enumeration
    stages: tuple
    parents: tuple  # (sentence, parent or None) in numeration order

    @property
    def last_stage(self) -> int:
        return len(self.stages) - 1

    def numerated(self) -> list:
        return [f for s in self.stages for f in s.numerated]

    def membership_index(self) -> dict:
        out = {}
        for s in self.stages:
            for f in s.numerated:
                out.setdefault(f, s.stage)
        return out

    def parent(self, f):
        return dict(self.parents).get(f)

    def to_json(self) -> dict:
        return {
            "enumeration": self.enumeration.name,
            "stages": [
                {
                    "stage": s.stage,
                    "numerated": [_text(f) for f in s.numerated],
                    "activated": [_text(f) for f in s.activated],
                    "deactivated": [_text(f) for f in s.deactivated],
                }
                for s in self.stages
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def run_stages(e: Enumeration, N: int, con: Callable = m.mock_con) -> ConstructionTrace:
    """Run stages 0..N."""
    if N < 0:
        raise ValueError("the last stage index must be at least 0")
    phi = e(0)
    first = (phi, _not(phi))
    active = tuple(_and(t, con(t)) for t in first)
    stages = [StageState(0, first, active, ())]
    parents = [(t, None) for t in first]
    spawned = dict(zip(active, first))  # active sentence -> the numerated sentence it came from
    for n in range(N):
        phi = e(n + 1)
        numerated, activated = [], []
        for psi in active:
            for theta in (_and(psi, phi), _and(psi, _not(phi))):
                numerated.append(theta)
                parents.append((theta, spawned[psi]))
                a = _and(theta, con(theta))
                activated.append(a)
                spawned[a] = theta
        stages.append(StageState(n + 1, tuple(numerated), tuple(activated), active))
        active = tuple(activated)
    return ConstructionTrace(e, tuple(stages), tuple(parents))


def membership(s, trace: ConstructionTrace) -> Optional[int]:
    """The stage at which ``s`` was numerated (syntactic identity), or None."""
    return trace.membership_index().get(s)


# ------------------------------------------------------------------ the tree


class TreeError(RuntimeError):
    pass


@dataclass(frozen=True)
class TreeNode:
    sentence: object
    parent: object  # None for roots
    children: tuple
    stage: int


@dataclass(frozen=True)
class Forest:
    nodes: tuple  # TreeNode, in numeration order

    def node(self, s) -> TreeNode:
        for nd in self.nodes:
            if nd.sentence == s:
                return nd
        raise KeyError(s)

    def sentences(self) -> list:
        return [nd.sentence for nd in self.nodes]

    @property
    def roots(self) -> list:
        return [nd.sentence for nd in self.nodes if nd.parent is None]

    def ancestors(self, s) -> list:
        """``s`` followed by its ancestors up to a root."""
        index = {nd.sentence: nd for nd in self.nodes}
        out = [s]
        while index[out[-1]].parent is not None:
            out.append(index[out[-1]].parent)
        return out

    def below(self, a, b) -> bool:
        """``a`` lies on the path from a root to ``b`` (``a == b`` included)."""
        return a in self.ancestors(b)

    def entails(self, a, b) -> bool:
        """Entailment between nodes read off the tree: ``a`` proves ``b`` iff
        ``b`` is below ``a``.  Needs no provider call."""
        return self.below(b, a)

    def siblings(self) -> list:
        return [nd.children for nd in self.nodes if len(nd.children) == 2] + (
            [tuple(self.roots)] if len(self.roots) == 2 else [])

    def to_dot(self, marked=()) -> str:
        marked = set(marked)
        ids = {nd.sentence: f"n{i}" for i, nd in enumerate(self.nodes)}
        lines = ["digraph A {", "  rankdir=BT;"]
        for nd in self.nodes:
            label = _text(nd.sentence).replace('"', '\\"')
            extra = ", style=filled, fillcolor=lightgrey, peripheries=2" if nd.sentence in marked else ""
            lines.append(f'  {ids[nd.sentence]} [label="{label}"{extra}];')
        for nd in self.nodes:
            if nd.parent is not None:
                lines.append(f"  {ids[nd.parent]} -> {ids[nd.sentence]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def tree(trace: ConstructionTrace, provider: str = "gl", **kw) -> Forest:
    """Consistent numerated sentences, each hung below the nearest consistent
    sentence whose activation produced it."""
    keep = {}
    for f, _ in trace.parents:
        verdict = E.entails([f], m.BOT if isinstance(f, m.ModalFormula) else sx.BOT, provider, **kw)
        if verdict is E.UNKNOWN:
            raise TreeError(f"cannot decide whether {_text(f)} is consistent")
        keep[f] = verdict is not E.PROVABLE
    parent_of = dict(trace.parents)
    stage_of = trace.membership_index()

    def anchor(f):
        p = parent_of[f]
        while p is not None and not keep[p]:
            p = parent_of[p]
        return p

    kept = [f for f, _ in trace.parents if keep[f]]
    children: dict = {f: [] for f in kept}
    for f in kept:
        a = anchor(f)
        if a is not None:
            children[a].append(f)
    return Forest(tuple(TreeNode(f, anchor(f), tuple(children[f]), stage_of[f]) for f in kept))


# ------------------------------------------------------------- true branch


def _true(f, v) -> bool:
    return gl.truth(f, v)


def true_sentences(trace: ConstructionTrace, v, stage: int, which: str = "numerated") -> list:
    s = trace.stages[stage]
    return [f for f in getattr(s, which) if _true(f, v)]


def true_branch(trace: ConstructionTrace, v) -> list:
    """Follow true sentences upward: the true one of φ0, ¬φ0, then the true
    numerated child of each, as far as the trace goes."""
    parent_of = dict(trace.parents)
    branch: list = []
    for s in trace.stages:
        options = [f for f in s.numerated if parent_of[f] == (branch[-1] if branch else None) and _true(f, v)]
        if len(options) != 1:
            break
        branch.append(options[0])
    return branch


class NotOnTrueBranch(ValueError):
    pass


def theta(psi, trace: ConstructionTrace, v):
    """φ(n+1) or its negation, whichever is true, for ψ numerated at stage n."""
    n = membership(psi, trace)
    if n is None or psi not in true_branch(trace, v):
        raise NotOnTrueBranch(f"{_text(psi)} is not on the true branch")
    phi = trace.enumeration(n + 1)
    return phi if _true(phi, v) else _not(phi)


def check_sharp(psi, trace: ConstructionTrace, v, provider: str = "gl", con: Callable = m.mock_con, **kw) -> bool:
    """(♯): ψ ∧ Con(ψ) does not prove θ_ψ."""
    t = theta(psi, trace, v)
    verdict = E.entails([_and(psi, con(psi))], t, provider, **kw)
    if verdict is E.UNKNOWN:
        raise E.OracleRequired(f"{_text(psi)} & Con => {_text(t)}")
    return verdict is not E.PROVABLE
