"""Decision procedures for the provability logic GL.

``gl_prove`` is a backward sequent search with the Loeb rule; ``kripke_oracle``
is an independent semantic search over finite transitive irreflexive trees.
Closed formulas additionally have a normal form over the basis ``[]^n bot``,
which gives the standard-model reading used by :func:`truth`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Optional

from conlab import modal as m
from conlab.modal import ModalFormula, Valuation


@dataclass(frozen=True)
class KripkeModel:
    """Finite transitive irreflexive model; world 0 is the root."""

    relation: frozenset[tuple[int, int]]
    valuation: tuple[frozenset[int], ...]

    @property
    def worlds(self) -> int:
        return len(self.valuation)

    def successors(self, w: int) -> list[int]:
        return sorted(u for (v, u) in self.relation if v == w)

    def is_gl_frame(self) -> bool:
        r = self.relation
        irreflexive = all(v != u for v, u in r)
        transitive = all((a, d) in r for (a, b) in r for (c, d) in r if b == c)
        return irreflexive and transitive

    def forces(self, f: ModalFormula, w: int = 0) -> bool:
        if isinstance(f, m.Atom):
            return f.index in self.valuation[w]
        if isinstance(f, m.Bot):
            return False
        if isinstance(f, m.Top):
            return True
        if isinstance(f, m.Not):
            return not self.forces(f.body, w)
        if isinstance(f, m.And):
            return self.forces(f.left, w) and self.forces(f.right, w)
        if isinstance(f, m.Or):
            return self.forces(f.left, w) or self.forces(f.right, w)
        if isinstance(f, m.Implies):
            return not self.forces(f.left, w) or self.forces(f.right, w)
        if isinstance(f, m.Box):
            return all(self.forces(f.body, u) for u in self.successors(w))
        if isinstance(f, m.Diamond):
            return any(self.forces(f.body, u) for u in self.successors(w))
        raise TypeError(f"not a modal formula: {f!r}")

    def describe(self) -> str:
        lines = []
        for w in range(self.worlds):
            true_atoms = ",".join(f"p{i}" for i in sorted(self.valuation[w])) or "-"
            succ = ",".join(map(str, self.successors(w))) or "-"
            lines.append(f"w{w}: atoms={true_atoms} sees={succ}")
        return "\n".join(lines)


@dataclass(frozen=True)
class _Tree:
    atoms: frozenset[int]
    children: tuple["_Tree", ...] = ()


def _tree_to_model(tree: _Tree) -> KripkeModel:
    valuation: list[frozenset[int]] = []
    relation: set[tuple[int, int]] = set()

    def walk(node: _Tree, ancestors: tuple[int, ...]):
        me = len(valuation)
        valuation.append(node.atoms)
        for a in ancestors:
            relation.add((a, me))
        for child in node.children:
            walk(child, ancestors + (me,))

    walk(tree, ())
    return KripkeModel(frozenset(relation), tuple(valuation))


@dataclass(frozen=True)
class Verdict:
    valid: bool
    countermodel: Optional[KripkeModel] = None
    bounded: bool = False  # True for oracle answers that only cover models up to a size

    def __bool__(self):
        return self.valid

    def __str__(self):
        if self.valid:
            return "Valid-up-to-bound" if self.bounded else "Valid"
        return "Invalid"


# ------------------------------------------------------------ sequent search


def _key(f: ModalFormula) -> str:
    return str(f)


@lru_cache(maxsize=200_000)
def _refute(gamma: frozenset, delta: frozenset) -> Optional[_Tree]:
    """None when ``gamma => delta`` is GL-derivable, else a countermodel tree."""
    if m.BOT in gamma or m.TOP in delta or gamma & delta:
        return None
    for f in sorted(gamma, key=_key):
        if isinstance(f, (m.Atom, m.Box)):
            continue
        rest = gamma - {f}
        if isinstance(f, m.Top):
            return _refute(rest, delta)
        if isinstance(f, m.Not):
            return _refute(rest, delta | {f.body})
        if isinstance(f, m.And):
            return _refute(rest | {f.left, f.right}, delta)
        if isinstance(f, m.Or):
            return _refute(rest | {f.left}, delta) or _refute(rest | {f.right}, delta)
        if isinstance(f, m.Implies):
            return _refute(rest, delta | {f.left}) or _refute(rest | {f.right}, delta)
        raise TypeError(f"unnormalized formula {f}")
    for f in sorted(delta, key=_key):
        if isinstance(f, (m.Atom, m.Box)):
            continue
        rest = delta - {f}
        if isinstance(f, m.Bot):
            return _refute(gamma, rest)
        if isinstance(f, m.Not):
            return _refute(gamma | {f.body}, rest)
        if isinstance(f, m.And):
            return _refute(gamma, rest | {f.left}) or _refute(gamma, rest | {f.right})
        if isinstance(f, m.Or):
            return _refute(gamma, rest | {f.left, f.right})
        if isinstance(f, m.Implies):
            return _refute(gamma | {f.left}, rest | {f.right})
        raise TypeError(f"unnormalized formula {f}")
    # Only atoms and boxes remain: try the Loeb rule on each boxed succedent.
    boxed = [g for g in gamma if isinstance(g, m.Box)]
    carried = frozenset(boxed) | frozenset(g.body for g in boxed)
    children = []
    for f in sorted(delta, key=_key):
        if not isinstance(f, m.Box):
            continue
        sub = _refute(carried | {f}, frozenset((f.body,)))
        if sub is None:
            return None
        children.append(sub)
    return _Tree(frozenset(g.index for g in gamma if isinstance(g, m.Atom)), tuple(children))


def gl_prove(f: ModalFormula) -> Verdict:
    """Decide GL-derivability of ``f``; invalid answers carry a countermodel."""
    tree = _refute(frozenset(), frozenset((m.normalize(f),)))
    if tree is None:
        return Verdict(True)
    return Verdict(False, _tree_to_model(tree))


def gl_valid(f: ModalFormula) -> bool:
    return _refute(frozenset(), frozenset((m.normalize(f),))) is None


# ------------------------------------------------------------- Kripke oracle


def fmp_bound(f: ModalFormula) -> int:
    """Worlds sufficient for a countermodel: a tree whose nodes at depth i
    have at most (b - i) children, b the number of distinct boxed subformulas."""
    b = len({g for g in m.subformulas(m.normalize(f)) if isinstance(g, m.Box)})
    return sum(factorial(b) // factorial(b - i) for i in range(b + 1))


def kripke_oracle(f: ModalFormula, max_worlds: int) -> Verdict:
    """Search every finite transitive irreflexive tree with at most
    ``max_worlds`` worlds (and every valuation) for a root refuting ``f``.

    Trees are explored up to equivalence of their root's subformula type: two
    trees whose roots agree on all subformulas are interchangeable as
    subtrees, so it suffices to keep the smallest witness per type.
    """
    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")
    g = m.normalize(f)
    subs = _bottom_up(g)
    boxes = [s for s in subs if isinstance(s, m.Box)]
    atom_ids = sorted({s.index for s in subs if isinstance(s, m.Atom)})
    pos = {s: i for i, s in enumerate(subs)}

    def world_type(true_atoms: frozenset[int], summary: tuple[bool, ...]) -> tuple[bool, ...]:
        val: list[bool] = []
        box_val = dict(zip(boxes, summary))
        for s in subs:
            if isinstance(s, m.Atom):
                v = s.index in true_atoms
            elif isinstance(s, m.Bot):
                v = False
            elif isinstance(s, m.Top):
                v = True
            elif isinstance(s, m.Not):
                v = not val[pos[s.body]]
            elif isinstance(s, m.And):
                v = val[pos[s.left]] and val[pos[s.right]]
            elif isinstance(s, m.Or):
                v = val[pos[s.left]] or val[pos[s.right]]
            elif isinstance(s, m.Implies):
                v = (not val[pos[s.left]]) or val[pos[s.right]]
            else:
                v = box_val[s]
            val.append(v)
        return tuple(val)

    def as_child(t: tuple[bool, ...]) -> tuple[bool, ...]:
        # what a child contributes to its parent's boxes: A here and A everywhere above-below
        return tuple(t[pos[b.body]] and t[pos[b]] for b in boxes)

    valuations = [frozenset(a for j, a in enumerate(atom_ids) if mask >> j & 1) for mask in range(1 << len(atom_ids))]
    empty = tuple(True for _ in boxes)
    best: dict[tuple[bool, ...], tuple[int, _Tree]] = {}
    for va in valuations:
        t = world_type(va, empty)
        if t not in best:
            best[t] = (1, _Tree(va))

    changed = True
    while changed:
        changed = False
        child_opts: dict[tuple[bool, ...], tuple[int, _Tree]] = {}
        for t, (n, tree) in best.items():
            c = as_child(t)
            if c not in child_opts or n < child_opts[c][0]:
                child_opts[c] = (n, tree)
        combos: dict[tuple[bool, ...], tuple[int, tuple[_Tree, ...]]] = {
            c: (n, (tree,)) for c, (n, tree) in child_opts.items()
        }
        grew = True
        while grew:
            grew = False
            for c1, (n1, ts1) in list(combos.items()):
                for c2, (n2, tree2) in child_opts.items():
                    c = tuple(a and b for a, b in zip(c1, c2))
                    n = n1 + n2
                    if n + 1 > max_worlds:
                        continue
                    if c not in combos or n < combos[c][0]:
                        combos[c] = (n, ts1 + (tree2,))
                        grew = True
        for va in valuations:
            for c, (n, kids) in combos.items():
                if n + 1 > max_worlds:
                    continue
                t = world_type(va, c)
                if t not in best or n + 1 < best[t][0]:
                    best[t] = (n + 1, _Tree(va, kids))
                    changed = True

    root = pos[g]
    refuting = [(n, tree) for t, (n, tree) in best.items() if not t[root]]
    if not refuting:
        return Verdict(True, bounded=True)
    n, tree = min(refuting, key=lambda item: item[0])
    return Verdict(False, _tree_to_model(tree), bounded=True)


def _bottom_up(f: ModalFormula) -> list[ModalFormula]:
    out: list[ModalFormula] = []
    seen: set[ModalFormula] = set()

    def visit(g):
        if g in seen:
            return
        if isinstance(g, (m.Not, m.Box)):
            visit(g.body)
        elif isinstance(g, m.BINARY):
            visit(g.left)
            visit(g.right)
        seen.add(g)
        out.append(g)

    visit(f)
    return out


# --------------------------------------------------------- closed fragment


class NotClosed(ValueError):
    pass


@dataclass(frozen=True)
class ClosedNormalForm:
    """Truth values at worlds of height 0, 1, ..., with ``table[-1]`` holding
    for every height from ``len(table) - 1`` on.  Height-h worlds are exactly
    where ``[]^(h+1) bot`` holds and ``[]^h bot`` fails."""

    table: tuple[bool, ...]

    @property
    def limit(self) -> bool:
        return self.table[-1]

    def to_formula(self) -> ModalFormula:
        t = self.table
        k = len(t) - 1
        heights = [h for h in range(k) if t[h]]
        if not heights and not t[k]:
            return m.BOT
        if len(heights) == k and t[k]:
            return m.TOP
        if heights == list(range(len(heights))) and not t[k]:
            return m.box_n(len(heights))
        if not heights and t[k]:
            return m.Not(m.box_n(k))
        parts = [m.box_n(1) if h == 0 else m.And(m.box_n(h + 1), m.Not(m.box_n(h))) for h in heights]
        if t[k]:
            parts.append(m.Not(m.box_n(k)))
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = m.Or(p, out)
        return out


def _height_values(f: ModalFormula, upto: int) -> list[bool]:
    memo: dict = {}

    def val(g, h):
        key = (g, h)
        if key in memo:
            return memo[key]
        if isinstance(g, m.Bot):
            r = False
        elif isinstance(g, m.Top):
            r = True
        elif isinstance(g, m.Not):
            r = not val(g.body, h)
        elif isinstance(g, m.And):
            r = val(g.left, h) and val(g.right, h)
        elif isinstance(g, m.Or):
            r = val(g.left, h) or val(g.right, h)
        elif isinstance(g, m.Implies):
            r = (not val(g.left, h)) or val(g.right, h)
        elif isinstance(g, m.Box):
            r = all(val(g.body, j) for j in range(h))
        elif isinstance(g, m.Diamond):
            r = any(val(g.body, j) for j in range(h))
        else:
            raise NotClosed(f"atom {g} in closed_normal_form input")
        memo[key] = r
        return r

    return [val(f, h) for h in range(upto + 1)]


def closed_normal_form(f: ModalFormula) -> ClosedNormalForm:
    if m.atoms(f):
        raise NotClosed(f"{f} contains atoms")
    values = _height_values(f, m.modal_depth(f))
    while len(values) > 1 and values[-1] == values[-2]:
        values.pop()
    return ClosedNormalForm(tuple(values))


def truth(f: ModalFormula, v: Valuation) -> bool:
    """Standard-model truth: substitute atoms by ``v`` and read every
    ``[]^n bot`` as false."""
    return closed_normal_form(v.apply(f)).limit
