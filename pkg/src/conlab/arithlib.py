"""Bounded (Delta0) building blocks over Goedel codes.

Everything here produces :mod:`conlab.syntax` formulas.  Helpers take their
arguments as terms and draw bound variables from a :class:`Fresh` allocator,
so callers can nest them freely.  Recursive relations on codes (substitution,
Delta0 satisfaction, block stripping) are expressed with a finite witness
set ``w``: a number whose binary digits list the entries of a table, each of
which must be justified by a local clause.  The witness bounds are generous
and never evaluated; see ``docs/arithmetization.md``.
"""

from __future__ import annotations

from typing import Callable, Union

from conlab import syntax as sx
from conlab.coding import FORMULA_TAGS, TERM_TAGS, encode
from conlab.syntax import (
    BOT,
    TOP,
    Add,
    And,
    BoundedExists,
    BoundedForAll,
    Equal,
    Exp,
    Formula,
    Implies,
    Less,
    Mul,
    Not,
    Or,
    Succ,
    Term,
    Var,
    big_and,
    big_or,
    numeral,
)


class Fresh:
    """Hands out variable indices, starting above those reserved by the caller."""

    def __init__(self, start: int = 2):
        self.next = start

    def __call__(self) -> int:
        i = self.next
        self.next += 1
        return i

    def var(self) -> Var:
        return Var(self())


TWO = numeral(2)

TAG = {cls.__name__: tag for cls, tag in {**FORMULA_TAGS, **TERM_TAGS}.items()}
ZERO_CODE = 1  # code of the term 0: pair(1, 0)
BOT_CODE = encode(BOT)
TOP_CODE = encode(TOP)


def n(k: int) -> Term:
    return numeral(k)


def S(t: Term) -> Term:
    return Succ(t)


def pair_rel(a: Term, b: Term, c: Term) -> Formula:
    """``c = pair(a, b)``, stated without division: 2c = (a+b)(a+b+1) + 2b."""
    s = Add(a, b)
    return Equal(Mul(TWO, c), Add(Mul(s, S(s)), Mul(TWO, b)))


def pair_bound(a: Term, b: Term) -> Term:
    """A term strictly above ``pair(a, b)``: (a+b+1)^2 + 1."""
    s = S(Add(a, b))
    return S(Mul(s, s))


Shape = Union[Term, str, tuple]


def _collect(fr: Fresh, target: Term, shape: Shape, names: dict[str, Var], conds: list, binders: list):
    if isinstance(shape, Term):
        conds.append(Equal(target, shape))
        return
    if isinstance(shape, str):
        if shape in names:
            conds.append(Equal(target, names[shape]))
        else:
            # bind by aliasing: the target itself plays the metavariable
            names[shape] = target
        return
    left, right = shape
    parts = []
    for sub in (left, right):
        if isinstance(sub, Term):
            parts.append(sub)
        elif isinstance(sub, str) and sub in names:
            parts.append(names[sub])
        else:
            v = fr.var()
            binders.append(v)
            parts.append(v)
            if isinstance(sub, str):
                names[sub] = v
            else:
                _collect(fr, v, sub, names, conds, binders)
    conds.insert(0, pair_rel(parts[0], parts[1], target))


def match(fr: Fresh, source: Term, shape: Shape, body: Callable[[dict[str, Var]], Formula] | None = None,
          bound: Term | None = None) -> Formula:
    """``source`` has the pair structure ``shape``.

    A shape is a term (that exact value), a name (a metavariable; repeated
    names must agree), or a 2-tuple of shapes (a pair).  Components are
    bounded by ``source`` itself since pair(a, b) >= a, b.
    """
    names: dict[str, Var] = {}
    conds: list[Formula] = []
    binders: list[Var] = []
    _collect(fr, source, shape, names, conds, binders)
    inner = big_and(conds + ([body(names)] if body else []))
    lim = bound if bound is not None else S(source)
    for v in reversed(binders):
        inner = BoundedExists(v.index, lim, inner)
    return inner


def coded(fr: Fresh, target: Term, tag: str, payload: Shape) -> Formula:
    """``target`` is the code of a node with constructor ``tag`` and the given payload."""
    return match(fr, target, (n(TAG[tag]), payload))


def exists_below(fr: Fresh, bound: Term, body: Callable[[Var], Formula]) -> Formula:
    v = fr.var()
    return BoundedExists(v.index, bound, body(v))


def forall_below(fr: Fresh, bound: Term, body: Callable[[Var], Formula]) -> Formula:
    v = fr.var()
    return BoundedForAll(v.index, bound, body(v))


def neq(a: Term, b: Term) -> Formula:
    return Not(Equal(a, b))


def iff(a: Formula, b: Formula) -> Formula:
    return And(Implies(a, b), Implies(b, a))


# ------------------------------------------------------------- finite sets


def bit(fr: Fresh, w: Term, i: Term) -> Formula:
    """Binary digit ``i`` of ``w`` is 1: w = q*2^(i+1) + 2^i + r with r < 2^i."""
    q, r = fr.var(), fr.var()
    body = Equal(w, Add(Add(Mul(q, Exp(TWO, S(i))), Exp(TWO, i)), r))
    return BoundedExists(q.index, S(w), BoundedExists(r.index, Exp(TWO, i), body))


def has_pair(fr: Fresh, w: Term, a: Term, b: Term) -> Formula:
    """The set coded by ``w`` contains pair(a, b)."""
    return exists_below(fr, w, lambda c: And(pair_rel(a, b, c), bit(fr, w, c)))


def has_triple(fr: Fresh, w: Term, a: Term, b: Term, c: Term) -> Formula:
    return exists_below(fr, w, lambda e: And(match(fr, e, (a, (b, c))), bit(fr, w, e)))


def table(fr: Fresh, bound: Term, clause: Callable[[Var, Var], Formula], goal: Callable[[Var], Formula]) -> Formula:
    """There is a finite set w < bound, every member of which satisfies
    ``clause(w, member)``, and for which ``goal(w)`` holds."""
    w, e = fr.var(), fr.var()
    closed = BoundedForAll(e.index, w, Implies(bit(fr, w, e), clause(w, e)))
    return BoundedExists(w.index, bound, And(closed, goal(w)))


def tower(t: Term, height: int) -> Term:
    for _ in range(height):
        t = Exp(TWO, t)
    return t


# ---------------------------------------------------------- substitution


_NULLARY = ("Zero", "Bottom", "Top")
_UNARY = ("Succ", "Not")
_BINARY = ("Add", "Mul", "Exp", "Equal", "Less", "And", "Or", "Implies")


def _sub_clause(fr: Fresh, w: Var, a: Var, b: Var, v: Term, t: Term) -> Formula:
    cases = []
    # variables
    cases.append(match(
        fr, a, (n(TAG["Var"]), "u"),
        lambda m: Or(And(Equal(m["u"], v), Equal(b, t)), And(neq(m["u"], v), Equal(b, a))),
    ))
    # constants and quotation constants are closed
    cases.append(And(big_or([Equal(a, n(ZERO_CODE)), Equal(a, n(BOT_CODE)), Equal(a, n(TOP_CODE))]), Equal(b, a)))
    cases.append(And(match(fr, a, (n(TAG["Quoted"]), "c")), Equal(b, a)))
    for tag in _UNARY:
        cases.append(match(
            fr, a, (n(TAG[tag]), "c"),
            lambda m, tag=tag: exists_below(fr, S(w), lambda d: And(
                has_pair(fr, w, m["c"], d), coded(fr, b, tag, d))),
        ))
    for tag in _BINARY:
        cases.append(match(
            fr, a, (n(TAG[tag]), ("c1", "c2")),
            lambda m, tag=tag: exists_below(fr, S(w), lambda d1: exists_below(fr, S(w), lambda d2: big_and([
                has_pair(fr, w, m["c1"], d1),
                has_pair(fr, w, m["c2"], d2),
                coded(fr, b, tag, (d1, d2)),
            ]))),
        ))
    for tag in ("ForAll", "Exists"):
        cases.append(match(
            fr, a, (n(TAG[tag]), ("u", "c")),
            lambda m, tag=tag: Or(
                And(Equal(m["u"], v), Equal(b, a)),
                And(neq(m["u"], v), exists_below(fr, S(w), lambda d: And(
                    has_pair(fr, w, m["c"], d), coded(fr, b, tag, (m["u"], d))))),
            ),
        ))
    for tag in ("BoundedForAll", "BoundedExists"):
        cases.append(match(
            fr, a, (n(TAG[tag]), ("u", ("cb", "c"))),
            lambda m, tag=tag: exists_below(fr, S(w), lambda db: And(
                has_pair(fr, w, m["cb"], db),
                Or(
                    And(Equal(m["u"], v), coded(fr, b, tag, (m["u"], (db, m["c"])))),
                    And(neq(m["u"], v), exists_below(fr, S(w), lambda d: And(
                        has_pair(fr, w, m["c"], d), coded(fr, b, tag, (m["u"], (db, d)))))),
                ),
            )),
        ))
    return big_or(cases)


def sub_rel(fr: Fresh, f: Term, v: Term, t: Term, r: Term, bound: Term | None = None) -> Formula:
    """``r`` codes the result of replacing free variable ``v`` by the term coded
    ``t`` in the formula (or term) coded ``f``.  No capture check: callers
    only substitute closed terms or the variable's own successor."""
    lim = bound if bound is not None else tower(S(Add(Add(f, t), r)), 2)

    def clause(w, e):
        return match(fr, e, ("a", "b"), lambda m: _sub_clause(fr, w, m["a"], m["b"], v, t))

    return table(fr, lim, clause, lambda w: has_pair(fr, w, f, r))


def not_free(fr: Fresh, v: Term, f: Term) -> Formula:
    """Variable ``v`` does not occur free in the formula coded ``f``: substituting zero changes nothing."""
    return sub_rel(fr, f, v, n(ZERO_CODE), f)


def closed_term_code(fr: Fresh, t: Term) -> Formula:
    return Or(Equal(t, n(ZERO_CODE)), match(fr, t, (n(TAG["Quoted"]), "c")))


def bounded_formula_code(fr: Fresh, a: Term) -> Formula:
    """``a`` codes a formula all of whose quantifiers are bounded."""

    def clause(w, e):
        cases = [
            match(fr, e, (n(TAG["Equal"]), "p")),
            match(fr, e, (n(TAG["Less"]), "p")),
            Equal(e, n(BOT_CODE)),
            Equal(e, n(TOP_CODE)),
            match(fr, e, (n(TAG["Not"]), "c"), lambda m: bit(fr, w, m["c"])),
        ]
        for tag in ("And", "Or", "Implies"):
            cases.append(match(fr, e, (n(TAG[tag]), ("c1", "c2")),
                               lambda m: And(bit(fr, w, m["c1"]), bit(fr, w, m["c2"]))))
        for tag in ("BoundedForAll", "BoundedExists"):
            cases.append(match(fr, e, (n(TAG[tag]), ("u", ("cb", "c"))), lambda m: bit(fr, w, m["c"])))
        return big_or(cases)

    return table(fr, tower(S(a), 1), clause, lambda w: bit(fr, w, a))


# ---------------------------------------------------- Delta0 satisfaction


def value_of(fr: Fresh, s: Term, u: Term, k: Term) -> Formula:
    """Assignment ``s`` (a finite set of pairs) gives variable ``u`` the value ``k``:
    the least listed value, or 0 when none is listed."""
    listed = And(has_pair(fr, s, u, k), forall_below(fr, k, lambda j: Not(has_pair(fr, s, u, j))))
    unlisted = And(Equal(k, sx.ZERO), forall_below(fr, S(s), lambda j: Not(has_pair(fr, s, u, j))))
    return Or(listed, unlisted)


def update(fr: Fresh, s: Term, u: Term, k: Term, s2: Term) -> Formula:
    """``s2`` is ``s`` with ``u`` reassigned to ``k``."""
    lim = S(Add(s, s2))
    others = forall_below(fr, lim, lambda u2: forall_below(fr, lim, lambda j: Implies(
        neq(u2, u), iff(value_of(fr, s, u2, j), value_of(fr, s2, u2, j)))))
    return And(value_of(fr, s2, u, k), others)


def _sat_clause(fr: Fresh, w: Var, c: Var, s: Var, v: Var) -> Formula:
    one, zero = n(1), sx.ZERO

    def child(code, val):
        return has_triple(fr, w, code, s, val)

    def vals2(m, body):
        return exists_below(fr, S(w), lambda v1: exists_below(fr, S(w), lambda v2: big_and([
            child(m["c1"], v1), child(m["c2"], v2), body(v1, v2)])))

    cases = [
        And(Equal(c, n(ZERO_CODE)), Equal(v, zero)),
        match(fr, c, (n(TAG["Var"]), "u"), lambda m: value_of(fr, s, m["u"], v)),
        match(fr, c, (n(TAG["Quoted"]), "d"), lambda m: Equal(v, m["d"])),
        match(fr, c, (n(TAG["Succ"]), "c1"),
              lambda m: exists_below(fr, S(w), lambda v1: And(child(m["c1"], v1), Equal(v, S(v1))))),
        match(fr, c, (n(TAG["Add"]), ("c1", "c2")), lambda m: vals2(m, lambda a, b: Equal(v, Add(a, b)))),
        match(fr, c, (n(TAG["Mul"]), ("c1", "c2")), lambda m: vals2(m, lambda a, b: Equal(v, Mul(a, b)))),
        match(fr, c, (n(TAG["Exp"]), ("c1", "c2")), lambda m: vals2(m, lambda a, b: Equal(v, Exp(a, b)))),
        match(fr, c, (n(TAG["Equal"]), ("c1", "c2")), lambda m: vals2(m, lambda a, b: Or(
            And(Equal(v, one), Equal(a, b)), And(Equal(v, zero), neq(a, b))))),
        match(fr, c, (n(TAG["Less"]), ("c1", "c2")), lambda m: vals2(m, lambda a, b: Or(
            And(Equal(v, one), Less(a, b)), And(Equal(v, zero), Not(Less(a, b)))))),
        And(Equal(c, n(BOT_CODE)), Equal(v, zero)),
        And(Equal(c, n(TOP_CODE)), Equal(v, one)),
        match(fr, c, (n(TAG["Not"]), "c1"), lambda m: exists_below(fr, n(2), lambda v1: And(
            child(m["c1"], v1), Equal(Add(v, v1), one)))),
        match(fr, c, (n(TAG["And"]), ("c1", "c2")), lambda m: vals2(m, lambda a, b: Equal(v, Mul(a, b)))),
        match(fr, c, (n(TAG["Or"]), ("c1", "c2")), lambda m: vals2(m, lambda a, b: Or(
            And(Equal(v, one), Or(Equal(a, one), Equal(b, one))),
            big_and([Equal(v, zero), Equal(a, zero), Equal(b, zero)])))),
        match(fr, c, (n(TAG["Implies"]), ("c1", "c2")), lambda m: vals2(m, lambda a, b: Or(
            And(Equal(v, one), Or(Equal(a, zero), Equal(b, one))),
            big_and([Equal(v, zero), Equal(a, one), Equal(b, zero)])))),
    ]

    def instance(m, k, want):
        return exists_below(fr, S(w), lambda s2: And(update(fr, s, m["u"], k, s2),
                                                    has_triple(fr, w, m["c"], s2, want)))

    for tag, every in (("BoundedForAll", True), ("BoundedExists", False)):
        def body(m, every=every):
            def with_bound(b):
                all_one = forall_below(fr, b, lambda k: instance(m, k, one))
                all_zero = forall_below(fr, b, lambda k: instance(m, k, zero))
                some_one = exists_below(fr, b, lambda k: instance(m, k, one))
                some_zero = exists_below(fr, b, lambda k: instance(m, k, zero))
                if every:
                    return Or(And(Equal(v, one), all_one), And(Equal(v, zero), some_zero))
                return Or(And(Equal(v, one), some_one), And(Equal(v, zero), all_zero))

            return exists_below(fr, S(w), lambda b: And(child(m["cb"], b), with_bound(b)))

        cases.append(match(fr, c, (n(TAG[tag]), ("u", ("cb", "c"))), body))
    return big_or(cases)


def sat0(fr: Fresh, m: Term, s: Term) -> Formula:
    """The bounded formula coded ``m`` holds under assignment ``s``."""

    def clause(w, e):
        return match(fr, e, ("c", ("s", "v")), lambda mm: _sat_clause(fr, w, mm["c"], mm["s"], mm["v"]))

    return table(fr, tower(S(Add(m, s)), 3), clause, lambda w: has_triple(fr, w, m, s, n(1)))


def strip_block(fr: Fresh, y: Term, tag: str, body: Callable[[Var, Var], Formula]) -> Formula:
    """``y`` is a (possibly empty) block of ``tag`` quantifiers in front of some
    ``m``; ``body(m, w)`` receives ``m`` and the witness set ``w`` listing the block."""
    w, m = fr.var(), fr.var()

    def step(c):
        return Or(Equal(c, m), match(fr, c, (n(TAG[tag]), ("u", "c2")), lambda mm: bit(fr, w, mm["c2"])))

    listing = big_and([
        bit(fr, w, y),
        bit(fr, w, m),
        forall_below(fr, S(w), lambda c: Implies(bit(fr, w, c), step(c))),
    ])
    return BoundedExists(w.index, tower(S(y), 1), BoundedExists(m.index, S(y), And(listing, body(m, w))))


def agree_off_block(fr: Fresh, s: Term, s2: Term, w: Term, tag: str) -> Formula:
    """Assignments ``s`` and ``s2`` agree on every variable not bound by the block listed in ``w``."""
    lim = S(Add(Add(s, s2), w))

    def in_block(u):
        return exists_below(fr, S(w), lambda c: And(
            bit(fr, w, c), match(fr, c, (n(TAG[tag]), (u, "rest")))))

    return forall_below(fr, lim, lambda u: forall_below(fr, lim, lambda k: Implies(
        Not(in_block(u)), iff(value_of(fr, s, u, k), value_of(fr, s2, u, k)))))
