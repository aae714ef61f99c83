"""Proof predicates, consistency statements, partial truth, diagonalization.

All builders return :mod:`conlab.syntax` formulas.  Variable conventions:

* the proof predicate has free variables ``x0`` (the proof) and ``x1`` (the
  code of the proved formula);
* one-place predicates (consistency, partial truth, axiom recognizers) use
  ``x0``;
* operator graphs use ``x0`` for the input code and ``x1`` for the output code.

Codes of fixed formulas appear as quotation constants (``Quoted``); see
``docs/arithmetization.md`` for the axiom schemas and the substitution relation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from conlab import arithlib as L
from conlab.arithlib import TAG, Fresh, S, coded, match, n
from conlab.syntax import (
    BOT,
    TOP,
    Add,
    And,
    BoundedForAll,
    Equal,
    Exists,
    Exp,
    ForAll,
    Formula,
    Implies,
    Less,
    Mul,
    Not,
    Or,
    Quoted,
    Sigma,
    Var,
    ZERO,
    all_variables,
    big_and,
    big_or,
    classify,
    eval_term,
    free_variables,
    numeral,
    require_sentence,
    substitute,
)

PROOF_VAR, CODE_VAR = 0, 1
PRED_VAR = 0
TRUTH_VAR = 1
IN_VAR, OUT_VAR = 0, 1
CODING_SCHEME = "tagged-cantor-v1"


class ArithmetizationError(ValueError):
    pass


def _x(i: int) -> Var:
    return Var(i)


def _t(tag: str):
    return n(TAG[tag])


# ------------------------------------------------------------------ theories


@dataclass(frozen=True)
class TheoryDescriptor:
    """A theory given by a Sigma1 formula in ``x0`` recognizing codes of its nonlogical axioms."""

    name: str
    axiom_recognizer: Formula
    coding_scheme_id: str = CODING_SCHEME

    def __post_init__(self):
        if free_variables(self.axiom_recognizer) != frozenset({PRED_VAR}):
            raise ArithmetizationError(f"{self.name}: the axiom recognizer must have exactly the free variable x0")
        if not classify(self.axiom_recognizer).within(Sigma(1)):
            raise ArithmetizationError(f"{self.name}: the axiom recognizer is not Sigma1")
        if self.coding_scheme_id != CODING_SCHEME:
            raise ArithmetizationError(f"unknown coding scheme {self.coding_scheme_id!r}")


def _q(text_free: Formula, *vs: int) -> Formula:
    for v in reversed(vs):
        text_free = ForAll(v, text_free)
    return text_free


def ea_axioms() -> tuple[Formula, ...]:
    """Nonlogical axioms of elementary arithmetic apart from induction."""
    x, y, z = Var(0), Var(1), Var(2)
    one = S(ZERO)
    return (
        _q(Not(Equal(S(x), ZERO)), 0),
        _q(Implies(Equal(S(x), S(y)), Equal(x, y)), 0, 1),
        _q(Or(Equal(x, ZERO), Exists(1, Equal(x, S(y)))), 0),
        _q(Equal(Add(x, ZERO), x), 0),
        _q(Equal(Add(x, S(y)), S(Add(x, y))), 0, 1),
        _q(Equal(Mul(x, ZERO), ZERO), 0),
        _q(Equal(Mul(x, S(y)), Add(Mul(x, y), x)), 0, 1),
        _q(Equal(Exp(x, ZERO), one), 0),
        _q(Equal(Exp(x, S(y)), Mul(Exp(x, y), x)), 0, 1),
        _q(Implies(Less(x, y), Exists(2, Equal(Add(S(z), x), y))), 0, 1),
        _q(Implies(Exists(2, Equal(Add(S(z), x), y)), Less(x, y)), 0, 1),
    )


def delta0_induction(fr: Fresh, e) -> Formula:
    """``e`` codes (A(0) & forall v (A -> A(Sv))) -> forall v A for a bounded A."""

    def body(m):
        v = m["v"]
        return big_and([
            L.bounded_formula_code(fr, m["A"]),
            L.sub_rel(fr, m["A"], v, n(L.ZERO_CODE), m["A0"]),
            L.exists_below(fr, S(e), lambda sv: And(
                match(fr, sv, (_t("Succ"), (_t("Var"), v))),
                L.sub_rel(fr, m["A"], v, sv, m["AS"]))),
        ])

    shape = (_t("Implies"), (
        (_t("And"), ("A0", (_t("ForAll"), ("v", (_t("Implies"), ("A", "AS")))))),
        (_t("ForAll"), ("v", "A")),
    ))
    return match(fr, e, shape, body)


def ea_theory() -> TheoryDescriptor:
    """Elementary arithmetic: the axioms above plus bounded induction."""
    fr = Fresh(1)
    x = _x(PRED_VAR)
    listed = big_or([Equal(x, Quoted(ax)) for ax in ea_axioms()])
    return TheoryDescriptor("EA", Or(listed, delta0_induction(fr, x)))


def extend_theory(base: TheoryDescriptor, name: str, extra: tuple[Formula, ...]) -> TheoryDescriptor:
    """``base`` plus finitely many extra axioms."""
    x = _x(PRED_VAR)
    listed = big_or([Equal(x, Quoted(require_sentence(a))) for a in extra])
    return TheoryDescriptor(name, Or(base.axiom_recognizer, listed))


# ---------------------------------------------------------- logical axioms


def _propositional_schemas():
    I, A_, O, N = _t("Implies"), _t("And"), _t("Or"), _t("Not")
    bot = n(L.BOT_CODE)

    def imp(a, b):
        return (I, (a, b))

    return [
        imp("A", imp("B", "A")),
        imp(imp("A", imp("B", "C")), imp(imp("A", "B"), imp("A", "C"))),
        imp((A_, ("A", "B")), "A"),
        imp((A_, ("A", "B")), "B"),
        imp("A", imp("B", (A_, ("A", "B")))),
        imp("A", (O, ("A", "B"))),
        imp("B", (O, ("A", "B"))),
        imp(imp("A", "C"), imp(imp("B", "C"), imp((O, ("A", "B")), "C"))),
        imp((N, "A"), imp("A", bot)),
        imp(imp("A", bot), (N, "A")),
        imp(bot, "A"),
        imp(imp(imp("A", bot), bot), "A"),
    ]


def _quantifier_schemas():
    I, A_, N = _t("Implies"), _t("And"), _t("Not")
    FA, EX, BF, BE, LT, V = (_t(k) for k in ("ForAll", "Exists", "BoundedForAll", "BoundedExists", "Less", "Var"))

    def imp(a, b):
        return (I, (a, b))

    guard = (LT, ((V, "v"), "t"))
    return [
        imp((EX, ("v", "A")), (N, (FA, ("v", (N, "A"))))),
        imp((N, (FA, ("v", (N, "A")))), (EX, ("v", "A"))),
        imp((BF, ("v", ("t", "A"))), (FA, ("v", imp(guard, "A")))),
        imp((FA, ("v", imp(guard, "A"))), (BF, ("v", ("t", "A")))),
        imp((BE, ("v", ("t", "A"))), (EX, ("v", (A_, (guard, "A"))))),
        imp((EX, ("v", (A_, (guard, "A")))), (BE, ("v", ("t", "A")))),
    ]


def logical_axiom(fr: Fresh, e) -> Formula:
    """``e`` codes an instance of a logical axiom schema."""
    I, FA, EQ = _t("Implies"), _t("ForAll"), _t("Equal")
    cases = [match(fr, e, shape) for shape in _propositional_schemas() + _quantifier_schemas()]
    cases.append(Equal(e, n(L.TOP_CODE)))
    # forall v A -> A(t) for closed t
    cases.append(match(fr, e, (I, ((FA, ("v", "A")), "B")), lambda m: L.exists_below(fr, S(e), lambda t: And(
        L.closed_term_code(fr, t), L.sub_rel(fr, m["A"], m["v"], t, m["B"])))))
    # forall v (A -> B) -> (A -> forall v B), v not free in A
    cases.append(match(fr, e, (I, ((FA, ("v", (I, ("A", "B")))), (I, ("A", (FA, ("v", "B")))))),
                       lambda m: L.not_free(fr, m["v"], m["A"])))
    cases.append(match(fr, e, (EQ, ("t", "t"))))
    # s = t -> (A(s) -> A(t))
    big = L.tower(S(e), 2)
    cases.append(match(fr, e, (I, ((EQ, ("s", "t")), (I, ("B", "C")))), lambda m: L.exists_below(
        fr, big, lambda a: L.exists_below(fr, S(e), lambda v: And(
            L.sub_rel(fr, a, v, m["s"], m["B"]), L.sub_rel(fr, a, v, m["t"], m["C"]))))))
    return big_or(cases)


SIDE_CONDITION_SCHEMAS = (
    ("instantiation", "(forall v A -> A[t/v])", "t a closed term: 0 or a quotation constant"),
    ("distribution", "(forall v (A -> B) -> (A -> forall v B))", "v not free in A"),
    ("reflexivity", "t = t", "any term t"),
    ("substitutivity", "(s = t -> (A[s/v] -> A[t/v]))", "any formula A and variable v"),
)


def render_shape(shape) -> str:
    """Text of an axiom pattern, for documentation."""
    names = {v: k for k, v in TAG.items()}
    if isinstance(shape, str):
        return shape
    if not isinstance(shape, tuple):
        value = eval_term(shape, {})
        return {L.BOT_CODE: "bot", L.TOP_CODE: "top"}.get(value, str(value))
    tag, payload = shape
    kind = names[eval_term(tag, {})]
    r = render_shape
    if kind == "Not":
        return f"~{r(payload)}"
    if kind == "Var":
        return r(payload)
    if kind in ("ForAll", "Exists"):
        v, body = payload
        return f"{'forall' if kind == 'ForAll' else 'exists'} {r(v)} {r(body)}"
    if kind in ("BoundedForAll", "BoundedExists"):
        v, (bound, body) = payload
        return f"{'forall' if kind == 'BoundedForAll' else 'exists'} {r(v)} < {r(bound)} {r(body)}"
    a, b = payload
    op = {"Implies": "->", "And": "&", "Or": "|", "Equal": "=", "Less": "<"}[kind]
    text = f"{r(a)} {op} {r(b)}"
    return text if kind in ("Equal", "Less") else f"({text})"


def schema_table() -> list[tuple[str, str]]:
    """(name, pattern) for every pattern-only logical axiom schema."""
    rows = [(f"L{i}", render_shape(sh)) for i, sh in enumerate(_propositional_schemas(), 1)]
    rows.append((f"L{len(rows) + 1}", "top"))
    rows += [(f"Q{i}", render_shape(sh)) for i, sh in enumerate(_quantifier_schemas(), 1)]
    return rows


# --------------------------------------------------------------- proofs


def _recognizes(T: TheoryDescriptor, e: Var) -> Formula:
    return substitute(T.axiom_recognizer, PRED_VAR, e)


@lru_cache(maxsize=None)
def build_proof_predicate(T: TheoryDescriptor) -> Formula:
    """``Proof_T(x0, x1)``: x0 codes a Hilbert proof in T whose lines include x1.

    A proof is pair(n, w), where w is a finite set of pairs (i, e) for i < n;
    every listed line must be an axiom or follow from earlier lines by modus
    ponens or generalization.
    """
    fr = Fresh(2)
    p, x = _x(PROOF_VAR), _x(CODE_VAR)

    def justified(w, i, e):
        earlier = lambda body: L.exists_below(fr, i, lambda j: L.exists_below(fr, S(w), lambda a: And(
            L.has_pair(fr, w, j, a), body(a))))
        mp = earlier(lambda a: L.exists_below(fr, i, lambda k: L.exists_below(fr, S(w), lambda c: And(
            L.has_pair(fr, w, k, c), coded(fr, c, "Implies", (a, e))))))
        gen = earlier(lambda a: match(fr, e, (_t("ForAll"), ("u", a))))
        return big_or([logical_axiom(fr, e), _recognizes(T, e), mp, gen])

    def framed(m):
        ln, w = m["n"], m["w"]
        concludes = L.exists_below(fr, ln, lambda k: L.has_pair(fr, w, k, x))
        lines_ok = L.forall_below(fr, ln, lambda i: L.forall_below(fr, S(w), lambda e: Implies(
            L.has_pair(fr, w, i, e), justified(w, i, e))))
        return And(concludes, lines_ok)

    return match(fr, p, ("n", "w"), framed)


@lru_cache(maxsize=None)
def build_provability(T: TheoryDescriptor) -> Formula:
    """``Prov_T(x1)``: some proof ends in x1."""
    return Exists(PROOF_VAR, build_proof_predicate(T))


def _hole(T: TheoryDescriptor) -> int:
    return max(all_variables(build_proof_predicate(T))) + 1


@lru_cache(maxsize=None)
def con_template(T: TheoryDescriptor) -> tuple[Formula, int]:
    """``forall p ~Proof_T(p, h)`` together with the hole variable ``h``."""
    h = _hole(T)
    return ForAll(PROOF_VAR, Not(substitute(build_proof_predicate(T), CODE_VAR, Var(h)))), h


def build_con(T: TheoryDescriptor, phi: Formula) -> Formula:
    """``Con_T(phi)``: no proof of phi -> bot."""
    require_sentence(phi)
    template, h = con_template(T)
    return substitute(template, h, Quoted(Implies(phi, BOT)))


def con_code_bound(x) -> Formula:
    """A term above the code of (x -> bot) for x a code."""
    inner = L.pair_bound(x, n(L.BOT_CODE))
    return L.pair_bound(_t("Implies"), inner)


@lru_cache(maxsize=None)
def con_predicate(T: TheoryDescriptor) -> Formula:
    """``ConPred_T(x0)``: the formula coded x0 is consistent with T."""
    fr = Fresh(max(all_variables(build_proof_predicate(T))) + 1)
    x = _x(PRED_VAR)
    p, z = fr.var(), fr.var()  # the proof variable of Proof_T is x0, taken by the input here
    proof = substitute(substitute(build_proof_predicate(T), PROOF_VAR, p), CODE_VAR, z)
    guard = coded(fr, z, "Implies", (x, n(L.BOT_CODE)))
    return ForAll(p.index, BoundedForAll(z.index, con_code_bound(x), Implies(guard, Not(proof))))


def is_con_sentence(f: Formula, T: TheoryDescriptor) -> Formula | None:
    """If ``f`` is ``build_con(T, phi)`` return phi, else None."""
    template, h = con_template(T)
    if not isinstance(f, ForAll) or f.var != PROOF_VAR or not isinstance(f.body, Not):
        return None
    target = None

    def walk(a, b):
        nonlocal target
        if a == b:
            return True
        if isinstance(a, Var) and a.index == h and isinstance(b, Quoted):
            if target is None:
                target = b
            return target == b
        if type(a) is not type(b):
            return False
        fields = a.__dataclass_fields__
        for name in fields:
            u, v = getattr(a, name), getattr(b, name)
            if hasattr(u, "__dataclass_fields__"):
                if not walk(u, v):
                    return False
            elif u != v:
                return False
        return True

    if not walk(template, f) or target is None:
        return None
    g = target.formula
    if isinstance(g, Implies) and g.right == BOT:
        return g.left
    return None


# ---------------------------------------------------------- partial truth


def _sat(fr: Fresh, kind: str, k: int, y, s) -> Formula:
    if k == 0:
        return L.sat0(fr, y, s)
    if kind == "Pi":
        def body(m, w):
            s2 = fr.var()
            return ForAll(s2.index, Implies(L.agree_off_block(fr, s, s2, w, "ForAll"), _sat(fr, "Sigma", k - 1, m, s2)))
        return L.strip_block(fr, y, "ForAll", body)

    def body(m, w):
        s2 = fr.var()
        return Exists(s2.index, And(L.agree_off_block(fr, s, s2, w, "Exists"), _sat(fr, "Pi", k - 1, m, s2)))
    return L.strip_block(fr, y, "Exists", body)


@lru_cache(maxsize=None)
def build_partial_truth(k: int) -> Formula:
    """``True_Pik(x1)``: x1 codes a true Pi_k sentence (k >= 1).

    The free variable is x1 so that sentence A can use it unchanged next to
    ``ConPred_T(x0)``."""
    if k < 1:
        raise ArithmetizationError("partial truth is defined for k >= 1")
    fr = Fresh(2)
    return _sat(fr, "Pi", k, _x(TRUTH_VAR), ZERO)


# ---------------------------------------------------------- diagonalization


@dataclass(frozen=True)
class DiagonalResult:
    """``sentence`` is chi with its own code plugged in, where
    chi(x) := exists y (Diag(x, y) & psi(y))."""

    sentence: Formula
    defining_formula: Formula
    diagonalizer: Formula
    variable: int
    psi_variable: int

    def instance(self) -> Formula:
        """psi applied to the code of the fixed point."""
        return substitute(self.defining_formula, self.psi_variable, Quoted(self.sentence))

    def shape_ok(self) -> bool:
        return self.sentence == substitute(self.diagonalizer, self.variable, Quoted(self.diagonalizer))


def diag_relation(fr: Fresh, x, var_index: int, y) -> Formula:
    """``y`` codes the result of substituting the quotation of x for variable ``var_index`` in x."""
    return L.exists_below(fr, L.pair_bound(_t("Quoted"), x), lambda q: And(
        coded(fr, q, "Quoted", x), L.sub_rel(fr, x, n(var_index), q, y)))


def diagonal(psi: Formula) -> DiagonalResult:
    free = free_variables(psi)
    if len(free) != 1:
        raise ArithmetizationError("diagonal needs a formula with exactly one free variable")
    (v,) = free
    top = max(all_variables(psi)) + 1
    vx, vy = top, top + 1
    fr = Fresh(top + 2)
    chi = Exists(vy, And(diag_relation(fr, Var(vx), vx, Var(vy)), substitute(psi, v, Var(vy))))
    theta = substitute(chi, vx, Quoted(chi))
    return DiagonalResult(theta, psi, chi, vx, v)


# ------------------------------------------------------- iterated consistency

OMEGA = "omega"
Ordinal = Union[int, str]


def notation(alpha: Ordinal) -> int:
    """omega is 0 and the natural number m is m + 1."""
    if alpha == OMEGA:
        return 0
    if isinstance(alpha, int) and alpha >= 0:
        return alpha + 1
    raise ArithmetizationError(f"no notation for {alpha!r}")


def prec_formula(a, b) -> Formula:
    """Delta0 order on notations: a names a natural number below the ordinal named by b."""
    return And(Not(Equal(a, ZERO)), Or(Equal(b, ZERO), Less(a, b)))


def _numeral_code(fr: Fresh, beta, t) -> Formula:
    """``t`` codes the numeral for beta."""

    def clause(w, e):
        return match(fr, e, ("i", "c"), lambda m: Or(
            And(Equal(m["i"], ZERO), Equal(m["c"], n(L.ZERO_CODE))),
            L.exists_below(fr, m["i"], lambda i2: L.exists_below(fr, m["c"], lambda c2: big_and([
                Equal(m["i"], S(i2)), L.has_pair(fr, w, i2, c2), coded(fr, m["c"], "Succ", c2)]))),
        ))

    return L.table(fr, L.tower(S(Add(beta, t)), 2), clause, lambda w: L.has_pair(fr, w, beta, t))


def omega_defining_formula(T: TheoryDescriptor, phi: Formula) -> tuple[Formula, int, int]:
    """F(x, b): for every beta below b, phi & F(quote F, beta) is consistent.

    Returns F with its two parameter variables (x, b)."""
    require_sentence(phi)
    pred = con_predicate(T)
    vx, vb = max(all_variables(pred)) + 1, max(all_variables(pred)) + 2
    fr = Fresh(vb + 1)
    beta, t, q, r1, r, z = (fr.var() for _ in range(6))
    x, b = Var(vx), Var(vb)
    antecedent = big_and([
        prec_formula(beta, b),
        _numeral_code(fr, beta, t),
        coded(fr, q, "Quoted", x),
        L.sub_rel(fr, x, n(vx), q, r1),
        L.sub_rel(fr, r1, n(vb), t, r),
        coded(fr, z, "And", (Quoted(phi), r)),
    ])
    body = Implies(antecedent, substitute(pred, PRED_VAR, z))
    for v in (z, r, r1, q, t, beta):
        body = ForAll(v.index, body)
    return body, vx, vb


def build_iterated_con(T: TheoryDescriptor, alpha: Ordinal, phi: Formula) -> Formula:
    """``Con^alpha_T(phi)``.  Finite stages unfold directly:
    Con^0 = top and Con^(m+1) = Con(phi & Con^m); omega uses a fixed point."""
    require_sentence(phi)
    if alpha == OMEGA:
        F, vx, vb = omega_defining_formula(T, phi)
        return substitute(substitute(F, vx, Quoted(F)), vb, numeral(notation(OMEGA)))
    notation(alpha)
    out = TOP
    for _ in range(alpha):
        out = build_con(T, And(phi, out))
    return out


# ------------------------------------------------------------ sentence A


def build_sentence_A(G: Formula, k: int, T: TheoryDescriptor) -> Formula:
    """forall x forall y ((G(x, y) & True_Pik(y)) -> ConPred_T(x))."""
    if free_variables(G) - {IN_VAR, OUT_VAR}:
        raise ArithmetizationError("a graph formula may only use x0 (input) and x1 (output) freely")
    if not classify(G).within(Sigma(1)):
        raise ArithmetizationError("the graph formula must be Sigma1")
    truth = build_partial_truth(k)
    body = Implies(And(G, truth), con_predicate(T))
    return ForAll(IN_VAR, ForAll(OUT_VAR, body))


def graph_identity() -> Formula:
    return Equal(Var(IN_VAR), Var(OUT_VAR))


def graph_const_top() -> Formula:
    return Equal(Var(OUT_VAR), Quoted(TOP))


@lru_cache(maxsize=None)
def graph_con(T: TheoryDescriptor) -> Formula:
    """x1 codes Con_T of the sentence coded x0: plug the quoted code of (x0 -> bot)
    into the hole of the consistency template."""
    template, h = con_template(T)
    fr = Fresh(max(all_variables(template)) + 1)
    x, y = Var(IN_VAR), Var(OUT_VAR)
    z, q = fr.var(), fr.var()
    body = big_and([
        coded(fr, z, "Implies", (x, n(L.BOT_CODE))),
        coded(fr, q, "Quoted", z),
        L.sub_rel(fr, Quoted(template), n(h), q, y),
    ])
    return Exists(z.index, Exists(q.index, body))


def graph_instance(G: Formula, phi: Formula, psi: Formula) -> Formula:
    """G(quote phi, quote psi)."""
    return substitute(substitute(G, IN_VAR, Quoted(phi)), OUT_VAR, Quoted(psi))


def sigma1_fact(operator, phi: Formula, psi: Formula, store=None):
    """Record G(quote phi, quote psi) as a schematic fact, after checking that
    the operator really sends phi to psi."""
    from conlab.entailment import SchematicFact

    if operator.graph is None:
        raise ArithmetizationError(f"operator {operator.name} has no registered graph")
    if operator.apply(phi) != psi:
        raise ArithmetizationError(f"operator {operator.name} does not send the input to the claimed output")
    fact = SchematicFact(graph_instance(operator.graph, phi, psi), provenance=f"sigma1-completeness:{operator.name}")
    if store is not None:
        store.add(fact)
    return fact
