import itertools
import re
from pathlib import Path

import pytest

from conlab import arithmetization as A
from conlab import coding
from conlab import syntax as sx
from conlab.syntax import BOT, TOP, And, Implies, Quoted, Var

DOCS = Path(__file__).resolve().parents[1] / "docs" / "arithmetization.md"
ZERO_EQ = sx.parse_formula("0=0")


def doc_block(name):
    text = DOCS.read_text()
    return text.split(f"<!-- {name}:start -->")[1].split(f"<!-- {name}:end -->")[0]


# ------------------------------------------------------------- theories


def test_ea_descriptor(ea):
    assert ea.coding_scheme_id == A.CODING_SCHEME
    assert sx.free_variables(ea.axiom_recognizer) == {0}
    assert sx.classify(ea.axiom_recognizer).within(sx.Sigma(1))


@pytest.mark.parametrize("recognizer", ["x1 = 0", "forall x1 (x0 = x1)", "0 = 0"])
def test_bad_recognizers_rejected(recognizer):
    with pytest.raises(A.ArithmetizationError):
        A.TheoryDescriptor("bad", sx.parse_formula(recognizer))


def test_unknown_coding_scheme_rejected(ea):
    with pytest.raises(A.ArithmetizationError):
        A.TheoryDescriptor("x", ea.axiom_recognizer, "godel-primes")


def test_extension_recognizes_more(ea):
    T = A.extend_theory(ea, "EA+top", (TOP,))
    assert T != ea
    assert sx.contains(T.axiom_recognizer, Quoted(TOP)) or sx.size(T.axiom_recognizer) > sx.size(ea.axiom_recognizer)


# --------------------------------------------------------------- proofs


def test_proof_predicate_contract(ea):
    P = A.build_proof_predicate(ea)
    assert sx.free_variables(P) == {A.PROOF_VAR, A.CODE_VAR}
    assert sx.classify(P).within(sx.Sigma(1))
    recognizer = sx.substitute(ea.axiom_recognizer, 0, Var(0))
    assert any(sx.substitute(ea.axiom_recognizer, 0, Var(i)) in set(sx.subformulas(P))
               for i in sx.all_variables(P)) or sx.contains(P, recognizer)


def test_provability_is_sigma1(ea):
    assert sx.classify(A.build_provability(ea)) == sx.Sigma(1)


def test_con_examples(ea):
    c = A.build_con(ea, TOP)
    assert sx.classify(c) == sx.Pi(1)
    assert sx.is_sentence(c)
    assert sx.contains(c, Quoted(Implies(TOP, BOT)))
    assert A.is_con_sentence(c, ea) == TOP
    assert A.is_con_sentence(TOP, ea) is None


def test_con_rejects_open_input(ea):
    with pytest.raises(ValueError):
        A.build_con(ea, sx.parse_formula("x0 = 0"))


def test_con_is_pi1_on_all_small_sentences(ea):
    sentences = [f for f in sx.formulas_up_to(5) if sx.is_sentence(f)]
    assert all(sx.classify(A.build_con(ea, f)) == sx.Pi(1) for f in sentences)


def test_con_predicate(ea):
    pred = A.con_predicate(ea)
    assert sx.free_variables(pred) == {A.PRED_VAR}
    assert sx.classify(pred) == sx.Pi(1)
    # instance at a concrete code mentions no variable of the input
    inst = sx.substitute(pred, A.PRED_VAR, Quoted(TOP))
    assert sx.is_sentence(inst)


# -------------------------------------------------------- partial truth


@pytest.mark.parametrize("k", [1, 2, 3])
def test_partial_truth_contract(k):
    t = A.build_partial_truth(k)
    assert sx.free_variables(t) == {A.TRUTH_VAR}
    assert sx.classify(t) == sx.Pi(k)


def test_partial_truth_needs_positive_level():
    with pytest.raises(A.ArithmetizationError):
        A.build_partial_truth(0)


# ------------------------------------------------------------- diagonal


def one_variable_formulas(count):
    out = []
    for f in sx.formulas_up_to(5, variables=(0,)):
        if sx.free_variables(f) == {0}:
            out.append(f)
            if len(out) == count:
                break
    return out


def test_diagonal_shape_on_fifty_formulas():
    psis = one_variable_formulas(50)
    assert len(psis) == 50
    for psi in psis:
        d = A.diagonal(psi)
        assert d.shape_ok(), psi
        assert sx.is_sentence(d.sentence)
        assert d.defining_formula == psi
        assert sx.contains(d.sentence, Quoted(d.diagonalizer))


def test_diagonal_instance_of_equality():
    d = A.diagonal(sx.parse_formula("x0 = x0"))
    inst = d.instance()
    assert inst == sx.Equal(Quoted(d.sentence), Quoted(d.sentence))
    assert sx.evaluate_bounded(inst)
    assert sx.classify(d.sentence) == sx.Sigma(1)


def test_godel_and_henkin_sentences(ea):
    prov = A.build_provability(ea)
    prov1 = sx.substitute(prov, A.CODE_VAR, Var(A.CODE_VAR))
    for psi in (sx.Not(prov1), prov1):
        d = A.diagonal(psi)
        assert d.shape_ok()
        assert d.instance() == sx.substitute(psi, A.CODE_VAR, Quoted(d.sentence))


def test_diagonal_rejects_wrong_arity():
    for text in ("0 = 0", "x0 = x1"):
        with pytest.raises(A.ArithmetizationError):
            A.diagonal(sx.parse_formula(text))


# -------------------------------------------------- iterated consistency


def test_first_iterate_unfolds(ea):
    assert A.build_iterated_con(ea, 0, ZERO_EQ) == TOP
    assert A.build_iterated_con(ea, 1, ZERO_EQ) == A.build_con(ea, And(ZERO_EQ, TOP))


def test_iterates_contain_each_other(ea):
    prev = A.build_iterated_con(ea, 0, ZERO_EQ)
    for k in range(1, 4):
        cur = A.build_iterated_con(ea, k, ZERO_EQ)
        assert sx.contains(cur, prev)
        assert sx.classify(cur) == sx.Pi(1)
        prev = cur


def test_omega_fixed_point(ea):
    F, vx, vb = A.omega_defining_formula(ea, ZERO_EQ)
    assert sx.free_variables(F) == {vx, vb}
    # the Proof_T instance inside ConPred_T survives into F unchanged
    proof = A.con_predicate(ea).body.body.right.body
    assert isinstance(proof, sx.Formula) and sx.size(proof) == sx.size(A.build_proof_predicate(ea))
    assert sx.contains(F, proof)
    assert any(sx.contains(F, A.prec_formula(Var(a), Var(vb))) for a in sx.all_variables(F))
    s = A.build_iterated_con(ea, A.OMEGA, ZERO_EQ)
    assert sx.is_sentence(s) and sx.classify(s) == sx.Pi(1)
    assert sx.contains(s, Quoted(F))


def test_notations():
    assert A.notation(A.OMEGA) == 0
    assert [A.notation(i) for i in range(3)] == [1, 2, 3]
    with pytest.raises(A.ArithmetizationError):
        A.notation(-1)
    with pytest.raises(A.ArithmetizationError):
        A.notation("omega+1")
    # a below b, on notations: every natural is below omega, naturals in order
    for a, b in itertools.product(range(4), repeat=2):
        holds = sx.evaluate_bounded(A.prec_formula(sx.numeral(a), sx.numeral(b)))
        assert holds == (a != 0 and (b == 0 or a < b))


# ------------------------------------------------------------ sentence A


@pytest.mark.parametrize("k", [1, 2])
def test_sentence_A_shape(ea, k):
    a = A.build_sentence_A(A.graph_const_top(), k, ea)
    assert sx.is_sentence(a)
    assert isinstance(a, sx.ForAll) and isinstance(a.body, sx.ForAll)
    assert not isinstance(a.body.body, sx.ForAll)
    antecedent = a.body.body.left
    assert isinstance(antecedent, And)
    assert antecedent.right == A.build_partial_truth(k)
    assert sx.contains(a, A.build_partial_truth(k))
    assert a.body.body.right == A.con_predicate(ea)


def test_sentence_A_rejects_bad_graphs(ea):
    with pytest.raises(A.ArithmetizationError):
        A.build_sentence_A(sx.parse_formula("x2 = x0"), 1, ea)
    with pytest.raises(A.ArithmetizationError):
        A.build_sentence_A(sx.parse_formula("forall x2 exists x3 (x0 = x1)"), 1, ea)


def test_graphs_are_sigma1(ea):
    for G in (A.graph_identity(), A.graph_const_top(), A.graph_con(ea)):
        assert sx.classify(G).within(sx.Sigma(1))
        assert sx.free_variables(G) <= {A.IN_VAR, A.OUT_VAR}


def test_graph_instances_of_small_operators():
    assert sx.evaluate_bounded(A.graph_instance(A.graph_identity(), ZERO_EQ, ZERO_EQ))
    assert not sx.evaluate_bounded(A.graph_instance(A.graph_identity(), ZERO_EQ, TOP))
    assert sx.evaluate_bounded(A.graph_instance(A.graph_const_top(), ZERO_EQ, TOP))


def test_sigma1_fact(ea):
    from conlab.entailment import FactStore
    from conlab.operators import arith_operators

    ops = arith_operators(ea)
    store = FactStore()
    fact = A.sigma1_fact(ops["identity"], ZERO_EQ, ZERO_EQ, store)
    assert store.get(fact.id) == fact
    assert fact.sentence == A.graph_instance(A.graph_identity(), ZERO_EQ, ZERO_EQ)
    with pytest.raises(A.ArithmetizationError):
        A.sigma1_fact(ops["con_op"], ZERO_EQ, A.build_con(ea, TOP))
    good = A.sigma1_fact(ops["con_op"], ZERO_EQ, A.build_con(ea, ZERO_EQ))
    assert good.sentence == A.graph_instance(A.graph_con(ea), ZERO_EQ, A.build_con(ea, ZERO_EQ))


# ----------------------------------------------------------- docs tables


def test_schema_table_golden():
    rows = re.findall(r"\| (\w+) \| `([^`]+)` \|", doc_block("schema-table"))
    assert rows == A.schema_table()


def _letters_formula(pattern, values):
    text = pattern
    for letter, val in values.items():
        text = re.sub(rf"\b{letter}\b", "top" if val else "bot", text)
    return sx.parse_formula(text)


def test_propositional_schemas_are_tautologies():
    """Independent reading of the documented patterns: every 0/1 filling is true."""
    for name, pattern in A.schema_table():
        if not name.startswith("L"):
            continue
        letters = sorted(set(re.findall(r"\b[ABC]\b", pattern)))
        for bits in itertools.product((False, True), repeat=len(letters)):
            assert sx.evaluate_bounded(_letters_formula(pattern, dict(zip(letters, bits)))), (name, bits)


def test_side_condition_table_golden():
    rows = re.findall(r"\| (\w+) \| `([^`]+)` \| ([^|]+) \|", doc_block("side-table"))
    assert [(a, b, c.strip()) for a, b, c in rows] == list(A.SIDE_CONDITION_SCHEMAS)


def test_substitution_table_covers_every_constructor():
    names = re.findall(r"\| `(\w+)` \|", doc_block("sub-table"))
    assert sorted(names) == sorted(coding.TAGS)
