import hashlib
import itertools
import json
import random
from pathlib import Path

import pytest

from conlab import arithmetization as A
from conlab import construction as C
from conlab import entailment as E
from conlab import modal as m
from conlab import operators as O
from conlab import syntax as sx
from conlab.modal import BOT, TOP, And, Atom, Diamond, Not, Or
from mutations import mutations

P0, P1 = Atom(0), Atom(1)
ZERO_EQ = sx.parse_formula("0=0")
DIGESTS = json.loads((Path(__file__).parent / "golden" / "certificate_digests.json").read_text())


# ------------------------------------------------------------- operators


def test_builtin_operators():
    assert O.apply_operator(O.const_top, Diamond(P0)) == TOP
    assert O.apply_operator(O.con_op, P0) == m.mock_con(P0)
    assert O.class_equal(O.con_n_op(2).apply(TOP), Diamond(Diamond(TOP)))


def test_level_violation(ea):
    liar = O.Operator("liar", lambda f: A.build_con(ea, f), level=sx.DELTA0)
    with pytest.raises(O.LevelViolation):
        O.apply_operator(liar, ZERO_EQ)
    ops = O.arith_operators(ea)
    assert sx.classify(O.apply_operator(ops["con_op"], ZERO_EQ)) == sx.Pi(1)


# ------------------------------------------------------ Lindenbaum order


def test_class_equal_examples():
    assert O.class_equal(And(P0, TOP), P0)
    assert not O.class_equal(Diamond(TOP), TOP)


def test_strict_implication_examples():
    assert O.strict_implies(And(P0, Diamond(P0)), P0)
    assert O.strict_implies(BOT, And(BOT, BOT))
    assert not O.strict_implies(TOP, TOP)


def test_strict_implication_order_laws():
    pool = [f for f in m.formulas_up_to(4, (0,)) if E.consistent(f)]
    rng = random.Random(3)
    for f in pool:
        assert not O.strict_implies(f, f)
    for _ in range(300):
        a, b, c = rng.choice(pool), rng.choice(pool), rng.choice(pool)
        if O.strict_implies(a, b) and O.strict_implies(b, c):
            assert O.strict_implies(a, c)


def test_cones():
    c = O.cone(Diamond(TOP), m.Valuation((), True))
    assert c.true is True
    assert c.member(And(P0, Diamond(TOP)))
    assert not c.member(P0)
    assert O.cone(m.box_n(1), m.Valuation((), True)).true is False


# ----------------------------------------------------------- the operator g


def test_thm13_g_examples(trace4):
    assert O.thm13_g(And(P0, Not(P0)), trace4) == BOT
    out = O.thm13_g(P0, trace4)
    assert E.entails([out], Diamond(P0)) is E.PROVABLE
    assert O.class_equal(And(P0, out), And(P0, Diamond(P0)))
    taut = Or(P0, Not(P0))
    assert all(E.entails([taut], z) is not E.PROVABLE for z in trace4.stages[0].numerated)
    assert O.thm13_g(taut, trace4) == TOP


def test_thm13_g_needs_a_long_enough_trace(trace3):
    with pytest.raises(ValueError):
        O.thm13_g(Atom(5), trace3)


def test_thm13_g_matches_con_on_members(trace4):
    for phi in trace4.numerated():
        if E.consistent(phi):
            assert O.class_equal(And(phi, O.thm13_g(phi, trace4)), And(phi, Diamond(phi))), phi


def test_thm13_g_in_arithmetic_mode(ea):
    con = lambda f: A.build_con(ea, f)
    tr = C.run_stages(C.arith_enumeration(), 1, con=con)
    for f in (sx.TOP, sx.BOT, sx.Not(sx.BOT)):
        out = O.thm13_g(f, tr, "schematic", con=con, stage=0)
        assert sx.classify(out).within(sx.Pi(1))
    # stage 1 members mention Con statements the schematic prover cannot settle
    with pytest.raises(E.OracleRequired):
        O.thm13_g(sx.TOP, tr, "schematic", con=con)


# ------------------------------------------------------------ monotonicity


def sampled_pairs(count, seed):
    rng = random.Random(seed)
    pool = list(m.formulas_up_to(4, (0, 1)))
    pairs = []
    while len(pairs) < count:
        a, b = rng.choice(pool), rng.choice(pool)
        if E.entails([a], b) is E.PROVABLE:
            pairs.append((a, b))
    return pairs


def test_con_op_is_monotone():
    report = O.monotone_check(O.con_op, sampled_pairs(20, 1))
    assert report.ok and report.checked == 20


def test_thm13_g_is_monotone_on_samples(trace4):
    members = [f for f in trace4.numerated() if E.consistent(f)][:12]
    pairs = [(a, b) for a, b in itertools.product(members, repeat=2)]
    pairs += [(And(a, P1), a) for a in members[:6]]
    g = O.thm13_operator(trace4)
    report = O.monotone_check(g, pairs)
    assert report.checked > 12 and report.ok


def test_broken_operator_flagged():
    report = O.monotone_check(O.broken, [(BOT, TOP)])
    assert report.violations == ((BOT, TOP),)


# --------------------------------------------------------------- dichotomy


@pytest.mark.parametrize("op, case, generator", [
    (O.const_top, O.EVENTUALLY_TRIVIAL, TOP),
    (O.con_op, O.EVENTUALLY_CON_LIKE, TOP),
    (O.const_con_top, O.EVENTUALLY_TRIVIAL, Diamond(TOP)),
])
def test_dichotomy_cases(op, case, generator):
    report = O.dichotomy(op, m.Valuation((), True))
    assert report.case == case
    assert report.generator == generator
    assert len(report.samples) == 25 and report.failures == []
    assert all(E.entails([s.sentence], generator) is E.PROVABLE for s in report.samples)


def test_dichotomy_seed(monkeypatch):
    v = m.Valuation((), True)
    a = O.dichotomy(O.con_op, v, seed=1)
    assert a == O.dichotomy(O.con_op, v, seed=1)
    monkeypatch.setenv("CONLAB_SEED", "1")
    assert O.dichotomy(O.con_op, v) == a
    assert O.dichotomy(O.con_op, v, seed=2) != a
    assert json.loads(json.dumps(a.to_json()))["failures"] == 0


def test_dichotomy_reports_failures_for_a_bad_candidate():
    # identity is monotone but phi + phi does not prove Con(phi)
    report = O.dichotomy(O.identity, m.Valuation((), True))
    assert report.case == O.EVENTUALLY_CON_LIKE
    assert report.failures


# ------------------------------------------------------------- certificate


def certificate(ea, name, phi=None, k=1):
    ops = O.arith_operators(ea)
    g = ops[name]
    a = A.build_sentence_A(g.graph, k, ea)
    phi = a if phi is None else phi
    store = E.FactStore([O.cone_fact(phi, a)])
    return O.thm4_certificate(phi, g, k, ea, store), store, ops


def test_con_op_certificate_accepted(ea):
    cert, store, ops = certificate(ea, "con_op")
    assert len(cert) == 6
    assert [type(s.justification) for s in cert.steps] == [
        E.Fact, E.Instantiation, E.Fact, E.Logic, E.Logic, E.PriorStep]
    assert cert.steps[1].justification.terms == (sx.Quoted(cert.hypotheses[0]), sx.Quoted(cert.hypotheses[1]))
    assert E.check_certificate(cert, store, ops).ok
    assert cert.goal == sx.substitute(A.con_predicate(ea), A.PRED_VAR, sx.Quoted(cert.hypotheses[0]))


def test_certificate_mutations_rejected(ea):
    cert, store, ops = certificate(ea, "con_op")
    labels = []
    for label, mutated in mutations(cert):
        labels.append(label)
        assert not E.check_certificate(mutated, store, ops).ok, label
    assert len(labels) > 30


def test_wrong_instantiation_term_rejected_at_step_two(ea):
    cert, store, ops = certificate(ea, "con_op")
    s2 = cert.steps[1]
    bad = E.Step(s2.hypotheses, s2.claim, E.Instantiation(1, (sx.Quoted(sx.TOP), s2.justification.terms[1])))
    result = E.check_certificate(E.Certificate(cert.hypotheses, cert.goal, (cert.steps[0], bad) + cert.steps[2:]), store, ops)
    assert result.failed_step == 2


def test_identity_and_const_top_certificates(ea):
    cert, store, ops = certificate(ea, "identity", ZERO_EQ)
    assert cert.hypotheses == (ZERO_EQ, ZERO_EQ)
    assert E.check_certificate(cert, store, ops).ok
    cert, store, ops = certificate(ea, "const_top")
    assert E.check_certificate(cert, store, ops).ok


def test_certificate_needs_cone_fact_and_level(ea):
    ops = O.arith_operators(ea)
    with pytest.raises(O.CertificateError):
        O.thm4_certificate(ZERO_EQ, ops["con_op"], 1, ea, E.FactStore())
    with pytest.raises(O.CertificateError):
        certificate(ea, "identity")  # A itself is Pi2, above the truth predicate's level
    with pytest.raises(O.CertificateError):
        O.thm4_certificate(ZERO_EQ, O.con_op, 1, ea, E.FactStore())


@pytest.mark.parametrize("name", sorted(DIGESTS))
def test_certificate_golden_digest(ea, name):
    cert, store, ops = certificate(ea, name, ZERO_EQ)
    text = E.dump_certificate(cert)
    assert hashlib.sha256(text.encode()).hexdigest() == DIGESTS[name]


def test_certificate_roundtrip(ea):
    cert, store, ops = certificate(ea, "identity", ZERO_EQ)
    back = E.load_certificate(E.dump_certificate(cert))
    assert back == cert
    assert E.check_certificate(back, store, ops).ok


# ------------------------------------------------------------ claims suite


def test_claims_suite_all_true(trace4, all_true):
    results = O.thm13_claims_suite(trace4, all_true)
    kinds = {r.claim for r in results}
    assert kinds == {"g-is-con", "sharp", "conservative", "g-from-psi", "identity"}
    assert all(r.verdict for r in results)
    first = [r for r in results if "p0" in r.instance and r.claim == "identity"]
    assert first


def test_claims_suite_skips_nodes_without_sharp(all_true):
    tr = C.run_stages(C.doctored(C.atom_enumeration(), {1: TOP}), 3)
    results = O.thm13_claims_suite(tr, all_true)
    sharp = [r for r in results if r.claim == "sharp"]
    assert sharp[0].verdict is False
    assert sum(r.claim == "identity" for r in results) == sum(r.verdict for r in sharp)
    assert all(r.verdict for r in results if r.claim == "g-is-con")
    assert json.dumps([r.to_json() for r in results])
