import itertools
import json

import pytest

from conlab import construction as C
from conlab import entailment as E
from conlab import gl
from conlab import modal as m
from conlab.modal import BOT, TOP, And, Atom, Diamond, Not

P0, P1 = Atom(0), Atom(1)
FOUR_VALUATIONS = [m.Valuation.of({0: a, 1: b}, default=True) for a, b in itertools.product((True, False), repeat=2)]


@pytest.fixture(scope="module")
def trace6():
    return C.run_stages(C.atom_enumeration(), 6)


# ----------------------------------------------------------------- stages


def test_stage_zero():
    tr = C.run_stages(C.atom_enumeration(), 0)
    (s,) = tr.stages
    assert s.numerated == (P0, Not(P0))
    assert s.active == (And(P0, Diamond(P0)), And(Not(P0), Diamond(Not(P0))))
    assert s.deactivated == ()


def test_stage_one(trace3):
    s = trace3.stages[1]
    assert len(s.numerated) == 4
    assert And(And(P0, Diamond(P0)), P1) in s.numerated
    assert s.deactivated == trace3.stages[0].active


@pytest.mark.parametrize("N", range(7))
def test_counts(N, trace6):
    stages = trace6.stages[: N + 1]
    assert sum(len(s.numerated) for s in stages) == 2 ** (N + 2) - 2
    assert len(stages[-1].active) == 2 ** (N + 1)


def test_ledger_law(trace6):
    seen = set()
    for s, nxt in zip(trace6.stages, trace6.stages[1:]):
        assert nxt.deactivated == s.activated
        assert not seen & set(s.activated)
        seen |= set(s.activated)
    assert len(seen) == sum(len(s.activated) for s in trace6.stages[:-1])


def test_replay_is_bit_exact():
    a = C.run_stages(C.atom_enumeration(), 4)
    b = C.run_stages(C.atom_enumeration(), 4)
    assert a.dumps() == b.dumps()
    data = json.loads(a.dumps())
    assert set(data["stages"][0]) == {"stage", "numerated", "activated", "deactivated"}


def test_negative_stage_rejected():
    with pytest.raises(ValueError):
        C.run_stages(C.atom_enumeration(), -1)


def test_membership(trace3):
    assert C.membership(P0, trace3) == 0
    assert C.membership(And(P0, P1), trace3) is None
    for f in trace3.stages[2].numerated:
        assert C.membership(f, trace3) == 2


def test_arith_enumeration_is_closed_and_distinct():
    e = C.arith_enumeration()
    items = [e(i) for i in range(40)]
    assert len(set(items)) == 40
    from conlab import syntax as sx

    assert all(sx.is_sentence(f) for f in items)
    assert e(3) == items[3]


# ------------------------------------------------------------------- tree


def test_roots_with_true_atom(trace3):
    forest = C.tree(trace3)
    assert forest.roots == [P0, Not(P0)]


def test_tree_nodes_are_consistent_sentences(trace4):
    forest = C.tree(trace4)
    numerated = trace4.numerated()
    assert set(forest.sentences()) == {f for f in numerated if E.consistent(f)}
    for nd in forest.nodes:
        assert len(nd.children) <= 2
        if nd.parent is not None:
            assert nd.sentence.left == And(nd.parent, Diamond(nd.parent))


def test_siblings_are_jointly_inconsistent(trace4):
    forest = C.tree(trace4)
    assert forest.siblings()
    for a, b in forest.siblings():
        assert E.entails([a, b], BOT) is E.PROVABLE


def test_tree_order_is_entailment(trace3):
    forest = C.tree(trace3)
    nodes = forest.sentences()
    assert len(nodes) == 14
    for a, b in itertools.product(nodes, repeat=2):
        assert forest.below(a, b) == (E.entails([b], a) is E.PROVABLE), (a, b)


def test_inconsistent_sentences_are_dropped():
    e = C.doctored(C.atom_enumeration(), {1: BOT})
    tr = C.run_stages(e, 1)
    forest = C.tree(tr)
    assert all(E.consistent(f) for f in forest.sentences())
    assert len(forest.sentences()) == 4  # the two children conjoined with bot vanish


def test_dot_marks_nodes(trace3, all_true):
    forest = C.tree(trace3)
    branch = C.true_branch(trace3, all_true)
    dot = forest.to_dot(branch)
    assert dot.startswith("digraph A {")
    assert dot.count("peripheries=2") == len(branch)
    assert dot.count("->") == len(forest.nodes) - len(forest.roots)


# ------------------------------------------------------------ true branch


def test_branch_starts_with_true_atom(trace3):
    assert C.true_branch(trace3, m.Valuation.of({0: True}, default=False))[0] == P0
    assert C.true_branch(trace3, m.Valuation.of({0: False}, default=False))[0] == Not(P0)


@pytest.mark.parametrize("v", FOUR_VALUATIONS)
def test_exactly_one_true_per_stage(v, trace6):
    for n in range(7):
        assert len(C.true_sentences(trace6, v, n, "numerated")) == 1
        assert len(C.true_sentences(trace6, v, n, "activated")) == 1


@pytest.mark.parametrize("v", FOUR_VALUATIONS)
def test_branch_successor_identity(v, trace6):
    branch = C.true_branch(trace6, v)
    assert len(branch) == 7
    for psi, nxt in zip(branch, branch[1:6]):
        assert nxt == And(And(psi, Diamond(psi)), C.theta(psi, trace6, v))


def test_theta_examples(trace3):
    yes = m.Valuation.of({0: True, 1: True}, default=True)
    no = m.Valuation.of({0: True, 1: False}, default=True)
    assert C.theta(P0, trace3, yes) == P1
    assert C.theta(P0, trace3, no) == Not(P1)
    with pytest.raises(C.NotOnTrueBranch):
        C.theta(Not(P0), trace3, yes)


def test_sharp(trace6, all_true):
    assert C.check_sharp(P0, trace6, all_true)
    branch = C.true_branch(trace6, all_true)
    assert all(C.check_sharp(psi, trace6, all_true) for psi in branch[:6])


def test_sharp_fails_when_next_sentence_is_top(all_true):
    tr = C.run_stages(C.doctored(C.atom_enumeration(), {1: TOP}), 2)
    assert C.theta(P0, tr, all_true) == TOP
    assert not C.check_sharp(P0, tr, all_true)


@pytest.mark.parametrize("n", range(5))
def test_true_sentences_grow_in_strength(n, trace6, all_true):
    branch = C.true_branch(trace6, all_true)
    target = m.mock_iterated_con(n, TOP)
    assert any(E.entails([f], target) is E.PROVABLE for f in branch)


def test_true_branch_is_true(trace6):
    for v in FOUR_VALUATIONS:
        assert all(gl.truth(f, v) for f in C.true_branch(trace6, v))
