"""Single-step mutations of a certificate, for rejection tests."""

from dataclasses import replace

from conlab import entailment as E
from conlab import syntax as sx

FOREIGN = sx.parse_formula("S(0)=0")


def _other_justifications(i, j):
    out = [E.Fact("no-such-fact"), E.PriorStep(i - 1 if i > 1 else 1)]
    if isinstance(j, E.Instantiation):
        out.append(E.Instantiation(j.step, tuple(reversed(j.terms))))
        out.append(E.Instantiation(j.step, j.terms[:1]))
    if isinstance(j, E.Logic):
        out.append(E.Logic(j.steps[:-1], j.facts))
        if j.facts:
            out.append(E.Logic(j.steps, ()))
    if isinstance(j, E.PriorStep) and j.step > 1:
        out.append(E.PriorStep(j.step - 1))
    return [k for k in out if k != j]


def cites(j) -> set:
    if isinstance(j, E.Logic):
        return set(j.steps)
    if isinstance(j, (E.Instantiation, E.Monotonicity, E.PriorStep)):
        return {j.step}
    return set()


def mutations(cert: E.Certificate):
    """(label, mutated certificate) pairs.  Each changes exactly one step:
    its claim, its justification, its hypotheses (a foreign one added), or
    its position (swapped with the step right before one that cites it).
    Swapping two independent steps is a harmless reordering and not included."""
    steps = list(cert.steps)
    for i, s in enumerate(steps, 1):
        def with_step(new, i=i):
            out = list(steps)
            out[i - 1] = new
            return E.Certificate(cert.hypotheses, cert.goal, tuple(out))

        yield f"step {i}: negated claim", with_step(replace(s, claim=sx.Not(s.claim)))
        yield f"step {i}: foreign claim", with_step(replace(s, claim=FOREIGN))
        for k, j in enumerate(_other_justifications(i, s.justification)):
            yield f"step {i}: justification {k}", with_step(replace(s, justification=j))
        yield f"step {i}: foreign hypothesis", with_step(replace(s, hypotheses=s.hypotheses + (FOREIGN,)))
        if i < len(steps) and i in cites(steps[i].justification):
            out = list(steps)
            out[i - 1], out[i] = out[i], out[i - 1]
            yield f"steps {i},{i + 1}: swapped", E.Certificate(cert.hypotheses, cert.goal, tuple(out))
