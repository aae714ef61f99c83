"""Independent reference implementations used by the tests.

Nothing here imports the code it checks against, apart from the data types.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from conlab import modal as m
from conlab import syntax as sx


# ------------------------------------------------------------- pairing


def pairing_table(limit: int) -> dict[tuple[int, int], int]:
    """Cantor pairing by literally walking the diagonals."""
    out = {}
    code = 0
    d = 0
    while code < limit:
        for b in range(d + 1):
            out[(d - b, b)] = code
            code += 1
        d += 1
    return out


# ------------------------------------------------------- prenex levels


def _compress(prefix: str) -> str:
    return "".join(k for k, _ in itertools.groupby(prefix))


def _shuffles(a: str, b: str) -> set[str]:
    if not a:
        return {b}
    if not b:
        return {a}
    return {a[0] + s for s in _shuffles(a[1:], b)} | {b[0] + s for s in _shuffles(a, b[1:])}


_FLIP = str.maketrans("EA", "AE")


@lru_cache(maxsize=None)
def prenex_prefixes(f: sx.Formula) -> frozenset[str]:
    """Every block pattern obtainable by pulling unbounded quantifiers to the front."""
    if isinstance(f, (sx.Equal, sx.Less, sx.Bottom, sx.Top)):
        return frozenset({""})
    if isinstance(f, sx.Not):
        return frozenset(p.translate(_FLIP) for p in prenex_prefixes(f.body))
    if isinstance(f, sx.BOUNDED):
        return prenex_prefixes(f.body)
    if isinstance(f, sx.QUANTIFIERS):
        q = "E" if isinstance(f, sx.Exists) else "A"
        return frozenset(_compress(q + p) for p in prenex_prefixes(f.body))
    left = prenex_prefixes(f.left)
    if isinstance(f, sx.Implies):
        left = frozenset(p.translate(_FLIP) for p in left)
    right = prenex_prefixes(f.right)
    return frozenset(_compress(s) for a in left for b in right for s in _shuffles(a, b))


def reference_levels(f: sx.Formula) -> tuple[int, set[str]]:
    """(minimal number of blocks, kinds of leading block achieving it)."""
    prefixes = prenex_prefixes(f)
    best = min(len(p) for p in prefixes)
    return best, {p[0] for p in prefixes if len(p) == best and p}


# --------------------------------------------------------- GL by frames


def _strict_orders(n: int):
    """Transitive irreflexive relations on 0..n-1 (conversely well founded as the set is finite)."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        rel = {p for p, b in zip(pairs, bits) if b}
        if any((j, i) in rel for i, j in rel):
            continue
        if all((i, k) in rel for i, j in rel for j2, k in rel if j == j2):
            yield frozenset(rel)


def _forces(f, w, rel, val) -> bool:
    if isinstance(f, m.Atom):
        return f.index in val[w]
    if isinstance(f, m.Bot):
        return False
    if isinstance(f, m.Top):
        return True
    if isinstance(f, m.Not):
        return not _forces(f.body, w, rel, val)
    if isinstance(f, m.And):
        return _forces(f.left, w, rel, val) and _forces(f.right, w, rel, val)
    if isinstance(f, m.Or):
        return _forces(f.left, w, rel, val) or _forces(f.right, w, rel, val)
    if isinstance(f, m.Implies):
        return (not _forces(f.left, w, rel, val)) or _forces(f.right, w, rel, val)
    succ = [v for (u, v) in rel if u == w]
    if isinstance(f, m.Box):
        return all(_forces(f.body, v, rel, val) for v in succ)
    return any(_forces(f.body, v, rel, val) for v in succ)


def small_frame_countermodel(f: m.ModalFormula, max_worlds: int = 3):
    """Search every GL frame with at most ``max_worlds`` worlds and every valuation."""
    atoms = sorted(m.atoms(f))
    for n in range(1, max_worlds + 1):
        for rel in _strict_orders(n):
            for bits in itertools.product((0, 1), repeat=n * len(atoms)):
                val = [
                    {a for j, a in enumerate(atoms) if bits[w * len(atoms) + j]}
                    for w in range(n)
                ]
                for w in range(n):
                    if not _forces(f, w, rel, val):
                        return rel, val, w
    return None


def chain_truth(f: m.ModalFormula, length: int | None = None) -> bool:
    """Truth of a sentence without atoms at the top of a long finite chain,
    where []^n bot fails for every n that matters."""
    length = m.modal_depth(f) + 2 if length is None else length
    rel = frozenset((i, j) for i in range(length) for j in range(length) if i > j)
    return _forces(f, length - 1, rel, [set()] * length)


# ------------------------------------------------- naive Delta0 semantics


def naive_value(t: sx.Term, env: dict) -> int:
    kind = type(t).__name__
    if kind == "Zero":
        return 0
    if kind == "Var":
        return env[t.index]
    if kind == "Succ":
        return naive_value(t.arg, env) + 1
    if kind == "Exp":
        return pow(naive_value(t.base, env), naive_value(t.power, env))
    a, b = naive_value(t.left, env), naive_value(t.right, env)
    return {"Add": a + b, "Mul": a * b}[kind]


def naive_holds(f: sx.Formula, env: dict | None = None) -> bool:
    """Bounded search written as set comprehensions, no shared code with the library."""
    env = env or {}
    kind = type(f).__name__
    if kind in ("Equal", "Less"):
        a, b = naive_value(f.left, env), naive_value(f.right, env)
        return a == b if kind == "Equal" else a < b
    if kind in ("Bottom", "Top"):
        return kind == "Top"
    if kind == "Not":
        return not naive_holds(f.body, env)
    if kind in ("And", "Or", "Implies"):
        a, b = naive_holds(f.left, env), naive_holds(f.right, env)
        return {"And": a and b, "Or": a or b, "Implies": b or not a}[kind]
    n = naive_value(f.bound, env)
    values = {naive_holds(f.body, {**env, f.var: i}) for i in range(n)}
    return False not in values if kind == "BoundedForAll" else True in values
