"""First-order arithmetic syntax: terms, formulas, printing, parsing,
substitution, hierarchy classification and bounded evaluation.

Variables are plain natural-number indices; ``x3`` is variable 3.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator


class _Node:
    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash((type(self).__name__,) + tuple(self.__dict__[k] for k in self.__dataclass_fields__))


def _node(cls):
    # Trees are deep and hashed often (memo tables, sets), so the hash is cached
    # instead of the dataclass default that rehashes the whole tree.
    cls = dataclass(frozen=True, eq=True)(cls)
    cls.__hash__ = _Node.__hash__
    return cls


# --------------------------------------------------------------------- terms


class Term(_Node):
    pass


@_node
class Zero(Term):
    def __str__(self):
        return "0"


@_node
class Succ(Term):
    arg: Term

    def __str__(self):
        return f"S({self.arg})"


@_node
class Add(Term):
    left: Term
    right: Term

    def __str__(self):
        return f"({self.left}+{self.right})"


@_node
class Mul(Term):
    left: Term
    right: Term

    def __str__(self):
        return f"({self.left}*{self.right})"


@_node
class Exp(Term):
    base: Term
    power: Term

    def __str__(self):
        return f"exp({self.base},{self.power})"


@_node
class Var(Term):
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("variable index must be a natural number")

    def __str__(self):
        return f"x{self.index}"


@_node
class Quoted(Term):
    """Quotation constant: a closed term denoting the Goedel code of ``formula``.

    Semantically identical to the numeral of ``encode(formula)``, but kept
    symbolic so that codes of large formulas never have to be materialised.
    """

    formula: "Formula"

    def __str__(self):
        return f"quote({self.formula})"


# ------------------------------------------------------------------ formulas


class Formula(_Node):
    pass


@_node
class Equal(Formula):
    left: Term
    right: Term

    def __str__(self):
        return f"{self.left}={self.right}"


@_node
class Less(Formula):
    left: Term
    right: Term

    def __str__(self):
        return f"{self.left}<{self.right}"


@_node
class Bottom(Formula):
    def __str__(self):
        return "bot"


@_node
class Top(Formula):
    def __str__(self):
        return "top"


@_node
class Not(Formula):
    body: Formula

    def __str__(self):
        return f"~{self.body}"


@_node
class And(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} & {self.right})"


@_node
class Or(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} | {self.right})"


@_node
class Implies(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} -> {self.right})"


@_node
class ForAll(Formula):
    var: int
    body: Formula

    def __str__(self):
        return f"forall x{self.var} {self.body}"


@_node
class Exists(Formula):
    var: int
    body: Formula

    def __str__(self):
        return f"exists x{self.var} {self.body}"


def _check_bound(var, bound):
    if var in term_variables(bound):
        raise ValueError(f"bound term {bound} mentions its own variable x{var}")


@_node
class BoundedForAll(Formula):
    var: int
    bound: Term
    body: Formula

    def __post_init__(self):
        _check_bound(self.var, self.bound)

    def __str__(self):
        return f"forall x{self.var} < {self.bound} {self.body}"


@_node
class BoundedExists(Formula):
    var: int
    bound: Term
    body: Formula

    def __post_init__(self):
        _check_bound(self.var, self.bound)

    def __str__(self):
        return f"exists x{self.var} < {self.bound} {self.body}"


BOT = Bottom()
TOP = Top()
ZERO = Zero()

BINARY = (And, Or, Implies)
QUANTIFIERS = (ForAll, Exists)
BOUNDED = (BoundedForAll, BoundedExists)


# ------------------------------------------------------------- hierarchy


@dataclass(frozen=True)
class HierarchyLevel:
    kind: str  # "Delta0", "Sigma" or "Pi"
    k: int = 0

    def __post_init__(self):
        if self.kind == "Delta0":
            if self.k != 0:
                raise ValueError("Delta0 carries no index")
        elif self.kind in ("Sigma", "Pi"):
            if self.k < 1:
                raise ValueError("Sigma/Pi levels start at 1")
        else:
            raise ValueError(f"unknown hierarchy kind {self.kind!r}")

    def within(self, other: "HierarchyLevel") -> bool:
        """True when every formula of this level is also of level ``other``."""
        if self.kind == "Delta0":
            return True
        if other.kind == "Delta0":
            return False
        if self.kind == other.kind:
            return self.k <= other.k
        return self.k < other.k

    def __str__(self):
        return "Delta0" if self.kind == "Delta0" else f"{self.kind}({self.k})"


DELTA0 = HierarchyLevel("Delta0")


def Sigma(k: int) -> HierarchyLevel:
    return HierarchyLevel("Sigma", k)


def Pi(k: int) -> HierarchyLevel:
    return HierarchyLevel("Pi", k)


# ------------------------------------------------------------ traversals


def term_variables(t: Term) -> frozenset[int]:
    if isinstance(t, Var):
        return frozenset((t.index,))
    if isinstance(t, (Zero, Quoted)):
        return frozenset()
    if isinstance(t, Succ):
        return term_variables(t.arg)
    if isinstance(t, Exp):
        return term_variables(t.base) | term_variables(t.power)
    return term_variables(t.left) | term_variables(t.right)


@lru_cache(maxsize=None)
def free_variables(f: Formula) -> frozenset[int]:
    if isinstance(f, (Equal, Less)):
        return term_variables(f.left) | term_variables(f.right)
    if isinstance(f, (Bottom, Top)):
        return frozenset()
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, BINARY):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, QUANTIFIERS):
        return free_variables(f.body) - {f.var}
    if isinstance(f, BOUNDED):
        return term_variables(f.bound) | (free_variables(f.body) - {f.var})
    raise TypeError(f"not a formula: {f!r}")


@lru_cache(maxsize=None)
def all_variables(f: Formula) -> frozenset[int]:
    """Every variable index occurring anywhere in ``f``, bound or free."""
    if isinstance(f, (Equal, Less)):
        return term_variables(f.left) | term_variables(f.right)
    if isinstance(f, (Bottom, Top)):
        return frozenset()
    if isinstance(f, Not):
        return all_variables(f.body)
    if isinstance(f, BINARY):
        return all_variables(f.left) | all_variables(f.right)
    if isinstance(f, QUANTIFIERS):
        return all_variables(f.body) | {f.var}
    return term_variables(f.bound) | all_variables(f.body) | {f.var}


def is_sentence(f: Formula) -> bool:
    return not free_variables(f)


def require_sentence(f: Formula) -> Formula:
    fv = free_variables(f)
    if fv:
        raise ValueError(f"expected a sentence, found free variables {sorted(fv)}")
    return f


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Succ):
        yield from subterms(t.arg)
    elif isinstance(t, Exp):
        yield from subterms(t.base)
        yield from subterms(t.power)
    elif isinstance(t, (Add, Mul)):
        yield from subterms(t.left)
        yield from subterms(t.right)
    elif isinstance(t, Quoted):
        for s in subformulas(t.formula):
            if isinstance(s, (Equal, Less)):
                yield from subterms(s.left)
                yield from subterms(s.right)
            elif isinstance(s, BOUNDED):
                yield from subterms(s.bound)


def subformulas(f: Formula, into_quotes: bool = True) -> Iterator[Formula]:
    """Pre-order walk; with ``into_quotes`` the walk continues inside quotation constants."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, BINARY):
            stack.append(g.right)
            stack.append(g.left)
        elif isinstance(g, (QUANTIFIERS, BOUNDED)):
            stack.append(g.body)
        if into_quotes:
            terms = ()
            if isinstance(g, (Equal, Less)):
                terms = (g.left, g.right)
            elif isinstance(g, BOUNDED):
                terms = (g.bound,)
            for t in terms:
                stack.extend(_quoted_formulas(t))


def _quoted_formulas(t: Term) -> list[Formula]:
    if isinstance(t, Quoted):
        return [t.formula]
    if isinstance(t, Succ):
        return _quoted_formulas(t.arg)
    if isinstance(t, Exp):
        return _quoted_formulas(t.base) + _quoted_formulas(t.power)
    if isinstance(t, (Add, Mul)):
        return _quoted_formulas(t.left) + _quoted_formulas(t.right)
    return []


def contains(f: Formula, part) -> bool:
    """Syntactic containment of a subformula or subterm, looking inside quotations."""
    if isinstance(part, Formula):
        return any(g == part for g in subformulas(f))
    for g in subformulas(f):
        ts = (g.left, g.right) if isinstance(g, (Equal, Less)) else (g.bound,) if isinstance(g, BOUNDED) else ()
        if any(s == part for t in ts for s in subterms(t)):
            return True
    return False


def size(x) -> int:
    """Node count of a term or formula (quotation constants count as one node)."""
    if isinstance(x, (Zero, Var, Quoted, Bottom, Top)):
        return 1
    if isinstance(x, Succ):
        return 1 + size(x.arg)
    if isinstance(x, Exp):
        return 1 + size(x.base) + size(x.power)
    if isinstance(x, (Add, Mul, Equal, Less, *BINARY)):
        return 1 + size(x.left) + size(x.right)
    if isinstance(x, Not):
        return 1 + size(x.body)
    if isinstance(x, QUANTIFIERS):
        return 1 + size(x.body)
    if isinstance(x, BOUNDED):
        return 1 + size(x.bound) + size(x.body)
    raise TypeError(f"cannot size {x!r}")


# --------------------------------------------------------------- printing


def print_formula(f: Formula) -> str:
    return str(f)


def print_term(t: Term) -> str:
    return str(t)


# ---------------------------------------------------------------- parsing


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(r"\s*(->|forall|exists|quote|exp|bot|top|x\d+|[0S()+*=<~&|,])")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    # keywords glued to identifiers, e.g. "topx" or "exp1", are rejected by the grammar
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.furthest = (0, "empty input")

    def peek(self, k=0):
        j = self.i + k
        return self.tokens[j][0] if j < len(self.tokens) else None

    def fail(self, msg):
        pos = self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)
        if pos >= self.furthest[0]:
            self.furthest = (pos, msg)
        raise ParseError(msg, pos)

    def expect(self, tok):
        if self.peek() != tok:
            self.fail(f"expected {tok!r}, found {self.peek()!r}")
        self.i += 1

    def var(self) -> int:
        tok = self.peek()
        if tok is None or not re.fullmatch(r"x\d+", tok):
            self.fail(f"expected a variable, found {tok!r}")
        self.i += 1
        return int(tok[1:])

    # terms: sum := product ('+' product)* ; product := primary ('*' primary)*
    def term(self) -> Term:
        t = self.product()
        while self.peek() == "+":
            self.i += 1
            t = Add(t, self.product())
        return t

    def product(self) -> Term:
        t = self.primary()
        while self.peek() == "*":
            self.i += 1
            t = Mul(t, self.primary())
        return t

    def primary(self) -> Term:
        tok = self.peek()
        if tok == "0":
            self.i += 1
            return ZERO
        if tok == "S":
            self.i += 1
            self.expect("(")
            t = self.term()
            self.expect(")")
            return Succ(t)
        if tok == "exp":
            self.i += 1
            self.expect("(")
            a = self.term()
            self.expect(",")
            b = self.term()
            self.expect(")")
            return Exp(a, b)
        if tok == "quote":
            self.i += 1
            self.expect("(")
            f = self.formula()
            self.expect(")")
            return Quoted(f)
        if tok == "(":
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        if tok is not None and tok.startswith("x"):
            return Var(self.var())
        self.fail(f"expected a term, found {tok!r}")

    def formula(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.i += 1
            return Not(self.formula())
        if tok == "bot":
            self.i += 1
            return BOT
        if tok == "top":
            self.i += 1
            return TOP
        if tok in ("forall", "exists"):
            self.i += 1
            v = self.var()
            if self.peek() == "<":
                self.i += 1
                bound = self.term()
                body = self.formula()
                cls = BoundedForAll if tok == "forall" else BoundedExists
                try:
                    return cls(v, bound, body)
                except ValueError as exc:
                    self.fail(str(exc))
            body = self.formula()
            return (ForAll if tok == "forall" else Exists)(v, body)
        if tok == "(":
            save = self.i
            try:
                return self.parenthesised()
            except ParseError:
                self.i = save
        return self.atom()

    def parenthesised(self) -> Formula:
        self.expect("(")
        left = self.formula()
        op = self.peek()
        if op == ")":
            self.i += 1
            return left
        if op not in ("&", "|", "->"):
            self.fail(f"expected a connective, found {op!r}")
        self.i += 1
        right = self.formula()
        self.expect(")")
        return {"&": And, "|": Or, "->": Implies}[op](left, right)

    def atom(self) -> Formula:
        left = self.term()
        op = self.peek()
        if op not in ("=", "<"):
            self.fail(f"expected '=' or '<', found {op!r}")
        self.i += 1
        right = self.term()
        return Equal(left, right) if op == "=" else Less(left, right)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    try:
        f = p.formula()
    except ParseError:
        pos, msg = p.furthest
        raise ParseError(msg, pos) from None
    if p.i != len(p.tokens):
        raise ParseError(f"trailing input {p.peek()!r}", p.tokens[p.i][1])
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.i != len(p.tokens):
        raise ParseError(f"trailing input {p.peek()!r}", p.tokens[p.i][1])
    return t


# ----------------------------------------------------------- substitution


def substitute_term(t: Term, v: int, s: Term) -> Term:
    if isinstance(t, Var):
        return s if t.index == v else t
    if isinstance(t, (Zero, Quoted)):
        return t
    if isinstance(t, Succ):
        return Succ(substitute_term(t.arg, v, s))
    if isinstance(t, Exp):
        return Exp(substitute_term(t.base, v, s), substitute_term(t.power, v, s))
    return type(t)(substitute_term(t.left, v, s), substitute_term(t.right, v, s))


def fresh_index(used: Iterable[int]) -> int:
    used = set(used)
    i = 0
    while i in used:
        i += 1
    return i


def substitute(f: Formula, v: int, t: Term) -> Formula:
    """Replace the free occurrences of ``x{v}`` in ``f`` by ``t``.

    A binder that would capture a variable of ``t`` is renamed to the
    smallest index not occurring in ``t``, the body, or ``v``.
    """
    if not isinstance(t, Term):
        raise TypeError("substitute expects a Term")
    if v not in free_variables(f):
        return f
    return _subst(f, v, t, term_variables(t))


def _subst(f, v, t, tvars):
    if isinstance(f, (Equal, Less)):
        return type(f)(substitute_term(f.left, v, t), substitute_term(f.right, v, t))
    if isinstance(f, (Bottom, Top)):
        return f
    if isinstance(f, Not):
        return Not(_subst(f.body, v, t, tvars))
    if isinstance(f, BINARY):
        return type(f)(_subst(f.left, v, t, tvars), _subst(f.right, v, t, tvars))
    bounded = isinstance(f, BOUNDED)
    bound = substitute_term(f.bound, v, t) if bounded else None
    var, body = f.var, f.body
    body_hit = var != v and v in free_variables(body)
    clash = bounded and var in term_variables(bound)
    if not body_hit and not clash:
        return type(f)(var, bound, body) if bounded else f
    if not body_hit:
        # only the bound changed, but it now mentions the binder: rename
        new = fresh_index(tvars | all_variables(body) | term_variables(bound) | {v})
        return type(f)(new, bound, _subst(body, var, Var(new), frozenset((new,))))
    if var in tvars:
        new = fresh_index(tvars | all_variables(body) | {v} | (term_variables(f.bound) if bounded else set()))
        body = _subst(body, var, Var(new), frozenset((new,)))
        var = new
    body = _subst(body, v, t, tvars)
    return type(f)(var, bound, body) if bounded else type(f)(var, body)


# ---------------------------------------------------------- classification


@lru_cache(maxsize=None)
def _levels(f: Formula) -> tuple[int, int, str]:
    """Minimal (sigma, pi) indices of ``f`` plus the leading block kind used to
    break ties, reading the prenex operation left to right.

    Bounded quantifiers are transparent; ``sigma == pi == 0`` means Delta0.
    """
    if isinstance(f, (Equal, Less, Bottom, Top)):
        return 0, 0, ""
    if isinstance(f, Not):
        s, p, lead = _levels(f.body)
        return p, s, {"E": "A", "A": "E", "": ""}[lead]
    if isinstance(f, BOUNDED):
        return _levels(f.body)
    if isinstance(f, BINARY):
        s1, p1, l1 = _levels(f.left)
        s2, p2, l2 = _levels(f.right)
        if isinstance(f, Implies):
            s1, p1, l1 = p1, s1, {"E": "A", "A": "E", "": ""}[l1]
        s, p = max(s1, s2), max(p1, p2)
        if s < p:
            lead = "E"
        elif p < s:
            lead = "A"
        else:
            lead = _leading(s1, p1, l1) or _leading(s2, p2, l2)
        return s, p, lead
    s, p, _ = _levels(f.body)
    if isinstance(f, Exists):
        s2 = max(1, min(s, p + 1))
        return s2, s2 + 1, "E"
    p2 = max(1, min(p, s + 1))
    return p2 + 1, p2, "A"


def _leading(s, p, lead):
    if s == p == 0:
        return ""
    if s < p:
        return "E"
    if p < s:
        return "A"
    return lead


def classify(f: Formula) -> HierarchyLevel:
    s, p, lead = _levels(f)
    if s == 0:
        return DELTA0
    if s < p:
        return Sigma(s)
    if p < s:
        return Pi(p)
    return Sigma(s) if lead == "E" else Pi(p)


def is_delta0(f: Formula) -> bool:
    return all(not isinstance(g, QUANTIFIERS) for g in subformulas(f, into_quotes=False))


# -------------------------------------------------------------- evaluation


def eval_term(t: Term, env: dict[int, int]) -> int:
    if isinstance(t, Zero):
        return 0
    if isinstance(t, Var):
        try:
            return env[t.index]
        except KeyError:
            raise ValueError(f"unassigned variable x{t.index}") from None
    if isinstance(t, Succ):
        return eval_term(t.arg, env) + 1
    if isinstance(t, Add):
        return eval_term(t.left, env) + eval_term(t.right, env)
    if isinstance(t, Mul):
        return eval_term(t.left, env) * eval_term(t.right, env)
    if isinstance(t, Exp):
        return eval_term(t.base, env) ** eval_term(t.power, env)
    if isinstance(t, Quoted):
        from conlab.coding import encode

        return encode(t.formula)
    raise TypeError(f"not a term: {t!r}")


def _holds(f: Formula, env: dict[int, int]) -> bool:
    if isinstance(f, Equal):
        if isinstance(f.left, Quoted) and isinstance(f.right, Quoted):
            # encode is injective, so codes agree iff the formulas do
            return f.left.formula == f.right.formula
        return eval_term(f.left, env) == eval_term(f.right, env)
    if isinstance(f, Less):
        return eval_term(f.left, env) < eval_term(f.right, env)
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Top):
        return True
    if isinstance(f, Not):
        return not _holds(f.body, env)
    if isinstance(f, And):
        return _holds(f.left, env) and _holds(f.right, env)
    if isinstance(f, Or):
        return _holds(f.left, env) or _holds(f.right, env)
    if isinstance(f, Implies):
        return (not _holds(f.left, env)) or _holds(f.right, env)
    if isinstance(f, BOUNDED):
        n = eval_term(f.bound, env)
        inner = dict(env)
        want_all = isinstance(f, BoundedForAll)
        for i in range(n):
            inner[f.var] = i
            if _holds(f.body, inner) != want_all:
                return not want_all
        return want_all
    raise ValueError(f"unbounded quantifier in {f}")


def evaluate_bounded(s: Formula) -> bool:
    """Truth of a closed Delta0 sentence in the standard model."""
    if free_variables(s):
        raise ValueError("evaluate_bounded needs a closed sentence")
    if not is_delta0(s):
        raise ValueError("evaluate_bounded needs a Delta0 sentence")
    return _holds(s, {})


# -------------------------------------------------------------- builders


def conjoin(ss: Iterable[Formula]) -> Formula:
    """Right-nested conjunction in the given order; the empty conjunction is top."""
    ss = list(ss)
    if not ss:
        return TOP
    out = ss[-1]
    for s in reversed(ss[:-1]):
        out = And(s, out)
    return out


def big_and(fs: list[Formula]) -> Formula:
    """Balanced conjunction, used for large generated templates to keep depth low."""
    if not fs:
        return TOP
    if len(fs) == 1:
        return fs[0]
    mid = len(fs) // 2
    return And(big_and(fs[:mid]), big_and(fs[mid:]))


def big_or(fs: list[Formula]) -> Formula:
    if not fs:
        return BOT
    if len(fs) == 1:
        return fs[0]
    mid = len(fs) // 2
    return Or(big_or(fs[:mid]), big_or(fs[mid:]))


def iff(a: Formula, b: Formula) -> Formula:
    return And(Implies(a, b), Implies(b, a))


def numeral(n: int) -> Term:
    t: Term = ZERO
    for _ in range(n):
        t = Succ(t)
    return t


# ------------------------------------------------------------- enumeration


def terms_of_size(n: int, variables=(0, 1)) -> list[Term]:
    return _terms(n, tuple(variables))


_TERM_CACHE: dict = {}


def _terms(n, variables):
    key = (n, variables)
    if key in _TERM_CACHE:
        return _TERM_CACHE[key]
    out: list[Term] = []
    if n == 1:
        out = [ZERO] + [Var(v) for v in variables]
    elif n > 1:
        out = [Succ(t) for t in _terms(n - 1, variables)]
        for i in range(1, n - 1):
            for a in _terms(i, variables):
                for b in _terms(n - 1 - i, variables):
                    out += [Add(a, b), Mul(a, b), Exp(a, b)]
    _TERM_CACHE[key] = out
    return out


_FORMULA_CACHE: dict = {}


def formulas_of_size(n: int, variables=(0, 1)) -> list[Formula]:
    """All formulas with exactly ``n`` nodes over the given variables, in a fixed order."""
    variables = tuple(variables)
    key = (n, variables)
    if key in _FORMULA_CACHE:
        return _FORMULA_CACHE[key]
    out: list[Formula] = []
    if n == 1:
        out = [BOT, TOP]
    else:
        for i in range(1, n - 1):
            for a in _terms(i, variables):
                for b in _terms(n - 1 - i, variables):
                    out += [Equal(a, b), Less(a, b)]
        out += [Not(g) for g in formulas_of_size(n - 1, variables)]
        for i in range(1, n - 1):
            for a in formulas_of_size(i, variables):
                for b in formulas_of_size(n - 1 - i, variables):
                    out += [And(a, b), Or(a, b), Implies(a, b)]
        for v in variables:
            for g in formulas_of_size(n - 1, variables):
                out += [ForAll(v, g), Exists(v, g)]
            for i in range(1, n - 1):
                for t in _terms(i, variables):
                    if v in term_variables(t):
                        continue
                    for g in formulas_of_size(n - 1 - i, variables):
                        out += [BoundedForAll(v, t, g), BoundedExists(v, t, g)]
    _FORMULA_CACHE[key] = out
    return out


def formulas_up_to(n: int, variables=(0, 1)) -> Iterator[Formula]:
    for k in range(1, n + 1):
        yield from formulas_of_size(k, variables)
