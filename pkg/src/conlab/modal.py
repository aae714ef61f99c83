"""Propositional modal formulas standing in for arithmetic sentences.

``Box`` reads "provable in T", ``Diamond`` reads "consistent with T", so the
consistency statement of a sentence A is ``Diamond(A)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping

from conlab.syntax import _Node, _node


class ModalFormula(_Node):
    pass


@_node
class Atom(ModalFormula):
    index: int

    def __str__(self):
        return f"p{self.index}"


@_node
class Bot(ModalFormula):
    def __str__(self):
        return "bot"


@_node
class Top(ModalFormula):
    def __str__(self):
        return "top"


@_node
class Not(ModalFormula):
    body: ModalFormula

    def __str__(self):
        return f"~{self.body}"


@_node
class And(ModalFormula):
    left: ModalFormula
    right: ModalFormula

    def __str__(self):
        return f"({self.left} & {self.right})"


@_node
class Or(ModalFormula):
    left: ModalFormula
    right: ModalFormula

    def __str__(self):
        return f"({self.left} | {self.right})"


@_node
class Implies(ModalFormula):
    left: ModalFormula
    right: ModalFormula

    def __str__(self):
        return f"({self.left} -> {self.right})"


@_node
class Box(ModalFormula):
    body: ModalFormula

    def __str__(self):
        return f"[]{self.body}"


@_node
class Diamond(ModalFormula):
    body: ModalFormula

    def __str__(self):
        return f"<>{self.body}"


BOT = Bot()
TOP = Top()
BINARY = (And, Or, Implies)


def iff(a, b):
    return And(Implies(a, b), Implies(b, a))


def conj(items) -> ModalFormula:
    """Right-nested conjunction; empty gives top."""
    items = list(items)
    if not items:
        return TOP
    out = items[-1]
    for f in reversed(items[:-1]):
        out = And(f, out)
    return out


def box_n(n: int, f: ModalFormula = BOT) -> ModalFormula:
    for _ in range(n):
        f = Box(f)
    return f


def mock_con(f: ModalFormula) -> ModalFormula:
    return Diamond(f)


def mock_iterated_con(n: int, f: ModalFormula) -> ModalFormula:
    out: ModalFormula = TOP
    for _ in range(n):
        out = Diamond(And(f, out))
    return out


# --------------------------------------------------------------- structure


@lru_cache(maxsize=None)
def normalize(f: ModalFormula) -> ModalFormula:
    """Eliminate ``Diamond`` in favour of ``Not(Box(Not(.)))``."""
    if isinstance(f, (Atom, Bot, Top)):
        return f
    if isinstance(f, Diamond):
        return Not(Box(Not(normalize(f.body))))
    if isinstance(f, (Not, Box)):
        return type(f)(normalize(f.body))
    return type(f)(normalize(f.left), normalize(f.right))


def atoms(f: ModalFormula) -> frozenset[int]:
    return frozenset(g.index for g in subformulas(f) if isinstance(g, Atom))


def subformulas(f: ModalFormula) -> Iterator[ModalFormula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, (Not, Box, Diamond)):
            stack.append(g.body)
        elif isinstance(g, BINARY):
            stack.extend((g.right, g.left))


def size(f: ModalFormula) -> int:
    return sum(1 for _ in subformulas(f))


def modal_depth(f: ModalFormula) -> int:
    if isinstance(f, (Atom, Bot, Top)):
        return 0
    if isinstance(f, (Box, Diamond)):
        return 1 + modal_depth(f.body)
    if isinstance(f, Not):
        return modal_depth(f.body)
    return max(modal_depth(f.left), modal_depth(f.right))


def substitute_atoms(f: ModalFormula, mapping: Mapping[int, ModalFormula]) -> ModalFormula:
    if isinstance(f, Atom):
        return mapping.get(f.index, f)
    if isinstance(f, (Bot, Top)):
        return f
    if isinstance(f, (Not, Box, Diamond)):
        return type(f)(substitute_atoms(f.body, mapping))
    return type(f)(substitute_atoms(f.left, mapping), substitute_atoms(f.right, mapping))


# --------------------------------------------------------------- valuation


class MissingAtom(KeyError):
    pass


@dataclass(frozen=True)
class Valuation:
    """Truth values of atoms.  Atoms outside ``values`` take ``default``;
    with no default a lookup of an unlisted atom is an error."""

    values: tuple[tuple[int, bool], ...] = ()
    default: bool | None = None

    @classmethod
    def of(cls, mapping: Mapping[int, bool], default: bool | None = None) -> "Valuation":
        return cls(tuple(sorted((int(k), bool(v)) for k, v in mapping.items())), default)

    @classmethod
    def from_json(cls, data: Mapping[str, bool], default: bool | None = None) -> "Valuation":
        out = {}
        for key, val in data.items():
            m = re.fullmatch(r"p(\d+)", key)
            if not m or not isinstance(val, bool):
                raise ValueError(f"bad valuation entry {key!r}: {val!r}")
            out[int(m.group(1))] = val
        return cls.of(out, default)

    def __call__(self, index: int) -> bool:
        for k, v in self.values:
            if k == index:
                return v
        if self.default is None:
            raise MissingAtom(f"valuation does not assign p{index}")
        return self.default

    def substitution(self, f: ModalFormula) -> dict[int, ModalFormula]:
        return {i: (TOP if self(i) else BOT) for i in atoms(f)}

    def apply(self, f: ModalFormula) -> ModalFormula:
        """``f[v]``: every atom replaced by top or bot."""
        return substitute_atoms(f, self.substitution(f))


# ------------------------------------------------------------------ parsing


class ModalParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(r"\s*(->|\[\]|<>|bot|top|p\d+|[()~&|])")


def parse_modal(text: str) -> ModalFormula:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ModalParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    i = 0

    def where():
        return tokens[i][1] if i < len(tokens) else len(text)

    def formula():
        nonlocal i
        if i >= len(tokens):
            raise ModalParseError("unexpected end of input", where())
        tok = tokens[i][0]
        i += 1
        if tok == "bot":
            return BOT
        if tok == "top":
            return TOP
        if tok.startswith("p"):
            return Atom(int(tok[1:]))
        if tok in ("~", "[]", "<>"):
            return {"~": Not, "[]": Box, "<>": Diamond}[tok](formula())
        if tok == "(":
            left = formula()
            if i < len(tokens) and tokens[i][0] == ")":
                i += 1
                return left
            if i >= len(tokens) or tokens[i][0] not in ("&", "|", "->"):
                raise ModalParseError("expected a connective", where())
            op = tokens[i][0]
            i += 1
            right = formula()
            if i >= len(tokens) or tokens[i][0] != ")":
                raise ModalParseError("expected ')'", where())
            i += 1
            return {"&": And, "|": Or, "->": Implies}[op](left, right)
        i -= 1
        raise ModalParseError(f"unexpected token {tok!r}", where())

    f = formula()
    if i != len(tokens):
        raise ModalParseError(f"trailing input {tokens[i][0]!r}", where())
    return f


# -------------------------------------------------------------- enumeration


_CACHE: dict = {}


def formulas_of_size(n: int, atom_indices=(0,)) -> list[ModalFormula]:
    """All modal formulas with exactly ``n`` nodes over bot, top and the given atoms."""
    key = (n, tuple(atom_indices))
    if key in _CACHE:
        return _CACHE[key]
    if n == 1:
        out = [BOT, TOP] + [Atom(i) for i in atom_indices]
    else:
        out = []
        for g in formulas_of_size(n - 1, atom_indices):
            out += [Not(g), Box(g), Diamond(g)]
        for i in range(1, n - 1):
            for a in formulas_of_size(i, atom_indices):
                for b in formulas_of_size(n - 1 - i, atom_indices):
                    out += [And(a, b), Or(a, b), Implies(a, b)]
    _CACHE[key] = out
    return out


def formulas_up_to(n: int, atom_indices=(0,)) -> Iterator[ModalFormula]:
    for k in range(1, n + 1):
        yield from formulas_of_size(k, atom_indices)
