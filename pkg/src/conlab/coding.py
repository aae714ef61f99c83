"""Goedel numbering by tagged Cantor pairing.

Every node is coded as ``pair(tag, payload)``.  Formula constructors carry
even tags and term constructors odd tags, so a code can be told apart from a
term code by the parity of its first component.  The table below is mirrored
in ``docs/coding.md``.
"""

from __future__ import annotations

from math import isqrt

from conlab import syntax as sx

FORMULA_TAGS = {
    sx.Equal: 0,
    sx.Less: 2,
    sx.Bottom: 4,
    sx.Top: 6,
    sx.Not: 8,
    sx.And: 10,
    sx.Or: 12,
    sx.Implies: 14,
    sx.ForAll: 16,
    sx.Exists: 18,
    sx.BoundedForAll: 20,
    sx.BoundedExists: 22,
}

TERM_TAGS = {
    sx.Zero: 1,
    sx.Succ: 3,
    sx.Add: 5,
    sx.Mul: 7,
    sx.Exp: 9,
    sx.Var: 11,
    sx.Quoted: 13,
}

TAGS = {cls.__name__: tag for cls, tag in {**FORMULA_TAGS, **TERM_TAGS}.items()}
_BY_TAG = {tag: cls for cls, tag in {**FORMULA_TAGS, **TERM_TAGS}.items()}


class NotACode(ValueError):
    def __init__(self, value: int, reason: str = ""):
        super().__init__(f"{value} is not the code of a formula" + (f" ({reason})" if reason else ""))
        self.value = value


def pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def unpair(c: int) -> tuple[int, int]:
    w = (isqrt(8 * c + 1) - 1) // 2
    b = c - w * (w + 1) // 2
    return w - b, b


def encode_term(t: sx.Term) -> int:
    tag = TERM_TAGS[type(t)]
    if isinstance(t, sx.Zero):
        payload = 0
    elif isinstance(t, sx.Var):
        payload = t.index
    elif isinstance(t, sx.Succ):
        payload = encode_term(t.arg)
    elif isinstance(t, sx.Exp):
        payload = pair(encode_term(t.base), encode_term(t.power))
    elif isinstance(t, sx.Quoted):
        payload = encode(t.formula)
    else:
        payload = pair(encode_term(t.left), encode_term(t.right))
    return pair(tag, payload)


def encode(f: sx.Formula) -> int:
    tag = FORMULA_TAGS[type(f)]
    if isinstance(f, (sx.Equal, sx.Less)):
        payload = pair(encode_term(f.left), encode_term(f.right))
    elif isinstance(f, (sx.Bottom, sx.Top)):
        payload = 0
    elif isinstance(f, sx.Not):
        payload = encode(f.body)
    elif isinstance(f, sx.BINARY):
        payload = pair(encode(f.left), encode(f.right))
    elif isinstance(f, sx.QUANTIFIERS):
        payload = pair(f.var, encode(f.body))
    else:
        payload = pair(f.var, pair(encode_term(f.bound), encode(f.body)))
    return pair(tag, payload)


def decode_term(c: int) -> sx.Term:
    tag, payload = unpair(c)
    cls = _BY_TAG.get(tag)
    if cls is None or tag % 2 == 0:
        raise NotACode(c, f"tag {tag} is not a term tag")
    if cls is sx.Zero:
        if payload:
            raise NotACode(c, "nullary constructor with payload")
        return sx.ZERO
    if cls is sx.Var:
        return sx.Var(payload)
    if cls is sx.Succ:
        return sx.Succ(decode_term(payload))
    if cls is sx.Quoted:
        return sx.Quoted(decode(payload))
    a, b = unpair(payload)
    return cls(decode_term(a), decode_term(b))


def decode(c: int) -> sx.Formula:
    if c < 0:
        raise NotACode(c, "negative")
    tag, payload = unpair(c)
    cls = _BY_TAG.get(tag)
    if cls is None or tag % 2 == 1:
        raise NotACode(c, f"tag {tag} is not a formula tag")
    try:
        if cls in (sx.Bottom, sx.Top):
            if payload:
                raise NotACode(c, "nullary constructor with payload")
            return cls()
        if cls is sx.Not:
            return sx.Not(decode(payload))
        a, b = unpair(payload)
        if cls in (sx.Equal, sx.Less):
            return cls(decode_term(a), decode_term(b))
        if cls in sx.BINARY:
            return cls(decode(a), decode(b))
        if cls in sx.QUANTIFIERS:
            return cls(a, decode(b))
        bound, body = unpair(b)
        return cls(a, decode_term(bound), decode(body))
    except NotACode as exc:
        raise NotACode(c, f"inner {exc.value} is not a code") from None
    except ValueError as exc:  # e.g. a bound term mentioning its own variable
        raise NotACode(c, str(exc)) from None


def numeral(n: int) -> sx.Term:
    return sx.numeral(n)


def quote(f: sx.Formula) -> sx.Term:
    """The closed term denoting ``encode(f)``; see :class:`conlab.syntax.Quoted`."""
    return sx.Quoted(f)


def expand_quotes(t: sx.Term) -> sx.Term:
    """Rewrite quotation constants into unary numerals (only feasible for tiny codes)."""
    if isinstance(t, sx.Quoted):
        return sx.numeral(encode(t.formula))
    if isinstance(t, (sx.Zero, sx.Var)):
        return t
    if isinstance(t, sx.Succ):
        return sx.Succ(expand_quotes(t.arg))
    if isinstance(t, sx.Exp):
        return sx.Exp(expand_quotes(t.base), expand_quotes(t.power))
    return type(t)(expand_quotes(t.left), expand_quotes(t.right))
