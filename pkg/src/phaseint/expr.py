"""Arithmetic expressions in one real variable ``z`` with named parameters.

Source text is parsed by a small recursive-descent parser into an immutable
tree which can be evaluated (scalar or numpy-vectorised over ``z``),
differentiated symbolically with respect to ``z`` and printed back.

Grammar, loosest binding first::

    expr     := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := "-" unary | power
    power    := base ("^" exponent)?       # right-associative
    base     := number | "z" | ident | ident "(" expr ")" | "(" expr ")"

The exponent must fold to a constant rational number, so ``z^-2``,
``z^(1/2)`` and ``z^2^3`` are accepted while ``z^z`` is rejected.
Identifiers other than the functions ``sqrt exp ln sin cos`` are parameters.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

import numpy as np

from .errors import (
    DomainError,
    ExprSyntaxError,
    UnboundParameterError,
    UnknownFunctionError,
)

__all__ = [
    "Const",
    "Var",
    "Param",
    "Unary",
    "Binary",
    "Pow",
    "ExprNode",
    "FUNCTIONS",
    "parse",
    "differentiate",
    "evaluate",
    "to_string",
    "parameters",
    "depends_on_z",
]

FUNCTIONS = ("sqrt", "exp", "ln", "sin", "cos")


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    """The independent variable ``z``."""


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or one of FUNCTIONS
    arg: "ExprNode"


@dataclass(frozen=True)
class Binary:
    op: str  # "+", "-", "*", "/"
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class Pow:
    base: "ExprNode"
    exponent: Fraction


ExprNode = Union[Const, Var, Param, Unary, Binary, Pow]
ParamSet = Mapping[str, float]

Z = Var()
ZERO = Const(0.0)
ONE = Const(1.0)


# ----------------------------------------------------------------------------
# tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()−])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "ident", "op", "end"
    text: str
    offset: int  # byte offset


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0
    byte = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExprSyntaxError(
                f"unexpected character {source[pos]!r}", source, byte,
                {"number", "identifier", "operator"},
            )
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            if text == "−":
                text = "-"
            tokens.append(_Token(kind, text, byte))
        byte += len(m.group().encode("utf-8"))
        pos = m.end()
    tokens.append(_Token("end", "", byte))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message, expected=(), tok=None):
        tok = tok or self.tok
        return ExprSyntaxError(message, self.source, tok.offset, expected)

    def accept(self, *ops):
        if self.tok.kind == "op" and self.tok.text in ops:
            tok = self.tok
            self.i += 1
            return tok
        return None

    def expect(self, op):
        if self.accept(op) is None:
            found = self.tok.text or "end of input"
            raise self.error(f"found {found!r}", {repr(op)})

    def parse(self) -> ExprNode:
        node = self.expr()
        if self.tok.kind != "end":
            raise self.error(
                f"unexpected {self.tok.text!r}",
                {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"},
            )
        return node

    def expr(self):
        node = self.term()
        while (tok := self.accept("+", "-")) is not None:
            node = Binary(tok.text, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while (tok := self.accept("*", "/")) is not None:
            node = Binary(tok.text, node, self.unary())
        return node

    def unary(self):
        if self.accept("-") is not None:
            return Unary("neg", self.unary())
        return self.power()

    def power(self):
        node = self.base()
        caret = self.accept("^")
        if caret is not None:
            start = self.tok
            exponent = _fold_rational(self.unary())
            if exponent is None:
                raise self.error(
                    "exponent must be a constant rational number",
                    {"number", "'('", "'-'"},
                    tok=start,
                )
            node = Pow(node, exponent)
        return node

    def base(self):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Const(float(tok.text))
        if tok.kind == "ident":
            self.i += 1
            nxt = self.tok
            if nxt.kind == "op" and nxt.text == "(":
                if tok.text not in FUNCTIONS:
                    raise UnknownFunctionError(
                        f"unknown function {tok.text!r}", self.source, tok.offset,
                        {repr(f) for f in FUNCTIONS},
                    )
                self.i += 1
                arg = self.expr()
                self.expect(")")
                return Unary(tok.text, arg)
            if tok.text in FUNCTIONS:
                raise self.error(f"function {tok.text!r} needs an argument", {"'('"})
            if tok.text == "z":
                return Z
            return Param(tok.text)
        if self.accept("(") is not None:
            node = self.expr()
            self.expect(")")
            return node
        found = tok.text or "end of input"
        raise self.error(
            f"found {found!r}", {"number", "identifier", "'('", "'-'"}
        )


def _fold_rational(node) -> Fraction | None:
    if isinstance(node, Const):
        return Fraction(repr(node.value))
    if isinstance(node, Unary) and node.op == "neg":
        inner = _fold_rational(node.arg)
        return None if inner is None else -inner
    if isinstance(node, Binary):
        a, b = _fold_rational(node.left), _fold_rational(node.right)
        if a is None or b is None:
            return None
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b if b != 0 else None
    if isinstance(node, Pow):
        a = _fold_rational(node.base)
        if a is None or node.exponent.denominator != 1:
            return None
        if a == 0 and node.exponent < 0:
            return None
        return a ** int(node.exponent)
    return None


def parse(source: str) -> ExprNode:
    """Parse ``source`` into an expression tree.

    Raises:
        ExprSyntaxError: malformed input; carries the byte ``offset`` and
            the ``expected`` token set.
        UnknownFunctionError: ``name(...)`` with an unsupported ``name``.
    """
    return _Parser(source).parse()


# ----------------------------------------------------------------------------
# evaluation


def evaluate(e: ExprNode, z, params: ParamSet | None = None):
    """Evaluate ``e`` at ``z`` (float or ndarray) with parameters bound.

    Poles, logarithms of non-positive numbers, square roots of negative
    numbers and non-finite results raise :class:`DomainError` instead of
    producing NaN/inf.
    """
    params = {} if params is None else params
    scalar = np.ndim(z) == 0
    zz = np.asarray(z, dtype=float)
    with np.errstate(all="ignore"):
        out = _eval(e, zz, params)
    out = np.broadcast_to(out, zz.shape)
    return float(out) if scalar else np.array(out, dtype=float)


def _eval(e, z, params):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return z
    if isinstance(e, Param):
        try:
            value = params[e.name]
        except KeyError:
            raise UnboundParameterError(e.name) from None
        return float(value)
    if isinstance(e, Binary):
        a = _eval(e.left, z, params)
        b = _eval(e.right, z, params)
        if e.op == "+":
            out = a + b
        elif e.op == "-":
            out = a - b
        elif e.op == "*":
            out = a * b
        else:
            if np.any(np.asarray(b) == 0.0):
                raise DomainError("division by zero", to_string(e))
            out = a / b
        return _finite(out, e)
    if isinstance(e, Pow):
        a = _eval(e.base, z, params)
        p = e.exponent
        if p.denominator != 1 and np.any(np.asarray(a) < 0.0):
            raise DomainError("fractional power of a negative number", to_string(e))
        if p < 0 and np.any(np.asarray(a) == 0.0):
            raise DomainError("negative power of zero", to_string(e))
        if p.denominator == 1:
            out = np.power(a, float(p)) if p < 0 else np.power(a, int(p))
        else:
            out = np.power(a, float(p))
        return _finite(out, e)
    if isinstance(e, Unary):
        a = _eval(e.arg, z, params)
        if e.op == "neg":
            return -a
        if e.op == "sqrt":
            if np.any(np.asarray(a) < 0.0):
                raise DomainError("square root of a negative number", to_string(e))
            return np.sqrt(a)
        if e.op == "ln":
            if np.any(np.asarray(a) <= 0.0):
                raise DomainError("logarithm of a non-positive number", to_string(e))
            return np.log(a)
        if e.op == "exp":
            return _finite(np.exp(a), e)
        if e.op == "sin":
            return np.sin(a)
        if e.op == "cos":
            return np.cos(a)
    raise TypeError(f"not an expression node: {e!r}")


def _finite(value, node):
    if not np.all(np.isfinite(value)):
        raise DomainError("non-finite result", to_string(node))
    return value


# ----------------------------------------------------------------------------
# differentiation

# Smart constructors drop the obvious zeros and ones so repeated
# differentiation does not blow up the tree.


def _is_const(e, value=None):
    return isinstance(e, Const) and (value is None or e.value == value)


def _add(a, b):
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    if _is_const(a) and _is_const(b):
        return Const(a.value + b.value)
    return Binary("+", a, b)


def _sub(a, b):
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return _neg(b)
    if _is_const(a) and _is_const(b):
        return Const(a.value - b.value)
    return Binary("-", a, b)


def _mul(a, b):
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return ZERO
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    if _is_const(a) and _is_const(b):
        return Const(a.value * b.value)
    return Binary("*", a, b)


def _div(a, b):
    if _is_const(a, 0.0):
        return ZERO
    if _is_const(b, 1.0):
        return a
    return Binary("/", a, b)


def _neg(a):
    if _is_const(a):
        return Const(-a.value)
    if isinstance(a, Unary) and a.op == "neg":
        return a.arg
    return Unary("neg", a)


def _pow(a, p: Fraction):
    if p == 0:
        return ONE
    if p == 1:
        return a
    return Pow(a, p)


def differentiate(e: ExprNode) -> ExprNode:
    """Return the tree of ``de/dz``; parameters are constants."""
    if isinstance(e, (Const, Param)):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Binary):
        u, v = e.left, e.right
        du, dv = differentiate(u), differentiate(v)
        if e.op == "+":
            return _add(du, dv)
        if e.op == "-":
            return _sub(du, dv)
        if e.op == "*":
            return _add(_mul(du, v), _mul(u, dv))
        # (u/v)' = u'/v - u v' / v^2
        return _sub(_div(du, v), _div(_mul(u, dv), _pow(v, Fraction(2))))
    if isinstance(e, Pow):
        du = differentiate(e.base)
        p = e.exponent
        return _mul(_mul(Const(float(p)), _pow(e.base, p - 1)), du)
    if isinstance(e, Unary):
        u = e.arg
        du = differentiate(u)
        if e.op == "neg":
            return _neg(du)
        if e.op == "sqrt":
            return _div(du, _mul(Const(2.0), e))
        if e.op == "exp":
            return _mul(e, du)
        if e.op == "ln":
            return _div(du, u)
        if e.op == "sin":
            return _mul(Unary("cos", u), du)
        if e.op == "cos":
            return _neg(_mul(Unary("sin", u), du))
    raise TypeError(f"not an expression node: {e!r}")


# ----------------------------------------------------------------------------
# printing and inspection

_PREC_ADD, _PREC_MUL, _PREC_UNARY, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(e) -> int:
    if isinstance(e, Binary):
        return _PREC_ADD if e.op in "+-" else _PREC_MUL
    if isinstance(e, Unary):
        return _PREC_UNARY if e.op == "neg" else _PREC_ATOM
    if isinstance(e, Pow):
        return _PREC_POW
    if isinstance(e, Const) and (e.value < 0 or str(e.value).startswith("-")):
        return _PREC_UNARY
    return _PREC_ATOM


def _wrap(e, min_prec):
    s = to_string(e)
    return f"({s})" if _prec(e) < min_prec else s


def to_string(e: ExprNode) -> str:
    """Print ``e`` in the accepted grammar with minimal parentheses."""
    if isinstance(e, Const):
        return repr(float(e.value))
    if isinstance(e, Var):
        return "z"
    if isinstance(e, Param):
        return e.name
    if isinstance(e, Binary):
        p = _prec(e)
        return f"{_wrap(e.left, p)} {e.op} {_wrap(e.right, p + 1)}"
    if isinstance(e, Pow):
        p = e.exponent
        exp = str(p.numerator) if p.denominator == 1 and p >= 0 else f"({p})"
        return f"{_wrap(e.base, _PREC_ATOM)}^{exp}"
    if isinstance(e, Unary):
        if e.op == "neg":
            return f"-{_wrap(e.arg, _PREC_UNARY)}"
        return f"{e.op}({to_string(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


def _walk(e):
    yield e
    if isinstance(e, Unary):
        yield from _walk(e.arg)
    elif isinstance(e, Binary):
        yield from _walk(e.left)
        yield from _walk(e.right)
    elif isinstance(e, Pow):
        yield from _walk(e.base)


def parameters(e: ExprNode) -> set[str]:
    """Names of all parameters referenced by ``e``."""
    return {n.name for n in _walk(e) if isinstance(n, Param)}


def depends_on_z(e: ExprNode) -> bool:
    return any(isinstance(n, Var) for n in _walk(e))


def has_pole_at_zero(e: ExprNode, params: ParamSet | None = None) -> bool:
    """True when ``e`` divides by (or takes a negative power of) a
    z-dependent subexpression that vanishes at ``z = 0``."""
    for n in _walk(e):
        if isinstance(n, Binary) and n.op == "/":
            denom = n.right
        elif isinstance(n, Pow) and n.exponent < 0:
            denom = n.base
        else:
            continue
        if not depends_on_z(denom):
            continue
        try:
            if evaluate(denom, 0.0, params) == 0.0:
                return True
        except DomainError:
            return True
    return False
