"""Expression ASTs for superpotentials: parsing, exact differentiation, evaluation.

The grammar is a small arithmetic language over one variable (``z`` and ``x``
are aliases), numeric literals, caller-supplied named constants, and the
builtin unary functions ``ln``, ``exp``, ``abs``, ``sign``, ``airy_ai``,
``airy_ai_prime``.  Exponents must be numeric literals; expressions with a
variable in the exponent are rejected at parse time.

Trees are immutable after construction and every operation here is a pure
function, so ASTs can be shared freely across threads.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Optional

from . import airy as _airy


class ExprError(Exception):
    """Base class for expression errors."""


class ParseError(ExprError):
    """Source text does not conform to the grammar.

    ``offset`` is the byte offset of the offending token in the source.
    """

    def __init__(self, message: str, source: str, offset: int):
        snippet = source[offset:offset + 12]
        super().__init__(f"{message} (at offset {offset}: {snippet!r})")
        self.source = source
        self.offset = offset


class EvalDomainError(ExprError):
    """Evaluation left the expression's real domain.

    Carries the offending subexpression so callers can tell a genuine domain
    violation (log of a negative number) from a harmless tail underflow
    (log of an exact 0.0).
    """

    def __init__(self, message: str, node: "ExprNode", z: float,
                 function: str = "", argument: float = math.nan):
        super().__init__(f"{message} in {node} at z={z!r}")
        self.node = node
        self.z = z
        self.function = function
        self.argument = argument


def _check(value: float, node: "ExprNode", z: float) -> float:
    if value != value:  # NaN must never escape silently
        raise EvalDomainError("evaluation produced NaN", node, z)
    return value


class ExprNode:
    """Base class for AST nodes. Subclasses are leaf or operator nodes."""

    __slots__ = ()

    def eval(self, z: float) -> float:
        raise NotImplementedError

    def deriv(self) -> "ExprNode":
        raise NotImplementedError

    def _key(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash((type(self).__name__, self._key()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self._key()!r})"


class Const(ExprNode):
    __slots__ = ("value", "name")

    def __init__(self, value: float, name: Optional[str] = None):
        self.value = float(value)
        self.name = name

    def eval(self, z: float) -> float:
        return self.value

    def deriv(self) -> ExprNode:
        return Const(0.0)

    def _key(self):
        return (self.value, self.name)

    def __str__(self):
        return self.name if self.name else repr(self.value)


class Var(ExprNode):
    __slots__ = ()

    def eval(self, z: float) -> float:
        return float(z)

    def deriv(self) -> ExprNode:
        return Const(1.0)

    def _key(self):
        return ()

    def __str__(self):
        return "z"


class _Binary(ExprNode):
    __slots__ = ("left", "right")
    symbol = "?"
    precedence = 0

    def __init__(self, left: ExprNode, right: ExprNode):
        self.left = left
        self.right = right

    def _key(self):
        return (self.left, self.right)

    def __str__(self):
        lhs = _wrap(self.left, self.precedence)
        rhs = _wrap(self.right, self.precedence + 1)  # left-assoc: parenthesize equal-prec rhs
        return f"{lhs} {self.symbol} {rhs}"


class Add(_Binary):
    __slots__ = ()
    symbol = "+"
    precedence = 1

    def eval(self, z):
        return _check(self.left.eval(z) + self.right.eval(z), self, z)

    def deriv(self):
        return Add(self.left.deriv(), self.right.deriv())


class Sub(_Binary):
    __slots__ = ()
    symbol = "-"
    precedence = 1

    def eval(self, z):
        return _check(self.left.eval(z) - self.right.eval(z), self, z)

    def deriv(self):
        return Sub(self.left.deriv(), self.right.deriv())


class Mul(_Binary):
    __slots__ = ()
    symbol = "*"
    precedence = 2

    def eval(self, z):
        return _check(self.left.eval(z) * self.right.eval(z), self, z)

    def deriv(self):
        # product rule
        return Add(Mul(self.left.deriv(), self.right),
                   Mul(self.left, self.right.deriv()))


class Div(_Binary):
    __slots__ = ()
    symbol = "/"
    precedence = 2

    def eval(self, z):
        denom = self.right.eval(z)
        if denom == 0.0:
            raise EvalDomainError("division by zero", self, z)
        return _check(self.left.eval(z) / denom, self, z)

    def deriv(self):
        # quotient rule
        num = Sub(Mul(self.left.deriv(), self.right),
                  Mul(self.left, self.right.deriv()))
        return Div(num, Pow(self.right, 2.0))


class Neg(ExprNode):
    __slots__ = ("child",)
    precedence = 3

    def __init__(self, child: ExprNode):
        self.child = child

    def eval(self, z):
        return -self.child.eval(z)

    def deriv(self):
        return Neg(self.child.deriv())

    def _key(self):
        return (self.child,)

    def __str__(self):
        return f"-{_wrap(self.child, 4)}"


class Pow(ExprNode):
    """Power with a numeric-constant exponent (the grammar admits no other)."""

    __slots__ = ("base", "exponent")
    precedence = 4

    def __init__(self, base: ExprNode, exponent: float):
        self.base = base
        self.exponent = float(exponent)

    def eval(self, z):
        b = self.base.eval(z)
        try:
            return _check(math.pow(b, self.exponent), self, z)
        except OverflowError:
            return math.inf if b > 1.0 or self.exponent < 0 else 0.0
        except ValueError:
            raise EvalDomainError(
                f"{b!r} ** {self.exponent!r} is not real", self, z) from None

    def deriv(self):
        n = self.exponent
        if n == 0.0:
            return Const(0.0)
        return Mul(Mul(Const(n), Pow(self.base, n - 1.0)), self.base.deriv())

    def _key(self):
        return (self.base, self.exponent)

    def __str__(self):
        return f"{_wrap(self.base, 5)}^{repr(self.exponent)}"


class Call(ExprNode):
    __slots__ = ("function", "arg")
    precedence = 5

    def __init__(self, function: str, arg: ExprNode):
        if function not in BUILTINS:
            raise ExprError(f"unknown function {function!r}")
        self.function = function
        self.arg = arg

    def eval(self, z):
        u = self.arg.eval(z)
        fn = BUILTINS[self.function]
        try:
            return _check(fn.evaluate(u), self, z)
        except OverflowError:
            return math.inf
        except ValueError:
            raise EvalDomainError(f"{self.function} of {u!r} is undefined",
                                  self, z, function=self.function,
                                  argument=u) from None

    def deriv(self):
        fn = BUILTINS[self.function]
        return fn.derivative(self.arg, self.arg.deriv())

    def _key(self):
        return (self.function, self.arg)

    def __str__(self):
        return f"{self.function}({self.arg})"


def _wrap(node: ExprNode, min_precedence: int) -> str:
    prec = getattr(node, "precedence", 6)
    text = str(node)
    return f"({text})" if prec < min_precedence else text


def _ln_eval(u: float) -> float:
    if u <= 0.0:
        raise ValueError("log of non-positive")
    return math.log(u)


def _sign_eval(u: float) -> float:
    if u == 0.0:
        return 0.0
    return math.copysign(1.0, u)


@dataclass(frozen=True)
class BuiltinFunction:
    """A unary builtin: an evaluation hook and an AST-producing derivative rule.

    ``derivative(u, du)`` receives the argument subtree and its derivative and
    returns the derivative of ``f(u)`` by the chain rule.
    """

    name: str
    evaluate: Callable[[float], float]
    derivative: Callable[[ExprNode, ExprNode], ExprNode]
    arity: int = 1


BUILTINS: dict[str, BuiltinFunction] = {}


def _register(name, evaluate, derivative):
    BUILTINS[name] = BuiltinFunction(name, evaluate, derivative)


_register("ln", _ln_eval, lambda u, du: Div(du, u))
_register("exp", math.exp, lambda u, du: Mul(Call("exp", u), du))
# d|u|/du = sign(u) with sign(0) = 0: the weak-derivative convention.
_register("abs", math.fabs, lambda u, du: Mul(Call("sign", u), du))
_register("sign", _sign_eval, lambda u, du: Const(0.0))
# Ai' is its own builtin; Ai'' = u*Ai(u) by the Airy equation.
_register("airy_ai", _airy.airy_ai,
          lambda u, du: Mul(Call("airy_ai_prime", u), du))
_register("airy_ai_prime", _airy.airy_ai_prime,
          lambda u, du: Mul(Mul(u, Call("airy_ai", u)), du))


_TOKEN = re.compile(r"""
    (?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
  | (?P<space>\s+)
""", re.VERBOSE)

_VARIABLE_NAMES = ("z", "x")  # aliases for the same variable


class _Parser:
    """Recursive-descent parser for the expression grammar."""

    def __init__(self, source: str, constants: Optional[dict[str, float]]):
        self.source = source
        self.constants = constants or {}
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(source):
            m = _TOKEN.match(source, pos)
            if not m:
                raise ParseError("unexpected character", source, pos)
            if m.lastgroup != "space":
                self.tokens.append((m.lastgroup, m.group(), pos))
            pos = m.end()
        self.tokens.append(("end", "", len(source)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise ParseError(f"expected {op!r}", self.source, pos)
        return self.advance()

    def parse(self) -> ExprNode:
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing input {text!r}",
                             self.source, pos)
        return node

    def expr(self) -> ExprNode:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                rhs = self.term()
                node = Add(node, rhs) if text == "+" else Sub(node, rhs)
            else:
                return node

    def term(self) -> ExprNode:
        node = self.factor()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                rhs = self.factor()
                node = Mul(node, rhs) if text == "*" else Div(node, rhs)
            else:
                return node

    def factor(self) -> ExprNode:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.factor())
        node = self.primary()
        kind, text, pos = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            kind, text, pos = self.peek()
            if kind != "number":
                raise ParseError(
                    "exponent must be a numeric constant "
                    "(z-dependent exponents are not supported)",
                    self.source, pos)
            self.advance()
            node = Pow(node, float(text))
        return node

    def primary(self) -> ExprNode:
        kind, text, pos = self.advance()
        if kind == "number":
            return Const(float(text))
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "ident":
            if text in _VARIABLE_NAMES:
                return Var()
            if text in BUILTINS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            if text in self.constants:
                return Const(self.constants[text], name=text)
            raise ParseError(f"unknown identifier {text!r}", self.source, pos)
        raise ParseError("expected a number, identifier or '('",
                         self.source, pos)


def parse(source: str, constants: Optional[dict[str, float]] = None) -> ExprNode:
    """Parse expression text into an AST.

    ``constants`` maps caller-supplied names (e.g. a spectral constant) to
    values bound at parse time; the names survive in the pretty-printed form.
    """
    return _Parser(source, constants).parse()


def differentiate(e: ExprNode) -> ExprNode:
    """Exact derivative d/dz under the builtin rules. Purely structural."""
    return e.deriv()


def evaluate(e: ExprNode, z: float) -> float:
    """Evaluate at a point. Raises EvalDomainError rather than returning NaN."""
    return e.eval(z)


def to_source(e: ExprNode) -> str:
    """Pretty-print an AST; re-parsing yields an evaluation-equivalent tree."""
    return str(e)
