"""Small arithmetic expression language for curves and target functions.

Grammar, loosest binding first::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := atom ('^' unary)?          # right associative
    atom    := NUMBER | 'pi' | IDENT | FUNC '(' expr ')' | '(' expr ')'

Unary minus binds looser than ``^``, so ``-2^2 == -4``. There is no implicit
multiplication.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .errors import ArityError, EvaluationError, ExprSyntaxError, UnknownIdentifierError

SQRT_TOL = 1e-12

FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "sqrt": math.sqrt,
    "abs": abs,
    "log": math.log,
}
CONSTANTS = {"pi": math.pi}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    operand: Node


@dataclass(frozen=True)
class Binary:
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Call:
    func: str
    arg: Node


Node = Union[Num, Var, Const, Unary, Binary, Call]


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'num', 'ident', 'op' or 'eof'
    text: str
    offset: int  # byte offset into the UTF-8 source


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        match = _TOKEN.match(source, pos)
        offset = len(source[:pos].encode("utf-8"))
        if match is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", source, offset)
        kind = match.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, match.group(), offset))
        pos = match.end()
    tokens.append(Token("eof", "", len(source.encode("utf-8"))))
    return tokens


class _Parser:
    def __init__(self, source: str, variables: frozenset[str]):
        self.source = source
        self.variables = variables
        self.tokens = tokenize(source)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def error(self, message: str, token: Token | None = None):
        token = token or self.current
        return ExprSyntaxError(message, self.source, token.offset)

    def expect(self, text: str) -> Token:
        if self.current.text != text or self.current.kind != "op":
            found = self.current.text or "end of input"
            raise self.error(f"expected {text!r} but found {found!r}")
        return self.advance()

    def parse(self) -> Node:
        if self.current.kind == "eof":
            raise self.error("empty expression")
        node = self.expr()
        if self.current.kind != "eof":
            raise self.error(f"unexpected {self.current.text!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self.advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.current.kind == "op" and self.current.text in "*/":
            op = self.advance().text
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.current.kind == "op" and self.current.text in "+-":
            op = self.advance().text
            return Unary(op, self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.current.kind == "op" and self.current.text == "^":
            self.advance()
            return Binary("^", base, self.unary())
        return base

    def atom(self) -> Node:
        token = self.current
        if token.kind == "num":
            self.advance()
            value = float(token.text)
            if math.isinf(value):
                raise self.error(f"numeric literal {token.text!r} overflows", token)
            return Num(value)
        if token.kind == "ident":
            self.advance()
            name = token.text
            if name in FUNCTIONS:
                return self.call(name, token)
            if name in CONSTANTS:
                return Const(name)
            if name in self.variables:
                return Var(name)
            raise UnknownIdentifierError(name, token.offset)
        if token.kind == "op" and token.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = token.text or "end of input"
        raise self.error(f"unexpected {found!r}")

    def call(self, name: str, name_token: Token) -> Node:
        if not (self.current.kind == "op" and self.current.text == "("):
            raise self.error(f"function {name!r} must be called with parentheses", name_token)
        self.advance()
        args = []
        if not (self.current.kind == "op" and self.current.text == ")"):
            args.append(self.expr())
            while self.current.kind == "op" and self.current.text == ",":
                self.advance()
                args.append(self.expr())
        self.expect(")")
        if len(args) != 1:
            raise ArityError(f"{name}() takes exactly 1 argument ({len(args)} given) at offset {name_token.offset}")
        return Call(name, args[0])


def to_source(node: Node) -> str:
    """Render a tree back to parseable text (fully parenthesised)."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, (Var, Const)):
        return node.name
    if isinstance(node, Unary):
        return f"({node.op}{to_source(node.operand)})"
    if isinstance(node, Binary):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


def _free(node: Node, out: set[str]) -> set[str]:
    if isinstance(node, Var):
        out.add(node.name)
    elif isinstance(node, Unary):
        _free(node.operand, out)
    elif isinstance(node, Binary):
        _free(node.left, out)
        _free(node.right, out)
    elif isinstance(node, Call):
        _free(node.arg, out)
    return out


class Expr:
    """A parsed expression over an ordered set of declared variables.

    Instances are callable: positional arguments bind the declared variables
    in order, keyword arguments bind by name.
    """

    __slots__ = ("source", "variables", "root")

    def __init__(self, source: str, variables: tuple[str, ...], root: Node):
        self.source = source
        self.variables = variables
        self.root = root

    def __repr__(self):
        return f"Expr({self.source!r}, variables={self.variables!r})"

    def __str__(self):
        return self.source

    def __eq__(self, other):
        return isinstance(other, Expr) and self.root == other.root

    def __hash__(self):
        return hash(self.root)

    @property
    def free_variables(self) -> frozenset[str]:
        return frozenset(_free(self.root, set()))

    def __call__(self, *args: float, **kwargs: float) -> float:
        if len(args) > len(self.variables):
            raise TypeError(f"expected at most {len(self.variables)} positional values, got {len(args)}")
        bindings = dict(zip(self.variables, args))
        bindings.update(kwargs)
        return evaluate(self, bindings)

    def to_source(self) -> str:
        return to_source(self.root)


def parse(source: str, variables: Iterable[str] = ("x",)) -> Expr:
    """Parse ``source`` allowing only the identifiers in ``variables``."""
    variables = tuple(variables)
    if not source or not source.strip():
        raise ExprSyntaxError("empty expression", source or "", 0)
    for name in variables:
        if name in FUNCTIONS or name in CONSTANTS:
            raise ValueError(f"variable name {name!r} shadows a built-in")
    root = _Parser(source, frozenset(variables)).parse()
    return Expr(source, variables, root)


def evaluate(expr: Expr | Node, bindings: Mapping[str, float]) -> float:
    """Evaluate ``expr`` with IEEE arithmetic, raising on undefined operations."""
    root = expr.root if isinstance(expr, Expr) else expr
    missing = _free(root, set()) - set(bindings)
    if missing:
        raise EvaluationError(f"unbound variables {sorted(missing)}", to_source(root), bindings)
    return _eval(root, bindings)


def _fail(message: str, node: Node, bindings: Mapping[str, float]):
    return EvaluationError(message, to_source(node), bindings)


def _eval(node: Node, env: Mapping[str, float]) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return float(env[node.name])
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Unary):
        value = _eval(node.operand, env)
        return -value if node.op == "-" else value
    if isinstance(node, Binary):
        left = _eval(node.left, env)
        right = _eval(node.right, env)
        op = node.op
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            if right == 0.0:
                raise _fail("division by zero", node, env)
            return left / right
        try:
            return math.pow(left, right)
        except (ValueError, ZeroDivisionError):
            raise _fail(f"power {left!r}^{right!r} is undefined", node, env) from None
        except OverflowError:
            raise _fail("overflow", node, env) from None
    if isinstance(node, Call):
        arg = _eval(node.arg, env)
        if node.func == "sqrt" and arg < 0.0:
            if arg < -SQRT_TOL:
                raise _fail(f"sqrt of negative value {arg!r}", node, env)
            return 0.0
        if node.func == "log" and arg <= 0.0:
            raise _fail(f"log of nonpositive value {arg!r}", node, env)
        try:
            return float(FUNCTIONS[node.func](arg))
        except (ValueError, OverflowError) as exc:
            raise _fail(f"{node.func}({arg!r}) failed: {exc}", node, env) from None
    raise TypeError(f"not an expression node: {node!r}")
