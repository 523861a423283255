"""Expression language for immersion components.

Grammar (operators associate to the left)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | base ('^' integer)?
    base   := number | 'pi' | 'sigma' | 'sigma_bar' | 'p' | 'q'
            | var | func '(' expr ')' | '(' expr ')'
    var    := 'u' digit+          (1-based: u1 is the first chart coordinate)
    func   := 'sin' | 'cos' | 'tan' | 'sqrt' | 'ln'

Named constants are resolved at evaluation time from a mapping, never at
parse time, so the same tree serves every ``(p, q)``.
"""

import math
import re
from dataclasses import dataclass

from .errors import ArityError, DomainError, ParseError, UnknownIdentifier
from .jets import Jet2

FUNCTIONS = ("sin", "cos", "tan", "sqrt", "ln")
CONSTANTS = ("pi", "sigma", "sigma_bar", "p", "q")


class Node:
    __slots__ = ()


@dataclass(frozen=True)
class Num(Node):
    value: float


@dataclass(frozen=True)
class Var(Node):
    index: int  # 0-based


@dataclass(frozen=True)
class Const(Node):
    name: str


@dataclass(frozen=True)
class Unary(Node):
    op: str  # one of FUNCTIONS or "neg"
    arg: Node


@dataclass(frozen=True)
class Binary(Node):
    op: str  # + - * /
    left: Node
    right: Node


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t]+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, end
    text: str
    column: int  # 1-based


def tokenize(text, line=1):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos + 1, text)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), pos + 1))
        pos = m.end()
    tokens.append(Token("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text, line):
        self.text = text
        self.line = line
        self.tokens = tokenize(text, line)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None, cls=ParseError):
        tok = tok or self.peek()
        where = "end of input" if tok.kind == "end" else repr(tok.text)
        return cls(f"{message} at {where}", self.line, tok.column, self.text)

    def expect(self, text):
        tok = self.peek()
        if tok.text != text or tok.kind == "end":
            raise self.error(f"expected {text!r}")
        return self.advance()

    def parse(self):
        node = self.expr()
        if self.peek().kind != "end":
            raise self.error("unexpected token")
        return node

    def expr(self):
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            node = Binary(op, node, self.factor())
        return node

    def factor(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return Unary("neg", self.factor())
        node = self.base()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.advance()
            exp = self.peek()
            if exp.kind != "num" or not exp.text.isdigit():
                raise self.error("expected a non-negative integer exponent")
            self.advance()
            node = Pow(node, int(exp.text))
        return node

    def base(self):
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "name":
            self.advance()
            name = tok.text
            if name in FUNCTIONS:
                return self.call(name, tok)
            if self.peek().kind == "op" and self.peek().text == "(":
                raise self.error(f"unknown function {name!r}", tok, UnknownIdentifier)
            if name in CONSTANTS:
                return Const(name)
            if re.fullmatch(r"u[0-9]+", name):
                index = int(name[1:])
                if index < 1:
                    raise self.error("chart variables start at u1", tok, UnknownIdentifier)
                return Var(index - 1)
            raise self.error(f"unknown identifier {name!r}", tok, UnknownIdentifier)
        raise self.error("expected a number, name or '('")

    def call(self, name, name_tok):
        self.expect("(")
        if self.peek().kind == "op" and self.peek().text == ")":
            raise self.error(f"{name} takes exactly one argument", cls=ArityError)
        arg = self.expr()
        if self.peek().kind == "op" and self.peek().text == ",":
            raise self.error(f"{name} takes exactly one argument", cls=ArityError)
        self.expect(")")
        return Unary(name, arg)


def parse_expression(text, line=1):
    return _Parser(text, line).parse()


# printing ---------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}
_NEG_PREC = 3
_POW_PREC = 4
_ATOM_PREC = 5


def _prec(node):
    if isinstance(node, Binary):
        return _PREC[node.op]
    if isinstance(node, Unary) and node.op == "neg":
        return _NEG_PREC
    if isinstance(node, Pow):
        return _POW_PREC
    return _ATOM_PREC


def to_source(node):
    """Minimal-parenthesis source such that ``parse(to_source(t)) == t``."""
    if isinstance(node, Num):
        if node.value < 0 or not math.isfinite(node.value):
            raise ValueError(f"cannot print literal {node.value!r}")
        return repr(float(node.value))
    if isinstance(node, Var):
        return f"u{node.index + 1}"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Unary):
        if node.op == "neg":
            inner = to_source(node.arg)
            if _prec(node.arg) < _NEG_PREC:
                inner = f"({inner})"
            return f"-{inner}"
        return f"{node.op}({to_source(node.arg)})"
    if isinstance(node, Pow):
        inner = to_source(node.base)
        if _prec(node.base) < _ATOM_PREC:
            inner = f"({inner})"
        return f"{inner}^{node.exponent}"
    if isinstance(node, Binary):
        prec = _PREC[node.op]
        left = to_source(node.left)
        if _prec(node.left) < prec:
            left = f"({left})"
        right = to_source(node.right)
        # right operand of equal precedence needs parentheses to keep the tree shape
        if _prec(node.right) <= prec:
            right = f"({right})"
        return f"{left} {node.op} {right}"
    raise TypeError(f"not an expression node: {node!r}")


# evaluation -------------------------------------------------------------


def variables(node):
    """Set of 0-based chart variable indices used by ``node``."""
    if isinstance(node, Var):
        return {node.index}
    if isinstance(node, Unary):
        return variables(node.arg)
    if isinstance(node, Pow):
        return variables(node.base)
    if isinstance(node, Binary):
        return variables(node.left) | variables(node.right)
    return set()


def _float_call(op, x):
    if op == "neg":
        return -x
    if op == "sin":
        return math.sin(x)
    if op == "cos":
        return math.cos(x)
    if op == "tan":
        return math.tan(x)
    if op == "sqrt":
        if x < 0:
            raise DomainError(f"sqrt of negative argument {x!r}")
        return math.sqrt(x)
    if op == "ln":
        if x <= 0:
            raise DomainError(f"ln of non-positive argument {x!r}")
        return math.log(x)
    raise ValueError(op)


def _jet_call(op, x):
    if op == "neg":
        return -x
    if op == "ln":
        return x.log()
    return getattr(x, op)()


def _lookup(name, constants):
    if name == "pi":
        return math.pi
    try:
        return float(constants[name])
    except (KeyError, TypeError):
        raise UnknownIdentifier(f"constant {name!r} is not bound (supply p and q)") from None


def evaluate(node, point=(), constants=None):
    """Float value of ``node`` at chart ``point``."""
    constants = constants or {}
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        if node.index >= len(point):
            raise UnknownIdentifier(f"variable u{node.index + 1} exceeds chart dimension {len(point)}")
        return float(point[node.index])
    if isinstance(node, Const):
        return _lookup(node.name, constants)
    if isinstance(node, Unary):
        return _float_call(node.op, evaluate(node.arg, point, constants))
    if isinstance(node, Pow):
        return evaluate(node.base, point, constants) ** node.exponent
    if isinstance(node, Binary):
        a = evaluate(node.left, point, constants)
        b = evaluate(node.right, point, constants)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if b == 0.0:
            raise DomainError("division by zero")
        return a / b
    raise TypeError(f"not an expression node: {node!r}")


def jet_eval(node, point, constants=None):
    """Value, exact gradient and Hessian of ``node`` at ``point`` as a ``Jet2``."""
    constants = constants or {}
    k = len(point)
    cache = {}

    def walk(n):
        # subtrees are shared frequently (e.g. cos(u1) in several products)
        key = id(n)
        if key in cache:
            return cache[key]
        if isinstance(n, Num):
            out = Jet2.constant(n.value, k)
        elif isinstance(n, Var):
            if n.index >= k:
                raise UnknownIdentifier(f"variable u{n.index + 1} exceeds chart dimension {k}")
            out = Jet2.variable(point[n.index], n.index, k)
        elif isinstance(n, Const):
            out = Jet2.constant(_lookup(n.name, constants), k)
        elif isinstance(n, Unary):
            out = _jet_call(n.op, walk(n.arg))
        elif isinstance(n, Pow):
            out = walk(n.base) ** n.exponent
        elif isinstance(n, Binary):
            a, b = walk(n.left), walk(n.right)
            if n.op == "+":
                out = a + b
            elif n.op == "-":
                out = a - b
            elif n.op == "*":
                out = a * b
            else:
                out = a / b
        else:
            raise TypeError(f"not an expression node: {n!r}")
        cache[key] = out
        return out

    return walk(node)
