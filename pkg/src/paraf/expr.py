"""Component expressions: parse, differentiate, evaluate.

Grammar (``^`` is right-associative and binds tighter than unary minus)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | NAME | FUNC '(' expr ')' | '(' expr ')'
    FUNC   := sin | cos | exp

Names must be chart coordinates.  Compiled evaluators take a 1-d coordinate
array and work on floats and on :mod:`paraf.dual` numbers alike.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Sequence

from paraf import dual

FUNCS = ("sin", "cos", "exp")


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    index: int
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object


ZERO = Num(0.0)
ONE = Num(1.0)


def _is(node, value: float) -> bool:
    return isinstance(node, Num) and node.value == value


def add(a, b):
    if _is(a, 0.0):
        return b
    if _is(b, 0.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value + b.value)
    return Bin("+", a, b)


def sub(a, b):
    if _is(b, 0.0):
        return a
    if _is(a, 0.0):
        return neg(b)
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value - b.value)
    return Bin("-", a, b)


def mul(a, b):
    if _is(a, 0.0) or _is(b, 0.0):
        return ZERO
    if _is(a, 1.0):
        return b
    if _is(b, 1.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value * b.value)
    return Bin("*", a, b)


def div(a, b):
    if _is(a, 0.0):
        return ZERO
    if _is(b, 1.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value / b.value)
    return Bin("/", a, b)


def power(a, b):
    if _is(b, 0.0):
        return ONE
    if _is(b, 1.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value**b.value)
    return Bin("^", a, b)


def neg(a):
    if isinstance(a, Num):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str, line: int, col0: int):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[pos + stripped]!r}", line, col0 + pos + stripped)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), col0 + start))
        pos = m.end()
    out.append(("end", "", col0 + len(text)))
    return out


class _Parser:
    def __init__(self, text: str, names: Sequence[str], line: int, col0: int):
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.names = {n: k for k, n in enumerate(names)}
        self.line = line

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ExprSyntaxError(msg, self.line, tok[2])

    def expect(self, op):
        tok = self.take()
        if tok[1] != op:
            self.error(f"expected {op!r}", tok)

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        node = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            node = add(node, rhs) if op == "+" else sub(node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.unary()
            node = mul(node, rhs) if op == "*" else div(node, rhs)
        return node

    def unary(self):
        if self.peek()[1] == "-" and self.peek()[0] == "op":
            self.take()
            return neg(self.unary())
        if self.peek()[1] == "+" and self.peek()[0] == "op":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            return power(base, self.unary())
        return base

    def atom(self):
        tok = self.take()
        kind, text, _ = tok
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            if text in FUNCS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            if text not in self.names:
                self.error(f"unknown name {text!r}", tok)
            return Var(self.names[text], text)
        if text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            self.error("unexpected end of expression", tok)
        self.error(f"unexpected token {text!r}", tok)


def parse(text: str, names: Sequence[str], line: int = 1, col: int = 1):
    """Parse ``text`` into an expression tree over coordinates ``names``."""
    return _Parser(text, names, line, col).parse()


# -- calculus ----------------------------------------------------------------


def diff(node, k: int):
    """Closed-form partial derivative with respect to coordinate ``k``."""
    if isinstance(node, Num):
        return ZERO
    if isinstance(node, Var):
        return ONE if node.index == k else ZERO
    if isinstance(node, Neg):
        return neg(diff(node.arg, k))
    if isinstance(node, Call):
        inner = diff(node.arg, k)
        if _is(inner, 0.0):
            return ZERO
        if node.fn == "sin":
            outer = Call("cos", node.arg)
        elif node.fn == "cos":
            outer = neg(Call("sin", node.arg))
        else:
            outer = node
        return mul(outer, inner)
    a, b = node.left, node.right
    if node.op == "+":
        return add(diff(a, k), diff(b, k))
    if node.op == "-":
        return sub(diff(a, k), diff(b, k))
    if node.op == "*":
        return add(mul(diff(a, k), b), mul(a, diff(b, k)))
    if node.op == "/":
        return div(sub(mul(diff(a, k), b), mul(a, diff(b, k))), mul(b, b))
    # power
    da, db = diff(a, k), diff(b, k)
    if isinstance(b, Num):
        return mul(mul(b, power(a, Num(b.value - 1.0))), da)
    return mul(node, add(mul(db, Call("log", a)), div(mul(b, da), a)))


def is_constant(node) -> bool:
    if isinstance(node, Num):
        return True
    if isinstance(node, Var):
        return False
    if isinstance(node, (Neg, Call)):
        return is_constant(node.arg)
    return is_constant(node.left) and is_constant(node.right)


_FN = {"sin": dual.sin, "cos": dual.cos, "exp": dual.exp, "log": dual.log}


def compile_expr(node) -> Callable:
    """Return ``fn(coords)`` evaluating ``node``."""
    if isinstance(node, Num):
        v = node.value
        return lambda x: v
    if isinstance(node, Var):
        i = node.index
        return lambda x: x[i]
    if isinstance(node, Neg):
        f = compile_expr(node.arg)
        return lambda x: -f(x)
    if isinstance(node, Call):
        f = compile_expr(node.arg)
        g = _FN[node.fn]
        return lambda x: g(f(x))
    fa, fb = compile_expr(node.left), compile_expr(node.right)
    if node.op == "+":
        return lambda x: fa(x) + fb(x)
    if node.op == "-":
        return lambda x: fa(x) - fb(x)
    if node.op == "*":
        return lambda x: fa(x) * fb(x)
    if node.op == "/":
        return lambda x: fa(x) / fb(x)
    if isinstance(node.right, Num) and float(node.right.value).is_integer() and node.right.value > 0:
        n = int(node.right.value)
        return lambda x: fa(x) ** n
    return lambda x: fa(x) ** fb(x)


def to_text(node) -> str:
    """Render ``node`` back into the grammar (fully parenthesised)."""
    if isinstance(node, Num):
        return repr(node.value) if node.value >= 0 else f"({node.value!r})"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_text(node.arg)})"
    if isinstance(node, Call):
        return f"{node.fn}({to_text(node.arg)})"
    return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
