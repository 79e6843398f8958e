"""Expression parser for Q(z) * Q<x, y> and Q(z)[x, y].

Grammar (explicit ``*``, no juxtaposition)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | atom ('^' ['-'] int)?
    atom   := int | 'z' | 'x' | 'y' | '(' expr ')'

Division and negative powers are only allowed on letter-free subtrees.
In noncommutative mode ``*`` keeps the order of letters and coefficients.
"""

from dataclasses import dataclass
from fractions import Fraction
import operator
import re

from .commutative import CommPoly
from .freealg import NCElement
from .scalar import RatFunc, Z

NC = "noncommutative"
COMM = "commutative"


class ExprSyntaxError(SyntaxError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NoncommutativeDivision(ValueError):
    pass


class NegativeLetterPower(ValueError):
    pass


@dataclass(frozen=True)
class Num:
    value: Fraction
    pos: int = 0


@dataclass(frozen=True)
class Sym:
    name: str
    pos: int = 0


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    pos: int = 0


@dataclass(frozen=True)
class Neg:
    operand: object
    pos: int = 0


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    pos: int = 0


_OPS = {"+": operator.add, "-": operator.sub, "*": operator.mul, "/": operator.truediv}

_TOKEN = re.compile(r"\s*(?:(\d+)|([xyz])|(.))")


def _tokenize(src):
    out = []
    pos = 0
    src = src.rstrip()
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        num, sym, op = m.groups()
        start = m.start(m.lastindex)
        if op is not None and op not in "+-*/^()":
            raise ExprSyntaxError(f"unexpected character {op!r}", start)
        out.append((num or sym or op, start))
        pos = m.end()
    out.append(("", len(src)))
    return out


class _Parser:
    def __init__(self, src):
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, want=None):
        tok, pos = self.tokens[self.i]
        if want is not None and tok != want:
            shown = repr(tok) if tok else "end of input"
            raise ExprSyntaxError(f"expected {want!r}, found {shown}", pos)
        self.i += 1
        return tok, pos

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op, pos = self.take()
            node = BinOp(op, node, self.term(), pos)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] in ("*", "/"):
            op, pos = self.take()
            node = BinOp(op, node, self.factor(), pos)
        return node

    def factor(self):
        tok, pos = self.peek()
        if tok == "-":
            self.take()
            return Neg(self.factor(), pos)
        node = self.atom()
        if self.peek()[0] == "^":
            _, ppos = self.take()
            sign = 1
            if self.peek()[0] == "-":
                self.take()
                sign = -1
            tok, epos = self.take()
            if not tok.isdigit():
                raise ExprSyntaxError("exponent must be an integer", epos)
            node = Pow(node, sign * int(tok), ppos)
        return node

    def atom(self):
        tok, pos = self.take()
        if tok.isdigit():
            return Num(Fraction(int(tok)), pos)
        if tok in ("x", "y", "z"):
            return Sym(tok, pos)
        if tok == "(":
            node = self.expr()
            self.take(")")
            return node
        shown = repr(tok) if tok else "end of input"
        raise ExprSyntaxError(f"unexpected {shown}", pos)


def parse_expr(src):
    """The syntax tree of ``src``."""
    p = _Parser(src)
    node = p.expr()
    tok, pos = p.peek()
    if tok:
        raise ExprSyntaxError(f"unexpected {tok!r}", pos)
    return node


def has_letters(node):
    if isinstance(node, Sym):
        return node.name in ("x", "y")
    if isinstance(node, Num):
        return False
    if isinstance(node, BinOp):
        return has_letters(node.left) or has_letters(node.right)
    if isinstance(node, Neg):
        return has_letters(node.operand)
    return has_letters(node.base)


def _coefficient(node):
    if isinstance(node, Num):
        return RatFunc.coerce(node.value)
    if isinstance(node, Sym):
        return Z
    if isinstance(node, Neg):
        return -_coefficient(node.operand)
    if isinstance(node, Pow):
        return _coefficient(node.base) ** node.exponent
    return _OPS[node.op](_coefficient(node.left), _coefficient(node.right))


def evaluate(node, mode=NC):
    """Fold a syntax tree into an NCElement or a CommPoly."""
    lift = NCElement.scalar if mode == NC else CommPoly.const
    letter = NCElement.letter if mode == NC else CommPoly.var

    def go(n):
        if not has_letters(n):
            return lift(_coefficient(n))
        if isinstance(n, Sym):
            return letter(n.name)
        if isinstance(n, Neg):
            return -go(n.operand)
        if isinstance(n, Pow):
            if n.exponent < 0:
                raise NegativeLetterPower(f"negative power of a letter expression at position {n.pos}")
            return go(n.base) ** n.exponent
        if n.op == "/":
            raise NoncommutativeDivision(f"division involving letters at position {n.pos}")
        return _OPS[n.op](go(n.left), go(n.right))

    return go(node)


def parse(src, mode=NC):
    if mode not in (NC, COMM):
        raise ValueError(f"unknown mode {mode!r}")
    return evaluate(parse_expr(src), mode)


def parse_coefficient(src):
    """A letter-free expression as an element of Q(z)."""
    node = parse_expr(src)
    if has_letters(node):
        raise ValueError(f"coefficient {src!r} contains a letter")
    return _coefficient(node)
