"""Arithmetic expression parsing for the command line.

Grammar over one variable x: numeric literals, + - * / ^ (with ^ binding
tighter than unary minus and associating to the right), the functions
sin cos exp ln sqrt abs gamma, and the constants pi and e.  Parsed
expressions evaluate to floats and differentiate symbolically; the seven
function heads are closed under differentiation except gamma (its
derivative needs the digamma function, which the grammar cannot express),
so expressions containing gamma fall back to numeric differentiation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ExprSyntaxError, UnknownIdentifier
from .quadrature import RealFunction
from .special import gamma_fn

FUNCTIONS = ("sin", "cos", "exp", "ln", "sqrt", "abs", "gamma")
CONSTANTS = {"pi": math.pi, "e": math.e}


class Expr:
    """Base class of AST nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Const(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Bin(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    arg: Expr


@dataclass(frozen=True)
class _Token:
    kind: str  # num ident op lparen rparen end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    out: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE" and (
                j + 1 < n and (text[j + 1].isdigit() or text[j + 1] in "+-" and j + 2 < n and text[j + 2].isdigit())
            ):
                j += 2
                while j < n and text[j].isdigit():
                    j += 1
            out.append(_Token("num", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(_Token("ident", text[i:j], i))
            i = j
            continue
        if ch in "+-*/^":
            out.append(_Token("op", ch, i))
            i += 1
            continue
        if ch == "(":
            out.append(_Token("lparen", ch, i))
            i += 1
            continue
        if ch == ")":
            out.append(_Token("rparen", ch, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    out.append(_Token("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ExprSyntaxError(f"found {tok.text or 'end of input'!r}", tok.pos, (what,))
        return self.advance()

    def parse(self) -> Expr:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ExprSyntaxError(f"trailing input {tok.text!r}", tok.pos, ("operator", "end of input"))
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            node = Bin(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            node = Bin(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        node = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.advance()
            return Bin("^", node, self.unary())
        return node

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            try:
                return Num(float(tok.text))
            except ValueError:
                raise ExprSyntaxError(f"bad number literal {tok.text!r}", tok.pos) from None
        if tok.kind == "ident":
            self.advance()
            name = tok.text
            if name == "x":
                return Var()
            if name in CONSTANTS:
                return Const(name)
            if name in FUNCTIONS:
                self.expect("lparen", "'('")
                arg = self.expr()
                self.expect("rparen", "')'")
                return Call(name, arg)
            raise UnknownIdentifier(f"unknown identifier {name!r}", tok.pos)
        if tok.kind == "lparen":
            self.advance()
            node = self.expr()
            self.expect("rparen", "')'")
            return node
        raise ExprSyntaxError(
            f"found {tok.text or 'end of input'!r}", tok.pos, ("number", "identifier", "'('")
        )


def parse_expr(text: str) -> Expr:
    """Parse an expression; raises ExprSyntaxError / UnknownIdentifier."""
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(text).parse()


def evaluate(node: Expr, x: float) -> float:
    """Evaluate at x.  Domain violations (ln/sqrt of a negative number,
    division by zero, invalid powers) raise DomainError."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -evaluate(node.arg, x)
    if isinstance(node, Bin):
        lv = evaluate(node.left, x)
        rv = evaluate(node.right, x)
        try:
            if node.op == "+":
                return lv + rv
            if node.op == "-":
                return lv - rv
            if node.op == "*":
                return lv * rv
            if node.op == "/":
                return lv / rv
            # math.pow keeps the arithmetic real: negative base with a
            # fractional exponent is a domain violation, not a complex value
            return math.pow(lv, rv)
        except ZeroDivisionError as exc:
            raise DomainError(f"division by zero at x={x:g}") from exc
        except ValueError as exc:
            raise DomainError(f"invalid power {lv:g}^{rv:g} at x={x:g}") from exc
    if isinstance(node, Call):
        v = evaluate(node.arg, x)
        try:
            if node.fn == "sin":
                return math.sin(v)
            if node.fn == "cos":
                return math.cos(v)
            if node.fn == "exp":
                return math.exp(v)
            if node.fn == "ln":
                return math.log(v)
            if node.fn == "sqrt":
                return math.sqrt(v)
            if node.fn == "abs":
                return abs(v)
            return gamma_fn(v)
        except ValueError as exc:
            raise DomainError(f"{node.fn} of {v:g} is undefined") from exc
    raise TypeError(f"not an Expr node: {node!r}")


def _contains_var(node: Expr) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Neg):
        return _contains_var(node.arg)
    if isinstance(node, Bin):
        return _contains_var(node.left) or _contains_var(node.right)
    if isinstance(node, Call):
        return _contains_var(node.arg)
    return False


def differentiate(node: Expr) -> Expr | None:
    """Symbolic derivative with respect to x, or None when the expression
    contains gamma (whose derivative leaves the grammar)."""
    if isinstance(node, (Num, Const)):
        return Num(0.0)
    if isinstance(node, Var):
        return Num(1.0)
    if isinstance(node, Neg):
        da = differentiate(node.arg)
        return None if da is None else Neg(da)
    if isinstance(node, Bin):
        dl = differentiate(node.left)
        dr = differentiate(node.right)
        if dl is None or dr is None:
            return None
        l, r = node.left, node.right
        if node.op in "+-":
            return Bin(node.op, dl, dr)
        if node.op == "*":
            return Bin("+", Bin("*", dl, r), Bin("*", l, dr))
        if node.op == "/":
            num = Bin("-", Bin("*", dl, r), Bin("*", l, dr))
            return Bin("/", num, Bin("^", r, Num(2.0)))
        # power cases
        if not _contains_var(r):
            power = Bin("^", l, Bin("-", r, Num(1.0)))
            return Bin("*", Bin("*", r, power), dl)
        if not _contains_var(l):
            return Bin("*", Bin("*", node, Call("ln", l)), dr)
        bracket = Bin("+", Bin("*", dr, Call("ln", l)), Bin("/", Bin("*", r, dl), l))
        return Bin("*", node, bracket)
    if isinstance(node, Call):
        da = differentiate(node.arg)
        if da is None or node.fn == "gamma":
            return None
        u = node.arg
        if node.fn == "sin":
            outer: Expr = Call("cos", u)
        elif node.fn == "cos":
            outer = Neg(Call("sin", u))
        elif node.fn == "exp":
            outer = Call("exp", u)
        elif node.fn == "ln":
            return Bin("/", da, u)
        elif node.fn == "sqrt":
            return Bin("/", da, Bin("*", Num(2.0), Call("sqrt", u)))
        else:  # abs
            outer = Bin("/", u, Call("abs", u))
        return Bin("*", outer, da)
    raise TypeError(f"not an Expr node: {node!r}")


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _prec(node: Expr) -> int:
    if isinstance(node, Bin):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _PREC["neg"]
    return 5


def _fmt_num(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    short = f"{v:g}"
    return short if float(short) == v else repr(v)


def to_string(node: Expr) -> str:
    """Unparse; the result reparses to a structurally identical tree."""
    if isinstance(node, Num):
        return _fmt_num(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Neg):
        inner = to_string(node.arg)
        if _prec(node.arg) < _PREC["neg"]:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Bin):
        p = _PREC[node.op]
        ls = to_string(node.left)
        rs = to_string(node.right)
        if node.op == "^":
            if _prec(node.left) <= p:
                ls = f"({ls})"
            if _prec(node.right) < p:
                rs = f"({rs})"
        else:
            if _prec(node.left) < p:
                ls = f"({ls})"
            if _prec(node.right) <= p:
                rs = f"({rs})"
        return f"{ls}{node.op}{rs}"
    if isinstance(node, Call):
        return f"{node.fn}({to_string(node.arg)})"
    raise TypeError(f"not an Expr node: {node!r}")


def to_real_function(node: Expr, a: float, b: float) -> RealFunction:
    """Wrap an expression (and its symbolic derivative, when it exists) as a
    RealFunction on [a, b]."""
    d = differentiate(node)
    deriv = None if d is None else (lambda t, _d=d: evaluate(_d, t))
    return RealFunction(
        fn=lambda t: evaluate(node, t), a=a, b=b, deriv=deriv, label=to_string(node)
    )
