"""Curve expression language.

A curve is a parenthesized 2- or 4-tuple of complex expressions in the single
variable z, e.g. "(cos(z), sin(z), -i*z, 0)".  2-tuples are zero-padded; they
describe curves into the plane of the first two complex coordinates.

Grammar (left associative throughout, ^ binds tightest, then unary minus,
then * /, then + -):

    curve    := '(' expr (',' expr)* ')'
    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := '-' unary | power
    power    := atom ('^' exponent)*
    exponent := ['-'] integer
    atom     := number | 'i' | 'z' | func '(' expr ')' | '(' expr ')'
    func     := exp | log | sin | cos | sinh | cosh | sqrt

Every node carries its source span so evaluation failures can name the
offending subexpression.  Spans and positions are excluded from node equality;
printing then reparsing reproduces the identical tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BranchCutError, DegenerateJetError, EvaluationError, ExpressionError
from .jets import ComplexJet

FUNCTIONS = ("exp", "log", "sin", "cos", "sinh", "cosh", "sqrt")


@dataclass(frozen=True)
class Node:
    pass


@dataclass(frozen=True)
class Lit(Node):
    """Literal: a nonnegative real, or the imaginary unit (0, 1).

    Other constants are spelled with arithmetic, exactly as the parser would
    produce them, so printing stays faithful to the grammar.
    """

    re: float
    im: float = 0.0
    span: tuple | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Var(Node):
    span: tuple | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Neg(Node):
    x: Node
    span: tuple | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Bin(Node):
    op: str
    a: Node
    b: Node
    span: tuple | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int
    span: tuple | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Call(Node):
    fn: str
    arg: Node
    span: tuple | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Curve(Node):
    components: tuple
    declared_arity: int = field(default=4, compare=False)
    span: tuple | None = field(default=None, compare=False, repr=False)


_TOK_NUM = "number"
_TOK_IDENT = "identifier"
_TOK_EOF = "end of input"


class _Token:
    __slots__ = ("kind", "text", "value", "start", "line", "col")

    def __init__(self, kind, text, value, start, line, col):
        self.kind = kind
        self.text = text
        self.value = value
        self.start = start
        self.line = line
        self.col = col


def _tokenize(text):
    toks = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            lex = text[i:j]
            toks.append(_Token(_TOK_NUM, lex, float(lex), i, line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            lex = text[i:j]
            toks.append(_Token(_TOK_IDENT, lex, lex, i, line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*/^(),":
            toks.append(_Token(ch, ch, ch, i, line, col))
            i += 1
            col += 1
            continue
        raise ExpressionError(f"unexpected character {ch!r}", line, col,
                              expected=("expression",))
    toks.append(_Token(_TOK_EOF, "", None, n, line, col))
    return toks


_ATOM_EXPECTED = ("number", "'i'", "'z'", "function name", "'('", "'-'")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def advance(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def fail(self, message, tok=None, expected=()):
        tok = tok or self.peek()
        raise ExpressionError(message, tok.line, tok.col, expected)

    def expect(self, kind, what):
        if self.peek().kind != kind:
            self.fail(f"expected {what}", expected=(what,))
        return self.advance()

    def parse_curve(self):
        open_tok = self.expect("(", "'('")
        comps = [self.parse_expr()]
        while self.peek().kind == ",":
            self.advance()
            comps.append(self.parse_expr())
        close = self.expect(")", "')'")
        if self.peek().kind != _TOK_EOF:
            self.fail("trailing input after curve", expected=("end of input",))
        if len(comps) not in (2, 4):
            raise ExpressionError(
                f"curve must have 2 or 4 components, found {len(comps)}",
                open_tok.line, open_tok.col, expected=("2 or 4 components",))
        arity = len(comps)
        span = (open_tok.start, close.start + 1)
        while len(comps) < 4:
            comps.append(Lit(0.0, span=None))
        return Curve(tuple(comps), declared_arity=arity, span=span)

    def parse_expr(self):
        node = self.parse_term()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.parse_term()
            span = (node.span[0], rhs.span[1]) if node.span and rhs.span else None
            node = Bin(op, node, rhs, span=span)
        return node

    def parse_term(self):
        node = self.parse_unary()
        while self.peek().kind in ("*", "/"):
            op = self.advance().kind
            rhs = self.parse_unary()
            span = (node.span[0], rhs.span[1]) if node.span and rhs.span else None
            node = Bin(op, node, rhs, span=span)
        return node

    def parse_unary(self):
        if self.peek().kind == "-":
            t = self.advance()
            x = self.parse_unary()
            span = (t.start, x.span[1]) if x.span else None
            return Neg(x, span=span)
        return self.parse_power()

    def parse_power(self):
        node = self.parse_atom()
        while self.peek().kind == "^":
            self.advance()
            sign = 1
            if self.peek().kind == "-":
                self.advance()
                sign = -1
            t = self.peek()
            if t.kind != _TOK_NUM or t.value != int(t.value):
                self.fail("exponent must be an integer literal",
                          expected=("integer exponent",))
            self.advance()
            span = (node.span[0], t.start + len(t.text)) if node.span else None
            node = Pow(node, sign * int(t.value), span=span)
        return node

    def parse_atom(self):
        t = self.peek()
        if t.kind == _TOK_NUM:
            self.advance()
            return Lit(t.value, span=(t.start, t.start + len(t.text)))
        if t.kind == _TOK_IDENT:
            if t.value == "z":
                self.advance()
                return Var(span=(t.start, t.start + 1))
            if t.value == "i":
                self.advance()
                return Lit(0.0, 1.0, span=(t.start, t.start + 1))
            if t.value in FUNCTIONS:
                self.advance()
                self.expect("(", "'('")
                arg = self.parse_expr()
                close = self.expect(")", "')'")
                return Call(t.value, arg, span=(t.start, close.start + 1))
            self.fail(f"unknown identifier {t.value!r}", tok=t,
                      expected=_ATOM_EXPECTED)
        if t.kind == "(":
            self.advance()
            node = self.parse_expr()
            self.expect(")", "')'")
            return node
        self.fail("expected expression", tok=t, expected=_ATOM_EXPECTED)


def _num_text(x):
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _prec(node):
    if isinstance(node, (Lit, Var, Call)):
        return 4
    if isinstance(node, Pow):
        return 3
    if isinstance(node, Neg):
        return 2
    if isinstance(node, Bin):
        return 1 if node.op in "*/" else 0
    raise TypeError(node)


def print_node(node):
    if isinstance(node, Curve):
        comps = node.components[:node.declared_arity]
        return "(" + ", ".join(print_node(c) for c in comps) + ")"
    if isinstance(node, Lit):
        if node.im == 0.0:
            return _num_text(node.re)
        if node.re == 0.0 and node.im == 1.0:
            return "i"
        raise ValueError(f"unprintable literal ({node.re}, {node.im})")
    if isinstance(node, Var):
        return "z"
    if isinstance(node, Call):
        return f"{node.fn}({print_node(node.arg)})"
    if isinstance(node, Pow):
        base = print_node(node.base)
        if _prec(node.base) < 3:
            base = f"({base})"
        return f"{base}^{node.exponent}"
    if isinstance(node, Neg):
        inner = print_node(node.x)
        if _prec(node.x) < 2:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Bin):
        mine = _prec(node)
        left = print_node(node.a)
        if _prec(node.a) < mine:
            left = f"({left})"
        right = print_node(node.b)
        if _prec(node.b) <= mine:
            right = f"({right})"
        if node.op in "*/":
            return f"{left}{node.op}{right}"
        return f"{left} {node.op} {right}"
    raise TypeError(node)


def const_node(c):
    """Canonical AST for a complex constant, shaped as the parser would
    produce it (literals stay nonnegative; signs and i enter via operators)."""
    c = complex(c)
    re, im = c.real, c.imag

    def real_node(x):
        return Lit(x) if x >= 0 else Neg(Lit(-x))

    if im == 0.0:
        return real_node(re)
    im_node = Lit(0.0, 1.0) if abs(im) == 1.0 else Bin("*", Lit(abs(im)), Lit(0.0, 1.0))
    if re == 0.0:
        return im_node if im > 0 else Neg(im_node)
    if im > 0:
        return Bin("+", real_node(re), im_node)
    return Bin("-", real_node(re), im_node)


def _guard(node, src, z, fn):
    try:
        return fn()
    except DegenerateJetError as e:
        raise EvaluationError(
            _eval_msg(node, src, z, "pole"), reason="pole",
            where=_span_text(node, src), z=z) from e
    except BranchCutError as e:
        raise EvaluationError(
            _eval_msg(node, src, z, "branch cut"), reason="branch cut",
            where=_span_text(node, src), z=z) from e


def _span_text(node, src):
    if src is not None and node.span is not None:
        return src[node.span[0]:node.span[1]]
    return "<expression>"


def _eval_msg(node, src, z, reason):
    return f"cannot evaluate '{_span_text(node, src)}' at z = {z}: {reason}"


def eval_node(node, zjet, src=None, z=None):
    if isinstance(node, Lit):
        return ComplexJet.constant(complex(node.re, node.im))
    if isinstance(node, Var):
        return zjet
    if isinstance(node, Neg):
        return -eval_node(node.x, zjet, src, z)
    if isinstance(node, Bin):
        a = eval_node(node.a, zjet, src, z)
        b = eval_node(node.b, zjet, src, z)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return _guard(node, src, z, lambda: a / b)
    if isinstance(node, Pow):
        base = eval_node(node.base, zjet, src, z)
        return _guard(node, src, z, lambda: base ** node.exponent)
    if isinstance(node, Call):
        arg = eval_node(node.arg, zjet, src, z)
        return _guard(node, src, z, lambda: getattr(arg, node.fn)())
    raise TypeError(node)


class CurveExpr:
    """A parsed (or programmatically assembled) 4-component curve."""

    __slots__ = ("ast", "source")

    def __init__(self, ast, source=None):
        if not isinstance(ast, Curve):
            raise TypeError("CurveExpr wants a Curve node")
        self.ast = ast
        self.source = source

    @staticmethod
    def parse(text):
        return CurveExpr(_Parser(text).parse_curve(), source=text)

    @staticmethod
    def from_components(components, declared_arity=4):
        return CurveExpr(Curve(tuple(components), declared_arity=declared_arity))

    def to_text(self):
        return print_node(self.ast)

    def eval_jets(self, z):
        zj = ComplexJet.variable(z)
        return [eval_node(c, zj, self.source, z) for c in self.ast.components]

    def eval_values(self, z):
        return [j.c0 for j in self.eval_jets(z)]

    def __eq__(self, other):
        if not isinstance(other, CurveExpr):
            return NotImplemented
        return self.ast == other.ast

    def __hash__(self):
        return hash(self.ast)

    def __repr__(self):
        return f"CurveExpr({self.to_text()!r})"


def parse_curve(text):
    """Parse curve expression text to its AST (a Curve node)."""
    return _Parser(text).parse_curve()
