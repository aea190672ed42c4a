"""
Text formats: polynomials and system files.

Polynomial grammar::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*        # "/" only by a constant
    unary  := ("+" | "-") unary | power
    power  := atom (("^" | "**") INTEGER)?
    atom   := INTEGER | NAME | "(" expr ")"

Juxtaposition (``2x``, ``x y``, ``(x+1)(x-1)``) is rejected.

A system file starts with a ``vars:`` header giving the variable order from
smallest to largest, followed by one constraint per line::

    # comment
    vars: x, y
    y^2 + x = 0
    y^2 + y <> 0

Bare polynomials (plain role) and constraints may not be mixed.
"""
from __future__ import annotations

import re

from .ccd import EQUATION, INEQUATION, PLAIN, InputSystem
from .poly import Polynomial, VarOrder, format_polynomial, normalize

NAME_RE = r"[A-Za-z][A-Za-z0-9_]*"

_TOKEN = re.compile(
    rf"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<name>{NAME_RE})
  | (?P<op>\*\*|\^|\+|-|\*|/|\(|\))
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    """Syntax or semantic error with a 1-based source position."""

    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


def _tokenize(text: str, line: int, col0: int):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col0 + pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), col0 + pos))
        pos = m.end()
    out.append(("end", "", col0 + len(text)))
    return out


class _Parser:
    def __init__(self, order: VarOrder, text: str, line: int, col0: int):
        self.order = order
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.line = line

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, self.line, tok[2])

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("num", "name") or tok[1] == "(":
                raise self.error("implicit multiplication is not allowed", tok)
            raise self.error(f"unexpected {tok[1]!r}", tok)
        return p

    def expr(self):
        p = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, col = self.take()
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant:
                    raise ParseError("division by a non-constant", self.line, col)
                c = q.constant_value
                if c == 0:
                    raise ParseError("division by zero", self.line, col)
                p = p * self.order.const(1 / c)
        return p

    def unary(self):
        tok = self.peek()
        if tok[1] == "-":
            self.take()
            return -self.unary()
        if tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] in ("^", "**"):
            self.take()
            tok = self.take()
            if tok[0] != "num":
                raise self.error("exponent must be a non-negative integer", tok)
            base = base ** int(tok[1])
        return base

    def atom(self):
        tok = self.take()
        kind, val, col = tok
        if kind == "num":
            return self.order.const(int(val))
        if kind == "name":
            if val not in self.order.names:
                raise ParseError(f"unknown variable {val!r}", self.line, col)
            return self.order.var(val)
        if val == "(":
            p = self.expr()
            close = self.take()
            if close[1] != ")":
                raise self.error("expected ')'", close)
            return p
        if kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected {val!r}", tok)


def parse_polynomial(text: str, order: VarOrder, line: int = 1, col: int = 1) -> Polynomial:
    """Parse one polynomial over ``order``."""
    return _Parser(order, text, line, col).parse()


def parse_varorder(text: str, line: int = 1) -> VarOrder:
    m = re.fullmatch(r"\s*vars\s*:(.*)", text)
    if not m:
        raise ParseError("expected header 'vars: x1, x2, ...'", line, 1)
    names = [v.strip() for v in m.group(1).split(",")]
    for v in names:
        if not re.fullmatch(NAME_RE, v):
            raise ParseError(f"bad variable name {v!r}", line, text.find(":") + 2)
    if len(set(names)) != len(names):
        raise ParseError("duplicate variable name", line, 1)
    return VarOrder(names)


def parse_system(text: str) -> InputSystem:
    """Parse a system file into an :class:`InputSystem` of normalized polynomials.

    Parameters
    ----------
    text : str
        File contents.

    Returns
    -------
    InputSystem
        Plain roles for bare polynomials, otherwise ``equation`` /
        ``inequation``.

    Raises
    ------
    ParseError
        On syntax errors, unknown variables, an empty body, mixed line
        kinds, or a constant constraint that is neither ``0 = 0``,
        ``c = 0`` nor ``c <> 0``.
    """
    order = None
    items = []
    kinds = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if order is None:
            order = parse_varorder(line, lineno)
            continue
        if "<>" in line:
            lhs, rhs = line.split("<>", 1)
            role, rhs_col = INEQUATION, len(lhs) + 3
        elif "=" in line:
            lhs, rhs = line.split("=", 1)
            role, rhs_col = EQUATION, len(lhs) + 2
        else:
            lhs, rhs, role, rhs_col = line, None, PLAIN, 0
        p = parse_polynomial(lhs, order, lineno, 1)
        if rhs is not None:
            p = p - parse_polynomial(rhs, order, lineno, rhs_col)
        kinds.add(role == PLAIN)
        if len(kinds) > 1:
            raise ParseError("plain polynomials and constraints cannot be mixed", lineno, 1)
        if p.is_constant:
            if role == PLAIN:
                raise ParseError("constant polynomial in a plain system", lineno, 1)
            if role == INEQUATION and p.is_zero:
                raise ParseError("constant constraint 0 <> 0", lineno, 1)
        items.append((p if p.is_zero else normalize(p), role))
    if order is None:
        raise ParseError("missing 'vars:' header", 1, 1)
    if not items:
        raise ParseError("system has no constraints", 1, 1)
    return InputSystem(order, items)


def format_system(system: InputSystem) -> str:
    """Canonical text of a system; ``parse_system`` inverts it."""
    out = ["vars: " + ", ".join(system.order.names)]
    suffix = {PLAIN: "", EQUATION: " = 0", INEQUATION: " <> 0"}
    for p, role in system.items:
        out.append(format_polynomial(p) + suffix[role])
    return "\n".join(out) + "\n"


def read_system(path) -> InputSystem:
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read())
