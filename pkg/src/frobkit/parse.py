"""Recursive-descent parser for the polynomial text grammar.

Grammar (whitespace insignificant, ``*`` optional between factors):

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*'? factor)*
    factor := atom ['^' natural]
    atom   := natural | variable | '(' expr ')'

Coefficients are decimal integers reduced mod p; variables must be declared
ring variables.  Example: ``x^3+y^3+z^3`` or ``2x^2y + (x+y)^4``.
"""

from __future__ import annotations

from .errors import InputError


class ParseError(InputError):
    def __init__(self, message, line, col):
        super().__init__(f"parse error at line {line}, column {col}: {message}")
        self.line = line
        self.col = col


def _tokenize(text):
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*^()":
            tokens.append((ch, ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text, ring):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message):
        kind, text, line, col = self.peek()
        shown = text or "end of input"
        raise ParseError(f"{message} (found {shown!r})", line, col)

    def parse(self):
        f = self.expr()
        if self.peek()[0] != "end":
            self.fail("trailing input")
        return f

    def expr(self):
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.advance()[0] == "-" else 1
        f = self.term() * sign
        while self.peek()[0] in "+-":
            op = self.advance()[0]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.factor()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.advance()
                f = f * self.factor()
            elif kind in ("num", "name", "("):
                f = f * self.factor()
            else:
                return f

    def factor(self):
        f = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            if self.peek()[0] != "num":
                self.fail("expected a natural number after '^'")
            f = f ** int(self.advance()[1])
        return f

    def atom(self):
        kind, text, line, col = self.peek()
        if kind == "num":
            self.advance()
            return self.ring.const(int(text))
        if kind == "name":
            self.advance()
            try:
                return self.ring.var(text)
            except InputError:
                raise ParseError(
                    f"unknown variable {text!r} "
                    f"(declared: {', '.join(self.ring.variables)})", line, col)
        if kind == "(":
            self.advance()
            f = self.expr()
            if self.peek()[0] != ")":
                self.fail("expected ')'")
            self.advance()
            return f
        self.fail("expected a number, variable or '('")


def parse_poly(text, ring):
    return _Parser(text, ring).parse()
