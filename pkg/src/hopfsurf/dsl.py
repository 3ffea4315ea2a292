"""Parsers for end-space expressions and surface descriptors.

    expr       := term ("+" term)*
    term       := INT "*" atom | atom
    atom       := "pt" | "pt!" | "cantor" | "cantor!" | "seq" "(" expr ")"
                | "(" expr ")"
    descriptor := "surface" "{" "genus" "=" (INT | "inf") ";"
                               "ends" "=" expr [";"] "}"
"""

import re

from hopfsurf import endspace as es
from hopfsurf.errors import ParseError

_TOKEN = re.compile(r"(\d+)|([A-Za-z_]+!?)|(\S)")


def _tokenize(text):
    tokens = []
    for lineno, line in enumerate(text.splitlines() or [""], start=1):
        for m in _TOKEN.finditer(line):
            kind = ("int", "word", "sym")[m.lastindex - 1]
            tokens.append((kind, m.group(), lineno, m.start() + 1))
    lines = text.splitlines() or [""]
    tokens.append(("eof", "", len(lines), len(lines[-1]) + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None, code="E_PARSE"):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], tok[3], code)

    def expect(self, value):
        tok = self.next()
        if tok[1] != value:
            self.fail(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def expr(self):
        terms = [self.term()]
        while self.peek()[1] == "+":
            self.next()
            terms.append(self.term())
        return es.union(*terms)

    def term(self):
        tok = self.peek()
        if tok[0] == "int":
            self.next()
            n = int(tok[1])
            self.expect("*")
            if n < 1:
                self.fail("multiplicity must be positive", tok)
            body = self.atom()
            return es.union(*([body] * n))
        return self.atom()

    def atom(self):
        tok = self.next()
        kind, val = tok[0], tok[1]
        if kind == "word":
            if val in ("pt", "pt!"):
                return es.Pt(val.endswith("!"))
            if val in ("cantor", "cantor!"):
                return es.Cantor(val.endswith("!"))
            if val == "seq":
                self.expect("(")
                body = self.expr()
                self.expect(")")
                return es.Seq(body)
        if val == "(":
            e = self.expr()
            self.expect(")")
            return e
        self.fail(f"unexpected {val or 'end of input'!r}", tok)

    def end(self):
        tok = self.peek()
        if tok[0] != "eof":
            self.fail(f"trailing input {tok[1]!r}", tok)


def parse_expr(text, allow_empty=False):
    """Parse an end-space expression; ``allow_empty`` admits the word ``empty``."""
    p = _Parser(text)
    if allow_empty and p.peek()[1] == "empty":
        p.next()
        p.end()
        return es.EMPTY
    e = p.expr()
    p.end()
    return e


def parse_descriptor(text):
    from hopfsurf.surface import INFINITE, SurfaceDesc, validate

    p = _Parser(text)
    p.expect("surface")
    p.expect("{")
    p.expect("genus")
    p.expect("=")
    tok = p.next()
    if tok[0] == "int":
        genus = int(tok[1])
    elif tok[1] == "inf":
        genus = INFINITE
    else:
        p.fail("genus must be a nonnegative integer or 'inf'", tok)
    p.expect(";")
    p.expect("ends")
    p.expect("=")
    ends_tok = p.peek()
    ends = p.expr()
    if p.peek()[1] == ";":
        p.next()
    p.expect("}")
    p.end()
    desc = SurfaceDesc(genus, ends)
    problem = validate(desc)
    if problem:
        raise ParseError(problem[1], ends_tok[2], ends_tok[3], problem[0])
    return desc
