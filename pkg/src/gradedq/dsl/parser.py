"""Recursive-descent parser for gq scripts.

Statements end at a newline or ``;``; newlines inside ``{}``, ``[]`` and
``()`` are insignificant.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import ParseError
from . import ast as A
from .lexer import Token, tokenize

# Command signatures.  N: name, E: expression, W: `with [...]` list,
# H: optional `holonomy (a, b)`, L: lecomte tail, on: optional `on <algebra>`;
# other strings are literals.
COMMANDS: dict[str, list[str]] = {
    "check nilpotent": ["N"],
    "check jacobi": ["N"],
    "check homomorphism": ["N"],
    "check twist": ["N"],
    "check chain": ["N", "N", "N"],
    "check basic": ["N", "N", "H"],
    "check master": ["N", "E"],
    "check equal": ["E", "==", "E", "on"],
    "check zero": ["E", "on"],
    "char": ["N", "N", "N", "N"],
    "gauge": ["N", "N", "N", "N", "W"],
    "transgress": ["N", "N", "N", "N", "N"],
    "aksz": ["N", "N", "N"],
    "lecomte": ["N", "L"],
    "equivariant conjugation": ["N"],
    "equivariant basic": ["N", "E"],
    "equivariant wz": ["N", "N", "N", "N", "W"],
    "eval": ["E", "on"],
}
_GROUPS = {"check", "equivariant"}
DECL_KEYWORDS = ("algebra", "tensor", "tangent", "structure", "chevalley", "derivation",
                 "morphism", "poly", "form", "symplectic", "qfield", "action", "algebroid")


def _expected_commands():
    return sorted(DECL_KEYWORDS + tuple({c.split()[0] for c in COMMANDS}))


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.depth = 0

    # token helpers

    def peek(self, k: int = 0) -> Token:
        j = self.i
        seen = 0
        while True:
            t = self.tokens[j]
            if t.kind == "NEWLINE" and self.depth > 0:
                j += 1
                continue
            if seen == k:
                return t
            seen += 1
            j += 1

    def next(self) -> Token:
        while self.depth > 0 and self.tokens[self.i].kind == "NEWLINE":
            self.i += 1
        t = self.tokens[self.i]
        if t.kind != "EOF":
            self.i += 1
        return t

    def error(self, msg: str, tok: Token, expected=()):
        raise ParseError(msg, tok.line, tok.column, expected)

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.kind in ("OP", "IDENT") and t.text == text

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.kind in ("OP", "IDENT") and t.text == text:
            tok = self.next()
            if text in "([{":
                self.depth += 1
            elif text in ")]}":
                self.depth -= 1
            return tok
        self.error(f"unexpected {_describe(t)}", t, (f"'{text}'",))

    def ident(self, what: str = "name") -> Token:
        t = self.peek()
        if t.kind != "IDENT":
            self.error(f"unexpected {_describe(t)}", t, (what,))
        return self.next()

    def integer(self, signed: bool = False) -> int:
        t = self.peek()
        neg = False
        if signed and t.kind == "OP" and t.text == "-":
            self.next()
            neg = True
            t = self.peek()
        if t.kind != "INT":
            self.error(f"unexpected {_describe(t)}", t, ("integer",))
        self.next()
        return -int(t.text) if neg else int(t.text)

    def rational(self) -> Fraction:
        v = Fraction(self.integer(signed=True))
        if self.at("/"):
            self.next()
            d = self.peek()
            den = self.integer()
            if den == 0:
                self.error("zero denominator", d)
            v /= den
        return v

    def skip_separators(self):
        while self.peek().kind == "NEWLINE" or self.at(";"):
            self.next()

    def end_statement(self):
        t = self.peek()
        if t.kind in ("NEWLINE", "EOF") or (t.kind == "OP" and t.text == ";"):
            if t.kind != "EOF":
                self.next()
            return
        self.error(f"unexpected {_describe(t)} after statement", t, ("newline", "';'"))

    def item_separator(self):
        """Inside blocks, entries are separated by ';', ',' or newlines."""
        while True:
            j = self.i
            t = self.tokens[j]
            if t.kind == "NEWLINE":
                self.i += 1
                continue
            if t.kind == "OP" and t.text in (";", ","):
                self.i += 1
                continue
            break

    # script

    def parse_script(self) -> A.Script:
        out = []
        self.skip_separators()
        while self.peek().kind != "EOF":
            out.append(self.statement())
            self.skip_separators()
        return A.Script(tuple(out))

    def statement(self):
        t = self.peek()
        if t.kind != "IDENT":
            self.error(f"unexpected {_describe(t)}", t, _expected_commands())
        word = t.text
        pos = (t.line, t.column)
        if word in DECL_KEYWORDS:
            self.next()
            node = getattr(self, "decl_" + word)(pos, word)
        else:
            key = word
            if word in _GROUPS:
                sub = self.peek(1)
                key = f"{word} {sub.text}"
                if key not in COMMANDS:
                    choices = sorted(c.split()[1] for c in COMMANDS if c.startswith(word + " "))
                    self.next()
                    self.error(f"unknown {word} command {sub.text!r}", sub, choices)
                self.next()
            if key not in COMMANDS:
                self.error(f"unknown statement {word!r}", t, _expected_commands())
            self.next()
            node = self.command(key, pos)
        self.end_statement()
        return node

    # declarations

    def decl_algebra(self, pos, _):
        name = self.ident("algebra name").text
        self.expect("{")
        gens = []
        self.item_separator()
        while not self.at("}"):
            g = self.ident("generator name").text
            self.expect(":")
            gens.append((g, self.integer(signed=True)))
            self.item_separator()
        self.expect("}")
        return A.AlgebraDecl(name, tuple(gens), pos=pos)

    def decl_tensor(self, pos, _):
        name = self.ident().text
        self.expect("=")
        factors = [self.ident("algebra name").text]
        while self.at(","):
            self.next()
            factors.append(self.ident("algebra name").text)
        return A.TensorDecl(name, tuple(factors), pos=pos)

    def decl_tangent(self, pos, _):
        name = self.ident().text
        self.expect("of")
        return A.TangentDecl(name, self.ident("algebra name").text, pos=pos)

    def decl_structure(self, pos, _):
        name = self.ident().text
        self.expect("dim")
        dim = self.integer()
        if self.at("file"):
            self.next()
            t = self.peek()
            if t.kind != "STRING":
                self.error(f"unexpected {_describe(t)}", t, ("file name string",))
            self.next()
            return A.StructureDecl(name, dim, (), t.text, pos=pos)
        self.expect("{")
        entries = []
        self.item_separator()
        while not self.at("}"):
            self.expect("C")
            a, b, c = self.integer(), self.integer(), self.integer()
            entries.append((a, b, c, self.expr()))
            self.item_separator()
        self.expect("}")
        return A.StructureDecl(name, dim, tuple(entries), pos=pos)

    def decl_chevalley(self, pos, _):
        name = self.ident().text
        self.expect("on")
        alg = self.ident("algebra name").text
        self.expect("using")
        return A.ChevalleyDecl(name, alg, self.ident("structure name").text, pos=pos)

    def _images(self):
        self.expect("{")
        out = []
        self.item_separator()
        while not self.at("}"):
            g = self.ident("generator name").text
            self.expect("->")
            out.append((g, self.expr()))
            self.item_separator()
        self.expect("}")
        return tuple(out)

    def decl_derivation(self, pos, _):
        name = self.ident().text
        self.expect("on")
        alg = self.ident("algebra name").text
        self.expect("degree")
        deg = self.integer(signed=True)
        return A.DerivationDecl(name, alg, deg, self._images(), pos=pos)

    def decl_morphism(self, pos, _):
        name = self.ident().text
        self.expect(":")
        src = self.ident("algebra name").text
        self.expect("->")
        dst = self.ident("algebra name").text
        return A.MorphismDecl(name, src, dst, self._images(), pos=pos)

    def decl_poly(self, pos, kw):
        name = self.ident().text
        self.expect("on")
        alg = self.ident("algebra name").text
        self.expect("=")
        return A.PolyDecl(kw, name, alg, self.expr(), pos=pos)

    decl_form = decl_poly

    def decl_symplectic(self, pos, _):
        name = self.ident().text
        self.expect("on")
        alg = self.ident("algebra name").text
        self.expect("degree")
        p = self.integer()
        if self.at("="):
            self.next()
            return A.SymplecticDecl(name, alg, p, (), self.expr(), pos=pos)
        self.expect("pairs")
        self.expect("{")
        pairs = []
        self.item_separator()
        while not self.at("}"):
            self.expect("(")
            a = self.ident("generator name").text
            self.expect(",")
            b = self.ident("generator name").text
            self.expect(")")
            pairs.append((a, b))
            self.item_separator()
        self.expect("}")
        return A.SymplecticDecl(name, alg, p, tuple(pairs), None, pos=pos)

    def decl_qfield(self, pos, _):
        name = self.ident().text
        self.expect("from")
        w = self.ident("symplectic structure").text
        self.expect("hamiltonian")
        return A.QFieldDecl(name, w, self.expr(), pos=pos)

    def decl_action(self, pos, _):
        name = self.ident().text
        self.expect("algebra")
        sc = self.ident("structure name").text
        self.expect("on")
        m = self.ident("algebra name").text
        xi = ()
        if self.at("xi"):
            self.next()
            self.expect("(")
            names = [self.ident("generator name").text]
            while self.at(","):
                self.next()
                names.append(self.ident("generator name").text)
            self.expect(")")
            xi = tuple(names)
        self.expect("{")
        fields = []
        self.item_separator()
        while not self.at("}"):
            t = self.ident("basis element e<k>")
            if not (t.text.startswith("e") and t.text[1:].isdigit() and int(t.text[1:]) >= 1):
                self.error(f"expected basis element e<k>, got {t.text!r}", t, ("e1", "e2", "..."))
            self.expect("->")
            self.expect("[")
            comps = []
            while not self.at("]"):
                g = self.ident("generator name").text
                self.expect(":")
                comps.append((g, self.expr()))
                if not self.at("]"):
                    self.expect(",")
            self.expect("]")
            fields.append((int(t.text[1:]), tuple(comps)))
            self.item_separator()
        self.expect("}")
        return A.ActionDecl(name, sc, m, tuple(fields), xi, pos=pos)

    def decl_algebroid(self, pos, _):
        name = self.ident().text
        q = self.ident("differential name").text
        self.expect("from")
        return A.AlgebroidDecl(name, q, self.ident("action name").text, pos=pos)

    # commands

    def command(self, verb: str, pos) -> A.Command:
        args = []
        options = []
        for item in COMMANDS[verb]:
            if item == "N":
                args.append(self.ident().text)
            elif item == "E":
                args.append(self.expr())
            elif item == "W":
                self.expect("with")
                options.append(("with", self.with_list()))
            elif item == "H":
                if self.at("holonomy"):
                    self.next()
                    self.expect("(")
                    hs = [self.ident("vector field").text]
                    while self.at(","):
                        self.next()
                        hs.append(self.ident("vector field").text)
                    self.expect(")")
                    options.append(("holonomy", tuple(hs)))
            elif item == "L":
                self.expect("ideal")
                options.append(("ideal", self.vectors()))
                self.expect("splitting")
                options.append(("splitting", self.vectors()))
                self.expect("invariant")
                t = self.peek()
                if self.at("linear"):
                    self.next()
                    options.append(("linear", self.vector()))
                elif self.at("matrix"):
                    self.next()
                    self.expect("(")
                    rows = self.vectors()
                    self.expect(")")
                    options.append(("matrix", rows))
                else:
                    self.error(f"unexpected {_describe(t)}", t, ("linear", "matrix"))
            elif item == "on":
                if self.at("on"):
                    self.next()
                    options.append(("on", self.ident("algebra name").text))
            else:
                self.expect(item)
        bind = None
        expect_fail = False
        if self.at("as"):
            self.next()
            bind = self.ident("result name").text
        if self.at("expect"):
            self.next()
            self.expect("fail")
            expect_fail = True
        return A.Command(verb, tuple(args), tuple(options), bind, expect_fail, pos=pos)

    def with_list(self):
        self.expect("[")
        items = []
        while not self.at("]"):
            if self.peek().kind == "IDENT" and self.peek(1).kind == "OP" and self.peek(1).text == ":":
                key = self.next().text
                self.expect(":")
                items.append((key, self.expr()))
            else:
                items.append((None, self.expr()))
            if not self.at("]"):
                self.expect(",")
        self.expect("]")
        return tuple(items)

    def vector(self) -> tuple[Fraction, ...]:
        self.expect("(")
        out = []
        while not self.at(")"):
            out.append(self.rational())
            if self.at(","):
                self.next()
        self.expect(")")
        return tuple(out)

    def vectors(self):
        out = [self.vector()]
        while self.at("("):
            out.append(self.vector())
        return tuple(out)

    # expressions

    def expr(self):
        left = self.term()
        while self.peek().kind == "OP" and self.peek().text in "+-":
            t = self.next()
            left = A.BinOp(t.text, left, self.term(), pos=(t.line, t.column))
        return left

    def term(self):
        left = self.unary()
        while self.peek().kind == "OP" and self.peek().text in ("*", "/"):
            t = self.next()
            left = A.BinOp(t.text, left, self.unary(), pos=(t.line, t.column))
        return left

    def unary(self):
        if self.at("-"):
            t = self.next()
            return A.Neg(self.unary(), pos=(t.line, t.column))
        return self.power()

    def power(self):
        base = self.atom()
        if self.at("^"):
            t = self.next()
            e = self.peek()
            if e.kind != "INT":
                self.error(f"unexpected {_describe(e)}", e, ("non-negative integer exponent",))
            self.next()
            return A.Pow(base, int(e.text), pos=(t.line, t.column))
        return base

    def atom(self):
        t = self.peek()
        pos = (t.line, t.column)
        if t.kind == "INT":
            self.next()
            return A.Num(int(t.text), pos=pos)
        if t.kind == "IDENT":
            self.next()
            if self.at("("):
                self.expect("(")
                if t.text == "d" and self.peek().kind == "IDENT" and self.peek(1).text == ")":
                    inner = self.next()
                    self.expect(")")
                    return A.Name("d:" + inner.text, pos=pos)
                arg = self.expr()
                self.expect(")")
                return A.Call(t.text, arg, pos=pos)
            return A.Name(t.text, pos=pos)
        if self.at("("):
            self.expect("(")
            e = self.expr()
            self.expect(")")
            return e
        self.error(f"unexpected {_describe(t)}", t, ("number", "name", "'('", "'-'"))


def _describe(t: Token) -> str:
    if t.kind == "EOF":
        return "end of input"
    if t.kind == "NEWLINE":
        return "end of line"
    return f"{t.text!r}"


def parse(text: str) -> A.Script:
    return Parser(text).parse_script()


def parse_expr(text: str):
    p = Parser(text)
    e = p.expr()
    t = p.peek()
    while t.kind == "NEWLINE":
        p.next()
        t = p.peek()
    if t.kind != "EOF":
        p.error(f"unexpected {_describe(t)}", t, ("end of expression",))
    return e
