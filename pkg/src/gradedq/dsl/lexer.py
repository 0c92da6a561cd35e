"""Tokenizer for the gq script language."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT INT STRING OP NEWLINE EOF
    text: str
    line: int
    column: int

    def __repr__(self):
        return f"{self.kind}({self.text!r})@{self.line}:{self.column}"


_SPEC = [
    ("WS", r"[ \t\r]+"),
    ("COMMENT", r"#[^\n]*"),
    ("NEWLINE", r"\n"),
    ("FLOAT", r"\d+\.\d*|\.\d+|\d+[eE][+-]?\d+"),
    ("INT", r"\d+"),
    ("IDENT", r"(?:d:)*[A-Za-z_][A-Za-z0-9_]*"),
    ("STRING", r'"[^"\n]*"'),
    ("OP", r"->|==|[{}()\[\],;:=+\-*/^]"),
]
_RX = re.compile("|".join(f"(?P<{k}>{p})" for k, p in _SPEC))


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, col0, pos = 1, 0, 0
    n = len(text)
    while pos < n:
        m = _RX.match(text, pos)
        col = pos - col0 + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "FLOAT":
            raise ParseError(f"floating-point literal {s!r}; use a rational such as 3/2", line, col)
        if kind == "NEWLINE":
            tokens.append(Token("NEWLINE", "\n", line, col))
            line += 1
            col0 = m.end()
        elif kind == "STRING":
            tokens.append(Token("STRING", s[1:-1], line, col))
        elif kind not in ("WS", "COMMENT"):
            tokens.append(Token(kind, s, line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - col0 + 1))
    return tokens
