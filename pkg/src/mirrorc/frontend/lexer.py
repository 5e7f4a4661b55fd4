"""Tokenizer for the supported OpenQASM 3 subset."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .diagnostics import CompileError

KEYWORDS = frozenset({"OPENQASM", "include", "def", "qubit", "bit", "measure", "barrier", "reset", "float"})

PUNCTUATION = {
    "->": "arrow",
    "(": "lparen",
    ")": "rparen",
    "[": "lbracket",
    "]": "rbracket",
    "{": "lbrace",
    "}": "rbrace",
    ";": "semi",
    ",": "comma",
    ":": "colon",
    "=": "equals",
    "+": "plus",
    "-": "minus",
    "*": "star",
    "/": "slash",
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<float>(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<int>\d+)
  | (?P<string>"[^"\n]*")
  | (?P<ident>[A-Za-z_π][A-Za-z_0-9]*)
  | (?P<punct>->|[()\[\]{};,:=+\-*/])
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass(frozen=True)
class Token:
    kind: str  # keyword | ident | int | float | string | punctuation name
    text: str
    line: int
    column: int
    end_line: int = 0
    end_column: int = 0

    def __repr__(self) -> str:
        return f"{self.kind} {self.text}" if self.kind in ("ident", "int", "float", "string", "keyword") else self.kind


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise CompileError.at(f"illegal character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        lexeme = m.group()
        col = pos - line_start + 1
        start_line = line
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            line_start = pos + lexeme.rindex("\n") + 1
        end_col = m.end() - line_start + 1
        pos = m.end()
        if kind in ("ws", "comment"):
            continue
        if kind == "ident" and lexeme in KEYWORDS:
            kind = "keyword"
        elif kind == "punct":
            kind = PUNCTUATION[lexeme]
        tokens.append(Token(kind, lexeme, start_line, col, line, end_col))
    return tokens
