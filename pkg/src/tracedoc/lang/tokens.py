"""Lexer.

Produces a flat token list covering the source minus whitespace and `--`
comments. Triple-quoted interpolated strings switch the lexer into text mode;
`{` re-enters expression mode with brace-depth tracking so record literals
can appear inside holes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal

from ..errors import ParseError, SourceSpan

KEYWORDS = frozenset({"let", "in", "if", "then", "else", "fun"})

# Longest match first.
_PUNCT = (
    "->", "<-", "++", "==", "<=", ">=",
    "(", ")", "[", "]", "{", "}", ",", ";", ":", ".", "=", "<", ">",
    "+", "-", "*", "/", "|",
)


@dataclass(frozen=True)
class Token:
    kind: str  # num|str|ident|kw|backtick|text|tq_open|tq_close|eof|<punct literal>
    text: str
    span: SourceSpan
    value: object = field(default=None, compare=False)

    def __repr__(self) -> str:
        return f"Token({self.kind!r}, {self.text!r})"


def _is_ident_start(c: str) -> bool:
    return c.isalpha() or c == "_"


def _is_ident_char(c: str) -> bool:
    return c.isalnum() or c == "_"


class _Lexer:
    def __init__(self, source: str):
        self.src = source
        self.pos = 0
        self.tokens: list[Token] = []
        # Interpolation state: stack of brace depths, one per open """ string.
        self.interp_depths: list[int] = []

    def error(self, message: str, start: int | None = None, expected: list[str] | None = None):
        s = self.pos if start is None else start
        raise ParseError(message, SourceSpan(s, min(self.pos + 1, len(self.src))), expected)

    def emit(self, kind: str, start: int, value: object = None) -> None:
        self.tokens.append(Token(kind, self.src[start:self.pos], SourceSpan(start, self.pos), value))

    def peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.src[i] if i < len(self.src) else ""

    def run(self) -> list[Token]:
        while self.pos < len(self.src):
            c = self.src[self.pos]
            if c.isspace():
                self.pos += 1
            elif c == "-" and self.peek(1) == "-":
                while self.pos < len(self.src) and self.src[self.pos] != "\n":
                    self.pos += 1
            elif self.src.startswith('"""', self.pos):
                self.triple_string()
            elif c == '"':
                self.string()
            elif c.isdigit():
                self.number()
            elif _is_ident_start(c):
                self.ident()
            elif c == "`":
                self.backtick()
            else:
                self.punct()
        self.tokens.append(Token("eof", "", SourceSpan(len(self.src), len(self.src))))
        return self.tokens

    def number(self) -> None:
        start = self.pos
        while self.pos < len(self.src) and self.src[self.pos].isdigit():
            self.pos += 1
        if self.peek() == "." and self.peek(1).isdigit():
            self.pos += 1
            while self.pos < len(self.src) and self.src[self.pos].isdigit():
                self.pos += 1
        self.emit("num", start, Decimal(self.src[start:self.pos]))

    def ident(self) -> None:
        start = self.pos
        while self.pos < len(self.src) and _is_ident_char(self.src[self.pos]):
            self.pos += 1
        text = self.src[start:self.pos]
        self.emit("kw" if text in KEYWORDS else "ident", start, text)

    def backtick(self) -> None:
        start = self.pos
        self.pos += 1
        name_start = self.pos
        while self.pos < len(self.src) and _is_ident_char(self.src[self.pos]):
            self.pos += 1
        name = self.src[name_start:self.pos]
        if self.peek() != "`" or name not in ("and", "or"):
            self.error("expected `and` or `or` between backticks", start)
        self.pos += 1
        self.emit("backtick", start, name)

    def string(self) -> None:
        start = self.pos
        self.pos += 1
        chars: list[str] = []
        while True:
            if self.pos >= len(self.src) or self.src[self.pos] == "\n":
                self.error("unterminated string", start)
            c = self.src[self.pos]
            if c == '"':
                self.pos += 1
                self.emit("str", start, "".join(chars))
                return
            if c == "\\":
                esc = self.peek(1)
                mapped = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}.get(esc)
                if mapped is None:
                    self.error(f"invalid escape \\{esc}", self.pos)
                chars.append(mapped)
                self.pos += 2
            else:
                chars.append(c)
                self.pos += 1

    def triple_string(self) -> None:
        start = self.pos
        self.pos += 3
        self.emit("tq_open", start)
        self.interp_depths.append(0)
        self.text_mode(start)

    def text_mode(self, opened_at: int) -> None:
        """Consume literal text until a hole opens or the string closes."""
        text_start = self.pos
        while True:
            if self.pos >= len(self.src):
                self.error("unterminated triple-quoted string", opened_at)
            if self.src.startswith('"""', self.pos):
                if self.pos > text_start:
                    self.emit("text", text_start, self.src[text_start:self.pos])
                close_start = self.pos
                self.pos += 3
                self.emit("tq_close", close_start)
                self.interp_depths.pop()
                return
            if self.src[self.pos] == "{":
                if self.pos > text_start:
                    self.emit("text", text_start, self.src[text_start:self.pos])
                brace = self.pos
                self.pos += 1
                self.emit("{", brace)
                self.hole_mode(opened_at)
                text_start = self.pos
            else:
                self.pos += 1

    def hole_mode(self, opened_at: int) -> None:
        """Expression tokens inside {…}; nested braces belong to records."""
        while True:
            if self.pos >= len(self.src):
                self.error("unterminated interpolation hole", opened_at)
            c = self.src[self.pos]
            if c.isspace():
                self.pos += 1
            elif c == "-" and self.peek(1) == "-":
                while self.pos < len(self.src) and self.src[self.pos] != "\n":
                    self.pos += 1
            elif c == "}":
                if self.interp_depths[-1] == 0:
                    b = self.pos
                    self.pos += 1
                    self.emit("}", b)
                    return
                self.interp_depths[-1] -= 1
                b = self.pos
                self.pos += 1
                self.emit("}", b)
            elif c == "{":
                self.interp_depths[-1] += 1
                b = self.pos
                self.pos += 1
                self.emit("{", b)
            elif self.src.startswith('"""', self.pos):
                self.triple_string()
            elif c == '"':
                self.string()
            elif c.isdigit():
                self.number()
            elif _is_ident_start(c):
                self.ident()
            elif c == "`":
                self.backtick()
            else:
                self.punct()

    def punct(self) -> None:
        for p in _PUNCT:
            if self.src.startswith(p, self.pos):
                start = self.pos
                self.pos += len(p)
                self.emit(p, start)
                return
        self.error(f"illegal character {self.src[self.pos]!r}")


def tokenize(source: str) -> list[Token]:
    """Lex `source`; raises ParseError on illegal input."""
    return _Lexer(source).run()
