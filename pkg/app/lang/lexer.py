"""
Lexer for dualdata source text
"""
import unicodedata
from dataclasses import dataclass
from typing import List, Optional, Tuple

from app.models.diagnostic import Diagnostic, DiagnosticCode, make_diagnostic

KEYWORDS = frozenset({
    "data", "codata", "def", "codef", "let",
    "comatch", "match", "as", "absurd", "Type",
})

TOP_LEVEL = frozenset({"data", "codata", "def", "codef", "let"})

# Longest first.
PUNCTUATION = ("=>", "->", ":=", "(", ")", "{", "}", ",", ":", ".", ";", "\\")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "keyword", "punct", "wildcard" or "eof"
    text: str
    start: int
    end: int

    @property
    def span(self) -> Tuple[int, int]:
        return (self.start, self.end)

    def is_(self, text: str) -> bool:
        return self.kind in ("punct", "keyword") and self.text == text


def _is_symbol(ch: str) -> bool:
    return ord(ch) > 127 and unicodedata.category(ch).startswith("S")


def is_ident_start(ch: str) -> bool:
    return unicodedata.category(ch).startswith("L") or _is_symbol(ch)


def is_ident_char(ch: str) -> bool:
    if ch in "_'":
        return True
    category = unicodedata.category(ch)
    return category.startswith(("L", "N")) or _is_symbol(ch)


def is_identifier(text: str) -> bool:
    if not text or text in KEYWORDS:
        return False
    if text[0] == "_":
        return len(text) > 1 and all(is_ident_char(c) for c in text[1:])
    return is_ident_start(text[0]) and all(is_ident_char(c) for c in text[1:])


class Lexer:
    """Splits source text into tokens with byte-offset spans."""

    def __init__(self, text: str, file: Optional[str] = None):
        self.text = text
        self.file = file
        self.diagnostics: List[Diagnostic] = []
        self._offsets = [0]
        for ch in text:
            self._offsets.append(self._offsets[-1] + len(ch.encode("utf-8")))

    def byte_span(self, start: int, end: int) -> Tuple[int, int]:
        return (self._offsets[start], self._offsets[end])

    def tokens(self) -> List[Token]:
        text = self.text
        out: List[Token] = []
        i = 0
        n = len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if text.startswith("--", i):
                while i < n and text[i] != "\n":
                    i += 1
                continue
            start = i
            if ch == "_" or is_ident_start(ch):
                i += 1
                while i < n and is_ident_char(text[i]):
                    i += 1
                word = text[start:i]
                if word == "_":
                    kind = "wildcard"
                elif word in KEYWORDS:
                    kind = "keyword"
                else:
                    kind = "ident"
                out.append(Token(kind, word, *self.byte_span(start, i)))
                continue
            for punct in PUNCTUATION:
                if text.startswith(punct, i):
                    i += len(punct)
                    out.append(Token("punct", punct, *self.byte_span(start, i)))
                    break
            else:
                i += 1
                self.diagnostics.append(make_diagnostic(
                    DiagnosticCode.LEX_ERROR,
                    f"unexpected character {ch!r}",
                    self.byte_span(start, i),
                    self.file,
                ))
        end = self._offsets[n]
        out.append(Token("eof", "", end, end))
        return out


def tokenize(text: str, file: Optional[str] = None) -> Tuple[List[Token], List[Diagnostic]]:
    lexer = Lexer(text, file)
    tokens = lexer.tokens()
    return tokens, lexer.diagnostics
