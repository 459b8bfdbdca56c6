"""Maximal-munch tokenizer for Java-like text, used by the n-gram metrics."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class TokenKind(str, Enum):
    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    LITERAL = "literal"
    OPERATOR = "operator"
    PUNCTUATION = "punctuation"
    COMMENT = "comment"


KEYWORDS = frozenset("""
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while
""".split())

LITERAL_WORDS = frozenset(("true", "false", "null"))

# Longest first so the scan below is maximal munch.
OPERATORS = (
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||",
    "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "<<", ">>", "=", "<", ">", "!", "~", "?", ":", "+", "-", "*", "/", "&",
    "|", "^", "%",
)
PUNCTUATION = frozenset("(){}[];,.@")


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    col: int


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def _is_ident_part(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


def _scan_number(text: str, i: int) -> int:
    n = len(text)
    if text.startswith(("0x", "0X", "0b", "0B"), i):
        i += 2
        while i < n and (text[i].isalnum() or text[i] == "_"):
            i += 1
        return i
    while i < n and (text[i].isdigit() or text[i] == "_"):
        i += 1
    if i + 1 < n and text[i] == "." and text[i + 1].isdigit():
        i += 1
        while i < n and (text[i].isdigit() or text[i] == "_"):
            i += 1
    if i < n and text[i] in "eE":
        j = i + 1
        if j < n and text[j] in "+-":
            j += 1
        if j < n and text[j].isdigit():
            i = j
            while i < n and text[i].isdigit():
                i += 1
    if i < n and text[i] in "lLfFdD":
        i += 1
    return i


def _scan_quoted(text: str, i: int, quote: str) -> int:
    """End of a string or char literal; an unterminated one stops at the line end."""
    n = len(text)
    i += 1
    while i < n:
        ch = text[i]
        if ch == "\\":
            i += 2
            continue
        if ch == quote:
            return i + 1
        if ch == "\n":
            return i
        i += 1
    return n


def lex(text: str, keep_comments: bool = False) -> list[Token]:
    """Split text into tokens. Unknown characters become one-character operators."""
    tokens: list[Token] = []
    i, n = 0, len(text)
    line, line_start = 1, 0

    def emit(kind, start, end):
        tokens.append(Token(kind, text[start:end], line, start - line_start + 1))

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line, line_start = line + 1, i
            continue
        if ch.isspace():
            i += 1
            continue

        start = i
        if text.startswith("//", i):
            end = text.find("\n", i)
            i = n if end < 0 else end
            if keep_comments:
                emit(TokenKind.COMMENT, start, i)
            continue
        if text.startswith("/*", i):
            end = text.find("*/", i + 2)
            i = n if end < 0 else end + 2
            if keep_comments:
                emit(TokenKind.COMMENT, start, i)
            newlines = text.count("\n", start, i)
            if newlines:
                line += newlines
                line_start = text.rfind("\n", start, i) + 1
            continue

        if text.startswith('"""', i):
            end = text.find('"""', i + 3)
            i = n if end < 0 else end + 3
            emit(TokenKind.LITERAL, start, i)
            newlines = text.count("\n", start, i)
            if newlines:
                line += newlines
                line_start = text.rfind("\n", start, i) + 1
            continue
        if ch in "\"'":
            i = _scan_quoted(text, i, ch)
            emit(TokenKind.LITERAL, start, i)
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            i = _scan_number(text, i)
            emit(TokenKind.LITERAL, start, i)
            continue
        if _is_ident_start(ch):
            while i < n and _is_ident_part(text[i]):
                i += 1
            word = text[start:i]
            if word in LITERAL_WORDS:
                kind = TokenKind.LITERAL
            elif word in KEYWORDS:
                kind = TokenKind.KEYWORD
            else:
                kind = TokenKind.IDENTIFIER
            emit(kind, start, i)
            continue

        for op in OPERATORS:
            if text.startswith(op, i):
                i += len(op)
                emit(TokenKind.OPERATOR, start, i)
                break
        else:
            i += 1
            emit(TokenKind.PUNCTUATION if ch in PUNCTUATION else TokenKind.OPERATOR, start, i)

    return tokens


def strip_comment_markers(comment: str) -> str:
    """Text of a line or block comment without its delimiters and leading stars."""
    if comment.startswith("//"):
        return comment[2:].strip()
    body = comment[2:-2] if comment.endswith("*/") else comment[2:]
    if body.startswith("*"):
        body = body[1:]
    lines = []
    for raw in body.splitlines():
        stripped = raw.strip()
        if stripped.startswith("*"):
            stripped = stripped[1:].strip()
        if stripped.startswith("@"):
            # Javadoc block tags end the description.
            break
        if stripped:
            lines.append(stripped)
    return " ".join(lines)
