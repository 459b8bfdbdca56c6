"""Token streams for the n-gram metrics."""

from __future__ import annotations

from dataclasses import dataclass

from components.subject.lexer import TokenKind, lex


@dataclass(frozen=True)
class TokenStream:
    tokens: tuple[tuple[str, TokenKind], ...] = ()

    def __len__(self):
        return len(self.tokens)

    @property
    def lexemes(self) -> tuple[str, ...]:
        return tuple(text for text, _ in self.tokens)

    @property
    def kinds(self) -> tuple[TokenKind, ...]:
        return tuple(kind for _, kind in self.tokens)

    def render(self) -> str:
        """Canonical form: lexemes joined by single spaces."""
        return " ".join(self.lexemes)


def tokenize_code(text: str) -> TokenStream:
    """Maximal-munch tokens without comments; string literals stay whole."""
    return TokenStream(tuple((t.text, t.kind) for t in lex(text)))
