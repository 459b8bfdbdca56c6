"""Subject-language support: the metric tokenizer and tree-sitter syntax trees."""

from components.subject.lexer import KEYWORDS, Token, TokenKind, lex, strip_comment_markers
from components.subject.tree import (
    COMMENTS,
    TYPE_DECLS,
    child_of_type,
    first_error,
    node_text,
    parse,
    parse_compilation_unit,
    parse_script,
    type_text,
    walk,
)

__all__ = [
    "COMMENTS",
    "KEYWORDS",
    "TYPE_DECLS",
    "Token",
    "TokenKind",
    "child_of_type",
    "first_error",
    "lex",
    "node_text",
    "parse",
    "parse_compilation_unit",
    "parse_script",
    "strip_comment_markers",
    "type_text",
    "walk",
]
