"""Java syntax trees from tree-sitter.

Project sources are parsed tolerantly: tree-sitter recovers from errors and
the retriever takes whatever declarations survive. Generated scripts are
parsed strictly: the first ERROR or MISSING node becomes a
SubjectSyntaxError with a 1-based position.
"""

from __future__ import annotations

import logging
import re
import threading
from typing import Iterator

import tree_sitter_java
from tree_sitter import Language, Node, Parser, Tree

from components.errors import SubjectSyntaxError

logger = logging.getLogger(__name__)

JAVA = Language(tree_sitter_java.language())

TYPE_DECLS = frozenset((
    "class_declaration",
    "interface_declaration",
    "enum_declaration",
    "record_declaration",
    "annotation_type_declaration",
))
COMMENTS = frozenset(("line_comment", "block_comment"))
_BODY_MEMBERS = frozenset(("class_body", "interface_body", "enum_body_declarations", "annotation_type_body"))

# Parsers keep state between calls; one per thread.
_local = threading.local()


def _parser() -> Parser:
    parser = getattr(_local, "parser", None)
    if parser is None:
        parser = _local.parser = Parser(JAVA)
    return parser


def parse(text: str) -> Tree:
    return _parser().parse(text.encode("utf-8"))


def walk(node: Node) -> Iterator[Node]:
    """Pre-order over node and all its descendants."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(current.children))


def node_text(node: Node) -> str:
    return node.text.decode("utf-8")


def first_error(node: Node) -> Node | None:
    if not node.has_error:
        return None
    for n in walk(node):
        if n.type == "ERROR" or n.is_missing:
            return n
    return node


def parse_script(text: str) -> Node:
    """Root of a script that must parse without errors."""
    root = parse(text).root_node
    bad = first_error(root)
    if bad is not None:
        row, column = bad.start_point
        if bad.is_missing:
            message = f"missing {bad.type}"
        else:
            snippet = node_text(bad).split("\n", 1)[0][:40]
            message = f"unexpected {snippet!r}" if snippet else "unexpected end of input"
        raise SubjectSyntaxError(message, row + 1, column + 1)
    return root


def parse_compilation_unit(text: str, where: str = "<source>") -> Node:
    """Root of a source file; recovered errors are logged, not raised."""
    root = parse(text).root_node
    bad = first_error(root)
    if bad is not None:
        logger.warning("%s: syntax error near line %d, keeping what parses", where, bad.start_point[0] + 1)
    return root


def type_text(node: Node) -> str:
    """Canonical spelling of a type node: ``Map<String, List<Item>>``, ``int[]``."""
    text = " ".join(node_text(node).split())
    text = re.sub(r"\s*([<>\[\].,])\s*", r"\1", text)
    return text.replace(",", ", ")


def child_of_type(node: Node, *types: str) -> Node | None:
    return next((c for c in node.children if c.type in types), None)


def package_name(root: Node) -> str:
    decl = child_of_type(root, "package_declaration")
    if decl is None:
        return ""
    name = child_of_type(decl, "scoped_identifier", "identifier")
    return node_text(name) if name is not None else ""


def imports(root: Node) -> list[str]:
    """Single-type imports; static and on-demand imports are left out."""
    found = []
    for decl in root.children:
        if decl.type != "import_declaration":
            continue
        if child_of_type(decl, "static", "asterisk") is not None:
            continue
        name = child_of_type(decl, "scoped_identifier", "identifier")
        if name is not None:
            found.append(node_text(name))
    return found


def declaration_name(decl: Node) -> str:
    return node_text(decl.child_by_field_name("name"))


def members(decl: Node) -> list[Node]:
    """Member nodes of a type declaration's body, enum declarations included."""
    body = decl.child_by_field_name("body")
    if body is None:
        return []
    if body.type == "enum_body":
        inner = child_of_type(body, "enum_body_declarations")
        return list(inner.children) if inner is not None else []
    return list(body.children)


def type_declarations(node: Node, prefix: str = "") -> Iterator[tuple[Node, str]]:
    """Every type declaration under node with its dotted name (``Outer.Inner``)."""
    for child in node.children:
        if child.type in TYPE_DECLS:
            name = declaration_name(child)
            dotted = f"{prefix}.{name}" if prefix else name
            yield child, dotted
            yield from type_declarations(_body_holder(child), dotted)
        elif child.type in _BODY_MEMBERS:
            yield from type_declarations(child, prefix)


def _body_holder(decl: Node) -> Node:
    body = decl.child_by_field_name("body")
    if body is not None and body.type == "enum_body":
        return child_of_type(body, "enum_body_declarations") or body
    return body if body is not None else decl
