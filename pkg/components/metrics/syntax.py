"""Subtree matching over tree-sitter syntax trees of generated scripts."""

from __future__ import annotations

import logging
from collections import Counter

from tree_sitter import Node

from components.errors import ReferenceUnparseable, SubjectSyntaxError
from components.subject import COMMENTS, node_text, parse_script

logger = logging.getLogger(__name__)

MIN_HEIGHT = 2


def parse_reference(text: str) -> Node:
    try:
        return parse_script(text)
    except SubjectSyntaxError as e:
        raise ReferenceUnparseable(e) from e


def parse_candidate(text: str) -> Node | None:
    try:
        return parse_script(text)
    except SubjectSyntaxError as e:
        logger.debug("Candidate does not parse: %s", e)
        return None


def is_literal(node: Node) -> bool:
    return node.type.endswith("_literal") or node.type in ("true", "false")


def _children(node: Node) -> list[Node]:
    if is_literal(node):
        return []
    return [c for c in node.children if c.type not in COMMENTS]


def signature(node: Node) -> str:
    """S-expression of node types; only literals keep their text, so names are anonymized."""
    if is_literal(node):
        return f"{node.type}={node_text(node)}"
    children = _children(node)
    if not children:
        return node.type
    return f"({node.type} {' '.join(signature(c) for c in children)})"


def subtrees(root: Node) -> Counter:
    """Signatures of every subtree of height two or more."""
    found: Counter = Counter()

    def height(node: Node) -> int:
        children = _children(node)
        if not children:
            return 1
        h = 1 + max(height(c) for c in children)
        if h >= MIN_HEIGHT:
            found[signature(node)] += 1
        return h

    height(root)
    return found


def ast_match_trees(candidate: Node | None, reference: Node) -> float:
    ref = subtrees(reference)
    total = sum(ref.values())
    if total == 0:
        return 1.0 if candidate is not None and not subtrees(candidate) else 0.0
    if candidate is None:
        return 0.0
    matched = sum((ref & subtrees(candidate)).values())
    return matched / total


def ast_match(candidate_text: str, reference_text: str) -> float:
    """Share of reference subtrees found in the candidate; 0 when the candidate does not parse."""
    reference = parse_reference(reference_text)
    return ast_match_trees(parse_candidate(candidate_text), reference)
