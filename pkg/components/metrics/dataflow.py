"""Def-use edges of scripts, with variables replaced by definition order."""

from __future__ import annotations

from collections import Counter

from tree_sitter import Node

from components.metrics.syntax import parse_candidate, parse_reference
from components.subject import COMMENTS, node_text

STATEMENTS = frozenset((
    "expression_statement", "return_statement", "if_statement", "while_statement", "do_statement",
    "for_statement", "enhanced_for_statement", "throw_statement", "switch_expression",
    "synchronized_statement", "assert_statement", "yield_statement", "try_statement",
    "try_with_resources_statement", "switch_block_statement_group", "switch_rule",
))
_SKIP = COMMENTS | frozenset((
    "modifiers", "package_declaration", "import_declaration", "class_literal",
    "type_identifier", "scoped_type_identifier", "generic_type", "array_type", "integral_type",
    "floating_point_type", "boolean_type", "void_type",
))
# Field holding a member name, not a variable, per node type.
_MEMBER_FIELD = {"method_invocation": "name", "field_access": "field"}


class _FlowCollector:
    def __init__(self):
        self.defs: dict[str, int] = {}
        self.count = 0
        self.edges: Counter = Counter()

    def reserve(self) -> int:
        ordinal = self.count
        self.count += 1
        return ordinal

    def define(self, name: str, ordinal: int | None = None):
        self.defs[name] = self.reserve() if ordinal is None else ordinal

    def use(self, name: str, dest):
        if name not in self.defs:
            if not name[:1].islower():
                return  # type or constant, not a variable
            self.define(name)
        self.edges[(self.defs[name], dest)] += 1

    def _visit_children(self, node: Node, dest, skip: Node | None = None):
        for child in node.children:
            if skip is None or child != skip:
                self.visit(child, dest)

    def visit(self, node: Node, dest):
        kind = node.type
        if kind in _SKIP:
            return
        if kind in STATEMENTS:
            dest = kind
        if kind == "identifier":
            self.use(node_text(node), dest)
        elif kind in _MEMBER_FIELD:
            self._visit_children(node, dest, skip=node.child_by_field_name(_MEMBER_FIELD[kind]))
        elif kind == "variable_declarator":
            ordinal = self.reserve()
            value = node.child_by_field_name("value")
            if value is not None:
                self.visit(value, ordinal)
            self.define(node_text(node.child_by_field_name("name")), ordinal)
        elif kind == "assignment_expression" and node.child_by_field_name("left").type == "identifier":
            target = node_text(node.child_by_field_name("left"))
            ordinal = self.reserve()
            if node_text(node.child_by_field_name("operator")) != "=":
                self.use(target, ordinal)
            self.visit(node.child_by_field_name("right"), ordinal)
            self.define(target, ordinal)
        elif kind == "update_expression" and any(c.type == "identifier" for c in node.named_children):
            name = node_text(next(c for c in node.named_children if c.type == "identifier"))
            ordinal = self.reserve()
            self.use(name, ordinal)
            self.define(name, ordinal)
        elif kind in ("formal_parameter", "catch_formal_parameter", "spread_parameter"):
            name = node.child_by_field_name("name")
            if name is not None:
                self.define(node_text(name))
        elif kind == "enhanced_for_statement":
            self.visit(node.child_by_field_name("value"), dest)
            self.define(node_text(node.child_by_field_name("name")))
            self.visit(node.child_by_field_name("body"), dest)
        elif kind == "lambda_expression":
            params = node.child_by_field_name("parameters")
            if params.type == "identifier":
                self.define(node_text(params))
            else:
                for p in params.named_children:
                    if p.type == "identifier":
                        self.define(node_text(p))
                    else:
                        self.visit(p, dest)
            self.visit(node.child_by_field_name("body"), dest)
        else:
            self._visit_children(node, dest)


def dataflow_edges(tree: Node) -> Counter:
    collector = _FlowCollector()
    collector.visit(tree, "script")
    return collector.edges


def dataflow_match_trees(candidate: Node | None, reference: Node) -> float:
    ref = dataflow_edges(reference)
    total = sum(ref.values())
    if candidate is None:
        return 0.0
    cand = dataflow_edges(candidate)
    if total == 0:
        return 1.0 if not cand else 0.0
    return sum((ref & cand).values()) / total


def dataflow_match(candidate_text: str, reference_text: str) -> float:
    reference = parse_reference(reference_text)
    return dataflow_match_trees(parse_candidate(candidate_text), reference)
