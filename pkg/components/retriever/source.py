"""ClassInfo extraction from project source files."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from tree_sitter import Node

from components.config import RetrieverConfig
from components.core_model import ClassInfo, FieldInfo, Origin, simple_name
from components.errors import ClassNotFound
from components.retriever.types import JAVA_LANG, PRIMITIVES, WELL_KNOWN, container_of, split_type_args
from components.subject import COMMENTS, child_of_type, node_text, parse_compilation_unit, strip_comment_markers, type_text
from components.subject.tree import declaration_name, imports, members, package_name, type_declarations

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SourceUnit:
    path: Path
    text: str
    declared_classes: tuple[str, ...] = ()


def load_source_unit(path) -> SourceUnit:
    """Read and parse a source file, recording the simple names it declares."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    root = parse_compilation_unit(text, str(path))
    declared = tuple(simple_name(dotted) for _, dotted in type_declarations(root))
    return SourceUnit(path, text, declared)


class _TypeScope:
    """Qualifies simple type names the way the compiler would for one file."""

    def __init__(self, package: str, root: Node):
        self.package = package
        self.imports = {simple_name(name): name for name in imports(root)}
        self.local_types: dict[str, str] = {}
        for decl, dotted in type_declarations(root):
            self.local_types[declaration_name(decl)] = f"{package}.{dotted}" if package else dotted

    def qualify(self, text: str) -> str:
        if text.endswith("[]"):
            return self.qualify(text[:-2]) + "[]"
        base, args = split_type_args(text)
        qualified = self._qualify_name(base)
        if args:
            qualified += "<" + ", ".join(self._qualify_arg(a) for a in args) + ">"
        return qualified

    def _qualify_arg(self, arg: str) -> str:
        if arg == "?":
            return arg
        for prefix in ("? extends ", "? super "):
            if arg.startswith(prefix):
                return prefix + self.qualify(arg[len(prefix):])
        return self.qualify(arg)

    def _qualify_name(self, name: str) -> str:
        if name in PRIMITIVES or name == "void":
            return name
        head = name.split(".", 1)[0]
        if head in self.local_types:
            return self.local_types[head] + name[len(head):]
        if head in self.imports:
            return self.imports[head] + name[len(head):]
        if "." in name and head[:1].islower():
            return name
        if name in JAVA_LANG:
            return f"java.lang.{name}"
        if name in WELL_KNOWN:
            return f"{WELL_KNOWN[name]}.{name}"
        if len(name) == 1 and name.isupper():
            return name
        return f"{self.package}.{name}" if self.package else name


def _unquote(literal: str) -> str:
    body = literal[3:-3] if literal.startswith('"""') else literal[1:-1]
    return body.replace('\\"', '"').replace("\\n", "\n").replace("\\\\", "\\")


def _annotation_info(mods: Node | None) -> tuple[tuple[str, ...], tuple[str, ...]]:
    if mods is None:
        return (), ()
    names, notes = [], []
    for ann in mods.children:
        if ann.type not in ("annotation", "marker_annotation"):
            continue
        names.append(simple_name(node_text(ann.child_by_field_name("name"))))
        arguments = ann.child_by_field_name("arguments")
        stack = [arguments] if arguments is not None else []
        while stack:
            node = stack.pop()
            if node.type == "string_literal":
                text = _unquote(node_text(node)).strip()
                if text:
                    notes.append(text)
                continue
            stack.extend(reversed(node.children))
    return tuple(names), tuple(notes)


def _is_static(mods: Node | None) -> bool:
    return mods is not None and child_of_type(mods, "static") is not None


def _previous_token_row(node: Node) -> int | None:
    """Last row of the nearest non-comment node before node, across parents."""
    current = node
    while current is not None:
        sibling = current.prev_sibling
        while sibling is not None and sibling.type in COMMENTS:
            sibling = sibling.prev_sibling
        if sibling is not None:
            return sibling.end_point[0]
        current = current.parent
    return None


def leading_comment(node: Node) -> str | None:
    """Comments directly above node; one sharing a line with the previous token belongs to that token."""
    comments = []
    sibling = node.prev_sibling
    while sibling is not None and sibling.type in COMMENTS:
        comments.insert(0, sibling)
        sibling = sibling.prev_sibling
    if not comments:
        return None
    previous_row = _previous_token_row(comments[0])
    kept = [c for c in comments if c.start_point[0] != previous_row]
    text = " ".join(t for t in (strip_comment_markers(node_text(c)) for c in kept) if t)
    return text or None


def trailing_comment(node: Node) -> str | None:
    nxt = node.next_sibling
    if nxt is not None and nxt.type == ",":
        nxt = nxt.next_sibling
    if nxt is not None and nxt.type in COMMENTS and nxt.start_point[0] == node.end_point[0]:
        return strip_comment_markers(node_text(nxt)) or None
    return None


def _comment_of(node: Node) -> str | None:
    return leading_comment(node) or trailing_comment(node)


def _find_declaration(root: Node, package: str, class_name: str) -> tuple[Node, str] | None:
    wanted_simple = simple_name(class_name)
    for decl, dotted in type_declarations(root):
        qualified = f"{package}.{dotted}" if package else dotted
        if declaration_name(decl) == wanted_simple and (qualified == class_name or "." not in class_name):
            owner = qualified.rpartition(".")[0]
            return decl, owner
    return None


def _field_info(name: str, declared_text: str, mods: Node | None, comment, scope: _TypeScope, config) -> FieldInfo:
    declared = scope.qualify(declared_text.removesuffix("..."))
    kind, element = container_of(declared, config.wrapper_types)
    annotations, notes = _annotation_info(mods)
    return FieldInfo(
        name=name,
        declared_type=declared,
        container_kind=kind,
        element_type=element,
        comment=comment,
        annotations=annotations,
        notes=notes,
    )


def _declarator_type(base: str, declarator: Node) -> str:
    dims = declarator.child_by_field_name("dimensions")
    return base + ("[]" * node_text(dims).count("[") if dims is not None else "")


def parse_source_class(unit: SourceUnit, class_name: str, config: RetrieverConfig | None = None) -> ClassInfo:
    """Extract one class of a source unit: fields in declaration order with their comments."""
    config = config or RetrieverConfig()
    root = parse_compilation_unit(unit.text, str(unit.path))
    package = package_name(root)

    found = _find_declaration(root, package, class_name)
    if found is None:
        raise ClassNotFound(class_name, str(unit.path))
    decl, owner_package = found
    simple = declaration_name(decl)

    scope = _TypeScope(package, root)
    fields: list[FieldInfo] = []

    if decl.type == "record_declaration":
        params = decl.child_by_field_name("parameters")
        for param in params.named_children if params is not None else ():
            if param.type != "formal_parameter":
                continue
            ptype = type_text(param.child_by_field_name("type"))
            pname = node_text(param.child_by_field_name("name"))
            pmods = child_of_type(param, "modifiers")
            fields.append(_field_info(pname, ptype, pmods, _comment_of(param), scope, config))

    if decl.type != "interface_declaration":
        for member in members(decl):
            if member.type != "field_declaration":
                continue
            fmods = child_of_type(member, "modifiers")
            if _is_static(fmods):
                continue
            comment = _comment_of(member)
            ftype = type_text(member.child_by_field_name("type"))
            for declarator in member.children_by_field_name("declarator"):
                dname = node_text(declarator.child_by_field_name("name"))
                fields.append(_field_info(dname, _declarator_type(ftype, declarator), fmods, comment, scope, config))

    superclass = None
    extends = decl.child_by_field_name("superclass")
    if extends is not None and decl.type == "class_declaration" and extends.named_children:
        superclass = split_type_args(scope.qualify(type_text(extends.named_children[0])))[0]

    qualified = f"{owner_package}.{simple}" if owner_package else simple
    logger.debug("Parsed %s from %s: %d fields", qualified, unit.path, len(fields))
    return ClassInfo(
        qualified_name=qualified,
        simple_name=simple,
        package=owner_package,
        fields=tuple(fields),
        comment=leading_comment(decl),
        origin=Origin.local(unit.path, qualified),
        superclass=superclass,
        is_enum=decl.type == "enum_declaration",
    )
