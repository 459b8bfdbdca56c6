"""Offline compile and test stages for generated mapping scripts.

``compile`` parses the script and resolves every type, variable, getter and
setter it uses against the workspace's sources and archives. ``test`` runs the
mapping statically: every leaf field of the output DTO must end up assigned,
by a setter, a bulk copy from an input with a same-named field, or an explicit
``null``. Both read ``task.ccci-task`` in the workspace for the input and
output classes.

Usage: ``python -m components.evaluator.checker {compile|test} WORKSPACE SCRIPT``
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from tree_sitter import Node

from components.classifier import ClassificationMap, Classifier
from components.config import ConstructorConfig, RetrieverConfig
from components.constructor import variable_name
from components.core_model import ClassInfo, TaskDefinition, erase_generics, load_task_definition, simple_name
from components.errors import CCCIError, SubjectSyntaxError
from components.retriever.hierarchy import ClassLoader, resolve_hierarchy
from components.retriever.types import JAVA_LANG, PRIMITIVES, WELL_KNOWN
from components.subject import COMMENTS, node_text, parse_script, type_text, walk
from components.subject.tree import imports

logger = logging.getLogger(__name__)

TASK_FILE = "task.ccci-task"
_SCALAR_PREFIXES = ("java.", "javax.")
# Nodes whose ``type`` field must name a known class.
_TYPED = ("local_variable_declaration", "object_creation_expression", "cast_expression", "formal_parameter")
# Identifier in the ``name`` field of these is being declared, not used.
_DECLARING = ("variable_declarator", "formal_parameter", "catch_formal_parameter", "enhanced_for_statement")
_NOT_EXPRESSIONS = (
    "scoped_identifier", "import_declaration", "package_declaration", "marker_annotation", "annotation",
    "labeled_statement", "break_statement", "continue_statement", "element_value_pair",
    "lambda_expression", "inferred_parameters",
)


def _at(node: Node) -> str:
    row, column = node.start_point
    return f"{row + 1}:{column + 1}"


def _is_variable_use(node: Node) -> bool:
    parent = node.parent
    if parent is None:
        return True
    if parent.type in _NOT_EXPRESSIONS:
        return False
    if parent.type == "method_invocation":
        return parent.child_by_field_name("name") != node
    if parent.type == "field_access":
        return parent.child_by_field_name("field") != node
    if parent.type in _DECLARING:
        return parent.child_by_field_name("name") != node
    return True


@dataclass(frozen=True)
class _Call:
    """A ``receiver.method(args)`` call whose receiver is a plain name."""

    receiver: str
    method: str
    args: tuple[Node, ...]

    @classmethod
    def of(cls, node: Node) -> "_Call | None":
        receiver = node.child_by_field_name("object")
        if receiver is None or receiver.type != "identifier":
            return None
        arguments = node.child_by_field_name("arguments")
        args = tuple(a for a in arguments.named_children if a.type not in COMMENTS)
        return cls(node_text(receiver), node_text(node.child_by_field_name("name")), args)


@dataclass
class CheckReport:
    errors: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def text(self) -> str:
        return "\n".join(self.errors + self.notes)


def _accessor_field(method: str) -> str | None:
    for prefix in ("get", "set", "is"):
        if method.startswith(prefix) and len(method) > len(prefix) and method[len(prefix)].isupper():
            rest = method[len(prefix):]
            return rest[:1].lower() + rest[1:]
    return None


class ScriptChecker:
    def __init__(self, workspace, helper: str | None = None):
        self.workspace = Path(workspace)
        task_file = self.workspace / TASK_FILE
        if not task_file.is_file():
            raise CCCIError(f"no {TASK_FILE} in {self.workspace}")
        self.task: TaskDefinition = load_task_definition(task_file)
        self.classifier = Classifier(self.task)
        self.loader = ClassLoader(self.classifier, RetrieverConfig(strict=False))
        helper = helper or ConstructorConfig().bulk_copy_helper
        self.helper_class, _, self.helper_method = helper.rpartition(".")
        self.env: dict[str, str] = {}
        self.imports: dict[str, str] = {}

    # types

    def _known_scalar(self, type_name: str) -> bool:
        name = erase_generics(type_name).removesuffix("...").replace("[]", "")
        return (
            name in PRIMITIVES
            or name in ("var", "void")
            or name in JAVA_LANG
            or name in WELL_KNOWN
            or name.startswith(_SCALAR_PREFIXES)
        )

    def load(self, type_name: str) -> ClassInfo | None:
        name = erase_generics(type_name).replace("[]", "")
        name = self.imports.get(name, name)
        if self._known_scalar(name):
            return None
        try:
            return self.loader.find(name)
        except CCCIError as e:
            logger.debug("Cannot load %s: %s", name, e)
            return None

    def resolves(self, type_name: str) -> bool:
        return self._known_scalar(type_name) or self.load(type_name) is not None

    def fields_of(self, info: ClassInfo) -> list:
        fields, seen = [], set()
        current = info
        while current is not None and current.qualified_name not in seen:
            seen.add(current.qualified_name)
            fields.extend(f for f in current.fields if all(f.name != g.name for g in fields))
            current = self.load(current.superclass) if current.superclass else None
        return fields

    def field_type(self, info: ClassInfo, name: str) -> str | None:
        return next((f.declared_type for f in self.fields_of(info) if f.name == name), None)

    def type_of(self, expr: Node) -> ClassInfo | None:
        kind = expr.type
        if kind == "identifier":
            declared = self.env.get(node_text(expr))
            return self.load(declared) if declared else None
        if kind == "parenthesized_expression":
            return self.type_of(expr.named_children[0])
        if kind in ("object_creation_expression", "cast_expression"):
            return self.load(type_text(expr.child_by_field_name("type")))
        if kind == "method_invocation" and expr.child_by_field_name("object") is not None:
            owner = self.type_of(expr.child_by_field_name("object"))
            method = node_text(expr.child_by_field_name("name"))
            name = _accessor_field(method)
            if owner is not None and name and method.startswith(("get", "is")):
                declared = self.field_type(owner, name)
                return self.load(declared) if declared else None
        return None

    # stages

    def _declare_inputs(self):
        for name in self.task.input_class_names:
            origin = self.classifier.lookup(name)
            self.env[variable_name(name)] = origin.qualified_name if origin else name

    def _collect(self, root: Node):
        for name in imports(root):
            self.imports[simple_name(name)] = name
        for node in walk(root):
            kind = node.type
            if kind in ("local_variable_declaration", "field_declaration"):
                declared = type_text(node.child_by_field_name("type"))
                for decl in node.children_by_field_name("declarator"):
                    self.env[node_text(decl.child_by_field_name("name"))] = declared
            elif kind in ("formal_parameter", "enhanced_for_statement"):
                self.env[node_text(node.child_by_field_name("name"))] = type_text(node.child_by_field_name("type"))
            elif kind == "catch_formal_parameter":
                self.env[node_text(node.child_by_field_name("name"))] = "java.lang.Exception"
            elif kind == "lambda_expression":
                params = node.child_by_field_name("parameters")
                for p in [params] if params.type == "identifier" else params.named_children:
                    if p.type == "identifier":
                        self.env.setdefault(node_text(p), "var")

    def compile(self, text: str) -> tuple[CheckReport, Node | None]:
        report = CheckReport()
        try:
            root = parse_script(text)
        except SubjectSyntaxError as e:
            report.errors.append(f"error: {e}")
            return report, None

        self._declare_inputs()
        self._collect(root)
        for node in walk(root):
            kind = node.type
            if kind in _TYPED:
                type_node = node.child_by_field_name("type")
                if type_node is not None and not self.resolves(type_text(type_node)):
                    report.errors.append(f"{_at(node)}: cannot find symbol: class {type_text(type_node)}")
            elif kind == "identifier" and _is_variable_use(node):
                name = node_text(node)
                if name[:1].islower() and name not in self.env:
                    report.errors.append(f"{_at(node)}: cannot find symbol: variable {name}")
            elif kind == "method_invocation" and node.child_by_field_name("object") is not None:
                self._check_call(node, report)
        return report, root

    def _check_call(self, node: Node, report: CheckReport):
        receiver = node.child_by_field_name("object")
        method = node_text(node.child_by_field_name("name"))
        if receiver.type == "identifier":
            rname = node_text(receiver)
            if rname[:1].isupper() and rname not in self.env:
                if rname != self.helper_class and not self.resolves(rname):
                    report.errors.append(f"{_at(node)}: cannot find symbol: class {rname}")
                return
        owner = self.type_of(receiver)
        if owner is None:
            return
        name = _accessor_field(method)
        if name is None or self.field_type(owner, name) is None:
            report.errors.append(f"{_at(node)}: cannot find symbol: method {method} in {owner.simple_name}")

    def _output_leaves(self) -> tuple[str, list[tuple[str, ...]]]:
        output = self.task.output_class_name
        origin = self.classifier.lookup(output)
        if origin is None:
            raise CCCIError(f"output class {output} not found in the workspace")
        graph = resolve_hierarchy(
            [output], ClassificationMap({output: origin}), self.task,
            config=RetrieverConfig(strict=False), classifier=self.classifier,
        )
        root = graph.roots[0]
        return root, [p.segments for p in graph.leaf_paths(root)]

    def test(self, text: str) -> CheckReport:
        report, tree = self.compile(text)
        if not report.ok:
            return report
        root, leaves = self._output_leaves()
        targets = [
            name for name, declared in self.env.items()
            if (info := self.load(declared)) is not None and info.qualified_name == root
        ]
        if not targets:
            report.errors.append(f"no variable of type {simple_name(root)} is built")
            return report

        calls = [_Call.of(n) for n in walk(tree) if n.type == "method_invocation"]
        calls = [c for c in calls if c is not None]
        prefixes = {targets[0]: ()}
        changed = True
        while changed:
            changed = False
            for call in calls:
                name = _accessor_field(call.method)
                arg = call.args[0] if len(call.args) == 1 else None
                if (
                    call.method.startswith("set") and name and call.receiver in prefixes
                    and arg is not None and arg.type == "identifier" and node_text(arg) not in prefixes
                    and self.type_of(arg) is not None
                ):
                    prefixes[node_text(arg)] = (*prefixes[call.receiver], name)
                    changed = True

        assigned = set()
        for call in calls:
            if call.receiver == self.helper_class and call.method == self.helper_method:
                if len(call.args) != 2 or call.args[1].type != "identifier":
                    continue
                prefix = prefixes.get(node_text(call.args[1]))
                source = self.type_of(call.args[0])
                if prefix is not None and source is not None:
                    assigned.update((*prefix, f.name) for f in self.fields_of(source))
            elif call.receiver in prefixes and call.method.startswith("set"):
                value = call.args[0] if call.args else None
                if value is not None and value.type == "identifier" and node_text(value) in prefixes:
                    continue
                field_path = (*prefixes[call.receiver], _accessor_field(call.method))
                assigned.update(leaf for leaf in leaves if leaf[:len(field_path)] == field_path)

        missing = [".".join(leaf) for leaf in leaves if leaf not in assigned]
        if missing:
            report.errors.append(f"unassigned output fields: {', '.join(missing)}")
        else:
            report.notes.append(f"all {len(leaves)} output fields assigned")
        return report


def run_stage(stage: str, workspace, script) -> int:
    text = Path(script).read_text(encoding="utf-8")
    try:
        checker = ScriptChecker(workspace)
        report = checker.compile(text)[0] if stage == "compile" else checker.test(text)
    except CCCIError as e:
        print(f"error: {e}")
        return 1
    if report.text():
        print(report.text())
    return 0 if report.ok else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="checker", description="Offline build stages for mapping scripts")
    parser.add_argument("stage", choices=("compile", "test"))
    parser.add_argument("workspace")
    parser.add_argument("script")
    args = parser.parse_args(argv)
    return run_stage(args.stage, args.workspace, args.script)


if __name__ == "__main__":
    sys.exit(main())
