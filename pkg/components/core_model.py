"""Shared domain types and the parsers for the two user-facing context files.

Task definition (``.ccci-task``)::

    Task Overview:
    Given the following project src
    Generate Java code to transform Input DTOs into Output DTO.
    Dependencies:
    - libs/user-api.jar

    Input/Output Description:
    Input:
    - com.xx.wms.dto.InventoryInfoDTO
    Output:
    - com.xx.wms.dto.InventoryResponseDTO

    Additional Context:
    - Use BeanUtils.copyProperties for identical fields

Relations (``.ccci-relations``)::

    Warehouse Domain:
    - warehouse (Warehouse)
      |-> warehouse_area (Warehouse Area): 1:N relationship
"""

from __future__ import annotations

import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from types import MappingProxyType

from components.errors import (
    DanglingChild,
    MalformedSection,
    MissingInputs,
    MissingOutput,
    UnknownCardinality,
)


class SubjectLanguage(str, Enum):
    JAVA = "java"


class ContainerKind(str, Enum):
    SCALAR = "scalar"
    LIST = "list"
    OPTIONAL = "optional"
    WRAPPER = "response-wrapper"


class OriginKind(str, Enum):
    LOCAL = "Local"
    EXTERNAL = "External"


@dataclass(frozen=True)
class Origin:
    kind: OriginKind
    # Source file for Local, archive for External.
    path: Path
    qualified_name: str = ""
    # Archive entry of the compiled class, External only.
    entry: str | None = None

    @classmethod
    def local(cls, path, qualified_name: str = "") -> "Origin":
        return cls(OriginKind.LOCAL, Path(path), qualified_name)

    @classmethod
    def external(cls, archive, qualified_name: str = "", entry: str | None = None) -> "Origin":
        return cls(OriginKind.EXTERNAL, Path(archive), qualified_name, entry)

    @property
    def is_local(self) -> bool:
        return self.kind is OriginKind.LOCAL

    def __str__(self):
        if self.is_local:
            return "Local"
        return f"External ({self.path.name})"


@dataclass(frozen=True)
class TaskDefinition:
    project_root: Path
    dependency_archives: tuple[Path, ...]
    input_class_names: tuple[str, ...]
    output_class_name: str
    additional_rules: tuple[str, ...] = ()
    subject_language: SubjectLanguage = SubjectLanguage.JAVA
    overview: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.input_class_names:
            raise MissingInputs()
        if not self.output_class_name:
            raise MissingOutput()

    @property
    def class_names(self) -> tuple[str, ...]:
        return (*self.input_class_names, self.output_class_name)


@dataclass(frozen=True)
class FieldInfo:
    name: str
    declared_type: str
    container_kind: ContainerKind = ContainerKind.SCALAR
    element_type: str | None = None
    comment: str | None = None
    annotations: tuple[str, ...] = ()
    # String values carried by annotations, e.g. a property description.
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.name:
            raise ValueError("field name must be non-empty")
        if self.container_kind is not ContainerKind.SCALAR and not self.element_type:
            raise ValueError(f"field {self.name}: container {self.container_kind.value} needs an element type")

    @property
    def value_type(self) -> str:
        """Type that decides recursion: the element for containers, else the raw declared type."""
        if self.container_kind is not ContainerKind.SCALAR:
            return self.element_type
        return erase_generics(self.declared_type)

    @property
    def description(self) -> str:
        """Comment, falling back to annotation notes (compiled classes have no comments)."""
        if self.comment:
            return self.comment
        return " ".join(self.notes)


@dataclass(frozen=True)
class ClassInfo:
    qualified_name: str
    simple_name: str
    package: str
    fields: tuple[FieldInfo, ...] = ()
    comment: str | None = None
    origin: Origin | None = None
    superclass: str | None = None
    is_enum: bool = False

    def __post_init__(self):
        expected = f"{self.package}.{self.simple_name}" if self.package else self.simple_name
        if self.qualified_name != expected:
            raise ValueError(f"qualified name {self.qualified_name} != package + simple name {expected}")
        names = [f.name for f in self.fields]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate field names in {self.qualified_name}")

    def field(self, name: str) -> FieldInfo | None:
        for f in self.fields:
            if f.name == name:
                return f
        return None


@dataclass(frozen=True, order=True)
class FieldPath:
    class_name: str
    segments: tuple[str, ...]

    def __post_init__(self):
        if not self.segments:
            raise ValueError("field path needs at least one segment")

    @property
    def leaf(self) -> str:
        return self.segments[-1]

    @property
    def dotted(self) -> str:
        return ".".join(self.segments)

    def render(self, qualified: bool = False) -> str:
        owner = self.class_name if qualified else simple_name(self.class_name)
        return f"{owner}.{self.dotted}"

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class Edge:
    owner: str
    field: str
    child: str


@dataclass(frozen=True)
class ClassGraph:
    nodes: Mapping[str, ClassInfo]
    edges: tuple[Edge, ...] = ()
    roots: tuple[str, ...] = ()
    cycle_marks: frozenset[tuple[str, str]] = frozenset()
    superclasses: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "nodes", MappingProxyType(dict(self.nodes)))
        object.__setattr__(self, "superclasses", MappingProxyType(dict(self.superclasses)))
        for edge in self.edges:
            if edge.owner not in self.nodes or edge.child not in self.nodes:
                raise ValueError(f"edge {edge} has an endpoint outside the graph")

    def __eq__(self, other):
        if not isinstance(other, ClassGraph):
            return NotImplemented
        return (
            dict(self.nodes) == dict(other.nodes)
            and set(self.edges) == set(other.edges)
            and self.roots == other.roots
            and self.cycle_marks == other.cycle_marks
            and dict(self.superclasses) == dict(other.superclasses)
        )

    def fields_of(self, name: str) -> tuple[FieldInfo, ...]:
        """Own fields followed by inherited ones, nearest superclass first."""
        seen = set()
        result = []
        current = name
        while current in self.nodes and current not in seen:
            seen.add(current)
            for f in self.nodes[current].fields:
                if all(f.name != r.name for r in result):
                    result.append(f)
            current = self.superclasses.get(current)
        return tuple(result)

    def _declaring(self, owner: str, field_name: str) -> str:
        """Class that declares field_name: owner itself or one of its superclasses."""
        current, seen = owner, set()
        while current in self.nodes and current not in seen:
            seen.add(current)
            if self.nodes[current].field(field_name) is not None:
                return current
            current = self.superclasses.get(current)
        return owner

    def child(self, owner: str, field_name: str) -> str | None:
        declaring = self._declaring(owner, field_name)
        for edge in self.edges:
            if edge.owner == declaring and edge.field == field_name:
                return edge.child
        return None

    def is_cut(self, owner: str, field_name: str) -> bool:
        return (self._declaring(owner, field_name), field_name) in self.cycle_marks

    def leaf_paths(self, root: str) -> list[FieldPath]:
        """All leaf fields reachable from root, in declaration order, depth first."""
        paths: list[FieldPath] = []

        def walk(owner, prefix):
            for f in self.fields_of(owner):
                child = self.child(owner, f.name)
                segments = (*prefix, f.name)
                if child is None or self.is_cut(owner, f.name):
                    paths.append(FieldPath(root, segments))
                else:
                    walk(child, segments)

        walk(root, ())
        return paths

    def node_name(self, name: str) -> str:
        """Graph key for a qualified or simple class name."""
        if name in self.nodes:
            return name
        hits = sorted(q for q in self.nodes if simple_name(q) == name)
        if not hits:
            raise KeyError(f"class {name} not in graph")
        return hits[0]

    def resolve(self, path: FieldPath) -> tuple[str, FieldInfo]:
        """Owner class and field info for the last segment of path."""
        owner = path.class_name
        info = None
        for i, segment in enumerate(path.segments):
            if owner not in self.nodes:
                raise KeyError(f"{path}: class {owner} not in graph")
            info = next((f for f in self.fields_of(owner) if f.name == segment), None)
            if info is None:
                raise KeyError(f"{path}: no field {segment} in {owner}")
            if i < len(path.segments) - 1:
                child = self.child(owner, segment)
                if child is None:
                    raise KeyError(f"{path}: field {segment} of {owner} has no class edge")
                owner = child
        return owner, info

    def breadth_first(self) -> list[str]:
        """Node order from the roots, breadth first, lexicographic within a layer."""
        order: list[str] = []
        seen = set()
        # Roots keep their declared order; later layers are sorted.
        layer = _unique(r for r in self.roots if r in self.nodes)
        while layer:
            next_layer = []
            for name in layer:
                if name in seen:
                    continue
                seen.add(name)
                order.append(name)
                for f in self.fields_of(name):
                    child = self.child(name, f.name)
                    if child and child not in seen:
                        next_layer.append(child)
                parent = self.superclasses.get(name)
                if parent in self.nodes and parent not in seen:
                    next_layer.append(parent)
            layer = sorted(set(next_layer) - seen)
        for name in sorted(set(self.nodes) - seen):
            order.append(name)
        return order


@dataclass(frozen=True)
class Table:
    name: str
    label: str | None = None


@dataclass(frozen=True)
class Relation:
    parent: str
    child: str
    cardinality: str
    child_label: str | None = None
    domain: str | None = None


@dataclass(frozen=True)
class Domain:
    name: str
    tables: tuple[Table, ...] = ()


@dataclass(frozen=True)
class RelationGraph:
    domains: tuple[Domain, ...] = ()
    relations: tuple[Relation, ...] = ()
    tables: tuple[Table, ...] = ()


CARDINALITIES = ("1:1", "1:N", "N:M")

_SECTION_NAMES = {
    "task overview": "overview",
    "input/output description": "io",
    "additional context": "rules",
}
_KEYS = {
    "overview": {"project": "project", "language": "language", "dependencies": "dependencies"},
    "io": {"input": "inputs", "inputs": "inputs", "output": "outputs", "outputs": "outputs"},
    "rules": {},
}
_HEADER_RE = re.compile(r"^([A-Za-z][A-Za-z /()]*?)\s*:\s*(.*)$")
_PROJECT_RE = re.compile(r"given the following project\s+<?([^\s>]+?)>?\.?$", re.IGNORECASE)


def simple_name(qualified: str) -> str:
    return qualified.rsplit(".", 1)[-1]


def package_of(qualified: str) -> str:
    return qualified.rpartition(".")[0]


def erase_generics(type_text: str) -> str:
    return type_text.split("<", 1)[0].strip()


def _unique(items):
    seen = set()
    out = []
    for item in items:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return out


def _split_inline(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def _content_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield number, line


def parse_task_definition(text: str) -> TaskDefinition:
    """Parse the contents of a task file. Paths are kept exactly as written."""
    section = None
    list_key = None
    values = {"project": None, "language": None, "dependencies": [], "inputs": [], "outputs": []}
    overview: list[str] = []
    rules: list[str] = []
    output_line = 0

    for number, line in _content_lines(text):
        stripped = line.strip()
        is_item = stripped.startswith("- ") or stripped == "-"
        header = None if (line[0].isspace() or is_item) else _HEADER_RE.match(line)

        if header:
            name, inline = header.group(1).strip(), header.group(2).strip()
            lowered = name.lower()
            if lowered in _SECTION_NAMES:
                section = _SECTION_NAMES[lowered]
                list_key = None
                if inline:
                    if section == "rules":
                        rules.append(inline)
                    elif section == "overview":
                        overview.append(inline)
                continue
            key = _KEYS.get(section, {}).get(lowered) if section else None
            if key:
                if key in ("project", "language"):
                    values[key] = inline or None
                    list_key = None
                else:
                    list_key = key
                    values[key].extend(_split_inline(inline))
                    if key == "outputs":
                        output_line = number
                continue
            if not inline and section != "rules":
                raise MalformedSection(name, number)

        if section is None:
            raise MalformedSection(stripped, number)

        if section == "rules":
            rules.append(stripped[2:].strip() if is_item else stripped)
        elif is_item and list_key:
            item = stripped[1:].strip()
            if item:
                values[list_key].append(item)
        elif section == "overview":
            list_key = None
            overview.append(stripped)
        else:
            raise MalformedSection(stripped, number)

    if not values["outputs"]:
        raise MissingOutput()
    if len(values["outputs"]) > 1:
        raise MalformedSection("Output (more than one class)", output_line)
    if not values["inputs"]:
        raise MissingInputs()

    project = values["project"]
    if project is None:
        for line in overview:
            found = _PROJECT_RE.search(line)
            if found:
                project = found.group(1)
                break

    language = (values["language"] or SubjectLanguage.JAVA.value).lower()
    try:
        subject = SubjectLanguage(language)
    except ValueError:
        raise MalformedSection(f"Language: {language}", 0) from None

    return TaskDefinition(
        project_root=Path(project or "."),
        dependency_archives=tuple(Path(p) for p in values["dependencies"]),
        input_class_names=tuple(values["inputs"]),
        output_class_name=values["outputs"][0],
        additional_rules=tuple(rules),
        subject_language=subject,
        overview=tuple(overview),
    )


def serialize_task_definition(task: TaskDefinition) -> str:
    """Render a task file that parses back to an equal TaskDefinition."""
    lines = ["Task Overview:"]
    lines.extend(task.overview)
    lines.append(f"Project: {task.project_root.as_posix()}")
    lines.append(f"Language: {task.subject_language.value}")
    if task.dependency_archives:
        lines.append("Dependencies:")
        lines.extend(f"- {p.as_posix()}" for p in task.dependency_archives)
    lines += ["", "Input/Output Description:", "Input:"]
    lines.extend(f"- {name}" for name in task.input_class_names)
    lines += ["Output:", f"- {task.output_class_name}", "", "Additional Context:"]
    lines.extend(f"- {rule}" for rule in task.additional_rules)
    return "\n".join(lines) + "\n"


def load_task_definition(path) -> TaskDefinition:
    """Read a task file and resolve its relative paths against the file's directory.

    With no declared project the ``src/`` directory next to the file is used when
    present; with no declared dependencies every ``libs/*.jar`` is used, sorted.
    """
    path = Path(path)
    task = parse_task_definition(path.read_text(encoding="utf-8"))
    base = path.parent

    root = task.project_root
    explicit_root = root != Path(".")
    if not root.is_absolute():
        root = base / root
    if not explicit_root and (base / "src").is_dir():
        root = base / "src"

    archives = tuple(p if p.is_absolute() else base / p for p in task.dependency_archives)
    if not archives and (base / "libs").is_dir():
        archives = tuple(sorted((base / "libs").glob("*.jar")))

    return TaskDefinition(
        project_root=root,
        dependency_archives=archives,
        input_class_names=task.input_class_names,
        output_class_name=task.output_class_name,
        additional_rules=task.additional_rules,
        subject_language=task.subject_language,
        overview=task.overview,
    )


_TABLE_RE = re.compile(r"^\s*-\s*([A-Za-z_][\w.]*)\s*(?:\(([^)]*)\))?\s*$")
_CHILD_RE = re.compile(r"^\s*\|->\s*([A-Za-z_][\w.]*)\s*(?:\(([^)]*)\))?\s*:?\s*(.*)$")
_CARD_RE = re.compile(r"^(\S+)\s+relationship\s*$", re.IGNORECASE)
_DOMAIN_RE = re.compile(r"^([^\s\-|].*?)\s*:\s*$")


def _cardinality(text: str, line: int) -> str:
    match = _CARD_RE.match(text.strip())
    card = (match.group(1) if match else text.strip()).upper()
    if card not in CARDINALITIES:
        raise UnknownCardinality(match.group(1) if match else text.strip(), line)
    return card


def parse_db_relations(text: str) -> RelationGraph:
    """Parse a relations file into domains, tables and parent-child relations."""
    domains: list[Domain] = []
    domain_tables: list[Table] = []
    loose_tables: list[Table] = []
    relations: list[Relation] = []
    domain = None
    parent = None
    pending = None  # child line whose cardinality wrapped onto the next line

    def close_domain():
        if domain is not None:
            domains.append(Domain(domain, tuple(domain_tables)))

    for number, line in _content_lines(text):
        if pending is not None:
            child, label, child_line = pending
            pending = None
            relations.append(Relation(parent, child, _cardinality(line, number), label, domain))
            continue

        child = _CHILD_RE.match(line)
        if child:
            name, label, rest = child.group(1), child.group(2), child.group(3)
            if parent is None:
                raise DanglingChild(name, number)
            label = label.strip() if label else None
            if rest.strip():
                relations.append(Relation(parent, name, _cardinality(rest, number), label, domain))
            else:
                pending = (name, label, number)
            continue

        table = _TABLE_RE.match(line)
        if table:
            entry = Table(table.group(1), table.group(2).strip() if table.group(2) else None)
            (domain_tables if domain is not None else loose_tables).append(entry)
            parent = entry.name
            continue

        header = _DOMAIN_RE.match(line)
        if header:
            close_domain()
            domain = header.group(1).strip()
            domain_tables = []
            parent = None
            continue

        raise MalformedSection(line.strip(), number)

    if pending is not None:
        raise UnknownCardinality("", pending[2])
    close_domain()
    return RelationGraph(tuple(domains), tuple(relations), tuple(loose_tables))


def render_relations(graph: RelationGraph) -> str:
    """Render a relation graph back in the indented file format."""
    lines = []
    children: dict[tuple[str | None, str], list[Relation]] = {}
    for rel in graph.relations:
        children.setdefault((rel.domain, rel.parent), []).append(rel)

    def table_block(domain, table):
        label = f" ({table.label})" if table.label else ""
        lines.append(f"- {table.name}{label}")
        for rel in children.get((domain, table.name), []):
            child_label = f" ({rel.child_label})" if rel.child_label else ""
            lines.append(f"  |-> {rel.child}{child_label}: {rel.cardinality} relationship")

    for table in graph.tables:
        table_block(None, table)
    for dom in graph.domains:
        lines.append(f"{dom.name}:")
        for table in dom.tables:
            table_block(dom.name, table)
    return "\n".join(lines)
