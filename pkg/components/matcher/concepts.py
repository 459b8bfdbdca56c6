"""Concept selection and definition text for the classes of a graph."""

from __future__ import annotations

from dataclasses import dataclass

from components.core_model import ClassGraph, FieldInfo
from components.retriever.types import display_type


@dataclass(frozen=True)
class ConceptDefinition:
    concept: str
    definition_text: str
    field_lines: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if not self.definition_text:
            raise ValueError(f"empty definition for {self.concept}")

    def line_for(self, field_name: str) -> str | None:
        return next((line for name, line in self.field_lines if name == field_name), None)


def select_concepts(graph: ClassGraph) -> list[str]:
    """Every reachable class once; a subclass adding no own field is covered by its superclass."""
    order = graph.breadth_first()
    selected = []
    for name in order:
        parent = graph.superclasses.get(name)
        if parent in order and not graph.nodes[name].fields:
            continue
        selected.append(name)
    return selected


def field_line(field: FieldInfo) -> str:
    parts = [field.name, display_type(field.declared_type)]
    if field.description:
        parts.append(field.description)
    return " : ".join(parts)


def _definition(graph: ClassGraph, name: str) -> ConceptDefinition:
    info = graph.nodes[name]
    header = info.simple_name
    if info.comment:
        header += f": {info.comment}"
    lines = tuple((f.name, field_line(f)) for f in graph.fields_of(name))
    return ConceptDefinition(name, "\n".join([header, *(line for _, line in lines)]), lines)


def definition_text(graph: ClassGraph, name: str) -> str:
    return _definition(graph, name).definition_text


def generate_definitions(concepts, graph: ClassGraph) -> list[ConceptDefinition]:
    return [_definition(graph, name) for name in concepts]


def concept_of(graph: ClassGraph, name: str, definitions) -> str:
    """The selected concept covering class name: itself or its nearest selected superclass."""
    current, seen = name, set()
    while current is not None and current not in seen:
        if current in definitions:
            return current
        seen.add(current)
        current = graph.superclasses.get(current)
    return name
