"""Breadth-first resolution of the class hierarchy reachable from the task DTOs."""

from __future__ import annotations

import logging
from collections import deque

from components.classifier import ClassificationMap, Classifier
from components.config import RetrieverConfig
from components.core_model import ClassGraph, ClassInfo, Edge, Origin, TaskDefinition, simple_name
from components.errors import Unresolved
from components.retriever.classfile import CompiledClass, extract_class_from_archive
from components.retriever.source import load_source_unit, parse_source_class
from components.retriever.types import is_scalar_type, split_type_args

logger = logging.getLogger(__name__)


class ClassLoader:
    """Loads ClassInfo by origin, caching per qualified name."""

    def __init__(self, classifier: Classifier, config: RetrieverConfig | None = None):
        self.classifier = classifier
        self.config = config or RetrieverConfig()
        self._cache: dict[str, ClassInfo] = {}
        self._units = {}

    def load(self, origin: Origin) -> ClassInfo:
        key = origin.qualified_name
        if key in self._cache:
            return self._cache[key]
        if origin.is_local:
            unit = self._units.get(origin.path)
            if unit is None:
                unit = self._units[origin.path] = load_source_unit(origin.path)
            info = parse_source_class(unit, origin.qualified_name, self.config)
        else:
            info = extract_class_from_archive(CompiledClass.read(origin.path, origin.entry), self.config)
        self._cache[key] = info
        return info

    def find(self, type_name: str) -> ClassInfo | None:
        """Load a class by qualified name, falling back to its simple name."""
        origin = self.classifier.lookup(type_name)
        if origin is None and "." in type_name:
            origin = self.classifier.lookup(simple_name(type_name))
        if origin is None:
            return None
        return self.load(origin)


def _cycle_marks(roots, edges, superclasses) -> frozenset[tuple[str, str]]:
    """Edges that close a cycle in a depth-first walk from the roots.

    A class's out-edges include the ones its superclasses declare, since
    ``ClassGraph.leaf_paths`` follows inherited fields too.
    """
    out: dict[str, list[Edge]] = {}
    for edge in edges:
        out.setdefault(edge.owner, []).append(edge)

    def reachable(name):
        current, seen = name, set()
        while current is not None and current not in seen:
            seen.add(current)
            yield from out.get(current, [])
            current = superclasses.get(current)

    marks = set()
    done = set()
    on_stack = set()

    def visit(name):
        on_stack.add(name)
        for edge in reachable(name):
            if edge.child in on_stack:
                marks.add((edge.owner, edge.field))
            elif edge.child not in done:
                visit(edge.child)
        on_stack.discard(name)
        done.add(name)

    for root in roots:
        if root not in done:
            visit(root)
    return frozenset(marks)


def resolve_hierarchy(
    roots,
    cmap: ClassificationMap,
    task: TaskDefinition,
    max_depth: int | None = None,
    config: RetrieverConfig | None = None,
    classifier: Classifier | None = None,
) -> ClassGraph:
    """Expand the roots layer by layer into a ClassGraph.

    Scalar and enum fields are leaves. Any other field type is located through
    the classifier, loaded and expanded, up to ``max_depth`` layers (roots are
    layer 1). With ``config.strict`` off an unresolvable type becomes a leaf
    with a warning instead of raising Unresolved.
    """
    config = config or RetrieverConfig()
    if max_depth is None:
        max_depth = config.max_depth
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    loader = ClassLoader(classifier or Classifier(task), config)

    nodes: dict[str, ClassInfo] = {}
    superclasses: dict[str, str] = {}
    edges: list[Edge] = []
    root_names = []
    queue = deque()
    for root in roots:
        origin = cmap.entries.get(root) or loader.classifier.lookup(root)
        if origin is None:
            raise Unresolved(root)
        info = loader.load(origin)
        if info.qualified_name not in nodes:
            nodes[info.qualified_name] = info
            root_names.append(info.qualified_name)
            queue.append((info, 1))

    while queue:
        info, depth = queue.popleft()
        parent = info.superclass
        if parent and not is_scalar_type(parent):
            parent_info = loader.find(parent)
            if parent_info is None:
                logger.warning("Superclass %s of %s not found, inherited fields skipped", parent, info.qualified_name)
            else:
                superclasses[info.qualified_name] = parent_info.qualified_name
                if parent_info.qualified_name not in nodes:
                    nodes[parent_info.qualified_name] = parent_info
                    queue.append((parent_info, depth))

        for field in info.fields:
            value_type = split_type_args(field.value_type)[0].removesuffix("[]")
            if is_scalar_type(value_type):
                continue
            child = loader.find(value_type)
            if child is None:
                if config.strict:
                    raise Unresolved(value_type)
                logger.warning("Type %s of %s.%s not found, kept as a leaf", value_type, info.simple_name, field.name)
                continue
            if child.is_enum:
                continue
            if depth >= max_depth:
                logger.debug("Depth limit reached at %s.%s", info.simple_name, field.name)
                continue
            edges.append(Edge(info.qualified_name, field.name, child.qualified_name))
            if child.qualified_name not in nodes:
                nodes[child.qualified_name] = child
                queue.append((child, depth + 1))

    marks = _cycle_marks(root_names, edges, superclasses)
    logger.info("Resolved %d classes, %d edges, %d cycle marks", len(nodes), len(edges), len(marks))
    return ClassGraph(
        nodes=nodes,
        edges=tuple(edges),
        roots=tuple(root_names),
        cycle_marks=marks,
        superclasses=superclasses,
    )
