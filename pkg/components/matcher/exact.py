"""Step 1: pair output leaves with the single input leaf of the same name."""

from __future__ import annotations

import logging
from collections import defaultdict

from components.core_model import ClassGraph, FieldPath
from components.matcher.table import MappingEntry, MatchKind

logger = logging.getLogger(__name__)


def input_leaves(graph: ClassGraph, inputs) -> list[FieldPath]:
    """Leaf paths of every input DTO, inputs in task order."""
    leaves = []
    for name in inputs:
        leaves.extend(graph.leaf_paths(graph.node_name(name)))
    return leaves


def exact_match(graph: ClassGraph, inputs, output: str) -> list[MappingEntry]:
    by_name: dict[str, list[FieldPath]] = defaultdict(list)
    for path in input_leaves(graph, inputs):
        by_name[path.leaf].append(path)

    entries = []
    for out in graph.leaf_paths(graph.node_name(output)):
        candidates = by_name.get(out.leaf, [])
        if len(candidates) == 1:
            entries.append(MappingEntry(candidates[0], out, MatchKind.EXACT, 1.0))
        elif len(candidates) > 1:
            logger.debug("%s has %d same-name inputs, left to semantic matching", out, len(candidates))
    return entries
