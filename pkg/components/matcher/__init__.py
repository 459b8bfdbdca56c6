"""Exact and semantic field matching between input DTOs and the output DTO."""

from __future__ import annotations

import logging

from components.config import MatcherConfig
from components.core_model import ClassGraph
from components.matcher.concepts import ConceptDefinition, generate_definitions, select_concepts
from components.matcher.embeddings import (
    BuiltinEmbedder,
    EmbeddingVector,
    OpenAIEmbedder,
    cosine_similarity,
    make_embedder,
)
from components.matcher.exact import exact_match, input_leaves
from components.matcher.semantic import candidate_text, semantic_match
from components.matcher.table import MappingEntry, MappingTable, MatchKind, merge_mappings

logger = logging.getLogger(__name__)


def build_mapping_table(graph: ClassGraph, inputs, output: str, config: MatcherConfig | None = None, provider=None) -> MappingTable:
    """Exact matching, then semantic matching of what is left, merged in output order."""
    config = config or MatcherConfig()
    provider = provider or make_embedder(config)
    output_leaves = graph.leaf_paths(graph.node_name(output))
    candidates = input_leaves(graph, inputs)

    exact = exact_match(graph, inputs, output)
    done = {e.output for e in exact}
    semantic = semantic_match(
        [p for p in output_leaves if p not in done],
        candidates,
        graph,
        provider,
        threshold=config.threshold,
        top_k=config.top_k,
        exclusive=config.exclusive_consumption,
        consumed={e.input for e in exact},
    )
    table = merge_mappings(exact, semantic, output_leaves)
    logger.info(
        "Mapped %d exact, %d semantic, %d unmatched",
        len(table.exact), len(table.semantic), len(table.unmatched_outputs),
    )
    return table


__all__ = [
    "BuiltinEmbedder",
    "ConceptDefinition",
    "EmbeddingVector",
    "MappingEntry",
    "MappingTable",
    "MatchKind",
    "OpenAIEmbedder",
    "build_mapping_table",
    "candidate_text",
    "cosine_similarity",
    "exact_match",
    "generate_definitions",
    "make_embedder",
    "merge_mappings",
    "select_concepts",
    "semantic_match",
]
