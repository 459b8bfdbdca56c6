"""Step 2: pair the remaining output leaves with inputs by embedding similarity.

Leaves are embedded through their concept definitions: the owning class's
selected concept (the class itself, or the superclass covering a subclass
with no own fields) names the leaf, followed by the leaf's definition line.
"""

from __future__ import annotations

import logging

from components.core_model import ClassGraph, FieldPath, simple_name
from components.matcher.concepts import concept_of, field_line, generate_definitions, select_concepts
from components.matcher.embeddings import cosine_similarity
from components.matcher.table import MappingEntry, MatchKind

logger = logging.getLogger(__name__)


def concept_definitions(graph: ClassGraph) -> dict:
    return {d.concept: d for d in generate_definitions(select_concepts(graph), graph)}


def candidate_text(graph: ClassGraph, path: FieldPath, definitions=None) -> str:
    """``Concept fieldName : Type : description`` for the leaf of path, plus notes a comment hid."""
    if definitions is None:
        definitions = concept_definitions(graph)
    owner, info = graph.resolve(path)
    concept = concept_of(graph, owner, definitions)
    definition = definitions.get(concept)
    line = definition.line_for(info.name) if definition is not None else None
    parts = [simple_name(concept), line or field_line(info)]
    if info.comment:
        parts.extend(info.notes)
    return " ".join(parts)


def _embed_texts(provider, texts):
    unique = list(dict.fromkeys(texts))
    vectors = dict(zip(unique, provider.embed_many(unique)))
    return [vectors[t] for t in texts]


def semantic_match(
    unmatched,
    candidates,
    graph: ClassGraph,
    provider,
    threshold: float = 0.5,
    top_k: int = 1,
    exclusive: bool = False,
    consumed=(),
) -> list[MappingEntry]:
    """Best-scoring input per output leaf, kept when it reaches the threshold.

    Ties go to the lexicographically smaller FieldPath. With ``exclusive`` an
    input already used (by an exact entry passed in ``consumed`` or an earlier
    semantic pick) is no longer offered.
    """
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    unmatched = list(unmatched)
    candidates = list(candidates)
    if not unmatched or not candidates:
        return []

    definitions = concept_definitions(graph)
    out_vectors = _embed_texts(provider, [candidate_text(graph, p, definitions) for p in unmatched])
    in_texts = [candidate_text(graph, p, definitions) for p in candidates]
    in_vectors = dict(zip(candidates, _embed_texts(provider, in_texts)))

    taken = set(consumed) if exclusive else set()
    entries = []
    for out, out_vec in zip(unmatched, out_vectors):
        scored = [
            (cosine_similarity(out_vec, vec), path)
            for path, vec in in_vectors.items()
            if path not in taken
        ]
        scored.sort(key=lambda item: (-item[0], item[1]))
        above = [(s, p) for s, p in scored if s >= threshold]
        if not above:
            best = f"{scored[0][1]} ({scored[0][0]:.3f})" if scored else "none"
            logger.debug("%s unmatched, best candidate %s", out, best)
            continue
        score, best_path = above[0]
        alternatives = tuple(p for _, p in above[1:top_k])
        entries.append(MappingEntry(best_path, out, MatchKind.SEMANTIC, max(0.0, min(score, 1.0)), alternatives))
        logger.debug("%s <- %s (%.3f)", out, best_path, score)
        if exclusive:
            taken.add(best_path)
    return entries
