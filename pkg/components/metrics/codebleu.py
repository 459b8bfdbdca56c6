"""CodeBLEU composite and the full per-pair metric set."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from components.errors import InvalidWeights
from components.metrics.bleu import bleu4, weighted_ngram_match
from components.metrics.dataflow import dataflow_match_trees
from components.metrics.edit import edit_similarity
from components.metrics.syntax import ast_match_trees, parse_candidate, parse_reference
from components.metrics.tokens import tokenize_code

DEFAULT_WEIGHTS = (0.25, 0.25, 0.25, 0.25)


@dataclass(frozen=True)
class MetricScores:
    bleu4: float = 0.0
    weighted_ngram: float = 0.0
    ast_match: float = 0.0
    dataflow_match: float = 0.0
    codebleu: float = 0.0
    edit_similarity: float = 0.0
    # False when the candidate did not parse and its structural scores were set to 0.
    candidate_parsed: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


def check_weights(weights) -> tuple[float, float, float, float]:
    weights = tuple(float(w) for w in weights)
    if len(weights) != 4 or any(w < 0 for w in weights) or not math.isclose(sum(weights), 1.0, abs_tol=1e-9):
        raise InvalidWeights(weights)
    return weights


def combine(components, weights=DEFAULT_WEIGHTS) -> float:
    """Weighted sum of (bleu4, weighted_ngram, ast_match, dataflow_match)."""
    weights = check_weights(weights)
    return sum(w * c for w, c in zip(weights, components))


def codebleu(candidate_text: str, reference_text: str, weights=DEFAULT_WEIGHTS) -> MetricScores:
    weights = check_weights(weights)
    reference_tree = parse_reference(reference_text)
    candidate_tree = parse_candidate(candidate_text)
    candidate = tokenize_code(candidate_text)
    reference = tokenize_code(reference_text)

    components = (
        bleu4(candidate, reference),
        weighted_ngram_match(candidate, reference),
        ast_match_trees(candidate_tree, reference_tree),
        dataflow_match_trees(candidate_tree, reference_tree),
    )
    return MetricScores(
        *components,
        codebleu=combine(components, weights),
        edit_similarity=edit_similarity(candidate_text, reference_text),
        candidate_parsed=candidate_tree is not None,
    )
