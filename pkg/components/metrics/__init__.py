"""Similarity metrics between generated and reference scripts."""

from components.metrics.bleu import bleu4, weighted_ngram_match
from components.metrics.codebleu import DEFAULT_WEIGHTS, MetricScores, codebleu, combine
from components.metrics.dataflow import dataflow_match
from components.metrics.edit import edit_similarity, levenshtein
from components.metrics.syntax import ast_match
from components.metrics.tokens import TokenStream, tokenize_code

__all__ = [
    "DEFAULT_WEIGHTS",
    "MetricScores",
    "TokenStream",
    "ast_match",
    "bleu4",
    "codebleu",
    "combine",
    "dataflow_match",
    "edit_similarity",
    "levenshtein",
    "tokenize_code",
    "weighted_ngram_match",
]
