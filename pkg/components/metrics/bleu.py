"""BLEU-4 and its keyword-weighted variant over token streams.

Clipped n-gram counts and the brevity penalty come from nltk. Higher-order
precisions with no matched n-gram are smoothed by adding one to numerator and
denominator; a zero unigram precision is never smoothed.
"""

from __future__ import annotations

import math
from collections import Counter

from nltk.translate.bleu_score import brevity_penalty, modified_precision

from components.errors import EmptyReference
from components.metrics.tokens import TokenStream
from components.subject.lexer import TokenKind

MAX_ORDER = 4
KEYWORD_WEIGHT = 4.0


def _precision(candidate, reference, n: int) -> float:
    """Clipped n-gram precision, add-one smoothed above unigrams."""
    clipped = modified_precision([list(reference)], list(candidate), n)
    if clipped > 0:
        return float(clipped)
    if n == 1:
        return 0.0
    total = max(0, len(candidate) - n + 1)
    return 1.0 / (total + 1)


def _weighted_unigram_precision(candidate: TokenStream, reference: TokenStream, keyword_weight: float) -> float:
    weight = {}
    for text, kind in candidate.tokens:
        weight[text] = keyword_weight if kind is TokenKind.KEYWORD else 1.0
    cand = Counter(candidate.lexemes)
    ref = Counter(reference.lexemes)
    matched = sum(weight[t] * min(c, ref[t]) for t, c in cand.items())
    total = sum(weight[t] * c for t, c in cand.items())
    return matched / total if total else 0.0


def _combine(precisions, candidate_len: int, reference_len: int) -> float:
    if any(p == 0 for p in precisions):
        return 0.0
    logs = [math.log(p) for p in precisions]
    score = brevity_penalty(reference_len, candidate_len) * math.exp(sum(logs) / len(logs))
    return min(score, 1.0)


def bleu4(candidate: TokenStream, reference: TokenStream) -> float:
    if not len(reference):
        raise EmptyReference()
    cand, ref = candidate.lexemes, reference.lexemes
    precisions = [_precision(cand, ref, n) for n in range(1, MAX_ORDER + 1)]
    return _combine(precisions, len(cand), len(ref))


def weighted_ngram_match(candidate: TokenStream, reference: TokenStream, keyword_weight: float = KEYWORD_WEIGHT) -> float:
    """BLEU-4 whose unigram precision counts keywords ``keyword_weight`` times."""
    if not len(reference):
        raise EmptyReference()
    cand, ref = candidate.lexemes, reference.lexemes
    precisions = [_weighted_unigram_precision(candidate, reference, keyword_weight)]
    precisions += [_precision(cand, ref, n) for n in range(2, MAX_ORDER + 1)]
    return _combine(precisions, len(cand), len(ref))
