from __future__ import annotations

import numpy as np


def levenshtein(source: str, target: str) -> int:
    """Character edit distance, two DP rows at a time."""
    if len(source) < len(target):
        source, target = target, source
    if not target:
        return len(source)

    codes = np.fromiter(map(ord, target), dtype=np.int64, count=len(target))
    idx = np.arange(len(target) + 1)
    previous = idx.copy()
    for i, ch in enumerate(source, start=1):
        current = previous + 1
        current[0] = i
        current[1:] = np.minimum(current[1:], previous[:-1] + (codes != ord(ch)))
        # Deletions chain along the row: c[j] = min_k (c[k] + j - k).
        current = np.minimum.accumulate(current - idx) + idx
        previous = current
    return int(previous[-1])


def edit_similarity(a: str, b: str) -> float:
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest
