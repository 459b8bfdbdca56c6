"""Embedding providers and cosine similarity.

The built-in provider needs no network: each word of the normalized text is
padded as ``<word>``, cut into character trigrams, and every trigram is
hashed into one of ``dimension`` buckets. The count vector is L2-normalized.
"""

from __future__ import annotations

import hashlib
import logging
import re
from dataclasses import dataclass

import numpy as np

from components.config import EMBED_KEY_ENV, MatcherConfig, api_key
from components.errors import DimensionMismatch, ProviderUnavailable, ZeroVector

logger = logging.getLogger(__name__)

_RUNS = re.compile(r"[^\W_]+")
_CAMEL = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+|\d+")


@dataclass(frozen=True, eq=False)
class EmbeddingVector:
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("embedding must be a non-empty 1-D vector")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def dimension(self) -> int:
        return int(self.values.size)

    def __eq__(self, other):
        if not isinstance(other, EmbeddingVector):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def scaled(self, factor: float) -> "EmbeddingVector":
        return EmbeddingVector(self.values * factor)


def normalize_text(text: str) -> list[str]:
    """Split camelCase and acronyms into lower-case words: ``SKUInfoDTO`` -> sku info dto.

    Words in other scripts (``库存名称``, ``Größe``) are kept whole.
    """
    words = []
    for run in _RUNS.findall(text):
        # camelCase splitting only applies to ASCII runs; other scripts stay whole
        words.extend(_CAMEL.findall(run) if run.isascii() else [run])
    return [w.lower() for w in words]


def trigrams(word: str) -> list[str]:
    padded = f"<{word}>"
    return [padded[i:i + 3] for i in range(len(padded) - 2)]


def _bucket(gram: str, dimension: int) -> int:
    digest = hashlib.blake2b(gram.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") % dimension


class BuiltinEmbedder:
    """Deterministic hashed character-trigram embedder."""

    name = "builtin"

    def __init__(self, dimension: int = 512):
        if dimension <= 0:
            raise ValueError("dimension must be positive")
        self.dimension = dimension

    def embed(self, text: str) -> EmbeddingVector:
        if not text or not text.strip():
            raise ValueError("cannot embed empty text")
        counts = np.zeros(self.dimension, dtype=np.float64)
        for word in normalize_text(text):
            for gram in trigrams(word):
                counts[_bucket(gram, self.dimension)] += 1.0
        norm = np.linalg.norm(counts)
        if norm == 0:
            raise ZeroVector()
        return EmbeddingVector(counts / norm)

    def embed_many(self, texts) -> list[EmbeddingVector]:
        return [self.embed(t) for t in texts]


class OpenAIEmbedder:
    """Remote embeddings endpoint speaking the OpenAI wire shape."""

    name = "openai"

    def __init__(self, model: str, endpoint: str | None = None, dimension: int | None = None, client=None):
        self.model = model
        self.dimension = dimension
        if client is None:
            key = api_key(EMBED_KEY_ENV)
            if not key:
                raise ProviderUnavailable(f"{EMBED_KEY_ENV} is not set")
            from openai import OpenAI

            client = OpenAI(api_key=key, base_url=endpoint) if endpoint else OpenAI(api_key=key)
        self.client = client
        self._cache: dict[str, EmbeddingVector] = {}

    def embed(self, text: str) -> EmbeddingVector:
        return self.embed_many([text])[0]

    def embed_many(self, texts) -> list[EmbeddingVector]:
        texts = list(texts)
        missing = [t for t in dict.fromkeys(texts) if t not in self._cache]
        if missing:
            import openai

            try:
                response = self.client.embeddings.create(model=self.model, input=missing)
            except openai.OpenAIError as e:
                raise ProviderUnavailable(f"embeddings request failed: {e}") from e
            for text, item in zip(missing, response.data):
                vector = EmbeddingVector(item.embedding)
                if self.dimension is None:
                    self.dimension = vector.dimension
                elif vector.dimension != self.dimension:
                    raise DimensionMismatch(self.dimension, vector.dimension)
                self._cache[text] = vector
            logger.debug("Embedded %d texts with %s", len(missing), self.model)
        return [self._cache[t] for t in texts]


def make_embedder(config: MatcherConfig | None = None):
    config = config or MatcherConfig()
    if config.provider == "builtin":
        return BuiltinEmbedder(config.dimension)
    if config.provider == "openai":
        return OpenAIEmbedder(config.embed_model, config.embed_endpoint)
    raise ProviderUnavailable(f"unknown embedding provider {config.provider!r}")


def cosine_similarity(u: EmbeddingVector, v: EmbeddingVector) -> float:
    if u.dimension != v.dimension:
        raise DimensionMismatch(u.dimension, v.dimension)
    nu = np.linalg.norm(u.values)
    nv = np.linalg.norm(v.values)
    if nu == 0 or nv == 0:
        raise ZeroVector()
    return float(np.clip(np.dot(u.values, v.values) / (nu * nv), -1.0, 1.0))
