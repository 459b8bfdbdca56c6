"""Pipeline configuration: frozen dataclasses, optionally filled from a YAML file."""

from __future__ import annotations

import dataclasses
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from components.errors import ConfigError

logger = logging.getLogger(__name__)

LLM_KEY_ENV = "CCCI_LLM_KEY"
EMBED_KEY_ENV = "CCCI_EMBED_KEY"


@dataclass(frozen=True)
class ClassifierConfig:
    ignore_dirs: tuple[str, ...] = ("target", "build", ".git")
    source_suffix: str = ".java"


@dataclass(frozen=True)
class RetrieverConfig:
    max_depth: int = 8
    # Unresolved non-scalar types raise unless downgraded to a warning.
    strict: bool = True
    max_major_version: int = 69
    wrapper_types: tuple[str, ...] = ("ResponseList", "Response", "Result", "PageResult", "ApiResponse")


@dataclass(frozen=True)
class MatcherConfig:
    threshold: float = 0.5
    top_k: int = 1
    exclusive_consumption: bool = False
    provider: str = "builtin"
    dimension: int = 512
    embed_model: str = "text-embedding-3-small"
    embed_endpoint: str | None = None


@dataclass(frozen=True)
class ConstructorConfig:
    bulk_copy_helper: str = "BeanUtils.copyProperties"
    input_token_budget: int = 4096
    output_reserve: int = 512

    @property
    def token_budget(self) -> int:
        return self.input_token_budget - self.output_reserve


@dataclass(frozen=True)
class ModelConfig:
    endpoint: str = "https://api.openai.com/v1"
    model_name: str = "gpt-4o"
    max_output_tokens: int = 4096
    temperature: float = 0.0
    top_p: float = 0.2
    request_timeout: float = 120.0
    retries: int = 2
    backoff_base: float = 1.0
    samples: int = 1
    max_in_flight: int = 4
    # openai | mock | replay
    provider: str = "openai"
    cassette: str | None = None
    canned_answer: str | None = None

    def __post_init__(self):
        if self.max_output_tokens <= 0:
            raise ConfigError("max_output_tokens must be positive")
        if self.temperature < 0:
            raise ConfigError("temperature must be non-negative")
        if not 0 < self.top_p <= 1:
            raise ConfigError("top_p must lie in (0, 1]")
        if self.retries < 0 or self.samples < 1:
            raise ConfigError("retries must be >= 0 and samples >= 1")
        if self.max_in_flight < 1:
            raise ConfigError("max_in_flight must be >= 1")


@dataclass(frozen=True)
class HarnessConfig:
    compile_command: str | None = "{python} -m components.evaluator.checker compile {workspace} {script}"
    test_command: str | None = "{python} -m components.evaluator.checker test {workspace} {script}"
    script_name: str = "Script.java"
    compile_timeout: float = 60.0
    test_timeout: float = 60.0
    scaffold: str | None = None


@dataclass(frozen=True)
class PipelineConfig:
    classifier: ClassifierConfig = field(default_factory=ClassifierConfig)
    retriever: RetrieverConfig = field(default_factory=RetrieverConfig)
    matcher: MatcherConfig = field(default_factory=MatcherConfig)
    constructor: ConstructorConfig = field(default_factory=ConstructorConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    harness: HarnessConfig = field(default_factory=HarnessConfig)
    # ccci | original
    prompt_mode: str = "ccci"
    workers: int = 4
    min_len: int | None = None
    max_len: int | None = None

    def with_mock(self) -> "PipelineConfig":
        """Force the offline providers for completion and embeddings."""
        return dataclasses.replace(
            self,
            model=dataclasses.replace(self.model, provider="mock"),
            matcher=dataclasses.replace(self.matcher, provider="builtin"),
        )


_SECTIONS = {
    "classifier": ClassifierConfig,
    "retriever": RetrieverConfig,
    "matcher": MatcherConfig,
    "constructor": ConstructorConfig,
    "model": ModelConfig,
    "harness": HarnessConfig,
}


def _build_section(cls, values, name):
    if not isinstance(values, dict):
        raise ConfigError(f"section {name!r} must be a mapping")
    known = {f.name: f for f in dataclasses.fields(cls)}
    unknown = sorted(set(values) - set(known))
    if unknown:
        raise ConfigError(f"unknown keys in section {name!r}: {', '.join(unknown)}")
    converted = {}
    for key, value in values.items():
        if isinstance(value, list):
            value = tuple(value)
        converted[key] = value
    try:
        return cls(**converted)
    except TypeError as e:
        raise ConfigError(f"section {name!r}: {e}") from e


def load_config(path=None) -> PipelineConfig:
    """Load the pipeline configuration from YAML, defaults when path is None."""
    if path is None:
        return PipelineConfig()
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must be a mapping")

    sections = {}
    for name, cls in _SECTIONS.items():
        if name in raw:
            sections[name] = _build_section(cls, raw.pop(name), name)
    pipeline = raw.pop("pipeline", {}) or {}
    if raw:
        raise ConfigError(f"unknown config sections: {', '.join(sorted(raw))}")
    top = _build_section(PipelineConfig, pipeline, "pipeline")
    logger.debug("Loaded configuration from %s", path)
    return dataclasses.replace(top, **sections)


def api_key(env_var: str) -> str | None:
    """Read a secret from the environment; never from config files."""
    value = os.environ.get(env_var)
    return value.strip() if value else None
