"""Corpus discovery and the end-to-end evaluation run."""

from __future__ import annotations

import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from components.chat import complete_samples
from components.classifier import Classifier
from components.config import PipelineConfig
from components.constructor import PromptDocument, build_original_prompt, build_prompt
from components.core_model import RelationGraph, TaskDefinition, load_task_definition, parse_db_relations
from components.errors import BuildTimeout, CCCIError, EmptyCorpus
from components.evaluator.build_pass import BuildPassResult, build_pass
from components.evaluator.report import EvaluationReport, ScriptRow
from components.matcher import build_mapping_table
from components.metrics import MetricScores, codebleu
from components.retriever import resolve_hierarchy

logger = logging.getLogger(__name__)

TASK_FILE = "task.ccci-task"
RELATIONS_FILE = "relations.ccci-relations"
REFERENCE_FILE = "reference.txt"

DEFAULT_MIN_LEN = 300
DEFAULT_MAX_LEN = 700


@dataclass(frozen=True)
class CorpusEntry:
    entry_id: str
    directory: Path

    @property
    def task_path(self) -> Path:
        return self.directory / TASK_FILE

    @property
    def relations_path(self) -> Path:
        return self.directory / RELATIONS_FILE

    @property
    def reference(self) -> str:
        return (self.directory / REFERENCE_FILE).read_text(encoding="utf-8")

    def load_task(self) -> TaskDefinition:
        return load_task_definition(self.task_path)

    def load_relations(self) -> RelationGraph | None:
        if not self.relations_path.is_file():
            return None
        return parse_db_relations(self.relations_path.read_text(encoding="utf-8"))


def discover_corpus(corpus_dir) -> list[CorpusEntry]:
    """Entry directories holding a task file and a reference script, sorted by name."""
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise EmptyCorpus(str(corpus_dir))
    entries = []
    for directory in sorted(p for p in corpus_dir.iterdir() if p.is_dir()):
        if not (directory / TASK_FILE).is_file():
            continue
        if not (directory / REFERENCE_FILE).is_file():
            logger.warning("Corpus entry %s has no %s, skipped", directory.name, REFERENCE_FILE)
            continue
        entries.append(CorpusEntry(directory.name, directory))
    logger.info("Found %d corpus entries in %s", len(entries), corpus_dir)
    return entries


def filter_corpus(scripts, min_len: int = DEFAULT_MIN_LEN, max_len: int = DEFAULT_MAX_LEN, key=len) -> list:
    """Keep scripts whose length in characters lies in [min_len, max_len]."""
    return [s for s in scripts if min_len <= key(s) <= max_len]


def build_task_prompt(
    task: TaskDefinition,
    relations: RelationGraph | None,
    config: PipelineConfig,
) -> PromptDocument:
    """classify, retrieve, match and construct for one task."""
    if config.prompt_mode == "original":
        return build_original_prompt(task, config.constructor)
    classifier = Classifier(task, config.classifier)
    cmap = classifier.classify()
    graph = resolve_hierarchy(task.class_names, cmap, task, config=config.retriever, classifier=classifier)
    table = build_mapping_table(graph, task.input_class_names, task.output_class_name, config.matcher)
    return build_prompt(task, table, graph, relations, config.constructor)


def _failed_rows(entry: CorpusEntry, samples: int, error: Exception) -> list[ScriptRow]:
    ids = [entry.entry_id] if samples == 1 else [f"{entry.entry_id}#{k}" for k in range(samples)]
    message = f"{type(error).__name__}: {error}"
    return [
        ScriptRow(i, MetricScores(candidate_parsed=False), BuildPassResult.compile_failed(""), failed=True, error=message)
        for i in ids
    ]


def evaluate_entry(entry: CorpusEntry, config: PipelineConfig) -> list[ScriptRow]:
    """Full pipeline for one entry; one row per completion sample."""
    task = entry.load_task()
    reference = entry.reference
    prompt = build_task_prompt(task, entry.load_relations(), config)
    harness = dataclasses.replace(config.harness, scaffold=str(entry.directory))

    rows = []
    samples = complete_samples(prompt, config.model)
    for generated in samples:
        script_id = entry.entry_id if len(samples) == 1 else f"{entry.entry_id}#{generated.sample}"
        scores = codebleu(generated.code, reference)
        error = None
        try:
            result = build_pass(generated.code, harness)
        except BuildTimeout as e:
            logger.warning("%s: %s", script_id, e)
            result = e.result or BuildPassResult.compile_failed("")
            error = str(e)
        logger.debug("%s: CodeBLEU %.3f, build pass %s", script_id, scores.codebleu, result.passed)
        rows.append(ScriptRow(script_id, scores, result, error=error))
    return rows


def _evaluate_safely(entry: CorpusEntry, config: PipelineConfig) -> list[ScriptRow]:
    try:
        return evaluate_entry(entry, config)
    except (CCCIError, OSError, ValueError, KeyError) as e:
        logger.warning("Corpus entry %s failed: %s", entry.entry_id, e)
        return _failed_rows(entry, config.model.samples, e)
    except Exception as e:
        logger.exception("Corpus entry %s crashed", entry.entry_id)
        return _failed_rows(entry, config.model.samples, e)


def run_corpus(corpus_dir, config: PipelineConfig | None = None) -> EvaluationReport:
    """Evaluate every corpus entry and aggregate the scores.

    Entries run in parallel on ``config.workers`` threads; rows come back in
    entry order. A failing entry never aborts the run: it is recorded as a
    failed row with zero scores.
    """
    config = config or PipelineConfig()
    entries = discover_corpus(corpus_dir)
    if config.min_len is not None or config.max_len is not None:
        entries = filter_corpus(
            entries,
            config.min_len if config.min_len is not None else 0,
            config.max_len if config.max_len is not None else float("inf"),
            key=lambda e: len(e.reference),
        )
    if not entries:
        raise EmptyCorpus(str(corpus_dir))

    with ThreadPoolExecutor(max_workers=max(1, config.workers)) as pool:
        results = list(pool.map(lambda e: _evaluate_safely(e, config), entries))
    rows = [row for entry_rows in results for row in entry_rows]
    report = EvaluationReport.from_rows(rows, config.model.model_name, config.prompt_mode)
    logger.info("Evaluated %d scripts: %s", report.corpus_size, report.table())
    return report


def run_ablation(corpus_dir, config: PipelineConfig | None = None) -> tuple[EvaluationReport, EvaluationReport]:
    """The same corpus and model with the context-free prompt, then with the full prompt."""
    config = config or PipelineConfig()
    original = run_corpus(corpus_dir, dataclasses.replace(config, prompt_mode="original"))
    ccci = run_corpus(corpus_dir, dataclasses.replace(config, prompt_mode="ccci"))
    return original, ccci
