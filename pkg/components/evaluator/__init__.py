"""Build-pass harness, corpus evaluation, reports and the command line."""

from components.evaluator.build_pass import BuildPassResult, build_pass
from components.evaluator.corpus import (
    CorpusEntry,
    build_task_prompt,
    discover_corpus,
    evaluate_entry,
    filter_corpus,
    run_ablation,
    run_corpus,
)
from components.evaluator.report import (
    EvaluationReport,
    ScriptRow,
    comparison_dict,
    comparison_frame,
    comparison_text,
    compute_aggregates,
    load_report,
)

__all__ = [
    "BuildPassResult",
    "CorpusEntry",
    "EvaluationReport",
    "ScriptRow",
    "build_pass",
    "build_task_prompt",
    "comparison_dict",
    "comparison_frame",
    "comparison_text",
    "compute_aggregates",
    "discover_corpus",
    "evaluate_entry",
    "filter_corpus",
    "load_report",
    "run_ablation",
    "run_corpus",
]
