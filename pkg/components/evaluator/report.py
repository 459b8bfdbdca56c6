"""Evaluation reports: per-script rows, percentage aggregates, JSON files and comparisons."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from components.evaluator.build_pass import BuildPassResult
from components.metrics import MetricScores

logger = logging.getLogger(__name__)

METRIC_COLUMNS = ["bleu4", "weighted_ngram", "ast_match", "dataflow_match", "codebleu", "edit_similarity"]
# Short column names of the headline table.
HEADLINE = {"bleu4": "B4", "codebleu": "CB", "edit_similarity": "ES", "build_pass": "BP"}


@dataclass(frozen=True)
class ScriptRow:
    script_id: str
    scores: MetricScores
    build: BuildPassResult
    failed: bool = False
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "script_id": self.script_id,
            "scores": self.scores.to_dict(),
            "build_pass": self.build.to_dict(),
            "failed": self.failed,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScriptRow":
        return cls(
            data["script_id"],
            MetricScores(**data["scores"]),
            BuildPassResult(**data["build_pass"]),
            data.get("failed", False),
            data.get("error"),
        )


def rows_frame(rows) -> pd.DataFrame:
    """One line per script with every metric in [0, 1] and the build-pass flag."""
    records = []
    for row in rows:
        record = {"script_id": row.script_id}
        record.update({name: getattr(row.scores, name) for name in METRIC_COLUMNS})
        record["build_pass"] = row.build.passed
        record["failed"] = row.failed
        records.append(record)
    return pd.DataFrame(records, columns=["script_id", *METRIC_COLUMNS, "build_pass", "failed"])


def compute_aggregates(rows) -> dict[str, float]:
    """Percentage means of every metric and the build-pass rate; failed rows count as zeros."""
    frame = rows_frame(rows)
    if frame.empty:
        return {name: 0.0 for name in [*METRIC_COLUMNS, "build_pass"]}
    aggregates = {name: float(frame[name].mean() * 100) for name in METRIC_COLUMNS}
    aggregates["build_pass"] = 100.0 * int(frame["build_pass"].sum()) / len(frame)
    return aggregates


@dataclass(frozen=True)
class EvaluationReport:
    per_script: tuple[ScriptRow, ...]
    aggregates: dict[str, float] = field(default_factory=dict)
    model_name: str = ""
    corpus_size: int = 0
    prompt_mode: str = "ccci"

    @classmethod
    def from_rows(cls, rows, model_name: str, prompt_mode: str = "ccci") -> "EvaluationReport":
        rows = tuple(rows)
        return cls(rows, compute_aggregates(rows), model_name, len(rows), prompt_mode)

    @property
    def failed_count(self) -> int:
        return sum(row.failed for row in self.per_script)

    def frame(self) -> pd.DataFrame:
        return rows_frame(self.per_script)

    def headline(self) -> dict[str, float]:
        """B4 / CB / ES / BP rounded to one decimal."""
        return {short: round(self.aggregates[name], 1) for name, short in HEADLINE.items()}

    def table(self) -> str:
        return " ".join(f"{k} {v:.1f}" for k, v in self.headline().items())

    def to_dict(self) -> dict:
        return {
            "model_name": self.model_name,
            "prompt_mode": self.prompt_mode,
            "corpus_size": self.corpus_size,
            "failed": self.failed_count,
            "aggregates": dict(self.aggregates),
            "table": self.headline(),
            "per_script": [row.to_dict() for row in self.per_script],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def write(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json(), encoding="utf-8")
        logger.info("Report written to %s", path)
        return path


def load_report(path) -> EvaluationReport:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    rows = tuple(ScriptRow.from_dict(item) for item in data["per_script"])
    return EvaluationReport(
        per_script=rows,
        aggregates=dict(data["aggregates"]),
        model_name=data.get("model_name", ""),
        corpus_size=data.get("corpus_size", len(rows)),
        prompt_mode=data.get("prompt_mode", "ccci"),
    )


def _improvement(before: float, after: float) -> float:
    if before == 0:
        return float("nan")
    return round(100.0 * (after - before) / before, 1)


def comparison_frame(original: EvaluationReport, ccci: EvaluationReport) -> pd.DataFrame:
    """Headline metrics side by side, improvement in percent of the original score."""
    frame = pd.DataFrame(
        {
            "Original": pd.Series(original.headline()),
            "CCCI": pd.Series(ccci.headline()),
        }
    )
    frame["Improvement %"] = [
        _improvement(before, after) for before, after in zip(frame["Original"], frame["CCCI"])
    ]
    frame.index.name = "metric"
    return frame


def comparison_text(original: EvaluationReport, ccci: EvaluationReport) -> str:
    frame = comparison_frame(original, ccci)
    return frame.to_string(na_rep="n/a", float_format=lambda v: f"{v:.1f}")


def comparison_dict(original: EvaluationReport, ccci: EvaluationReport) -> dict:
    frame = comparison_frame(original, ccci)
    return {
        metric: {column: (None if pd.isna(value) else float(value)) for column, value in row.items()}
        for metric, row in frame.iterrows()
    }
