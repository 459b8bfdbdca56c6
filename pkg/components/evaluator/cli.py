"""Command-line surface: one subcommand per pipeline stage plus the corpus evaluation."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from components.chat import complete_samples
from components.classifier import Classifier
from components.config import PipelineConfig, load_config
from components.constructor import build_original_prompt, build_prompt, render_entity_context
from components.core_model import ClassGraph, RelationGraph, TaskDefinition, load_task_definition, parse_db_relations
from components.errors import CCCIError
from components.evaluator.build_pass import build_pass
from components.evaluator.corpus import RELATIONS_FILE, run_ablation, run_corpus
from components.evaluator.report import comparison_dict, comparison_text
from components.matcher import build_mapping_table
from components.metrics import DEFAULT_WEIGHTS, codebleu
from components.retriever import resolve_hierarchy

logger = logging.getLogger(__name__)


def _emit(args, payload, text: str):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


def _configure(args) -> PipelineConfig:
    config = load_config(args.config)
    if args.mock:
        config = config.with_mock()
    if args.max_depth is not None:
        config = dataclasses.replace(config, retriever=dataclasses.replace(config.retriever, max_depth=args.max_depth))
    if args.threshold is not None:
        config = dataclasses.replace(config, matcher=dataclasses.replace(config.matcher, threshold=args.threshold))
    if args.prompt_mode is not None:
        config = dataclasses.replace(config, prompt_mode=args.prompt_mode)
    return config


def _task(args) -> TaskDefinition:
    return load_task_definition(args.task)


def _relations(args) -> RelationGraph | None:
    path = Path(args.relations) if args.relations else Path(args.task).parent / RELATIONS_FILE
    if not path.is_file():
        return None
    return parse_db_relations(path.read_text(encoding="utf-8"))


def _graph(task: TaskDefinition, config: PipelineConfig) -> ClassGraph:
    classifier = Classifier(task, config.classifier)
    cmap = classifier.classify()
    return resolve_hierarchy(task.class_names, cmap, task, config=config.retriever, classifier=classifier)


def _graph_dict(graph: ClassGraph) -> dict:
    return {
        "roots": list(graph.roots),
        "classes": {
            name: [
                {"name": f.name, "type": f.declared_type, "description": f.description or None}
                for f in graph.fields_of(name)
            ]
            for name in graph.breadth_first()
        },
        "edges": [[e.owner, e.field, e.child] for e in graph.edges],
    }


def _prompt(args, config: PipelineConfig):
    task = _task(args)
    if config.prompt_mode == "original":
        return build_original_prompt(task, config.constructor)
    graph = _graph(task, config)
    table = build_mapping_table(graph, task.input_class_names, task.output_class_name, config.matcher)
    return build_prompt(task, table, graph, _relations(args), config.constructor)


def cmd_classify(args) -> int:
    config = _configure(args)
    cmap = Classifier(_task(args), config.classifier).classify()
    _emit(args, cmap.to_dict(), "\n".join(cmap.lines()))
    return 0


def cmd_retrieve(args) -> int:
    graph = _graph(_task(args), _configure(args))
    _emit(args, _graph_dict(graph), render_entity_context(graph))
    return 0


def cmd_match(args) -> int:
    config = _configure(args)
    task = _task(args)
    graph = _graph(task, config)
    table = build_mapping_table(graph, task.input_class_names, task.output_class_name, config.matcher)
    _emit(args, table.to_dict(), table.render())
    return 0


def cmd_prompt(args) -> int:
    prompt = _prompt(args, _configure(args))
    if args.out:
        for path in prompt.write(args.out):
            logger.info("Wrote %s", path)
    payload = {
        "system": prompt.system_text,
        "user": prompt.user_text,
        "token_estimate": prompt.token_estimate,
        "mode": prompt.mode,
    }
    _emit(args, payload, f"{prompt.system_text}\n\n{prompt.user_text}")
    return 0


def cmd_complete(args) -> int:
    config = _configure(args)
    results = complete_samples(_prompt(args, config), config.model)
    payload = [{"sample": r.sample, "model": r.model_name, "code": r.code} for r in results]
    _emit(args, payload, "\n\n".join(r.code for r in results))
    return 0


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _weights(text: str | None):
    if not text:
        return DEFAULT_WEIGHTS
    try:
        return tuple(float(w) for w in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"weights must be comma-separated numbers: {text!r}") from None


def cmd_score(args) -> int:
    candidate = Path(args.candidate).read_text(encoding="utf-8")
    reference = Path(args.reference).read_text(encoding="utf-8")
    scores = codebleu(candidate, reference, args.weights)
    text = "\n".join(f"{name:<16} {value:.4f}" for name, value in scores.to_dict().items() if name != "candidate_parsed")
    _emit(args, scores.to_dict(), text)
    return 0


def cmd_buildpass(args) -> int:
    config = _configure(args)
    harness = config.harness
    if args.scaffold:
        harness = dataclasses.replace(harness, scaffold=args.scaffold)
    result = build_pass(Path(args.code).read_text(encoding="utf-8"), harness)
    text = f"compiled: {result.compiled}\ntested: {result.tested}\npass: {result.passed}"
    if result.compiler_output:
        text += f"\n\n{result.compiler_output}"
    if result.test_output:
        text += f"\n\n{result.test_output}"
    _emit(args, result.to_dict(), text)
    return 0 if result.passed else 1


def cmd_eval(args) -> int:
    config = _configure(args)
    overrides = {}
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.min_len is not None:
        overrides["min_len"] = args.min_len
    if args.max_len is not None:
        overrides["max_len"] = args.max_len
    config = dataclasses.replace(config, **overrides)
    out = Path(args.out)

    if args.ablation:
        original, ccci = run_ablation(args.corpus, config)
        original.write(out.with_name(out.stem + ".original.json"))
        ccci.write(out)
        _emit(args, comparison_dict(original, ccci), comparison_text(original, ccci))
        return 0

    report = run_corpus(args.corpus, config)
    report.write(out)
    _emit(args, report.to_dict()["table"], f"{report.model_name} ({report.prompt_mode}): {report.table()}")
    return 0


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="YAML pipeline configuration")
    parser.add_argument("--mock", action="store_true", help="offline completer and built-in embedder")
    parser.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    parser.add_argument("--max-depth", type=_positive_int, help="hierarchy resolution depth")
    parser.add_argument("--threshold", type=float, help="semantic match threshold")
    parser.add_argument("--prompt-mode", choices=("ccci", "original"))


def _with_task(parser: argparse.ArgumentParser):
    parser.add_argument("--task", required=True, help="task definition file")
    parser.add_argument("--relations", help=f"relations file (default: {RELATIONS_FILE} next to the task)")


def build_cli() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ccci",
        description="Context-aware completion of DTO conversion code: classify, retrieve, match, prompt, complete, score.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND", title="commands")

    p_classify = sub.add_parser("classify", help="Local / External origin of every task class")
    _with_task(p_classify)
    p_classify.set_defaults(func=cmd_classify)

    p_retrieve = sub.add_parser("retrieve", help="class hierarchy reachable from the task DTOs")
    _with_task(p_retrieve)
    p_retrieve.set_defaults(func=cmd_retrieve)

    p_match = sub.add_parser("match", help="exact and semantic field mapping table")
    _with_task(p_match)
    p_match.set_defaults(func=cmd_match)

    p_prompt = sub.add_parser("prompt", help="build the completion prompt")
    _with_task(p_prompt)
    p_prompt.add_argument("--out", help="write PREFIX.system.txt and PREFIX.user.txt")
    p_prompt.set_defaults(func=cmd_prompt)

    p_complete = sub.add_parser("complete", help="generate the conversion code")
    _with_task(p_complete)
    p_complete.set_defaults(func=cmd_complete)

    p_score = sub.add_parser("score", help="BLEU-4, CodeBLEU and edit similarity of a candidate")
    p_score.add_argument("--candidate", required=True)
    p_score.add_argument("--reference", required=True)
    p_score.add_argument("--weights", type=_weights, default=DEFAULT_WEIGHTS, help="four comma-separated CodeBLEU weights")
    p_score.set_defaults(func=cmd_score)

    p_build = sub.add_parser("buildpass", help="compile and test a script in a scaffold copy")
    p_build.add_argument("--code", required=True, help="script file")
    p_build.add_argument("--scaffold", help="directory copied into the build workspace")
    p_build.set_defaults(func=cmd_buildpass)

    p_eval = sub.add_parser("eval", help="evaluate a corpus and write the report")
    p_eval.add_argument("--corpus", required=True)
    p_eval.add_argument("--out", default="report.json")
    p_eval.add_argument("--ablation", action="store_true", help="also run the context-free prompt and compare")
    p_eval.add_argument("--workers", type=_positive_int)
    p_eval.add_argument("--min-len", type=int)
    p_eval.add_argument("--max-len", type=int)
    p_eval.set_defaults(func=cmd_eval)

    for p in sub.choices.values():
        _common(p)
    return parser


def cli_main(argv=None) -> int:
    parser = build_cli()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        return int(args.func(args))
    except CCCIError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1
    except RecursionError:
        print("Error: class hierarchy too deep to resolve", file=sys.stderr)
        return 1
