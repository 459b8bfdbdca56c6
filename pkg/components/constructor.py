"""Prompt construction: task and rules as the system text, mappings and context as the user text."""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from pathlib import Path

from components.config import ConstructorConfig
from components.core_model import (
    ClassGraph,
    FieldInfo,
    RelationGraph,
    TaskDefinition,
    render_relations,
    simple_name,
)
from components.errors import TokenBudgetExceeded
from components.matcher.table import MappingEntry, MappingTable
from components.retriever.types import display_type, is_scalar_type
from content.prompt_content import (
    HEADERS,
    TASK_LINE,
    get_builtin_rules,
    get_original_prompt_template,
    get_original_system_prompt,
)

logger = logging.getLogger(__name__)

ARROW = "→"
_LEADING_UPPER = re.compile(r"^([A-Z]+)(?=[A-Z][a-z]|$)")


def estimate_tokens(text: str) -> int:
    """Roughly four characters per token, rounded up."""
    return math.ceil(len(text) / 4)


def variable_name(class_name: str) -> str:
    """Local variable for a class: ``InventoryInfoDTO`` -> inventoryInfoDTO, ``SKUInfoDTO`` -> skuInfoDTO."""
    simple = simple_name(class_name)
    match = _LEADING_UPPER.match(simple)
    if match:
        return match.group(1).lower() + simple[match.end():]
    return simple[:1].lower() + simple[1:]


@dataclass(frozen=True)
class PromptDocument:
    system_text: str
    user_text: str
    token_estimate: int
    rules: tuple[str, ...] = ()
    # ccci | original
    mode: str = "ccci"

    def __post_init__(self):
        if not self.system_text or not self.user_text:
            raise ValueError("prompt texts must be non-empty")
        if self.token_estimate != estimate_tokens(self.system_text + self.user_text):
            raise ValueError("token estimate does not match the prompt texts")

    @classmethod
    def of(cls, system_text: str, user_text: str, rules=(), mode: str = "ccci") -> "PromptDocument":
        return cls(system_text, user_text, estimate_tokens(system_text + user_text), tuple(rules), mode)

    def write(self, prefix) -> tuple[Path, Path]:
        """Dump both texts to ``<prefix>.system.txt`` and ``<prefix>.user.txt``."""
        prefix = Path(prefix)
        system_path = prefix.with_name(prefix.name + ".system.txt")
        user_path = prefix.with_name(prefix.name + ".user.txt")
        system_path.parent.mkdir(parents=True, exist_ok=True)
        system_path.write_text(self.system_text, encoding="utf-8")
        user_path.write_text(self.user_text, encoding="utf-8")
        return system_path, user_path


def _one_line(text: str | None) -> str:
    return " ".join(text.split()) if text else ""


def _entity_type(field: FieldInfo) -> str:
    if is_scalar_type(field.value_type):
        return display_type(field.declared_type)
    return field.declared_type.replace("java.util.", "").replace("java.lang.", "")


def render_entity_context(graph: ClassGraph) -> str:
    """Entity Details blocks, breadth first from the roots."""
    lines = []
    for name in graph.breadth_first():
        info = graph.nodes[name]
        comment = _one_line(info.comment)
        lines.append(f"- Entity:{comment}:{name}" if comment else f"- Entity: {name}")
        lines.append("  Fields:")
        for field in graph.fields_of(name):
            description = _one_line(field.description)
            if description:
                lines.append(f"  {field.name}:{description}:{_entity_type(field)}")
            else:
                lines.append(f"  {field.name}:{_entity_type(field)}")
    return "\n".join(lines)


def render_arrow(entry: MappingEntry) -> str:
    return f"{entry.output.dotted} {ARROW} {entry.input.render()}"


def _input_lines(task: TaskDefinition, table: MappingTable) -> list[str]:
    used: dict[str, list[str]] = {}
    for entry in table.entries:
        used.setdefault(simple_name(entry.input.class_name), []).append(entry.input.dotted)
    lines = []
    for name in task.input_class_names:
        simple = simple_name(name)
        fields = list(dict.fromkeys(used.get(simple, [])))
        lines.append(f"  - {simple} {variable_name(simple)}: [{', '.join(fields)}]")
    return lines


def build_system_text(task: TaskDefinition, config: ConstructorConfig) -> tuple[str, list[str]]:
    rules = get_builtin_rules(config.bulk_copy_helper) + list(task.additional_rules)
    lines = [TASK_LINE, *task.overview, HEADERS["rules"]]
    lines += [f"  {i}. {rule}" for i, rule in enumerate(rules, start=1)]
    return "\n".join(lines), rules


def build_prompt(
    task: TaskDefinition,
    table: MappingTable,
    graph: ClassGraph,
    relations: RelationGraph | None = None,
    config: ConstructorConfig | None = None,
) -> PromptDocument:
    config = config or ConstructorConfig()
    system_text, rules = build_system_text(task, config)

    output = simple_name(task.output_class_name)
    user = [HEADERS["inputs"], *_input_lines(task, table)]
    user += [HEADERS["output"], f"  - {output} {variable_name(output)}:"]
    if table.exact:
        user.append("    " + HEADERS["bulk_copy"].format(helper=config.bulk_copy_helper))
        user += [f"      - {render_arrow(e)}" for e in table.exact]
    if table.semantic:
        user.append("    " + HEADERS["manual"])
        user += [f"      - {render_arrow(e)}" for e in table.semantic]
    if table.unmatched_outputs:
        user.append("    " + HEADERS["unmapped"])
        user += [f"      - {path.dotted}" for path in table.unmatched_outputs]
    user += ["", HEADERS["entities"], render_entity_context(graph)]
    if relations is not None and (relations.relations or relations.tables or relations.domains):
        user += ["", HEADERS["relations"], render_relations(relations)]

    document = PromptDocument.of(system_text, "\n".join(user) + "\n", rules)
    logger.info("Prompt built: ~%d tokens", document.token_estimate)
    if document.token_estimate > config.token_budget:
        raise TokenBudgetExceeded(document.token_estimate, config.token_budget)
    return document


def build_original_prompt(task: TaskDefinition, config: ConstructorConfig | None = None) -> PromptDocument:
    """Baseline prompt with no mappings, entity context or relations."""
    config = config or ConstructorConfig()
    inputs = "\n".join(f"  - {simple_name(n)} {variable_name(n)}" for n in task.input_class_names)
    output = f"  - {simple_name(task.output_class_name)} {variable_name(task.output_class_name)}"
    user_text = get_original_prompt_template().format(inputs=inputs, output=output)
    document = PromptDocument.of(get_original_system_prompt(), user_text, mode="original")
    if document.token_estimate > config.token_budget:
        raise TokenBudgetExceeded(document.token_estimate, config.token_budget)
    return document
