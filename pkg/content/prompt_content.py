"""Static prompt text: built-in rules, section headers and the context-free template."""

TASK_LINE = "Task: Map input DTOs to the output DTO."

HEADERS = {
    "rules": "Rules:",
    "inputs": "Input DTOs:",
    "output": "Output DTO:",
    "bulk_copy": "Copy with {helper} (identical names):",
    "manual": "Map manually (different names, similar semantics):",
    "unmapped": "Unmapped (decide or leave null):",
    "entities": "Entity Details:",
    "relations": "DB Relations:",
}


def get_builtin_rules(helper: str) -> list[str]:
    """Rules always sent to the model, before the task's own rules."""
    return [
        f"Use {helper} for fields with identical names.",
        "Manually map fields with different names but similar semantics.",
        "Do not declare new classes and do not repeat an assignment already covered by a copy.",
        "Return only the code, in a single fenced block.",
    ]


def get_original_prompt_template() -> str:
    """Prompt without any retrieved context: task, class names, nothing else."""
    return """Task Overview:
Generate Java code to transform Input DTOs into Output DTO.

Input DTOs:
{inputs}
Output DTO:
{output}
"""


def get_original_system_prompt() -> str:
    return "You are a Java developer completing data transfer code."
