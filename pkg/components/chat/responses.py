"""Offline answers: the template-expanding mock and recorded cassettes."""

import json
import logging
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path

from components.core_model import erase_generics, simple_name
from components.errors import TransportError

logger = logging.getLogger(__name__)

_ITEM = re.compile(r"^\s+-\s+(.*)$")
_DECL = re.compile(r"^([A-Za-z_$][\w$]*)(?:\s+([A-Za-z_$][\w$]*))?\s*:?\s*(?:\[.*\])?$")
_ARROW = re.compile(r"^([\w.$]+)\s*→\s*([\w.$]+)$")
_HELPER = re.compile(r"^Copy with (.+) \(identical names\):$")


@dataclass
class _PromptView:
    """What the mock reads back from a prompt's user text."""

    inputs: dict = field(default_factory=dict)
    output: tuple | None = None
    helper: str = "BeanUtils.copyProperties"
    exact: list = field(default_factory=list)
    manual: list = field(default_factory=list)
    unmapped: list = field(default_factory=list)
    entities: dict = field(default_factory=dict)


def _read_prompt(user_text: str) -> _PromptView:
    view = _PromptView()
    section = None
    group = None
    entity = None
    for raw in user_text.splitlines():
        line = raw.rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        if not line[0].isspace():
            if stripped.startswith("- Entity"):
                entity = stripped.rsplit(":", 1)[1].strip()
                view.entities[entity] = {}
                continue
            section = stripped.rstrip(":")
            group = None
            continue
        if section == "Entity Details":
            if entity and stripped != "Fields:" and ":" in stripped:
                name, _, rest = stripped.partition(":")
                view.entities[entity][name] = rest.rsplit(":", 1)[-1].strip()
            continue
        item = _ITEM.match(line)
        if not item:
            helper = _HELPER.match(stripped)
            if helper:
                view.helper = helper.group(1)
                group = "exact"
            elif stripped.startswith("Map manually"):
                group = "manual"
            elif stripped.startswith("Unmapped"):
                group = "unmapped"
            continue
        text = item.group(1).strip()
        arrow = _ARROW.match(text)
        if arrow and group in ("exact", "manual"):
            getattr(view, group).append((arrow.group(1), arrow.group(2)))
        elif group == "unmapped":
            view.unmapped.append(text)
        else:
            decl = _DECL.match(text)
            if not decl:
                continue
            simple, var = decl.group(1), decl.group(2) or decl.group(1)[:1].lower() + decl.group(1)[1:]
            if section == "Input DTOs":
                view.inputs[simple] = var
            elif section == "Output DTO":
                view.output = (simple, var)
    return view


def _cap(name: str) -> str:
    return name[:1].upper() + name[1:]


class _ScriptWriter:
    def __init__(self, view: _PromptView):
        self.view = view
        out_type, out_var = view.output
        self.lines = [f"{out_type} {out_var} = new {out_type}();"]
        self.closing = []
        self.targets = {(): (out_var, self._entity(out_type))}

    def _entity(self, simple: str) -> str | None:
        return next((q for q in sorted(self.view.entities) if simple_name(q) == simple), None)

    def target(self, prefix: tuple) -> str | None:
        """Variable holding the object at prefix, declared on first use."""
        if prefix in self.targets:
            return self.targets[prefix][0]
        parent = self.target(prefix[:-1])
        if parent is None:
            return None
        owner = self.targets[prefix[:-1]][1]
        type_text = self.view.entities.get(owner, {}).get(prefix[-1]) if owner else None
        if not type_text or "<" in type_text or type_text.endswith("[]"):
            return None
        simple = simple_name(erase_generics(type_text))
        var = prefix[0] + "".join(_cap(p) for p in prefix[1:])
        self.lines.append(f"{simple} {var} = new {simple}();")
        self.closing.append(f"{parent}.set{_cap(prefix[-1])}({var});")
        self.targets[prefix] = (var, self._entity(simple) or type_text)
        return var

    def source(self, path: str) -> tuple[str, str]:
        owner, *segments = path.split(".")
        expr = self.view.inputs.get(owner) or owner[:1].lower() + owner[1:]
        for segment in segments[:-1]:
            expr += f".get{_cap(segment)}()"
        return expr, segments[-1]

    def write(self) -> str:
        copies = []
        for out_path, in_path in self.view.exact:
            target = self.target(tuple(out_path.split(".")[:-1]))
            src, _ = self.source(in_path)
            if target and (src, target) not in copies:
                copies.append((src, target))
                self.lines.append(f"{self.view.helper}({src}, {target});")
        for out_path, in_path in self.view.manual:
            *prefix, leaf = out_path.split(".")
            target = self.target(tuple(prefix))
            src, field_name = self.source(in_path)
            if target:
                self.lines.append(f"{target}.set{_cap(leaf)}({src}.get{_cap(field_name)}());")
        for out_path in self.view.unmapped:
            *prefix, leaf = out_path.split(".")
            target = self.target(tuple(prefix))
            if target:
                self.lines.append(f"{target}.set{_cap(leaf)}(null);")
        return "\n".join(self.lines + list(reversed(self.closing)))


def get_predefined_response(prompt, canned_answer: str | None = None) -> str:
    """Mock completion: the canned answer when configured, else a script expanded from the prompt."""
    if canned_answer is not None:
        return canned_answer
    view = _read_prompt(prompt.user_text)
    if view.output is None:
        return ""
    return "```java\n" + _ScriptWriter(view).write() + "\n```\n"


_cassette_locks_guard = threading.Lock()
_cassette_locks: dict[Path, threading.Lock] = {}


def _cassette_lock(path: Path) -> threading.Lock:
    key = path.resolve()
    with _cassette_locks_guard:
        return _cassette_locks.setdefault(key, threading.Lock())


class Cassette:
    """Recorded responses keyed by request hash, stored as a JSON array.

    Writers of the same file serialize on a per-path lock and re-read the
    file before saving, so concurrent recordings are merged.
    """

    def __init__(self, path):
        self.path = Path(path)
        self.responses: dict[str, str] = {}
        self._load()

    def _load(self):
        if self.path.exists():
            for item in json.loads(self.path.read_text(encoding="utf-8")):
                self.responses[item["request_hash"]] = item["response_text"]
            logger.debug("Loaded %d cassette entries from %s", len(self.responses), self.path)

    def replay(self, key: str) -> str:
        try:
            return self.responses[key]
        except KeyError:
            raise TransportError(f"no cassette entry for request {key[:12]}", 1) from None

    def record(self, key: str, response_text: str):
        with _cassette_lock(self.path):
            self._load()
            self.responses[key] = response_text
            self._write()

    def save(self):
        with _cassette_lock(self.path):
            self._write()

    def _write(self):
        items = [{"request_hash": k, "response_text": v} for k, v in sorted(self.responses.items())]
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text(json.dumps(items, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
