"""Tags task classes as Local (project source) or External (dependency archive)."""

from __future__ import annotations

import logging
import os
import zipfile
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from components.config import ClassifierConfig
from components.core_model import Origin, TaskDefinition, simple_name
from components.errors import AmbiguousLocal, ArchiveUnreadable, Unresolved
from components.subject import parse_compilation_unit
from components.subject.tree import package_name, type_declarations

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClassificationMap:
    entries: Mapping[str, Origin]

    def __post_init__(self):
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    def __getitem__(self, name: str) -> Origin:
        return self.entries[name]

    def __len__(self):
        return len(self.entries)

    def qualified(self, name: str) -> str:
        return self.entries[name].qualified_name or name

    def lines(self) -> list[str]:
        """``UserDTO: External (user-api.jar)`` lines, sorted by class name."""
        return sorted(f"{simple_name(name)}: {origin}" for name, origin in self.entries.items())

    def to_dict(self) -> dict:
        return {
            name: {
                "origin": origin.kind.value,
                "path": origin.path.as_posix(),
                "qualified_name": origin.qualified_name,
            }
            for name, origin in sorted(self.entries.items())
        }


def declared_types(text: str, where: str = "<source>") -> tuple[str, list[str]]:
    """Package and declared type names of a source file; nested types as ``Outer.Inner``."""
    root = parse_compilation_unit(text, where)
    return package_name(root), [dotted for _, dotted in type_declarations(root)]


class Classifier:
    """Project and archive index for one task, built once and queried per class name."""

    def __init__(self, task: TaskDefinition, config: ClassifierConfig | None = None):
        self.task = task
        self.config = config or ClassifierConfig()
        self._local: dict[str, list[Path]] | None = None
        self._archives: list[tuple[Path, list[str]]] | None = None

    def _build_local_index(self) -> dict[str, list[Path]]:
        index: dict[str, list[Path]] = {}
        root = Path(self.task.project_root)
        if not root.is_dir():
            logger.warning("Project root %s is not a directory", root)
            return index
        ignored = set(self.config.ignore_dirs)
        for dirpath, dirnames, filenames in os.walk(root):
            dirnames[:] = sorted(d for d in dirnames if d not in ignored and not d.startswith("."))
            for filename in sorted(filenames):
                if not filename.endswith(self.config.source_suffix):
                    continue
                path = Path(dirpath) / filename
                try:
                    text = path.read_text(encoding="utf-8")
                except (OSError, UnicodeDecodeError) as e:
                    logger.warning("Skipping unreadable source %s: %s", path, e)
                    continue
                package, names = declared_types(text, str(path))
                for name in names:
                    qualified = f"{package}.{name}" if package else name
                    index.setdefault(qualified, []).append(path)
                logger.debug("Indexed %s: %s", path, ", ".join(names))
        return index

    @property
    def local_index(self) -> dict[str, list[Path]]:
        if self._local is None:
            self._local = self._build_local_index()
        return self._local

    @property
    def archives(self) -> list[tuple[Path, list[str]]]:
        if self._archives is None:
            self._archives = []
            for archive in self.task.dependency_archives:
                try:
                    with zipfile.ZipFile(archive) as zf:
                        entries = sorted(n for n in zf.namelist() if n.endswith(".class"))
                except (zipfile.BadZipFile, OSError) as e:
                    raise ArchiveUnreadable(archive, str(e)) from e
                self._archives.append((Path(archive), entries))
        return self._archives

    def _lookup_local(self, name: str) -> Origin | None:
        if "." in name:
            hits = [(name, p) for p in self.local_index.get(name, [])]
        else:
            hits = [
                (qualified, p)
                for qualified, paths in sorted(self.local_index.items())
                if simple_name(qualified) == name
                for p in paths
            ]
        if len(hits) > 1:
            raise AmbiguousLocal(name, [str(p) for _, p in hits])
        if hits:
            qualified, path = hits[0]
            return Origin.local(path, qualified)
        return None

    def _lookup_archives(self, name: str) -> Origin | None:
        if "." in name:
            # Nested classes are stored as Outer$Inner.class.
            parts = name.split(".")
            wanted = ["/".join(parts[:i]) + "/" + "$".join(parts[i:]) + ".class" for i in range(len(parts) - 1, 0, -1)]
            for archive, entries in self.archives:
                names = set(entries)
                for entry in wanted:
                    if entry in names:
                        return Origin.external(archive, name, entry)
            return None
        for archive, entries in self.archives:
            hits = [e for e in entries if e == f"{name}.class" or e.endswith((f"/{name}.class", f"${name}.class"))]
            if hits:
                if len(hits) > 1:
                    logger.warning("%s matches %d entries in %s, using %s", name, len(hits), archive.name, hits[0])
                entry = hits[0]
                qualified = entry[:-len(".class")].replace("/", ".").replace("$", ".")
                return Origin.external(archive, qualified, entry)
        return None

    def lookup(self, name: str) -> Origin | None:
        """Origin of a class name; project sources win over archives."""
        return self._lookup_local(name) or self._lookup_archives(name)

    def classify(self) -> ClassificationMap:
        entries = {}
        for name in self.task.class_names:
            origin = self.lookup(name)
            if origin is None:
                raise Unresolved(name)
            logger.info("%s: %s", name, origin)
            entries[name] = origin
        return ClassificationMap(entries)


def classify(task: TaskDefinition, config: ClassifierConfig | None = None) -> ClassificationMap:
    """Resolve every input and output class of the task to its origin."""
    return Classifier(task, config).classify()
