from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from components.core_model import FieldPath
from components.errors import DuplicateOutput


class MatchKind(str, Enum):
    EXACT = "Exact"
    SEMANTIC = "Semantic"


@dataclass(frozen=True)
class MappingEntry:
    input: FieldPath
    output: FieldPath
    kind: MatchKind
    score: float = 1.0
    # Runner-up inputs above the threshold when top_k > 1.
    alternatives: tuple[FieldPath, ...] = ()

    def __post_init__(self):
        if self.kind is MatchKind.EXACT and self.score != 1.0:
            raise ValueError("exact entries always score 1.0")
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score {self.score} outside [0, 1]")

    def to_dict(self) -> dict:
        data = {
            "input": self.input.render(),
            "output": self.output.render(),
            "kind": self.kind.value,
            "score": round(self.score, 6),
        }
        if self.alternatives:
            data["alternatives"] = [a.render() for a in self.alternatives]
        return data


@dataclass(frozen=True)
class MappingTable:
    entries: tuple[MappingEntry, ...] = ()
    unmatched_outputs: tuple[FieldPath, ...] = ()

    @property
    def exact(self) -> list[MappingEntry]:
        return [e for e in self.entries if e.kind is MatchKind.EXACT]

    @property
    def semantic(self) -> list[MappingEntry]:
        return [e for e in self.entries if e.kind is MatchKind.SEMANTIC]

    def rows(self) -> list[tuple[str, str]]:
        return [(e.input.render(), e.output.render()) for e in self.entries]

    def render(self) -> str:
        """Two-column ``Input Field -> Output Field`` table."""
        rows = self.rows()
        width = max([len("Input Field")] + [len(i) for i, _ in rows])
        lines = [f"{'Input Field':<{width}} → Output Field"]
        lines += [f"{i:<{width}} → {o}" for i, o in rows]
        for path in self.unmatched_outputs:
            lines.append(f"{'(unmapped)':<{width}} → {path.render()}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "entries": [e.to_dict() for e in self.entries],
            "unmatched_outputs": [p.render() for p in self.unmatched_outputs],
        }


def merge_mappings(exact, semantic, output_leaves=None) -> MappingTable:
    """Exact entries first, then semantic, each in output declaration order.

    With ``output_leaves`` given, leaves not covered by any entry become the
    table's unmatched outputs.
    """
    seen = set()
    for entry in [*exact, *semantic]:
        if entry.output in seen:
            raise DuplicateOutput(entry.output.render())
        seen.add(entry.output)

    if output_leaves is None:
        return MappingTable(tuple(exact) + tuple(semantic))

    order = {path: i for i, path in enumerate(output_leaves)}
    def ranked(entry):
        return order.get(entry.output, len(order))

    entries = tuple(sorted(exact, key=ranked)) + tuple(sorted(semantic, key=ranked))
    unmatched = tuple(p for p in output_leaves if p not in seen)
    return MappingTable(entries, unmatched)
