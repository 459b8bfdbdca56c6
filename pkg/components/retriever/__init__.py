"""Class metadata from project sources and dependency archives."""

from components.retriever.classfile import CompiledClass, extract_class_from_archive
from components.retriever.hierarchy import ClassLoader, resolve_hierarchy
from components.retriever.source import SourceUnit, load_source_unit, parse_source_class

__all__ = [
    "ClassLoader",
    "CompiledClass",
    "SourceUnit",
    "extract_class_from_archive",
    "load_source_unit",
    "parse_source_class",
    "resolve_hierarchy",
]
