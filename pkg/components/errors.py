"""Exception hierarchy shared by every pipeline stage."""

from __future__ import annotations


class CCCIError(Exception):
    """Base class for all pipeline errors."""


class ConfigError(CCCIError):
    """Invalid or unknown configuration value."""


# core_model

class MissingOutput(CCCIError):
    def __init__(self):
        super().__init__("task definition declares no output class")


class MissingInputs(CCCIError):
    def __init__(self):
        super().__init__("task definition declares no input classes")


class MalformedSection(CCCIError):
    def __init__(self, header: str, line: int):
        self.header = header
        self.line = line
        super().__init__(f"unknown section header {header!r} at line {line}")


class UnknownCardinality(CCCIError):
    def __init__(self, cardinality: str, line: int):
        self.cardinality = cardinality
        self.line = line
        super().__init__(f"unknown cardinality {cardinality!r} at line {line}")


class DanglingChild(CCCIError):
    def __init__(self, child: str, line: int):
        self.child = child
        self.line = line
        super().__init__(f"relation child {child!r} at line {line} has no parent table")


# classifier

class Unresolved(CCCIError):
    def __init__(self, class_name: str):
        self.class_name = class_name
        super().__init__(f"class {class_name} found neither in the project nor in any archive")


class AmbiguousLocal(CCCIError):
    def __init__(self, class_name: str, candidates):
        self.class_name = class_name
        self.candidates = list(candidates)
        listed = ", ".join(str(c) for c in self.candidates)
        super().__init__(f"class {class_name} is declared by several project files: {listed}")


# retriever

class SubjectSyntaxError(CCCIError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class ClassNotFound(CCCIError):
    def __init__(self, class_name: str, where: str):
        self.class_name = class_name
        super().__init__(f"class {class_name} not declared in {where}")


class ArchiveUnreadable(CCCIError):
    def __init__(self, archive, reason: str):
        self.archive = str(archive)
        super().__init__(f"cannot read archive {archive}: {reason}")


class BadMagic(CCCIError):
    def __init__(self, magic: int):
        self.magic = magic
        super().__init__(f"not a classfile: magic 0x{magic:08X}, expected 0xCAFEBABE")


class TruncatedClassfile(CCCIError):
    def __init__(self, offset: int, wanted: int):
        self.offset = offset
        super().__init__(f"classfile truncated: needed {wanted} bytes at offset {offset}")


class UnsupportedMajorVersion(CCCIError):
    def __init__(self, major: int, ceiling: int):
        self.major = major
        self.ceiling = ceiling
        super().__init__(f"classfile major version {major} outside supported range 45..{ceiling}")


class MalformedClassfile(CCCIError):
    """Structurally invalid classfile content (bad constant tag, index or signature)."""


# matcher

class ProviderUnavailable(CCCIError):
    """Embedding provider could not be reached or is not configured."""


class DimensionMismatch(CCCIError):
    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"embedding dimension {actual} does not match {expected}")


class ZeroVector(CCCIError):
    def __init__(self):
        super().__init__("cosine similarity is undefined for an all-zero vector")


class DuplicateOutput(CCCIError):
    def __init__(self, output_path: str):
        self.output_path = output_path
        super().__init__(f"output field {output_path} mapped more than once")


# constructor

class TokenBudgetExceeded(CCCIError):
    def __init__(self, estimate: int, budget: int):
        self.estimate = estimate
        self.budget = budget
        super().__init__(f"prompt needs ~{estimate} tokens, budget is {budget}")


# completer

class TransportError(CCCIError):
    def __init__(self, message: str, attempts: int):
        self.attempts = attempts
        super().__init__(f"{message} (after {attempts} attempts)")


class EmptyCompletion(CCCIError):
    def __init__(self):
        super().__init__("the model returned an empty completion")


class AuthError(CCCIError):
    """Completion endpoint rejected the credentials."""


class CompletionRejected(CCCIError):
    """Completion endpoint refused the request itself (bad request, unknown model)."""


# metrics

class EmptyReference(CCCIError):
    def __init__(self):
        super().__init__("reference token stream is empty")


class ReferenceUnparseable(CCCIError):
    def __init__(self, cause: Exception):
        self.cause = cause
        super().__init__(f"reference does not parse: {cause}")


class InvalidWeights(CCCIError):
    def __init__(self, weights):
        self.weights = tuple(weights)
        super().__init__(f"CodeBLEU weights must be four non-negative numbers summing to 1, got {self.weights}")


# evaluator

class WorkspaceSetupFailed(CCCIError):
    """Build-pass workspace could not be prepared."""


class BuildTimeout(CCCIError):
    def __init__(self, stage: str, seconds: float, result=None):
        self.stage = stage
        self.seconds = seconds
        self.result = result
        super().__init__(f"{stage} stage exceeded {seconds:g}s")


class EmptyCorpus(CCCIError):
    def __init__(self, where: str):
        super().__init__(f"no corpus entries to evaluate in {where}")
