"""ClassInfo extraction from compiled classes inside dependency archives.

Reads the classfile header, constant pool and fields table; methods and
class attributes are never decoded. Generic element types come from the
field ``Signature`` attribute, annotations from
``RuntimeVisibleAnnotations``.
"""

from __future__ import annotations

import logging
import struct
import zipfile
from dataclasses import dataclass
from pathlib import Path

from components.config import RetrieverConfig
from components.core_model import ClassInfo, FieldInfo, Origin, simple_name
from components.errors import (
    ArchiveUnreadable,
    BadMagic,
    MalformedClassfile,
    TruncatedClassfile,
    UnsupportedMajorVersion,
)
from components.retriever.types import container_of

logger = logging.getLogger(__name__)

MAGIC = 0xCAFEBABE
MIN_MAJOR = 45

ACC_STATIC = 0x0008
ACC_SYNTHETIC = 0x1000
ACC_ENUM = 0x4000

_U1 = struct.Struct(">B")
_U2 = struct.Struct(">H")
_U4 = struct.Struct(">I")

CONSTANT_UTF8 = 1
CONSTANT_INTEGER = 3
CONSTANT_CLASS = 7
CONSTANT_STRING = 8
# Payload sizes of the fixed-width constants; Utf8 is length-prefixed.
_CONSTANT_SIZES = {
    3: 4, 4: 4, 5: 8, 6: 8, 7: 2, 8: 2, 9: 4, 10: 4, 11: 4, 12: 4,
    15: 3, 16: 2, 17: 4, 18: 4, 19: 2, 20: 2,
}
_WIDE_CONSTANTS = (5, 6)

_BASE_TYPES = {
    "B": "byte", "C": "char", "D": "double", "F": "float",
    "I": "int", "J": "long", "S": "short", "Z": "boolean", "V": "void",
}
# Roots every class extends implicitly; not worth a superclass edge.
_IMPLICIT_SUPERS = frozenset(("java.lang.Object", "java.lang.Enum", "java.lang.Record"))


@dataclass(frozen=True)
class CompiledClass:
    archive: Path
    entry: str
    bytes: bytes

    @classmethod
    def read(cls, archive, entry: str) -> "CompiledClass":
        try:
            with zipfile.ZipFile(archive) as zf:
                return cls(Path(archive), entry, zf.read(entry))
        except (zipfile.BadZipFile, KeyError, OSError) as e:
            raise ArchiveUnreadable(archive, str(e)) from e


class ByteReader:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, size: int) -> bytes:
        end = self.offset + size
        if end > len(self.data):
            raise TruncatedClassfile(self.offset, size)
        chunk = self.data[self.offset:end]
        self.offset = end
        return chunk

    def _unpack(self, fmt: struct.Struct) -> int:
        return fmt.unpack(self.take(fmt.size))[0]

    def u1(self) -> int:
        return self._unpack(_U1)

    def u2(self) -> int:
        return self._unpack(_U2)

    def u4(self) -> int:
        return self._unpack(_U4)


def decode_modified_utf8(raw: bytes) -> str:
    """Decode the JVM's modified UTF-8: NUL as C0 80, supplementary chars as surrogate pairs."""
    chars = []
    i, n = 0, len(raw)
    while i < n:
        b = raw[i]
        if b < 0x80:
            chars.append(b)
            i += 1
        elif b & 0xE0 == 0xC0 and i + 1 < n:
            chars.append(((b & 0x1F) << 6) | (raw[i + 1] & 0x3F))
            i += 2
        elif b & 0xF0 == 0xE0 and i + 2 < n:
            chars.append(((b & 0x0F) << 12) | ((raw[i + 1] & 0x3F) << 6) | (raw[i + 2] & 0x3F))
            i += 3
        else:
            chars.append(0xFFFD)
            i += 1
    units = "".join(chr(c) for c in chars)
    return units.encode("utf-16", "surrogatepass").decode("utf-16", "replace")


class ConstantPool:
    def __init__(self, reader: ByteReader):
        count = reader.u2()
        self._entries: dict[int, tuple[int, object]] = {}
        index = 1
        while index < count:
            tag = reader.u1()
            if tag == CONSTANT_UTF8:
                length = reader.u2()
                value = decode_modified_utf8(reader.take(length))
            elif tag in (CONSTANT_CLASS, CONSTANT_STRING):
                value = reader.u2()
            elif tag in _CONSTANT_SIZES:
                value = reader.take(_CONSTANT_SIZES[tag])
            else:
                raise MalformedClassfile(f"unknown constant pool tag {tag} at index {index}")
            self._entries[index] = (tag, value)
            index += 2 if tag in _WIDE_CONSTANTS else 1
        logger.debug("Constant pool: %d slots", count - 1)

    def utf8(self, index: int) -> str:
        tag, value = self._entries.get(index, (None, None))
        if tag != CONSTANT_UTF8:
            raise MalformedClassfile(f"constant #{index} is not Utf8")
        return value

    def class_name(self, index: int) -> str:
        tag, value = self._entries.get(index, (None, None))
        if tag != CONSTANT_CLASS:
            raise MalformedClassfile(f"constant #{index} is not a Class")
        return self.utf8(value)


def _binary_to_qualified(internal: str) -> str:
    return internal.replace("/", ".").replace("$", ".")


def descriptor_to_type(descriptor: str) -> str:
    """``[Ljava/lang/String;`` -> ``java.lang.String[]``."""
    dims = 0
    while descriptor.startswith("["):
        dims += 1
        descriptor = descriptor[1:]
    if descriptor.startswith("L") and descriptor.endswith(";"):
        base = _binary_to_qualified(descriptor[1:-1])
    else:
        base = _BASE_TYPES.get(descriptor, descriptor)
    return base + "[]" * dims


class _SignatureReader:
    """Parses a field signature (a reference type signature) into type text."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def type_signature(self) -> str:
        ch = self._peek()
        if ch in _BASE_TYPES:
            self.pos += 1
            return _BASE_TYPES[ch]
        if ch == "[":
            self.pos += 1
            return self.type_signature() + "[]"
        if ch == "T":
            end = self.text.find(";", self.pos)
            if end < 0:
                raise MalformedClassfile(f"unterminated type variable in signature {self.text!r}")
            name = self.text[self.pos + 1:end]
            self.pos = end + 1
            return name
        if ch == "L":
            return self._class_signature()
        raise MalformedClassfile(f"bad signature {self.text!r} at {self.pos}")

    def _class_signature(self) -> str:
        self.pos += 1
        rendered = ""
        name = []
        while True:
            ch = self._peek()
            if ch == "<":
                rendered += _binary_to_qualified("".join(name)) + self._type_arguments()
                name = []
            elif ch == ".":
                rendered += _binary_to_qualified("".join(name)) + "."
                name = []
                self.pos += 1
            elif ch == ";":
                rendered += _binary_to_qualified("".join(name))
                self.pos += 1
                return rendered
            elif not ch:
                raise MalformedClassfile(f"unterminated signature {self.text!r}")
            else:
                name.append(ch)
                self.pos += 1

    def _type_arguments(self) -> str:
        self.pos += 1
        args = []
        while self._peek() != ">":
            ch = self._peek()
            if ch == "*":
                self.pos += 1
                args.append("?")
            elif ch == "+":
                self.pos += 1
                args.append("? extends " + self.type_signature())
            elif ch == "-":
                self.pos += 1
                args.append("? super " + self.type_signature())
            else:
                args.append(self.type_signature())
        self.pos += 1
        return "<" + ", ".join(args) + ">"


def signature_to_type(signature: str) -> str:
    return _SignatureReader(signature).type_signature()


def _element_value(reader: ByteReader, pool: ConstantPool, notes: list[str]):
    tag = chr(reader.u1())
    if tag == "s":
        text = pool.utf8(reader.u2()).strip()
        if text:
            notes.append(text)
    elif tag in "BCDFIJSZc":
        reader.u2()
    elif tag == "e":
        reader.u2()
        reader.u2()
    elif tag == "@":
        _annotation(reader, pool, notes)
    elif tag == "[":
        for _ in range(reader.u2()):
            _element_value(reader, pool, notes)
    else:
        raise MalformedClassfile(f"unknown annotation element tag {tag!r}")


def _annotation(reader: ByteReader, pool: ConstantPool, notes: list[str]) -> str:
    type_name = descriptor_to_type(pool.utf8(reader.u2()))
    for _ in range(reader.u2()):
        reader.u2()
        _element_value(reader, pool, notes)
    return simple_name(type_name)


def _field(reader: ByteReader, pool: ConstantPool, config: RetrieverConfig) -> FieldInfo | None:
    access = reader.u2()
    name = pool.utf8(reader.u2())
    descriptor = pool.utf8(reader.u2())
    signature = None
    annotations: list[str] = []
    notes: list[str] = []
    for _ in range(reader.u2()):
        attr_name = pool.utf8(reader.u2())
        body = ByteReader(reader.take(reader.u4()))
        if attr_name == "Signature":
            signature = pool.utf8(body.u2())
        elif attr_name == "RuntimeVisibleAnnotations":
            for _ in range(body.u2()):
                annotations.append(_annotation(body, pool, notes))
    if access & (ACC_STATIC | ACC_SYNTHETIC):
        return None
    declared = signature_to_type(signature) if signature else descriptor_to_type(descriptor)
    kind, element = container_of(declared, config.wrapper_types)
    return FieldInfo(
        name=name,
        declared_type=declared,
        container_kind=kind,
        element_type=element,
        comment=None,
        annotations=tuple(annotations),
        notes=tuple(notes),
    )


def extract_class_from_archive(cc: CompiledClass, config: RetrieverConfig | None = None) -> ClassInfo:
    """Decode the class name, superclass and instance fields of a classfile."""
    config = config or RetrieverConfig()
    reader = ByteReader(cc.bytes)
    magic = reader.u4()
    if magic != MAGIC:
        raise BadMagic(magic)
    reader.u2()  # minor
    major = reader.u2()
    if major > config.max_major_version or major < MIN_MAJOR:
        raise UnsupportedMajorVersion(major, config.max_major_version)

    pool = ConstantPool(reader)
    access = reader.u2()
    this_name = _binary_to_qualified(pool.class_name(reader.u2()))
    super_index = reader.u2()
    superclass = _binary_to_qualified(pool.class_name(super_index)) if super_index else None
    if superclass in _IMPLICIT_SUPERS:
        superclass = None
    for _ in range(reader.u2()):
        reader.u2()

    fields = []
    for _ in range(reader.u2()):
        info = _field(reader, pool, config)
        if info is not None:
            fields.append(info)

    package, _, simple = this_name.rpartition(".")
    logger.debug("Extracted %s from %s!%s: %d fields", this_name, cc.archive.name, cc.entry, len(fields))
    return ClassInfo(
        qualified_name=this_name,
        simple_name=simple,
        package=package,
        fields=tuple(fields),
        comment=None,
        origin=Origin.external(cc.archive, this_name, cc.entry),
        superclass=superclass,
        is_enum=bool(access & ACC_ENUM),
    )
