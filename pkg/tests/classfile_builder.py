"""Writes minimal but valid classfiles and jars for the retriever tests.

Only what the extractor reads is emitted: constant pool, access flags, this
and super class, fields with optional ``Signature`` and
``RuntimeVisibleAnnotations`` attributes. Methods and class attributes are empty.
"""

import struct
import zipfile
from dataclasses import dataclass, field

ACC_PUBLIC = 0x0001
ACC_PRIVATE = 0x0002
ACC_STATIC = 0x0008
ACC_FINAL = 0x0010
ACC_SUPER = 0x0020
ACC_SYNTHETIC = 0x1000
ACC_ENUM = 0x4000

_PRIMITIVE_DESCRIPTORS = {
    "byte": "B", "char": "C", "double": "D", "float": "F",
    "int": "I", "long": "J", "short": "S", "boolean": "Z",
}


def descriptor(type_name: str) -> str:
    """``java.lang.String`` -> ``Ljava/lang/String;``, ``int[]`` -> ``[I``."""
    dims = 0
    while type_name.endswith("[]"):
        dims += 1
        type_name = type_name[:-2]
    if type_name in _PRIMITIVE_DESCRIPTORS:
        base = _PRIMITIVE_DESCRIPTORS[type_name]
    else:
        base = "L" + type_name.replace(".", "/") + ";"
    return "[" * dims + base


@dataclass
class FieldSpec:
    name: str
    type_name: str
    signature: str | None = None
    # (annotation type, {element name: string value})
    annotations: list = field(default_factory=list)
    access: int = ACC_PRIVATE


class _Pool:
    def __init__(self):
        self.entries: list[bytes] = []
        self.index: dict[tuple, int] = {}

    def _add(self, key, payload: bytes) -> int:
        if key not in self.index:
            self.entries.append(payload)
            self.index[key] = len(self.entries)
        return self.index[key]

    def utf8(self, text: str) -> int:
        raw = text.encode("utf-8")
        return self._add(("utf8", text), struct.pack(">BH", 1, len(raw)) + raw)

    def class_ref(self, internal_name: str) -> int:
        name_index = self.utf8(internal_name)
        return self._add(("class", internal_name), struct.pack(">BH", 7, name_index))

    def integer(self, value: int) -> int:
        return self._add(("int", value), struct.pack(">Bi", 3, value))

    def long(self, value: int) -> int:
        # Longs take two slots.
        idx = self._add(("long", value), struct.pack(">Bq", 5, value))
        self.entries.append(b"")
        return idx

    def to_bytes(self) -> bytes:
        return struct.pack(">H", len(self.entries) + 1) + b"".join(self.entries)


def _annotations_attribute(pool: _Pool, annotations) -> bytes:
    body = struct.pack(">H", len(annotations))
    for type_name, elements in annotations:
        body += struct.pack(">HH", pool.utf8(descriptor(type_name)), len(elements))
        for name, value in elements.items():
            body += struct.pack(">HBH", pool.utf8(name), ord("s"), pool.utf8(value))
    return struct.pack(">HI", pool.utf8("RuntimeVisibleAnnotations"), len(body)) + body


def build_classfile(
    qualified_name: str,
    fields=(),
    superclass: str = "java.lang.Object",
    access: int = ACC_PUBLIC | ACC_SUPER,
    major: int = 52,
    magic: int = 0xCAFEBABE,
    pad_constants: bool = False,
) -> bytes:
    """Classfile bytes for a class with the given fields."""
    pool = _Pool()
    this_index = pool.class_ref(qualified_name.replace(".", "/"))
    super_index = pool.class_ref(superclass.replace(".", "/")) if superclass else 0
    if pad_constants:
        pool.integer(42)
        pool.long(1 << 40)

    field_blobs = []
    for fs in fields:
        attributes = []
        if fs.signature:
            attributes.append(struct.pack(">HIH", pool.utf8("Signature"), 2, pool.utf8(fs.signature)))
        if fs.annotations:
            attributes.append(_annotations_attribute(pool, fs.annotations))
        blob = struct.pack(
            ">HHHH",
            fs.access,
            pool.utf8(fs.name),
            pool.utf8(descriptor(fs.type_name)),
            len(attributes),
        )
        field_blobs.append(blob + b"".join(attributes))

    head = struct.pack(">IHH", magic, 0, major)
    body = struct.pack(">HHHH", access, this_index, super_index, 0)
    body += struct.pack(">H", len(field_blobs)) + b"".join(field_blobs)
    body += struct.pack(">HH", 0, 0)
    return head + pool.to_bytes() + body


def write_jar(path, classes: dict[str, bytes]):
    """Write a jar holding ``{qualified name: classfile bytes}``; nested classes use ``Outer$Inner``."""
    with zipfile.ZipFile(path, "w") as zf:
        zf.writestr("META-INF/MANIFEST.MF", "Manifest-Version: 1.0\n")
        for name, data in sorted(classes.items()):
            zf.writestr(name.replace(".", "/") + ".class", data)
    return path
