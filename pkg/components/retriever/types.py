"""Type-text rules shared by source and classfile extraction.

Type text is fully qualified and keeps generic arguments, e.g.
``java.util.List<com.xx.WarehouseArea>``.
"""

from __future__ import annotations

from components.core_model import ContainerKind, erase_generics, simple_name

PRIMITIVES = frozenset(("boolean", "byte", "char", "short", "int", "long", "float", "double"))

LIST_TYPES = frozenset((
    "List", "ArrayList", "LinkedList", "Set", "HashSet", "LinkedHashSet", "TreeSet",
    "SortedSet", "Collection", "Iterable",
))
OPTIONAL_TYPES = frozenset(("Optional",))

# Simple names that resolve without an import.
JAVA_LANG = frozenset((
    "String", "Integer", "Long", "Boolean", "Double", "Float", "Short", "Byte",
    "Character", "Object", "Number", "CharSequence", "Void", "Enum", "Record",
))
# Standard classes code usually imports; used when an import is missing or a wildcard.
WELL_KNOWN = {
    **{name: "java.util" for name in (
        "List", "ArrayList", "LinkedList", "Set", "HashSet", "LinkedHashSet", "TreeSet",
        "SortedSet", "Collection", "Map", "HashMap", "LinkedHashMap", "TreeMap",
        "Optional", "Date", "UUID",
    )},
    **{name: "java.time" for name in (
        "LocalDate", "LocalDateTime", "LocalTime", "Instant", "ZonedDateTime",
        "OffsetDateTime", "Duration",
    )},
    "BigDecimal": "java.math",
    "BigInteger": "java.math",
    "Timestamp": "java.sql",
}


def split_type_args(text: str) -> tuple[str, list[str]]:
    """``Map<K, List<V>>`` -> (``Map``, [``K``, ``List<V>``])."""
    text = text.strip()
    open_at = text.find("<")
    if open_at < 0 or not text.endswith(">"):
        return text, []
    base = text[:open_at].strip()
    inner = text[open_at + 1:-1]
    args, depth, current = [], 0, []
    for ch in inner:
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth -= 1
        if ch == "," and depth == 0:
            args.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    if "".join(current).strip():
        args.append("".join(current).strip())
    return base, args


def strip_wildcard(arg: str) -> str:
    if arg == "?":
        return "java.lang.Object"
    for prefix in ("? extends ", "? super "):
        if arg.startswith(prefix):
            return arg[len(prefix):]
    return arg


def container_of(type_text: str, wrapper_types=()) -> tuple[ContainerKind, str | None]:
    """Container kind and element type text of a qualified type."""
    if type_text.endswith("[]"):
        return ContainerKind.LIST, type_text[:-2]
    base, args = split_type_args(type_text)
    name = simple_name(base)
    element = strip_wildcard(args[0]) if args else "java.lang.Object"
    if name in LIST_TYPES:
        return ContainerKind.LIST, element
    if name in OPTIONAL_TYPES:
        return ContainerKind.OPTIONAL, element
    if name in wrapper_types:
        return ContainerKind.WRAPPER, element
    return ContainerKind.SCALAR, None


def is_scalar_type(type_text: str) -> bool:
    """Leaf types: primitives, anything from the JDK, and type variables."""
    base = erase_generics(type_text).removesuffix("[]")
    if base in PRIMITIVES or base in JAVA_LANG or base in WELL_KNOWN:
        return True
    if base.startswith(("java.", "javax.")):
        return True
    # Single upper-case letters are type variables.
    return len(base) == 1 and base.isupper()


def display_type(type_text: str) -> str:
    """Drop ``java.lang.`` and other package prefixes for prompt rendering."""
    base, args = split_type_args(type_text.removesuffix("[]"))
    suffix = "[]" if type_text.endswith("[]") else ""
    rendered = simple_name(base) if "." in base else base
    if args:
        rendered += "<" + ", ".join(display_type(a) for a in args) + ">"
    return rendered + suffix
