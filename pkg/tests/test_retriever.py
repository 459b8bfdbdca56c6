import dataclasses
from pathlib import Path

import pytest

from components.classifier import Classifier, classify
from components.config import RetrieverConfig
from components.core_model import ContainerKind, FieldPath, TaskDefinition
from components.errors import (
    ArchiveUnreadable,
    BadMagic,
    MalformedClassfile,
    TruncatedClassfile,
    Unresolved,
    UnsupportedMajorVersion,
)
from components.retriever import (
    CompiledClass,
    extract_class_from_archive,
    load_source_unit,
    parse_source_class,
    resolve_hierarchy,
)
from tests.classfile_builder import FieldSpec, build_classfile
from tests.fixture_factory import goods_api_classes, owner_user_class, warehouse_api_classes


def _compiled(data: bytes, entry="com/xx/Sample.class") -> CompiledClass:
    return CompiledClass(archive=Path("sample.jar"), entry=entry, bytes=data)


def test_source_class_fields_and_comments(wms_task):
    path = wms_task.project_root / "com" / "xx" / "wms" / "dto" / "InventoryInfoDTO.java"
    info = parse_source_class(load_source_unit(path), "InventoryInfoDTO")
    assert info.qualified_name == "com.xx.wms.dto.InventoryInfoDTO"
    assert info.comment == "Inventory query result"
    assert [f.name for f in info.fields] == ["warehouseName", "inventoryName", "availableQuantity"]
    assert info.fields[0].declared_type == "java.lang.String"
    assert info.fields[1].comment == "Name of the inventory"
    assert info.fields[2].declared_type == "int"
    assert info.origin.is_local


def test_source_types_are_qualified_against_the_package(wms_task):
    path = wms_task.project_root / "com" / "xx" / "wms" / "dto" / "InventoryResponseDTO.java"
    info = parse_source_class(load_source_unit(path), "InventoryResponseDTO")
    assert info.field("sku").declared_type == "com.xx.wms.dto.SKUInfo"


def test_source_record_enum_and_annotation_notes(tmp_path):
    path = tmp_path / "Shapes.java"
    path.write_text(
        "package geo;\n"
        "public class Shapes {\n"
        "    /** A corner */\n"
        "    public record Point(int x, @ApiModelProperty(value = \"Height\") int y) {}\n"
        "    public enum Kind { ROUND, SQUARE; private String label; }\n"
        "    @ApiModelProperty(\"Shape kind\")\n"
        "    private Kind kind;\n"
        "    private Point origin, corners[];\n"
        "}\n",
        encoding="utf-8",
    )
    unit = load_source_unit(path)
    assert unit.declared_classes == ("Shapes", "Point", "Kind")
    point = parse_source_class(unit, "geo.Shapes.Point")
    assert (point.qualified_name, point.package, point.comment) == ("geo.Shapes.Point", "geo.Shapes", "A corner")
    assert [(f.name, f.declared_type) for f in point.fields] == [("x", "int"), ("y", "int")]
    assert point.field("y").notes == ("Height",)
    kind = parse_source_class(unit, "Kind")
    assert kind.is_enum and [f.name for f in kind.fields] == ["label"]
    shapes = parse_source_class(unit, "Shapes")
    assert shapes.field("kind").declared_type == "geo.Shapes.Kind"
    assert shapes.field("kind").description == "Shape kind"
    assert shapes.field("corners").declared_type == "geo.Shapes.Point[]"


def test_source_list_field_and_static_fields(tmp_path):
    path = tmp_path / "Order.java"
    path.write_text(
        "package shop;\n"
        "import java.util.List;\n"
        "public class Order {\n"
        "    private static final long serialVersionUID = 1L;\n"
        "    private List<Line> lines; // order lines\n"
        "    private int a, b;\n"
        "}\n",
        encoding="utf-8",
    )
    info = parse_source_class(load_source_unit(path), "Order")
    assert [f.name for f in info.fields] == ["lines", "a", "b"]
    lines = info.fields[0]
    assert lines.container_kind is ContainerKind.LIST
    assert lines.element_type == "shop.Line"
    assert lines.comment == "order lines"


def test_compiled_class_fields():
    data = goods_api_classes()["com.xx.goods.dto.SKUInfoDTO"]
    info = extract_class_from_archive(_compiled(data))
    assert info.qualified_name == "com.xx.goods.dto.SKUInfoDTO"
    assert info.simple_name == "SKUInfoDTO"
    assert info.package == "com.xx.goods.dto"
    # the static serialVersionUID is skipped
    assert [(f.name, f.declared_type) for f in info.fields] == [
        ("inventoryId", "java.lang.Long"),
        ("skuName", "java.lang.String"),
        ("ownerUserId", "java.lang.Long"),
        ("user", "com.xx.user.dto.OwnerUser"),
    ]
    assert info.superclass is None
    assert not info.origin.is_local


def test_compiled_generic_list_uses_the_signature():
    data = warehouse_api_classes()["com.xx.warehouse.dto.WarehouseDTO"]
    areas = extract_class_from_archive(_compiled(data)).field("areas")
    assert areas.container_kind is ContainerKind.LIST
    assert areas.element_type == "com.xx.warehouse.dto.WarehouseArea"


def test_compiled_annotation_strings_become_notes():
    owner = extract_class_from_archive(_compiled(owner_user_class()))
    name = owner.field("name")
    assert name.annotations == ("ApiModelProperty",)
    assert name.notes == ("Owner name",)
    assert name.description == "Owner name"


def test_wide_constants_keep_pool_indices_aligned():
    data = build_classfile("p.Padded", [FieldSpec("count", "int")], pad_constants=True)
    info = extract_class_from_archive(_compiled(data))
    assert [f.name for f in info.fields] == ["count"]


def test_bad_magic():
    with pytest.raises(BadMagic):
        extract_class_from_archive(_compiled(build_classfile("p.A", magic=0xDEADBEEF)))


def test_major_version_out_of_range():
    with pytest.raises(UnsupportedMajorVersion) as info:
        extract_class_from_archive(_compiled(build_classfile("p.A", major=70)))
    assert info.value.major == 70


def test_truncated_classfile():
    data = build_classfile("p.A", [FieldSpec("x", "int")])
    with pytest.raises(TruncatedClassfile):
        extract_class_from_archive(_compiled(data[:24]))


def test_wms_hierarchy(wms_task):
    cmap = classify(wms_task)
    graph = resolve_hierarchy(wms_task.class_names, cmap, wms_task)
    assert set(graph.nodes) == {
        "com.xx.wms.dto.InventoryInfoDTO",
        "com.xx.goods.dto.SKUInfoDTO",
        "com.xx.user.dto.UserDTO",
        "com.xx.warehouse.dto.WarehouseDTO",
        "com.xx.wms.dto.InventoryResponseDTO",
        "com.xx.user.dto.OwnerUser",
        "com.xx.warehouse.dto.WarehouseArea",
        "com.xx.wms.dto.SKUInfo",
    }
    assert {(e.owner.rsplit(".", 1)[1], e.field) for e in graph.edges} == {
        ("SKUInfoDTO", "user"),
        ("WarehouseDTO", "owner"),
        ("WarehouseDTO", "areas"),
        ("InventoryResponseDTO", "sku"),
    }
    # one node for OwnerUser, reached from two owners
    assert sum(1 for e in graph.edges if e.child == "com.xx.user.dto.OwnerUser") == 2
    assert graph.cycle_marks == frozenset()
    assert [p.dotted for p in graph.leaf_paths("com.xx.goods.dto.SKUInfoDTO")] == [
        "inventoryId", "skuName", "ownerUserId", "user.name", "user.contactInfo",
    ]


def test_hierarchy_depth_limit(wms_task):
    cmap = classify(wms_task)
    graph = resolve_hierarchy(["SKUInfoDTO"], cmap, wms_task, max_depth=1)
    assert list(graph.nodes) == ["com.xx.goods.dto.SKUInfoDTO"]
    assert graph.edges == ()
    assert graph.leaf_paths("com.xx.goods.dto.SKUInfoDTO")[-1] == FieldPath("com.xx.goods.dto.SKUInfoDTO", ("user",))


def test_scalar_only_root_has_no_edges(wms_task):
    cmap = classify(wms_task)
    graph = resolve_hierarchy(["InventoryInfoDTO"], cmap, wms_task)
    assert len(graph.nodes) == 1 and graph.edges == ()


def _local_task(tmp_path, sources: dict[str, str], inputs, output) -> TaskDefinition:
    src = tmp_path / "src"
    for name, text in sources.items():
        path = src / "p" / f"{name}.java"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    return TaskDefinition(src, (), tuple(inputs), output)


def test_cycle_is_marked_and_leaf_paths_terminate(tmp_path):
    task = _local_task(tmp_path, {
        "Parent": "package p;\npublic class Parent { private String name; private Child child; }\n",
        "Child": "package p;\npublic class Child { private int age; private Parent parent; }\n",
    }, ["Parent"], "Child")
    classifier = Classifier(task)
    graph = resolve_hierarchy(["Parent"], classifier.classify(), task, classifier=classifier)
    assert graph.cycle_marks == frozenset({("p.Child", "parent")})
    assert [p.dotted for p in graph.leaf_paths("p.Parent")] == ["name", "child.age", "child.parent"]


def test_inherited_fields_come_after_own_fields(tmp_path):
    task = _local_task(tmp_path, {
        "Base": "package p;\npublic class Base { private Long id; }\n",
        "Item": "package p;\npublic class Item extends Base { private String label; }\n",
    }, ["Item"], "Item")
    classifier = Classifier(task)
    graph = resolve_hierarchy(["Item"], classifier.classify(), task, classifier=classifier)
    assert dict(graph.superclasses) == {"p.Item": "p.Base"}
    assert [p.dotted for p in graph.leaf_paths("p.Item")] == ["label", "id"]


def test_unknown_field_type_strict_and_lenient(tmp_path):
    task = _local_task(tmp_path, {
        "Holder": "package p;\npublic class Holder { private Mystery thing; private int n; }\n",
    }, ["Holder"], "Holder")
    classifier = Classifier(task)
    cmap = classifier.classify()
    with pytest.raises(Unresolved):
        resolve_hierarchy(["Holder"], cmap, task, classifier=classifier)
    lenient = dataclasses.replace(RetrieverConfig(), strict=False)
    graph = resolve_hierarchy(["Holder"], cmap, task, config=lenient, classifier=classifier)
    assert [p.dotted for p in graph.leaf_paths("p.Holder")] == ["thing", "n"]


def test_inherited_self_reference_is_cut(tmp_path):
    task = _local_task(tmp_path, {
        "Base": "package p;\npublic class Base { private Base parent; }\n",
        "Node": "package p;\npublic class Node extends Base { private String label; }\n",
    }, ["Node"], "Node")
    classifier = Classifier(task)
    graph = resolve_hierarchy(["Node"], classifier.classify(), task, classifier=classifier)
    assert graph.cycle_marks == frozenset({("p.Base", "parent")})
    assert [p.dotted for p in graph.leaf_paths("p.Node")] == ["label", "parent"]


def test_inherited_field_pointing_back_at_the_subclass_is_cut(tmp_path):
    task = _local_task(tmp_path, {
        "Base": "package p;\npublic class Base { private Node next; }\n",
        "Node": "package p;\npublic class Node extends Base { private String label; }\n",
    }, ["Node"], "Node")
    classifier = Classifier(task)
    graph = resolve_hierarchy(["Node"], classifier.classify(), task, classifier=classifier)
    assert graph.cycle_marks == frozenset({("p.Base", "next")})
    assert [p.dotted for p in graph.leaf_paths("p.Node")] == ["label", "next"]


def test_source_and_compiled_extraction_agree(tmp_path):
    path = tmp_path / "Sample.java"
    path.write_text(
        "package p;\n"
        "import java.util.List;\n"
        "public class Sample extends Base {\n"
        "    private Long id;\n"
        "    private String name;\n"
        "    private int[] codes;\n"
        "    private List<Item> items;\n"
        "    private Item main;\n"
        "}\n",
        encoding="utf-8",
    )
    source = parse_source_class(load_source_unit(path), "Sample")
    compiled = extract_class_from_archive(_compiled(build_classfile(
        "p.Sample",
        [
            FieldSpec("id", "java.lang.Long"),
            FieldSpec("name", "java.lang.String"),
            FieldSpec("codes", "int[]"),
            FieldSpec("items", "java.util.List", signature="Ljava/util/List<Lp/Item;>;"),
            FieldSpec("main", "p.Item"),
        ],
        superclass="p.Base",
    ), entry="p/Sample.class"))

    def identity(info):
        return [(f.name, f.container_kind, f.value_type) for f in info.fields]

    assert identity(source) == identity(compiled)
    assert (source.qualified_name, source.superclass) == (compiled.qualified_name, compiled.superclass)


def test_unterminated_type_variable_signature():
    data = build_classfile("p.A", [FieldSpec("value", "java.lang.Object", signature="TT")])
    with pytest.raises(MalformedClassfile):
        extract_class_from_archive(_compiled(data))


def test_corrupt_archive_is_reported_by_the_classifier(tmp_path):
    bad = tmp_path / "bad.jar"
    bad.write_bytes(b"not a zip")
    task = TaskDefinition(tmp_path / "src", (bad,), ("Anything",), "Anything")
    with pytest.raises(ArchiveUnreadable) as info:
        Classifier(task).classify()
    assert info.value.archive == str(bad)
    with pytest.raises(ArchiveUnreadable):
        CompiledClass.read(bad, "p/A.class")
