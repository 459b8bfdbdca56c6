import dataclasses
import math

import numpy as np
import pytest

from components.config import MatcherConfig
from components.core_model import ClassGraph, ClassInfo, Edge, FieldInfo, FieldPath
from components.errors import DimensionMismatch, DuplicateOutput, ZeroVector
from components.matcher import (
    BuiltinEmbedder,
    EmbeddingVector,
    MappingEntry,
    MatchKind,
    build_mapping_table,
    candidate_text,
    cosine_similarity,
    exact_match,
    generate_definitions,
    merge_mappings,
    select_concepts,
    semantic_match,
)
from components.matcher.embeddings import normalize_text, trigrams

INVENTORY = "com.xx.wms.dto.InventoryInfoDTO"
RESPONSE = "com.xx.wms.dto.InventoryResponseDTO"
SKU = "com.xx.goods.dto.SKUInfoDTO"


def _mapping(wms_graph, wms_task, **overrides):
    config = dataclasses.replace(MatcherConfig(), **overrides)
    return build_mapping_table(wms_graph, wms_task.input_class_names, wms_task.output_class_name, config)


def test_cosine_of_known_vectors():
    u = EmbeddingVector([1.0, 0.0])
    v = EmbeddingVector([1.0, 1.0])
    assert cosine_similarity(u, v) == pytest.approx(0.70710678, abs=1e-8)
    assert cosine_similarity(u, v) == cosine_similarity(v, u)
    assert cosine_similarity(v, v.scaled(3.0)) == pytest.approx(1.0)


def test_cosine_rejects_zero_and_mismatched_vectors():
    with pytest.raises(ZeroVector):
        cosine_similarity(EmbeddingVector([0.0, 0.0]), EmbeddingVector([1.0, 0.0]))
    with pytest.raises(DimensionMismatch):
        cosine_similarity(EmbeddingVector([1.0, 0.0]), EmbeddingVector([1.0, 0.0, 0.0]))


def test_normalize_splits_camel_case_and_acronyms():
    assert normalize_text("SKUInfoDTO ownName") == ["sku", "info", "dto", "own", "name"]
    assert trigrams("sku") == ["<sk", "sku", "ku>"]


def test_builtin_embedder_is_deterministic_and_unit_length():
    embedder = BuiltinEmbedder(64)
    a = embedder.embed("InventoryInfoDTO inventoryName String")
    b = embedder.embed("InventoryInfoDTO inventoryName String")
    assert a == b
    assert a.dimension == 64
    assert np.linalg.norm(a.values) == pytest.approx(1.0)
    # word order does not matter
    assert embedder.embed("name owner") == embedder.embed("owner name")


def test_builtin_embedder_rejects_empty_text():
    with pytest.raises(ValueError):
        BuiltinEmbedder().embed("   ")


def test_exact_match_skips_ambiguous_names(wms_graph, wms_task):
    entries = exact_match(wms_graph, wms_task.input_class_names, wms_task.output_class_name)
    rows = [(e.input.render(), e.output.dotted) for e in entries]
    assert rows == [
        ("InventoryInfoDTO.warehouseName", "warehouseName"),
        ("InventoryInfoDTO.availableQuantity", "availableQuantity"),
        ("SKUInfoDTO.skuName", "sku.skuName"),
    ]
    # UserDTO.name, SKUInfoDTO.user.name and WarehouseDTO.owner.name all share the leaf "name"
    assert all(e.output.leaf != "name" for e in entries)
    assert all(e.score == 1.0 and e.kind is MatchKind.EXACT for e in entries)


def test_wms_mapping_table(wms_graph, wms_task):
    table = _mapping(wms_graph, wms_task)
    assert table.rows() == [
        ("InventoryInfoDTO.warehouseName", "InventoryResponseDTO.warehouseName"),
        ("InventoryInfoDTO.availableQuantity", "InventoryResponseDTO.availableQuantity"),
        ("SKUInfoDTO.skuName", "InventoryResponseDTO.sku.skuName"),
        ("InventoryInfoDTO.inventoryName", "InventoryResponseDTO.name"),
        ("SKUInfoDTO.user.name", "InventoryResponseDTO.sku.ownName"),
    ]
    assert [e.kind for e in table.entries] == [MatchKind.EXACT] * 3 + [MatchKind.SEMANTIC] * 2
    assert table.unmatched_outputs == ()
    assert all(0.5 <= e.score <= 1.0 for e in table.semantic)


def test_every_output_leaf_mapped_at_most_once(wms_graph, wms_task):
    table = _mapping(wms_graph, wms_task)
    outputs = [e.output for e in table.entries] + list(table.unmatched_outputs)
    assert sorted(outputs) == sorted(wms_graph.leaf_paths(RESPONSE))


def test_high_threshold_leaves_semantic_outputs_unmatched(wms_graph, wms_task):
    table = _mapping(wms_graph, wms_task, threshold=0.99)
    assert len(table.exact) == 3
    assert table.semantic == []
    assert [p.dotted for p in table.unmatched_outputs] == ["name", "sku.ownName"]
    assert "(unmapped)" in table.render()


def test_top_k_records_alternatives(wms_graph, wms_task):
    table = _mapping(wms_graph, wms_task, top_k=2)
    own = next(e for e in table.semantic if e.output.leaf == "ownName")
    assert own.input == FieldPath(SKU, ("user", "name"))
    # identical owner text ties; the smaller path wins and the other becomes the alternative
    assert own.alternatives == (FieldPath("com.xx.warehouse.dto.WarehouseDTO", ("owner", "name")),)


def test_render_is_two_columns(wms_graph, wms_task):
    lines = _mapping(wms_graph, wms_task).render().splitlines()
    assert lines[0].startswith("Input Field") and lines[0].endswith("→ Output Field")
    assert len(lines) == 6
    assert all(" → " in line for line in lines)


class _TableEmbedder:
    """Returns fixed vectors keyed by the first word of the text."""

    def __init__(self, vectors):
        self.vectors = vectors

    def embed_many(self, texts):
        return [EmbeddingVector(self.vectors[t.split()[0]]) for t in texts]


def test_semantic_ties_break_on_the_smaller_path(wms_graph):
    out = FieldPath(RESPONSE, ("name",))
    a = FieldPath(INVENTORY, ("inventoryName",))
    b = FieldPath(INVENTORY, ("warehouseName",))
    provider = _TableEmbedder({"InventoryResponseDTO": [1.0, 0.0], "InventoryInfoDTO": [1.0, 0.0]})
    entries = semantic_match([out], [b, a], wms_graph, provider, threshold=0.5)
    assert len(entries) == 1
    assert entries[0].input == a
    assert entries[0].score == pytest.approx(1.0)


def test_exclusive_consumption_skips_used_inputs(wms_graph):
    out1 = FieldPath(RESPONSE, ("name",))
    out2 = FieldPath(RESPONSE, ("warehouseName",))
    only = FieldPath(INVENTORY, ("inventoryName",))
    provider = _TableEmbedder({"InventoryResponseDTO": [1.0, 1.0], "InventoryInfoDTO": [1.0, 0.9]})
    shared = semantic_match([out1, out2], [only], wms_graph, provider, threshold=0.5)
    assert [e.input for e in shared] == [only, only]
    exclusive = semantic_match([out1, out2], [only], wms_graph, provider, threshold=0.5, exclusive=True)
    assert [e.output for e in exclusive] == [out1]


def test_merge_rejects_duplicate_outputs():
    out = FieldPath(RESPONSE, ("name",))
    first = MappingEntry(FieldPath(INVENTORY, ("inventoryName",)), out, MatchKind.EXACT)
    second = MappingEntry(FieldPath(SKU, ("skuName",)), out, MatchKind.SEMANTIC, 0.8)
    with pytest.raises(DuplicateOutput):
        merge_mappings([first], [second])


def test_mapping_entry_invariants():
    path = FieldPath(INVENTORY, ("inventoryName",))
    with pytest.raises(ValueError):
        MappingEntry(path, path, MatchKind.EXACT, 0.9)
    with pytest.raises(ValueError):
        MappingEntry(path, path, MatchKind.SEMANTIC, 1.5)


def test_concepts_cover_every_class_once(wms_graph):
    concepts = select_concepts(wms_graph)
    assert sorted(concepts) == sorted(wms_graph.nodes)
    definitions = {d.concept: d.definition_text for d in generate_definitions(concepts, wms_graph)}
    assert "name : String : Owner name" in definitions["com.xx.user.dto.OwnerUser"]
    assert definitions[INVENTORY].startswith("InventoryInfoDTO: Inventory query result")


def test_to_dict_rounds_scores(wms_graph, wms_task):
    data = _mapping(wms_graph, wms_task).to_dict()
    assert [e["kind"] for e in data["entries"]] == ["Exact"] * 3 + ["Semantic"] * 2
    for entry in data["entries"]:
        assert math.isclose(entry["score"], round(entry["score"], 6))


def _info(qualified, fields=(), superclass=None, comment=None):
    package, _, simple = qualified.rpartition(".")
    return ClassInfo(qualified, simple, package, tuple(fields), comment=comment, superclass=superclass)


@pytest.fixture
def inheriting_graph():
    return ClassGraph(
        nodes={
            "p.Holder": _info("p.Holder", [FieldInfo("thin", "p.Thin"), FieldInfo("fat", "p.Fat")]),
            "p.Thin": _info("p.Thin", superclass="p.Base"),
            "p.Fat": _info("p.Fat", [FieldInfo("extra", "int")], superclass="p.Base"),
            "p.Base": _info("p.Base", [FieldInfo("label", "java.lang.String", comment="Display label")], comment="Shared base"),
        },
        edges=(Edge("p.Holder", "thin", "p.Thin"), Edge("p.Holder", "fat", "p.Fat")),
        roots=("p.Holder",),
        superclasses={"p.Thin": "p.Base", "p.Fat": "p.Base"},
    )


def test_subclass_without_own_fields_is_not_a_concept(inheriting_graph):
    concepts = select_concepts(inheriting_graph)
    assert "p.Thin" not in concepts
    assert {"p.Holder", "p.Fat", "p.Base"} <= set(concepts)
    fat = next(d for d in generate_definitions(concepts, inheriting_graph) if d.concept == "p.Fat")
    assert fat.definition_text.splitlines() == ["Fat", "extra : int", "label : String : Display label"]


def test_leaf_of_excluded_subclass_is_described_by_its_superclass(inheriting_graph):
    text = candidate_text(inheriting_graph, FieldPath("p.Holder", ("thin", "label")))
    assert text == "Base label : String : Display label"
    assert candidate_text(inheriting_graph, FieldPath("p.Holder", ("fat", "label"))).startswith("Fat ")


class _RecordingEmbedder:
    def __init__(self):
        self.inner = BuiltinEmbedder()
        self.texts = []

    def embed_many(self, texts):
        self.texts.extend(texts)
        return self.inner.embed_many(texts)


def test_semantic_step_embeds_concept_definition_lines(wms_graph, wms_task):
    provider = _RecordingEmbedder()
    config = MatcherConfig()
    table = build_mapping_table(wms_graph, wms_task.input_class_names, wms_task.output_class_name, config, provider)
    assert len(table.semantic) == 2
    definition = next(d for d in generate_definitions(select_concepts(wms_graph), wms_graph) if d.concept == INVENTORY)
    line = definition.line_for("inventoryName")
    assert line == "inventoryName : String : Name of the inventory"
    assert f"InventoryInfoDTO {line}" in provider.texts


def test_cosine_is_symmetric_on_random_vectors():
    rng = np.random.default_rng(3)
    for _ in range(50):
        u = EmbeddingVector(rng.normal(size=16))
        v = EmbeddingVector(rng.normal(size=16))
        assert cosine_similarity(u, v) == pytest.approx(cosine_similarity(v, u), abs=1e-12)
        assert -1.0 - 1e-12 <= cosine_similarity(u, v) <= 1.0 + 1e-12


class _ScalingEmbedder:
    """Built-in vectors stretched by a per-text positive factor."""

    def __init__(self):
        self.inner = BuiltinEmbedder()

    def embed_many(self, texts):
        return [v.scaled(1.0 + len(t) % 7) for t, v in zip(texts, self.inner.embed_many(texts))]


def test_best_candidate_does_not_depend_on_vector_length(wms_graph, wms_task):
    plain = _mapping(wms_graph, wms_task)
    config = MatcherConfig()
    scaled = build_mapping_table(
        wms_graph, wms_task.input_class_names, wms_task.output_class_name, config, _ScalingEmbedder()
    )
    assert scaled.rows() == plain.rows()
    for a, b in zip(plain.semantic, scaled.semantic):
        assert a.score == pytest.approx(b.score)


def test_builtin_embedder_ranks_related_descriptions_closer():
    embedder = BuiltinEmbedder()
    target = embedder.embed("inventoryName")
    assert cosine_similarity(target, embedder.embed("name of inventory")) > cosine_similarity(
        target, embedder.embed("contactInfo")
    )


def test_non_ascii_words_contribute_to_the_embedding():
    assert normalize_text("inventoryName 库存名称 Größe") == ["inventory", "name", "库存名称", "größe"]
    embedder = BuiltinEmbedder()
    assert embedder.embed("inventoryName 库存名称") != embedder.embed("inventoryName")
    assert cosine_similarity(embedder.embed("库存名称"), embedder.embed("库存名称 数量")) > 0.5
