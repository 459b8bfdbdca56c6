import math

import pytest

from components.config import ConstructorConfig
from components.constructor import (
    PromptDocument,
    build_original_prompt,
    build_prompt,
    estimate_tokens,
    render_entity_context,
    variable_name,
)
from components.errors import TokenBudgetExceeded


@pytest.mark.parametrize(
    "name, expected",
    [
        ("InventoryInfoDTO", "inventoryInfoDTO"),
        ("SKUInfoDTO", "skuInfoDTO"),
        ("SKUInfo", "skuInfo"),
        ("com.xx.user.dto.UserDTO", "userDTO"),
        ("DTO", "dto"),
    ],
)
def test_variable_name(name, expected):
    assert variable_name(name) == expected


def test_system_text_holds_builtin_then_task_rules(wms_task, wms_table, wms_graph):
    prompt = build_prompt(wms_task, wms_table, wms_graph)
    lines = prompt.system_text.splitlines()
    assert lines[0] == "Task: Map input DTOs to the output DTO."
    assert "Rules:" in lines
    assert "  1. Use BeanUtils.copyProperties for fields with identical names." in lines
    assert lines[-1] == "  5. Do not modify the input DTOs."
    assert prompt.rules[0] == "Use BeanUtils.copyProperties for fields with identical names."
    assert prompt.rules[-1] == "Do not modify the input DTOs."


def test_user_text_lists_mappings_with_arrows(wms_task, wms_table, wms_graph, wms_relations):
    prompt = build_prompt(wms_task, wms_table, wms_graph, wms_relations)
    text = prompt.user_text
    assert "  - InventoryInfoDTO inventoryInfoDTO: [warehouseName, availableQuantity, inventoryName]" in text
    assert "  - SKUInfoDTO skuInfoDTO: [skuName, user.name]" in text
    assert "  - UserDTO userDTO: []" in text
    assert "  - InventoryResponseDTO inventoryResponseDTO:" in text
    assert "    Copy with BeanUtils.copyProperties (identical names):" in text
    assert "      - warehouseName → InventoryInfoDTO.warehouseName" in text
    assert "      - sku.skuName → SKUInfoDTO.skuName" in text
    assert "      - name → InventoryInfoDTO.inventoryName" in text
    assert "      - sku.ownName → SKUInfoDTO.user.name" in text
    assert text.index("Copy with") < text.index("Map manually")
    assert "DB Relations:" in text
    assert "  |-> warehouse_area (Warehouse Area): 1:N relationship" in text
    assert prompt.mode == "ccci"
    assert prompt.token_estimate == math.ceil(len(prompt.system_text + prompt.user_text) / 4)


def test_relations_section_is_omitted_without_relations(wms_task, wms_table, wms_graph):
    prompt = build_prompt(wms_task, wms_table, wms_graph, None)
    assert "DB Relations:" not in prompt.user_text
    assert "Entity Details:" in prompt.user_text


def test_entity_context_uses_comments_and_annotation_notes(wms_graph):
    context = render_entity_context(wms_graph)
    lines = context.splitlines()
    assert lines[0] == "- Entity:Inventory query result:com.xx.wms.dto.InventoryInfoDTO"
    assert lines[1] == "  Fields:"
    assert "  inventoryName:Name of the inventory:String" in lines
    assert "  availableQuantity:Stock available:int" in lines
    assert "  name:Owner name:String" in lines
    assert "  user:com.xx.user.dto.OwnerUser" in lines
    assert "  areas:List<com.xx.warehouse.dto.WarehouseArea>" in lines
    assert "- Entity: com.xx.user.dto.UserDTO" in lines
    # roots in task order, then the next layer
    entities = [line for line in lines if line.startswith("- Entity")]
    assert entities[4].endswith("com.xx.wms.dto.InventoryResponseDTO")
    assert len(entities) == len(wms_graph.nodes)


def test_token_budget_is_enforced(wms_task, wms_table, wms_graph):
    tight = ConstructorConfig(input_token_budget=600, output_reserve=512)
    with pytest.raises(TokenBudgetExceeded) as info:
        build_prompt(wms_task, wms_table, wms_graph, config=tight)
    assert info.value.budget == 88
    assert info.value.estimate > 88


def test_original_prompt_has_no_retrieved_context(wms_task):
    prompt = build_original_prompt(wms_task)
    assert prompt.mode == "original"
    assert "  - InventoryInfoDTO inventoryInfoDTO" in prompt.user_text
    assert "  - InventoryResponseDTO inventoryResponseDTO" in prompt.user_text
    assert "→" not in prompt.user_text
    assert "Entity Details:" not in prompt.user_text
    assert prompt.rules == ()


def test_ccci_prompt_is_longer_than_original(wms_task, wms_table, wms_graph, wms_relations):
    ccci = build_prompt(wms_task, wms_table, wms_graph, wms_relations)
    assert ccci.token_estimate > build_original_prompt(wms_task).token_estimate


def test_prompt_document_checks_its_estimate():
    assert PromptDocument.of("sys", "user").token_estimate == estimate_tokens("sysuser") == 2
    with pytest.raises(ValueError):
        PromptDocument("sys", "user", 99)
    with pytest.raises(ValueError):
        PromptDocument.of("", "user")


def test_write_dumps_both_texts(tmp_path, wms_task):
    system_path, user_path = build_original_prompt(wms_task).write(tmp_path / "out" / "prompt")
    assert system_path.name == "prompt.system.txt"
    assert user_path.name == "prompt.user.txt"
    assert "Input DTOs:" in user_path.read_text(encoding="utf-8")
