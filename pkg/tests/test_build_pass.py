import dataclasses

import pytest

from components.config import HarnessConfig
from components.errors import BuildTimeout, WorkspaceSetupFailed
from components.evaluator import BuildPassResult, build_pass
from components.evaluator.checker import ScriptChecker, main as checker_main
from tests.fixture_factory import WMS_MOCK_SCRIPT, WMS_REFERENCE

SLEEP = '{python} -c "import time; time.sleep(30)"'
OK = '{python} -c "pass"'


@pytest.fixture
def harness(wms_task_path):
    return HarnessConfig(scaffold=str(wms_task_path.parent))


def test_reference_and_mock_scripts_pass(harness):
    for script in (WMS_REFERENCE, WMS_MOCK_SCRIPT):
        result = build_pass(script, harness)
        assert result.passed, result.compiler_output + result.test_output
        assert result.test_output == "all 5 output fields assigned"


def test_syntax_error_stops_at_compile(harness):
    result = build_pass("InventoryResponseDTO x = new InventoryResponseDTO(;", harness)
    assert (result.compiled, result.tested, result.passed) == (False, False, False)
    assert result.compiler_output.startswith("error:")
    assert result.test_output == ""


def test_unknown_accessor_fails_compile(harness):
    script = WMS_REFERENCE.replace("setName(", "setColour(")
    result = build_pass(script, harness)
    assert not result.compiled
    assert "cannot find symbol: method setColour in InventoryResponseDTO" in result.compiler_output


def test_unknown_class_fails_compile(harness):
    result = build_pass("MissingDTO m = new MissingDTO();", harness)
    assert not result.compiled
    assert "cannot find symbol: class MissingDTO" in result.compiler_output


def test_unassigned_fields_fail_the_test_stage(harness):
    result = build_pass("InventoryResponseDTO inventoryResponseDTO = new InventoryResponseDTO();", harness)
    assert result.compiled and not result.tested and not result.passed
    assert result.test_output.startswith("unassigned output fields: warehouseName, name, availableQuantity")


def test_explicit_null_counts_as_assigned(harness):
    script = WMS_REFERENCE.replace(
        "inventoryResponseDTO.setName(inventoryInfoDTO.getInventoryName());",
        "inventoryResponseDTO.setName(null);",
    )
    assert build_pass(script, harness).passed


def test_harness_needs_both_commands(harness):
    with pytest.raises(WorkspaceSetupFailed):
        build_pass(WMS_REFERENCE, dataclasses.replace(harness, test_command=None))


def test_missing_scaffold(tmp_path):
    with pytest.raises(WorkspaceSetupFailed):
        build_pass(WMS_REFERENCE, HarnessConfig(scaffold=str(tmp_path / "nowhere")))


def test_missing_executable(harness):
    with pytest.raises(WorkspaceSetupFailed):
        build_pass(WMS_REFERENCE, dataclasses.replace(harness, compile_command="ccci-no-such-compiler {script}"))


def test_compile_timeout(harness):
    slow = dataclasses.replace(harness, compile_command=SLEEP, compile_timeout=0.5)
    with pytest.raises(BuildTimeout) as info:
        build_pass(WMS_REFERENCE, slow)
    assert info.value.stage == "compile"
    assert not info.value.result.compiled


def test_test_timeout_keeps_the_compile_result(harness):
    slow = dataclasses.replace(harness, compile_command=OK, test_command=SLEEP, test_timeout=0.5)
    with pytest.raises(BuildTimeout) as info:
        build_pass(WMS_REFERENCE, slow)
    assert info.value.stage == "test"
    assert info.value.result.compiled and not info.value.result.passed


def test_result_invariants():
    with pytest.raises(ValueError):
        BuildPassResult(True, True, False)
    with pytest.raises(ValueError):
        BuildPassResult(False, True, False)
    assert BuildPassResult.compile_failed("boom").to_dict() == {
        "compiled": False, "tested": False, "passed": False, "compiler_output": "boom", "test_output": "",
    }


def test_checker_in_process(wms_task_path, tmp_path):
    checker = ScriptChecker(wms_task_path.parent)
    assert checker.test(WMS_MOCK_SCRIPT).ok

    script = tmp_path / "Script.java"
    script.write_text("int broken = ;", encoding="utf-8")
    assert checker_main(["compile", str(wms_task_path.parent), str(script)]) == 1
    script.write_text(WMS_REFERENCE, encoding="utf-8")
    assert checker_main(["test", str(wms_task_path.parent), str(script)]) == 0
