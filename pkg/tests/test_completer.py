import dataclasses
import json
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from types import SimpleNamespace

import httpx
import openai
import pytest

from components.chat import complete, complete_samples, extract_code, request_body, request_hash, serialize_body
from components.chat.responses import Cassette
from components.config import ModelConfig
from components.constructor import build_original_prompt, build_prompt
from components.errors import AuthError, CompletionRejected, ConfigError, EmptyCompletion, TransportError
from tests.fixture_factory import WMS_MOCK_SCRIPT

MOCK = ModelConfig(provider="mock", model_name="mock-model")


@pytest.fixture
def wms_prompt(wms_task, wms_table, wms_graph, wms_relations):
    return build_prompt(wms_task, wms_table, wms_graph, wms_relations)


class _FakeClient:
    """Answers every chat request with the same text and remembers the requests."""

    def __init__(self, answer):
        self.answer = answer
        self.requests = []
        self.chat = SimpleNamespace(completions=SimpleNamespace(create=self._create))

    def _create(self, **body):
        self.requests.append(body)
        message = SimpleNamespace(content=self.answer)
        return SimpleNamespace(choices=[SimpleNamespace(message=message)])


def test_extract_code_from_fenced_block():
    assert extract_code("Here you go:\n```java\nint a = 1;\nint b = a;\n```\nDone.") == "int a = 1;\nint b = a;"


def test_extract_code_without_fence_is_the_whole_answer():
    assert extract_code("  int a = 1;\n") == "int a = 1;"


def test_extract_code_rejects_an_empty_block():
    with pytest.raises(EmptyCompletion):
        extract_code("```java\n```")


def test_mock_writes_the_mapping_script(wms_prompt):
    generated = complete(wms_prompt, MOCK)
    assert generated.code == WMS_MOCK_SCRIPT
    assert generated.raw_response.startswith("```java\n")
    assert generated.model_name == "mock-model"
    assert generated.latency == 0.0


def test_mock_original_prompt_only_builds_the_output(wms_task):
    generated = complete(build_original_prompt(wms_task), MOCK)
    assert generated.code == "InventoryResponseDTO inventoryResponseDTO = new InventoryResponseDTO();"


def test_canned_answer_overrides_the_mock(wms_prompt):
    cfg = dataclasses.replace(MOCK, canned_answer="```\nx = 1;\n```")
    assert complete(wms_prompt, cfg).code == "x = 1;"
    with pytest.raises(EmptyCompletion):
        complete(wms_prompt, dataclasses.replace(MOCK, canned_answer="   "))


def test_samples_are_numbered(wms_prompt):
    samples = complete_samples(wms_prompt, dataclasses.replace(MOCK, samples=3))
    assert [s.sample for s in samples] == [0, 1, 2]
    assert len({s.code for s in samples}) == 1


def test_request_body_and_hash_are_stable(wms_prompt):
    cfg = ModelConfig(model_name="m", temperature=0.0, top_p=0.2, max_output_tokens=256)
    body = request_body(wms_prompt, cfg)
    assert [m["role"] for m in body["messages"]] == ["system", "user"]
    assert body["max_tokens"] == 256
    assert serialize_body(body) == serialize_body(dict(reversed(list(body.items()))))
    assert request_hash(body) == request_hash(request_body(wms_prompt, cfg))
    assert request_hash(body) != request_hash(request_body(wms_prompt, dataclasses.replace(cfg, temperature=0.5)))


def test_client_answer_is_recorded_and_replayed(tmp_path, wms_prompt):
    cassette = tmp_path / "cassette.json"
    cfg = ModelConfig(model_name="m", cassette=str(cassette))
    client = _FakeClient("```java\nint recorded = 1;\n```")
    assert complete(wms_prompt, cfg, client=client).code == "int recorded = 1;"
    assert client.requests[0]["model"] == "m"

    saved = json.loads(cassette.read_text(encoding="utf-8"))
    assert saved == [{"request_hash": request_hash(request_body(wms_prompt, cfg)), "response_text": client.answer}]

    replayed = complete(wms_prompt, dataclasses.replace(cfg, provider="replay"))
    assert replayed.code == "int recorded = 1;"


def test_replay_without_entry_fails(tmp_path, wms_prompt):
    cfg = ModelConfig(provider="replay", cassette=str(tmp_path / "missing.json"))
    with pytest.raises(TransportError):
        complete(wms_prompt, cfg)


def test_missing_key_is_an_auth_error(wms_prompt):
    with pytest.raises(AuthError):
        complete(wms_prompt, ModelConfig(endpoint="http://127.0.0.1:9/v1"))


def test_unreachable_endpoint_retries_then_fails(monkeypatch, wms_prompt):
    monkeypatch.setenv("CCCI_LLM_KEY", "test-key")
    cfg = ModelConfig(endpoint="http://127.0.0.1:9/v1", retries=1, backoff_base=0.0, request_timeout=2.0)
    with pytest.raises(TransportError) as info:
        complete(wms_prompt, cfg)
    assert info.value.attempts == 2


def test_model_config_validation():
    with pytest.raises(ConfigError):
        ModelConfig(top_p=0.0)
    with pytest.raises(ConfigError):
        ModelConfig(samples=0)


class _SlowClient(_FakeClient):
    """Holds every request open for a moment and tracks how many overlap."""

    def __init__(self, answer):
        super().__init__(answer)
        self.open = 0
        self.peak = 0
        self._lock = threading.Lock()

    def _create(self, **body):
        with self._lock:
            self.open += 1
            self.peak = max(self.peak, self.open)
        time.sleep(0.05)
        with self._lock:
            self.open -= 1
        return super()._create(**body)


def test_in_flight_requests_are_bounded(wms_prompt):
    cfg = ModelConfig(model_name="m", max_in_flight=2)
    client = _SlowClient("```java\nint a = 1;\n```")
    with ThreadPoolExecutor(max_workers=6) as pool:
        codes = list(pool.map(lambda _: complete(wms_prompt, cfg, client=client).code, range(6)))
    assert codes == ["int a = 1;"] * 6
    assert 1 <= client.peak <= 2
    with pytest.raises(ConfigError):
        ModelConfig(max_in_flight=0)


def test_rejected_request_is_a_pipeline_error(wms_prompt):
    request = httpx.Request("POST", "http://127.0.0.1:9/v1/chat/completions")

    def reject(**body):
        raise openai.BadRequestError("unknown model", response=httpx.Response(400, request=request), body=None)

    client = SimpleNamespace(chat=SimpleNamespace(completions=SimpleNamespace(create=reject)))
    with pytest.raises(CompletionRejected):
        complete(wms_prompt, ModelConfig(model_name="nope"), client=client)


def test_concurrent_recordings_share_the_cassette(tmp_path):
    path = tmp_path / "cassette.json"

    def record(k):
        Cassette(path).record(f"hash-{k:02d}", f"answer {k}")

    with ThreadPoolExecutor(max_workers=8) as pool:
        list(pool.map(record, range(16)))
    saved = json.loads(path.read_text(encoding="utf-8"))
    assert [item["request_hash"] for item in saved] == [f"hash-{k:02d}" for k in range(16)]
    assert Cassette(path).replay("hash-07") == "answer 7"
