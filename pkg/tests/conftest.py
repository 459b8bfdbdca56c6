import dataclasses

import pytest

from components.classifier import classify
from components.config import PipelineConfig
from components.core_model import load_task_definition, parse_db_relations
from components.matcher import build_mapping_table
from components.retriever import resolve_hierarchy
from tests.fixture_factory import WMS_RELATIONS, make_corpus, make_wms_fixture


@pytest.fixture
def wms_task_path(tmp_path):
    return make_wms_fixture(tmp_path / "wms")


@pytest.fixture
def wms_task(wms_task_path):
    return load_task_definition(wms_task_path)


@pytest.fixture
def wms_graph(wms_task):
    return resolve_hierarchy(wms_task.class_names, classify(wms_task), wms_task)


@pytest.fixture
def wms_table(wms_graph, wms_task):
    return build_mapping_table(wms_graph, wms_task.input_class_names, wms_task.output_class_name)


@pytest.fixture
def wms_relations():
    return parse_db_relations(WMS_RELATIONS)


@pytest.fixture
def corpus_dir(tmp_path):
    return make_corpus(tmp_path / "corpus")


@pytest.fixture
def mock_config():
    return dataclasses.replace(PipelineConfig().with_mock(), workers=2)


@pytest.fixture(autouse=True)
def no_credentials(monkeypatch):
    monkeypatch.delenv("CCCI_LLM_KEY", raising=False)
    monkeypatch.delenv("CCCI_EMBED_KEY", raising=False)
