from __future__ import annotations

import shutil
from importlib import resources
from pathlib import Path

import pytest

from tracedoc import jsonio

REPO = Path(__file__).resolve().parent.parent
DEMO = REPO / "demo"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def corpus() -> dict:
    text = resources.files("tracedoc").joinpath("data/gold_corpus.json").read_text("utf-8")
    return jsonio.loads(text)


@pytest.fixture(scope="session")
def lstm_rows(corpus) -> list[dict]:
    return corpus["tables"]["lstm"]


@pytest.fixture(scope="session")
def ner_rows(corpus) -> list[dict]:
    return corpus["tables"]["ner"]


@pytest.fixture()
def demo_dir() -> Path:
    return DEMO


@pytest.fixture()
def golden_dir() -> Path:
    return GOLDEN


@pytest.fixture()
def scratch_project(tmp_path):
    """Copy a demo project into a scratch dir so tests may mutate it."""

    def _copy(name: str) -> Path:
        target = tmp_path / name
        shutil.copy(DEMO / name, target)
        return target

    return _copy
