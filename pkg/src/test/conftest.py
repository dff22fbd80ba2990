import json
from pathlib import Path

import pytest

from core.config import reset_settings


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    """Fresh settings per test, ledger in a throwaway sqlite file"""
    monkeypatch.setenv("QUSWAP_DATABASE_URL", f"sqlite:///{tmp_path / 'ledger.db'}")
    monkeypatch.delenv("QUSWAP_MAX_AMPLITUDES", raising=False)
    monkeypatch.delenv("QUSWAP_WORKERS", raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def ledger_url(tmp_path) -> str:
    return f"sqlite:///{tmp_path / 'ledger.db'}"


@pytest.fixture
def write_scenario(tmp_path):
    def write(payload, name: str = "scenario.json") -> Path:
        path = tmp_path / name
        path.write_text(payload if isinstance(payload, str) else json.dumps(payload), encoding="utf-8")
        return path

    return write


@pytest.fixture
def scenario_dir() -> Path:
    return Path(__file__).resolve().parents[2] / "scenarios"
