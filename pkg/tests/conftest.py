# tests/conftest.py
"""
Fixtures compartidas: almacén de resultados y caché de flags temporales por
test, y la opción --runslow para los barridos exhaustivos tripartitos.
"""
import json

import pytest

import config
from controllers import db


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run exhaustive (slow) tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def isolated_store(tmp_path, monkeypatch):
    """Cada test usa su propia base SQLite y su propio directorio de caché."""
    db.close_all_connections()
    monkeypatch.setattr(config, "DATABASE_URL", f"sqlite:///{tmp_path / 'runs.db'}")
    monkeypatch.setattr(config, "CACHE_DIR", str(tmp_path / "cache"))
    yield
    db.close_all_connections()


@pytest.fixture
def write_json(tmp_path):
    """Escribe un documento en tmp_path y devuelve la ruta como str."""
    def _write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)
    return _write
