import json
import logging
from datetime import datetime, timedelta

import pytest

from algebra.errors import ValidationError
from algebra.groups import automorphism_group
from aut_cache import CACHE_VERSION, AutCache
from extkit_config import DEFAULTS, ExtkitConfig


@pytest.fixture
def config_path(tmp_path, monkeypatch):
    for variable in ("EXTKIT_CACHE", "EXTKIT_MAX_ORDER", "EXTKIT_BUDGET", "EXTKIT_SEED"):
        monkeypatch.delenv(variable, raising=False)
    return tmp_path / "extkit.xml"


def test_default_file_is_created(config_path):
    config = ExtkitConfig(str(config_path))
    assert config_path.exists()
    assert config.max_order == int(DEFAULTS["max_order"])
    assert config.seed == 0
    assert "setting" in config_path.read_text()


def test_missing_file_without_create(config_path):
    config = ExtkitConfig(str(config_path), create=False)
    assert not config_path.exists()
    assert config.budget == int(DEFAULTS["budget"])


def test_file_values_and_unknown_settings(config_path, caplog):
    config_path.write_text(
        "<settings><setting name='max_order'>32</setting><setting name='colour'>red</setting></settings>"
    )
    with caplog.at_level(logging.WARNING):
        config = ExtkitConfig(str(config_path))
    assert config.max_order == 32
    assert config.get("colour") is None
    assert "colour" in caplog.text


def test_precedence(config_path, monkeypatch):
    config_path.write_text("<settings><setting name='max_order'>32</setting></settings>")
    config = ExtkitConfig(str(config_path))
    monkeypatch.setenv("EXTKIT_MAX_ORDER", "48")
    assert config.max_order == 48
    config.override("max_order", None)
    assert config.max_order == 48
    config.override("max_order", 16)
    assert config.max_order == 16


def test_cache_dir_from_environment(config_path, monkeypatch, tmp_path):
    monkeypatch.setenv("EXTKIT_CACHE", str(tmp_path / "auts"))
    assert ExtkitConfig(str(config_path)).cache_dir == tmp_path / "auts"


def test_non_integer_setting(config_path):
    config = ExtkitConfig(str(config_path))
    config.override("budget", "lots")
    with pytest.raises(ValidationError):
        config.budget


def test_memory_cache(groups):
    cache = AutCache()
    assert cache.get(groups["C4"]) is None
    cache.put(groups["C4"], [[0, 1, 2, 3], [0, 3, 2, 1]])
    assert cache.get(groups["C4"]) == [[0, 1, 2, 3], [0, 3, 2, 1]]
    assert (cache.hits, cache.misses) == (1, 1)


def test_cache_persists_to_disk(tmp_path, groups):
    first = AutCache(tmp_path)
    found = automorphism_group(groups["D4"], cache=first)
    assert len(list(tmp_path.glob("aut-*.json"))) == 1
    second = AutCache(tmp_path)
    again = automorphism_group(groups["D4"], cache=second)
    assert again == found
    assert second.hits == 1


def _write_entry(path, group, created_at, version=CACHE_VERSION):
    path.write_text(json.dumps({
        "version": version,
        "order": group.order,
        "fingerprint": group.fingerprint,
        "created_at": created_at.isoformat(),
        "automorphisms": [list(range(group.order))],
    }))


def test_expired_files_are_removed(tmp_path, groups):
    C3 = groups["C3"]
    path = tmp_path / f"aut-{C3.fingerprint}.json"
    _write_entry(path, C3, datetime.now() - timedelta(days=30))
    (tmp_path / "aut-broken.json").write_text("{not json")
    cache = AutCache(tmp_path, max_age_days=20)
    assert not path.exists()
    assert not (tmp_path / "aut-broken.json").exists()
    assert cache.get(C3) is None


def test_stale_versions_are_ignored(tmp_path, groups):
    C3 = groups["C3"]
    _write_entry(tmp_path / f"aut-{C3.fingerprint}.json", C3, datetime.now(), version=CACHE_VERSION + 1)
    assert AutCache(tmp_path).get(C3) is None
