import pytest

from betti_regions.config import (
    DEFAULT_SETTINGS,
    THREADS_ENV_VAR,
    Settings,
    load_settings,
    parallel_map,
    resolve_settings,
)
from betti_regions.exceptions import InputDocumentError


def test_default_settings():
    assert DEFAULT_SETTINGS.homology_vertex_bound == 20
    assert DEFAULT_SETTINGS.taylor_generator_bound == 12
    assert DEFAULT_SETTINGS.period_cap == 64
    assert DEFAULT_SETTINGS.max_regions == 6
    assert DEFAULT_SETTINGS.threads == 1
    assert DEFAULT_SETTINGS.to_dict()["ratliff_rush_horizon"] == 10


def test_load_settings_no_path(monkeypatch):
    monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
    assert load_settings() == DEFAULT_SETTINGS


def test_load_settings_yaml(fs, monkeypatch):
    monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
    fs.create_file("settings.yaml", contents="period_cap: 8\nmax_regions: 3\n")

    settings = load_settings("settings.yaml")

    assert settings.period_cap == 8
    assert settings.max_regions == 3
    assert settings.homology_vertex_bound == DEFAULT_SETTINGS.homology_vertex_bound


def test_load_settings_json(fs, monkeypatch):
    monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
    fs.create_file("settings.json", contents='{"threads": 4}')

    assert load_settings("settings.json").threads == 4


@pytest.mark.parametrize(
    "contents",
    [
        "not_a_setting: 3\n",
        "period_cap: 0\n",
        "period_cap: lots\n",
        "- 1\n- 2\n",
    ],
    ids=["unknown_key", "not_positive", "not_integer", "not_mapping"],
)
def test_load_settings_invalid(fs, contents):
    fs.create_file("settings.yaml", contents=contents)
    with pytest.raises(InputDocumentError):
        load_settings("settings.yaml")


def test_load_settings_missing(fs):
    with pytest.raises(InputDocumentError) as exc:
        load_settings("missing.yaml")
    assert exc.value.witness == "missing.yaml"


def test_threads_env_var(monkeypatch):
    monkeypatch.setenv(THREADS_ENV_VAR, "3")
    assert load_settings().threads == 3
    assert resolve_settings(None).threads == 3


@pytest.mark.parametrize("value", ["three", "0"], ids=["not_integer", "not_positive"])
def test_threads_env_var_invalid(monkeypatch, value):
    monkeypatch.setenv(THREADS_ENV_VAR, value)
    with pytest.raises(InputDocumentError):
        load_settings()


def test_resolve_settings_passthrough(monkeypatch):
    monkeypatch.setenv(THREADS_ENV_VAR, "3")
    settings = Settings(threads=2)
    assert resolve_settings(settings) is settings


@pytest.mark.parametrize("threads", [1, 4])
def test_parallel_map_keeps_order(threads):
    items = list(range(20))
    assert parallel_map(lambda value: value * value, items, Settings(threads=threads)) == [
        value * value for value in items
    ]
