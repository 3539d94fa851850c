"""Tests for src/utils/settings.py and src/utils/parallel.py."""

import pytest

from src.utils.errors import BudgetExceeded
from src.utils.parallel import parallel_map
from src.utils.settings import (Budget, Settings, current_settings,
                                load_settings, use_settings)

ENV_NAMES = (
    "COHOMOLIB_MAX_ORDER",
    "COHOMOLIB_MAX_GAMMA",
    "COHOMOLIB_BUDGET",
    "COHOMOLIB_MAX_AUT",
    "COHOMOLIB_THREADS",
)


@pytest.fixture
def clean_env(monkeypatch):
    for name in ENV_NAMES:
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


def test_defaults_without_environment(clean_env):
    assert load_settings() == Settings()


def test_environment_values_are_read(clean_env):
    clean_env.setenv("COHOMOLIB_BUDGET", "500")
    clean_env.setenv("COHOMOLIB_THREADS", "3")
    clean_env.setenv("COHOMOLIB_MAX_AUT", " ")
    s = load_settings()
    assert (s.budget, s.threads, s.max_aut) == (500, 3, Settings().max_aut)


@pytest.mark.parametrize("raw", ["many", "0", "-4", "2.5"])
def test_malformed_values_raise(clean_env, raw):
    clean_env.setenv("COHOMOLIB_MAX_ORDER", raw)
    with pytest.raises(RuntimeError):
        load_settings()


def test_overrides_only_touch_given_fields():
    base = Settings(budget=10, threads=2)
    assert base.with_overrides() == base
    assert base.with_overrides(budget=99).budget == 99
    assert base.with_overrides(threads=0).threads == 1
    assert base.with_overrides(threads=8).budget == 10


def test_use_settings_nests_and_restores():
    outer = current_settings()
    with use_settings(Settings(budget=7)):
        assert current_settings().budget == 7
        with use_settings(Settings(budget=3)):
            assert current_settings().budget == 3
        assert current_settings().budget == 7
    assert current_settings() == outer


def test_budget_charge_and_require():
    b = Budget("scan", limit=3)
    b.charge(2)
    b.charge()
    with pytest.raises(BudgetExceeded) as exc:
        b.charge()
    assert exc.value.detail == {"search": "scan", "budget": 3}
    b.require(3)
    with pytest.raises(BudgetExceeded):
        b.require(4)


def test_budget_defaults_to_active_setting():
    with use_settings(Settings(budget=11)):
        assert Budget("scan").limit == 11


def test_parallel_map_keeps_order_and_settings():
    def work(x):
        return (x * x, current_settings().budget)

    with use_settings(Settings(budget=42, threads=4)):
        out = parallel_map(work, range(20))
    assert out == [(x * x, 42) for x in range(20)]
    with use_settings(Settings(threads=1)):
        assert parallel_map(lambda x: -x, [1, 2, 3]) == [-1, -2, -3]
    assert parallel_map(str, []) == []
