"""
Tests for the configuration singleton.
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from neretin_toolkit.config import ConfigLoader, config
from neretin_toolkit.config.loader import DEFAULTS
from neretin_toolkit.exceptions import ConfigurationError


class TestConfigLoader:

    def teardown_method(self):
        config.reset()

    def test_singleton(self):
        assert ConfigLoader() is config

    def test_every_knob_is_present(self):
        assert set(config.as_dict()) == set(DEFAULTS)

    def test_override_ignores_none(self):
        before = config.depth_limit
        config.override(depth_limit=None, seed=5)
        assert config.depth_limit == before
        assert config.seed == 5

    def test_override_converts_integers(self):
        config.override(random_budget="250")
        assert config.random_budget == 250

    def test_unknown_key(self):
        with pytest.raises(ConfigurationError):
            config.override(colour='blue')

    def test_out_of_range(self):
        with pytest.raises(ConfigurationError):
            config.override(depth_limit=1)
        with pytest.raises(ConfigurationError):
            config.override(search_node_budget=0)

    def test_not_an_integer(self):
        with pytest.raises(ConfigurationError):
            config.override(seed='many')

    def test_reset(self):
        loaded = config.as_dict()
        config.override(depth_limit=5, seed=9)
        config.reset()
        assert config.as_dict() == loaded

    def test_yaml_file(self, tmp_path):
        path = tmp_path / "neretin.yaml"
        path.write_text("depth_limit: 12\nlog_level: INFO\n", encoding='utf-8')
        config._load_from_yaml(str(path))
        assert config.depth_limit == 12
        assert config.log_level == 'INFO'
        assert config.random_budget == DEFAULTS['random_budget']

    def test_yaml_must_be_a_mapping(self, tmp_path):
        path = tmp_path / "neretin.yaml"
        path.write_text("- 1\n- 2\n", encoding='utf-8')
        with pytest.raises(ConfigurationError):
            config._load_from_yaml(str(path))

    def test_environment(self, monkeypatch):
        monkeypatch.setenv('NERETIN_SEED', '7')
        monkeypatch.setenv('NERETIN_SEARCH_BUDGET', '123')
        config._load_from_env()
        assert config.seed == 7
        assert config.search_node_budget == 123
