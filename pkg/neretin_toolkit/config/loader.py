import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from ..exceptions import ConfigurationError

DEFAULTS: Dict[str, Any] = {
    'depth_limit': 32,
    'seed': 0,
    'random_budget': 10_000,
    'exhaustive_threshold': 1_000_000,
    'search_node_budget': 2_000_000,
    'coset_index_threshold': 512,
    'subgroup_degree_cap': 6,
    'log_level': 'WARNING',
}

ENV_NAMES: Dict[str, str] = {
    'depth_limit': 'NERETIN_DEPTH_LIMIT',
    'seed': 'NERETIN_SEED',
    'random_budget': 'NERETIN_RANDOM_BUDGET',
    'exhaustive_threshold': 'NERETIN_EXHAUSTIVE_THRESHOLD',
    'search_node_budget': 'NERETIN_SEARCH_BUDGET',
    'coset_index_threshold': 'NERETIN_COSET_INDEX_THRESHOLD',
    'subgroup_degree_cap': 'NERETIN_SUBGROUP_DEGREE_CAP',
    'log_level': 'NERETIN_LOG_LEVEL',
}


class ConfigLoader:
    """
    Singleton ConfigLoader to ensure consistent configuration across the toolkit.

    Search budgets, the tree depth cap and random seeds are read once, from a
    YAML file when one is found and from environment variables otherwise.
    """
    _instance = None
    _initialized = False

    def __new__(cls, path: Optional[str] = None):
        """Implement singleton pattern"""
        if cls._instance is None:
            cls._instance = super(ConfigLoader, cls).__new__(cls)
        return cls._instance

    def __init__(self, path: Optional[str] = None):
        """Load configuration from YAML file or environment variables"""
        if self._initialized:
            return

        if path is None:
            path = self._find_config_file()

        if path and Path(path).exists():
            self._load_from_yaml(path)
        else:
            self._load_from_env()

        # The depth cap env var wins over any file
        env_depth = os.getenv(ENV_NAMES['depth_limit'])
        if env_depth is not None:
            self.depth_limit = self._as_int('depth_limit', env_depth)

        self._validate_config()
        self._loaded = self.as_dict()
        self._initialized = True

    def _find_config_file(self) -> Optional[str]:
        """Find the configuration file in common locations"""
        possible_paths = [
            'config/neretin.yaml',
            'neretin_toolkit/config/settings.yaml',
            'neretin.yaml',
        ]

        for path in possible_paths:
            if Path(path).exists():
                return path
        return None

    def _load_from_yaml(self, path: str):
        """Load configuration from YAML file"""
        try:
            with open(path, 'r', encoding='utf-8') as file:
                loaded = yaml.safe_load(file) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigurationError(f"Cannot read config file {path}: {e}") from e

        if not isinstance(loaded, dict):
            raise ConfigurationError(f"Config file {path} must contain a mapping")

        for key, default in DEFAULTS.items():
            value = loaded.get(key, default)
            setattr(self, key, value if key == 'log_level' else self._as_int(key, value))

    def _load_from_env(self):
        """Load configuration from environment variables"""
        load_dotenv()
        for key, default in DEFAULTS.items():
            raw = os.getenv(ENV_NAMES[key])
            if raw is None:
                setattr(self, key, default)
            elif key == 'log_level':
                setattr(self, key, raw)
            else:
                setattr(self, key, self._as_int(key, raw))

    @staticmethod
    def _as_int(key: str, value: Any) -> int:
        try:
            return int(value)
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"Configuration value {key}={value!r} is not an integer") from e

    def _validate_config(self):
        """Validate that every numeric knob is in range"""
        problems = []
        if self.depth_limit < 2:
            problems.append('depth_limit must be at least 2')
        for key in ('random_budget', 'exhaustive_threshold', 'search_node_budget',
                    'coset_index_threshold', 'subgroup_degree_cap'):
            if getattr(self, key) < 1:
                problems.append(f'{key} must be positive')
        if self.seed < 0:
            problems.append('seed must be non-negative')
        if str(self.log_level).upper() not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            problems.append(f'unknown log_level {self.log_level!r}')

        if problems:
            raise ConfigurationError(f"Invalid configuration: {', '.join(problems)}")

    def override(self, **values: Any):
        """Apply explicit overrides (CLI flags); None values are ignored."""
        for key, value in values.items():
            if key not in DEFAULTS:
                raise ConfigurationError(f"Unknown configuration key: {key}")
            if value is None:
                continue
            setattr(self, key, value if key == 'log_level' else self._as_int(key, value))
        self._validate_config()

    def reset(self):
        """Restore the values loaded at start-up."""
        for key, value in self._loaded.items():
            setattr(self, key, value)

    def as_dict(self) -> Dict[str, Any]:
        """Get the configuration as a dictionary"""
        return {key: getattr(self, key) for key in DEFAULTS}
