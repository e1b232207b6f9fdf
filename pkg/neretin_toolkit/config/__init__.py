"""
Centralized configuration management for the Neretin toolkit.

This module provides a singleton configuration instance that can be imported and used
throughout the package without reloading config files multiple times.

Usage:
    from neretin_toolkit.config import config

    depth_cap = config.depth_limit
    budget = config.random_budget

    # CLI flags
    config.override(depth_limit=16, seed=3)
"""

from .loader import ConfigLoader

# Create a single instance of ConfigLoader that will be shared across the package
config = ConfigLoader()

__all__ = ['config', 'ConfigLoader']
