"""
Settings
Loads config/osbrp_rules.yml and applies environment overrides
"""

import copy
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from .exceptions import ConfigError

load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_RULES_FILE = Path(__file__).resolve().parent.parent / "config" / "osbrp_rules.yml"

DEFAULT_SETTINGS: Dict[str, Any] = {
    'oracle': {'search_limit': 200000, 'max_best_vectors': 64},
    'generator': {
        'epochs': 24,
        'visits': 3,
        'station_capacity': 10,
        'demand_range': [-5, 5],
        'vehicle_capacity_range': [0, 10],
        'initial_stock_policy': 'uniform',
        'seed': 20240101,
    },
    'bench': {
        'sizes': [100000, 200000, 400000],
        'visits': 50,
        'repeats': 5,
        'seed': 7,
        'station_capacity': 30,
        'demand_range': [-6, 6],
        'vehicle_capacity_range': [5, 25],
        'ratio_band': [1.3, 3.0],
    },
    'validation': {
        'count': 500,
        'seed': 11,
        'max_epochs': 12,
        'max_visits': 3,
        'max_station_capacity': 6,
        'demand_range': [-8, 8],
        'max_vehicle_capacity': 4,
        'uncapacitated': {'count': 60, 'max_epochs': 6, 'max_visits': 2, 'demand_range': [-4, 4]},
    },
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _load_rules(rules_file: Path) -> Dict[str, Any]:
    """Load the rules YAML, falling back to defaults when it is missing"""
    try:
        with open(rules_file, 'r') as f:
            rules = yaml.safe_load(f)
    except FileNotFoundError:
        logger.warning("%s not found. Using default rules.", rules_file)
        return {}
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse {rules_file}: {e}") from e
    if rules is None:
        return {}
    if not isinstance(rules, dict):
        raise ConfigError(f"{rules_file} must contain a mapping at top level")
    return rules


def load_settings(rules_file: Optional[str] = None) -> Dict[str, Any]:
    """
    Build the effective settings dict.

    Precedence: environment variables > rules file > built-in defaults.
    The rules file is `rules_file`, else $OSBRP_RULES_FILE, else the bundled one.
    """
    path = Path(rules_file or os.getenv("OSBRP_RULES_FILE") or DEFAULT_RULES_FILE)
    settings = _merge(DEFAULT_SETTINGS, _load_rules(path))

    limit = os.getenv("OSBRP_ORACLE_LIMIT")
    if limit:
        settings['oracle']['search_limit'] = _env_int("OSBRP_ORACLE_LIMIT", limit)
    repeats = os.getenv("OSBRP_BENCH_REPEATS")
    if repeats:
        settings['bench']['repeats'] = _env_int("OSBRP_BENCH_REPEATS", repeats)

    logger.debug("settings loaded from %s", path)
    return settings


def log_level() -> str:
    return os.getenv("OSBRP_LOG_LEVEL", "WARNING").upper()


def _env_int(name: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError as e:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from e
