"""Numerical settings loaded from config.yaml with environment overrides."""

import copy
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from const import (
    CANTOR_STAGE,
    DEFAULT_ALPHA,
    DEFAULT_C_JM,
    DEFAULT_CONFIG,
    DEFAULT_N_MAX,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_QUADRATURE_ORDER,
    DISC_COVER_FACTOR,
    HITTING_DELTA,
    HITTING_HORIZON,
    JOHN_GRID,
    JOHN_PROBES,
    MAX_QUADRATURE_ORDER,
    MAX_SQUARES,
    MIN_CIRCLE_POINTS,
    R_SQUARED_MIN,
    SPECTRUM_J_RANGE,
    TIP_HEIGHT_FACTOR,
    UNIVERSAL_BOUND_TOL,
    ZIPPER_MAX_VERTICES,
    ZIPPER_MIN_VERTICES,
)
from utils.logger import get_logger

logger = get_logger("settings")

DEFAULT_SETTINGS: Dict[str, Any] = {
    "loewner": {"tip_height_factor": TIP_HEIGHT_FACTOR, "eval_points": 200},
    "conformal": {"zipper_min_vertices": ZIPPER_MIN_VERTICES, "zipper_max_vertices": ZIPPER_MAX_VERTICES},
    "sieve": {
        "quadrature_order": DEFAULT_QUADRATURE_ORDER,
        "max_quadrature_order": MAX_QUADRATURE_ORDER,
        "refine_ratio": 4.0,
        "n_max": DEFAULT_N_MAX,
        "max_squares": MAX_SQUARES,
        "disc_cover_factor": DISC_COVER_FACTOR,
        "john_probes": JOHN_PROBES,
        "john_grid": JOHN_GRID,
    },
    "spectrum": {
        "j_min": SPECTRUM_J_RANGE[0],
        "j_max": SPECTRUM_J_RANGE[1],
        "min_circle_points": MIN_CIRCLE_POINTS,
        "r_squared_min": R_SQUARED_MIN,
        "universal_bound_tolerance": UNIVERSAL_BOUND_TOL,
        "c_jones_makarov": DEFAULT_C_JM,
        "alpha_john": DEFAULT_ALPHA,
    },
    "boundary": {
        "hitting_delta": HITTING_DELTA,
        "horizon": HITTING_HORIZON,
        "n_steps": 1000,
        "cantor_stage": CANTOR_STAGE,
        "chunk_size": 64,
    },
    "threads": 0,
    "output_dir": DEFAULT_OUTPUT_DIR,
}

# Environment variable -> (section, key, cast)
ENV_OVERRIDES = {
    "SLE_LAB_THREADS": (None, "threads", int),
    "SLE_LAB_N_MAX": ("sieve", "n_max", int),
    "SLE_LAB_QUADRATURE_ORDER": ("sieve", "quadrature_order", int),
    "SLE_LAB_N_STEPS": ("boundary", "n_steps", int),
    "SLE_LAB_OUTPUT_DIR": (None, "output_dir", str),
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively merge ``override`` into a copy of ``base``."""
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_settings(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load numerical settings.

    Args:
        config_path: YAML file; defaults to config/config.yaml. Missing files fall back to built-in defaults.

    Returns:
        Settings dictionary (built-in defaults < file < environment)
    """
    path = Path(config_path or DEFAULT_CONFIG)
    file_settings: Dict[str, Any] = {}
    if path.exists():
        with open(path, "r", encoding="utf-8") as f:
            file_settings = yaml.safe_load(f) or {}
    else:
        logger.debug(f"Settings file {path} not found, using defaults")

    settings = _merge(DEFAULT_SETTINGS, file_settings)

    for env_name, (section, key, cast) in ENV_OVERRIDES.items():
        raw = os.getenv(env_name)
        if raw is None:
            continue
        try:
            value = cast(raw)
        except ValueError:
            logger.warning(f"Ignoring {env_name}={raw!r}: not a valid {cast.__name__}")
            continue
        if section is None:
            settings[key] = value
        else:
            settings.setdefault(section, {})[key] = value

    return settings


_cached: Optional[Dict[str, Any]] = None


def get_settings() -> Dict[str, Any]:
    """Process-wide settings, loaded once from the default location."""
    global _cached
    if _cached is None:
        _cached = load_settings()
    return _cached


def section(name: str) -> Dict[str, Any]:
    """Shortcut for one settings section."""
    return get_settings().get(name, {})


def use_settings(config_path: Optional[str] = None) -> Dict[str, Any]:
    """Reload the process-wide settings from ``config_path``."""
    global _cached
    _cached = load_settings(config_path)
    return _cached
