"""
Configuration helpers for YAML-backed run settings.

Precedence, lowest first: built-in defaults, YAML config (root keys or a
`sd_toolkit:` wrapper), the SD_TOOLKIT_CACHE_DIR environment variable,
explicitly passed CLI flags.
"""

from __future__ import annotations

from copy import deepcopy
import os
from pathlib import Path
from typing import Any, Mapping

try:
    import yaml
except ModuleNotFoundError:  # pragma: no cover - dependency availability
    yaml = None  # type: ignore[assignment]

from .utils import UserError, ensure_file_exists, normalize_path


CONFIG_SECTION = "sd_toolkit"
CACHE_DIR_ENV = "SD_TOOLKIT_CACHE_DIR"

DEFAULT_SD_TOOLKIT: dict[str, Any] = {
    "jobs": 1,
    "precision": 32,
    "count": 5,
    "kmax": 100,
    "oracle_budget": 100_000_000,
    "cache_dir": None,
    "use_cache": True,
    "timing": False,
}

CONFIG_KEYS = set(DEFAULT_SD_TOOLKIT.keys())

_POSITIVE_INT_KEYS = ("jobs", "precision", "count", "kmax", "oracle_budget")
_BOOL_KEYS = ("use_cache", "timing")


def _require_yaml() -> Any:
    """Return yaml module or raise a user-facing install hint."""

    if yaml is None:
        raise UserError(
            "YAML support requires PyYAML. Install dependencies with "
            "'pip install -r requirements.txt' or install 'PyYAML'."
        )
    return yaml


def load_yaml(path: Path) -> dict[str, Any]:
    """Load a YAML file into a dictionary."""

    ensure_file_exists(path, "Config file")
    yaml_mod = _require_yaml()
    try:
        with path.open("r", encoding="utf-8") as handle:
            loaded = yaml_mod.safe_load(handle)
    except yaml_mod.YAMLError as exc:
        raise UserError(f"Failed to parse YAML config {path}: {exc}") from exc
    except OSError as exc:
        raise UserError(f"Failed to read config {path}: {exc}") from exc

    if loaded is None:
        return {}
    if not isinstance(loaded, dict):
        raise UserError(f"Config {path} must contain a YAML mapping/object at top level.")
    return loaded


def deep_merge(base: dict[str, Any], overlay: Mapping[str, Any]) -> dict[str, Any]:
    """
    Recursively merge dictionaries where overlay values win.
    """

    merged = deepcopy(base)
    for key, value in overlay.items():
        if (
            key in merged
            and isinstance(merged[key], dict)
            and isinstance(value, dict)
        ):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = deepcopy(value)
    return merged


def validate_keys(cfg: Mapping[str, Any], allowed: set[str], ctx: str) -> None:
    """
    Validate dictionary keys and fail fast on unknown entries.
    """

    unknown = sorted(key for key in cfg.keys() if key not in allowed)
    if unknown:
        allowed_list = ", ".join(sorted(allowed))
        unknown_list = ", ".join(unknown)
        raise UserError(
            f"Unknown keys in {ctx}: {unknown_list}. Allowed keys: {allowed_list}."
        )


def extract_section(loaded: dict[str, Any]) -> dict[str, Any]:
    """Support either root config keys or an sd_toolkit wrapper."""

    if CONFIG_SECTION in loaded:
        section = loaded[CONFIG_SECTION]
        if not isinstance(section, dict):
            raise UserError(f"config.{CONFIG_SECTION} must be a mapping/object.")
        validate_keys(section, CONFIG_KEYS, f"config.{CONFIG_SECTION}")
        return section
    validate_keys(loaded, CONFIG_KEYS, "config")
    return loaded


def validate_config(cfg: Mapping[str, Any]) -> dict[str, Any]:
    """Strict types: integers stay integers, booleans stay booleans."""

    for key in _POSITIVE_INT_KEYS:
        value = cfg[key]
        if isinstance(value, bool) or not isinstance(value, int) or value <= 0:
            raise UserError(f"{key} must be a positive integer (got {value!r}).")
    for key in _BOOL_KEYS:
        if not isinstance(cfg[key], bool):
            raise UserError(f"{key} must be true or false.")
    cache_dir = cfg["cache_dir"]
    if cache_dir is not None and not isinstance(cache_dir, str):
        raise UserError("cache_dir must be a path string or null.")
    return dict(cfg)


def build_effective_config(
    config_path: Path | None,
    cli_overrides: Mapping[str, Any],
    environ: Mapping[str, str] | None = None,
) -> dict[str, Any]:
    """Resolve defaults < YAML config < environment < explicit CLI flags."""

    effective = deep_merge(DEFAULT_SD_TOOLKIT, {})
    if config_path is not None:
        effective = deep_merge(effective, extract_section(load_yaml(config_path)))

    env = os.environ if environ is None else environ
    env_cache = env.get(CACHE_DIR_ENV)
    if env_cache:
        effective["cache_dir"] = env_cache

    validate_keys(cli_overrides, CONFIG_KEYS, "command-line options")
    effective = deep_merge(effective, cli_overrides)
    return validate_config(effective)


def resolve_cache_dir(cfg: Mapping[str, Any]) -> Path:
    """Configured cache directory, or ~/.cache/sd-toolkit."""

    if cfg.get("cache_dir"):
        return normalize_path(str(cfg["cache_dir"]))
    return Path.home() / ".cache" / "sd-toolkit"


def dump_default_config_yaml() -> str:
    """Serialize wrapped defaults as YAML."""

    yaml_mod = _require_yaml()
    return yaml_mod.safe_dump({CONFIG_SECTION: DEFAULT_SD_TOOLKIT}, sort_keys=False).rstrip()
