"""
Runtime settings: defaults < config file < CKT_ environment variables < CLI flags
"""

import os
from configparser import RawConfigParser
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from .utils import parse_byte_size

ENV_PREFIX = "CKT_"
CONFIG_SECTION = "cliffordkt"
DEFAULT_CONFIG_FILE = "~/.cliffordkt.cfg"


@dataclass(frozen=True)
class Settings:
    """Resolved configuration shared by the library entry points and the CLI."""

    memory_budget_bytes: int = 8 * 1024**3
    max_qubits: int = 6
    workers: int = 1
    solver: str = "highs"
    primal_tol: float = 1e-8
    dual_tol: float = 1e-9
    max_iterations: int = 100000
    data_dir: str = "ckt-data"
    progress: bool = False

    def with_overrides(self, **overrides: Any) -> "Settings":
        """Return a copy with every non-None override applied."""
        values = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **_coerce(values))


def read_config_file(filepath: Optional[Union[str, Path]] = None) -> Dict[str, str]:
    """
    Read the [cliffordkt] section of an INI config file.

    Args:
        filepath: Path to the config file. Defaults to CKT_CONFIG or ~/.cliffordkt.cfg

    Returns:
        Raw string values of the section, or an empty dict if there is no file
    """
    if filepath is None:
        filepath = os.environ.get(f"{ENV_PREFIX}CONFIG", DEFAULT_CONFIG_FILE)
    filepath = Path(os.path.expanduser(str(filepath)))

    if not filepath.exists():
        return {}

    config = RawConfigParser()
    config.read(filepath)
    if not config.has_section(CONFIG_SECTION):
        return {}
    return dict(config.items(CONFIG_SECTION))


def read_environment(environ: Optional[Mapping[str, str]] = None) -> Dict[str, str]:
    """Collect CKT_* variables that name a Settings field."""
    environ = os.environ if environ is None else environ
    aliases = {"memory_budget": "memory_budget_bytes"}
    known = {f.name for f in fields(Settings)}

    values = {}
    for key, value in environ.items():
        if not key.startswith(ENV_PREFIX):
            continue
        name = key[len(ENV_PREFIX):].lower()
        name = aliases.get(name, name)
        if name in known:
            values[name] = value
    return values


def load_settings(
    config_path: Optional[Union[str, Path]] = None,
    environ: Optional[Mapping[str, str]] = None,
    **overrides: Any,
) -> Settings:
    """
    Resolve settings with precedence flags > environment > config file > defaults.

    Args:
        config_path: Optional INI file path
        environ: Environment mapping (defaults to os.environ)
        **overrides: Values from command-line flags; None means "not given"

    Returns:
        Resolved Settings
    """
    file_values = read_config_file(config_path)
    file_values = {
        ("memory_budget_bytes" if k == "memory_budget" else k): v
        for k, v in file_values.items()
    }
    known = {f.name for f in fields(Settings)}
    file_values = {k: v for k, v in file_values.items() if k in known}

    settings = Settings()
    settings = replace(settings, **_coerce(file_values))
    settings = replace(settings, **_coerce(read_environment(environ)))
    return settings.with_overrides(**overrides)


def _coerce(values: Dict[str, Any]) -> Dict[str, Any]:
    types = {f.name: f.type for f in fields(Settings)}
    coerced: Dict[str, Any] = {}
    for name, value in values.items():
        if name not in types:
            raise ValueError(f"Unknown setting: {name}")
        if not isinstance(value, str):
            coerced[name] = value
        elif name == "memory_budget_bytes":
            coerced[name] = parse_byte_size(value)
        elif types[name] in (int, "int"):
            coerced[name] = int(value)
        elif types[name] in (float, "float"):
            coerced[name] = float(value)
        elif types[name] in (bool, "bool"):
            coerced[name] = value.strip().lower() in ("1", "true", "yes", "on")
        else:
            coerced[name] = value
    return coerced
