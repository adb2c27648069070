"""
SettingsFinder - Run-time defaults discovery for gevreyflow.

Inspects the runtime environment in priority order and returns an immutable
Settings value, falling back to built-in defaults so every command always
has something to run with.
"""

import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

from dotenv import dotenv_values

from .gevrey import NORM_MODES

ENV_PREFIX = "GEVREYFLOW_"
SETTING_KEYS = ("rel_tol", "max_subdiv", "mode", "window", "strict")


class SettingsError(Exception):
    """Raised when a configuration value cannot be parsed."""
    pass


@dataclass(frozen=True)
class Settings:
    rel_tol: float = 1e-10
    max_subdiv: int = 2 ** 16
    mode: str = "abs_at_origin"
    window: Optional[Tuple[int, int]] = None
    strict: bool = False


def parse_window(text: str) -> Tuple[int, int]:
    """Read "a:b" into (a, b)."""
    parts = str(text).split(":")
    if len(parts) != 2:
        raise SettingsError(f"Window '{text}' must look like a:b")
    try:
        low, high = int(parts[0]), int(parts[1])
    except ValueError:
        raise SettingsError(f"Window '{text}' must contain two integers")
    if low > high:
        raise SettingsError(f"Window '{text}' has its bounds reversed")
    return low, high


def _parse_bool(text: str) -> bool:
    lowered = str(text).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off", ""):
        return False
    raise SettingsError(f"'{text}' is not a boolean")


def _parse_value(key: str, raw: Any, source: str) -> Any:
    """Convert one raw value for key, naming the source on failure."""
    try:
        if key == "rel_tol":
            value = float(raw)
            if not value > 0:
                raise SettingsError("must be positive")
            return value
        if key == "max_subdiv":
            value = int(raw)
            if value < 1:
                raise SettingsError("must be at least 1")
            return value
        if key == "mode":
            if raw not in NORM_MODES:
                raise SettingsError(f"must be one of {', '.join(NORM_MODES)}")
            return raw
        if key == "window":
            return raw if isinstance(raw, tuple) else parse_window(raw)
        if key == "strict":
            return raw if isinstance(raw, bool) else _parse_bool(raw)
    except (SettingsError, ValueError) as e:
        raise SettingsError(f"Invalid {key} from {source}: {raw!r} ({e})")
    raise SettingsError(f"Unknown setting '{key}' from {source}")


class SettingsFinder:
    """
    Locates run settings across explicit overrides, the process environment,
    a .env file and the built-in defaults.
    """

    @staticmethod
    def detect_config(
        *,
        env_path: Optional[str] = ".env",
        verbose: bool = False,
        overrides: Optional[Mapping[str, Any]] = None,
        environ: Optional[Mapping[str, str]] = None,
    ) -> Settings:
        """
        Resolve every setting, in order of precedence.

        Priority order:
        1. overrides (CLI flags; None values are ignored)
        2. GEVREYFLOW_* process environment variables
        3. GEVREYFLOW_* entries of the .env file at env_path
        4. Settings defaults

        Parameters
        ----------
        env_path : str | None
            Path to a .env file. If None, .env lookup is skipped.
        verbose : bool
            If True, print where each non-default value came from.
        overrides : mapping | None
            Values that win over every other source.
        environ : mapping | None
            Stand-in for os.environ.

        Returns
        -------
        Settings

        Raises
        ------
        SettingsError
            If any source holds a value that cannot be parsed.
        """
        sources = [
            ("overrides", SettingsFinder._from_overrides(overrides)),
            ("environment", SettingsFinder._from_environment(environ)),
        ]
        if env_path is not None:
            sources.append((f".env file {env_path}", SettingsFinder._from_env_file(env_path, verbose)))

        chosen: Dict[str, Any] = {}
        for key in SETTING_KEYS:
            for source_name, values in sources:
                if key in values:
                    chosen[key] = _parse_value(key, values[key], source_name)
                    if verbose:
                        print(f"[SettingsFinder] {key} = {chosen[key]!r} from {source_name}.", file=sys.stderr)
                    break

        return replace(Settings(), **chosen)

    @staticmethod
    def _from_overrides(overrides: Optional[Mapping[str, Any]]) -> Dict[str, Any]:
        if not overrides:
            return {}
        unknown = [k for k in overrides if k not in SETTING_KEYS]
        if unknown:
            raise SettingsError(f"Unknown settings: {', '.join(sorted(unknown))}")
        return {k: v for k, v in overrides.items() if v is not None}

    @staticmethod
    def _from_environment(environ: Optional[Mapping[str, str]]) -> Dict[str, str]:
        env = os.environ if environ is None else environ
        found = {}
        for key in SETTING_KEYS:
            name = ENV_PREFIX + key.upper()
            if name in env:
                found[key] = env[name]
        return found

    @staticmethod
    def _from_env_file(env_path: str, verbose: bool) -> Dict[str, str]:
        """
        Read GEVREYFLOW_* values from a .env file without touching os.environ.

        Returns an empty dict if the file does not exist.
        """
        if not Path(env_path).exists():
            return {}
        values = dotenv_values(env_path)
        found = {}
        for key in SETTING_KEYS:
            raw = values.get(ENV_PREFIX + key.upper())
            if raw is not None:
                found[key] = raw
        if verbose and found:
            print(f"[SettingsFinder] Read {len(found)} setting(s) from {env_path}.", file=sys.stderr)
        return found
