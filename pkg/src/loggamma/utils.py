"""Common parsing utilities for the loggamma CLI."""

from __future__ import annotations

from pathlib import Path

from .errors import UsageError

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def parse_csv_values(value: str) -> list[str]:
    """Split a comma-separated string into trimmed parts."""
    parts = [part.strip() for part in value.split(",")]
    return [part for part in parts if part]


def parse_float_list(value: str, name: str = "value") -> list[float]:
    """Parse "0.1, 0.2,0.5" into floats."""
    try:
        return [float(part) for part in parse_csv_values(value)]
    except ValueError as exc:
        raise UsageError(f"{name}: expected comma-separated numbers, got {value!r}") from exc


def parse_int_list(value: str, name: str = "value") -> list[int]:
    """Parse "16,32,64" into integers."""
    try:
        return [int(part) for part in parse_csv_values(value)]
    except ValueError as exc:
        raise UsageError(f"{name}: expected comma-separated integers, got {value!r}") from exc


def parse_bool(value: str, name: str = "value") -> bool:
    text = value.strip().lower()
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise UsageError(f"{name}: expected a boolean, got {value!r}")


def parse_plan_text(text: str) -> dict[str, str]:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"plan line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if not key:
            raise UsageError(f"plan line {lineno}: empty key")
        if key in entries:
            raise UsageError(f"plan line {lineno}: duplicate key {key!r}")
        entries[key] = value
    return entries


def read_plan_file(path: str | Path) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read plan file {str(path)!r}: {exc.strerror or exc}") from exc
    return parse_plan_text(text)
