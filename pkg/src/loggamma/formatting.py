"""Output formatting utilities for the loggamma CLI."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
from collections.abc import Callable, Iterable, Sequence
from typing import Any, TextIO

import numpy as np


class Color:
    """ANSI color codes for terminal output."""

    RESET = "\033[0m"
    BOLD = "\033[1m"
    COLOR_PREFIX = "\033[38;2;"
    COLOR_SUFFIX = "m"

    GREEN = (0, 200, 0)
    RED = (220, 60, 60)

    @classmethod
    def enabled(cls, stream: TextIO | None = None) -> bool:
        """Check if colors should be enabled."""
        if os.environ.get("NO_COLOR"):
            return False
        target = stream if stream is not None else sys.stdout
        isatty = getattr(target, "isatty", None)
        return bool(isatty and isatty())

    @classmethod
    def rgb(cls, text: str, color: tuple[int, int, int], bold: bool = False, stream: TextIO | None = None) -> str:
        """Apply a 24-bit color (optionally bold)."""
        if not cls.enabled(stream):
            return text
        r, g, b = color
        prefix = f"{cls.BOLD}" if bold else ""
        return f"{prefix}{cls.COLOR_PREFIX}{r};{g};{b}{cls.COLOR_SUFFIX}{text}{cls.RESET}"

    @classmethod
    def passed(cls, text: str, stream: TextIO | None = None) -> str:
        return cls.rgb(text, cls.GREEN, bold=True, stream=stream)

    @classmethod
    def failed(cls, text: str, stream: TextIO | None = None) -> str:
        return cls.rgb(text, cls.RED, bold=True, stream=stream)


def format_number(value: float | int) -> str:
    """Render a number losslessly: 17 significant digits, infinities as inf/-inf."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    number = float(value)
    if math.isnan(number):
        return "nan"
    if math.isinf(number):
        return "inf" if number > 0 else "-inf"
    return f"{number:.17g}"


def _json_value(value: Any) -> str:
    if isinstance(value, np.ndarray):
        value = value.tolist()
    if isinstance(value, np.generic):
        value = value.item()
    if value is None or isinstance(value, (bool, str)):
        return json.dumps(value)
    if isinstance(value, (int, float)):
        text = format_number(value)
        return json.dumps(text) if text in ("inf", "-inf", "nan") else text
    if isinstance(value, dict):
        items = (f"{json.dumps(str(key))}: {_json_value(item)}" for key, item in value.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json_value(item) for item in value) + "]"
    raise TypeError(f"cannot serialise {type(value).__name__}")


def to_json(record: dict) -> str:
    """One JSON object on one line; floats carry 17 significant digits, inf is the string "inf"."""
    return _json_value(record)


def format_cell(value: Any) -> str:
    """CSV rendering of one field; lists are joined with ';'."""
    if isinstance(value, np.ndarray):
        value = value.tolist()
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (list, tuple)):
        return ";".join(format_cell(item) for item in value)
    if isinstance(value, dict):
        return to_json(value)
    return format_number(value)


def flatten_record(record: dict, prefix: str = "") -> dict:
    """Flatten nested dicts into dotted keys for CSV output."""
    flat: dict = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten_record(value, f"{name}."))
        else:
            flat[name] = value
    return flat


def to_csv(records: Sequence[dict]) -> str:
    """CSV with a header row; the columns are the union of keys in first-seen order."""
    flat = [flatten_record(record) for record in records]
    headers: list[str] = []
    for record in flat:
        headers.extend(key for key in record if key not in headers)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(headers)
    for record in flat:
        writer.writerow([format_cell(record.get(key)) for key in headers])
    return buffer.getvalue()


def render_records(records: Sequence[dict], fmt: str) -> str:
    if fmt == "csv":
        return to_csv(records)
    return "".join(to_json(record) + "\n" for record in records)


def emit_records(records: Sequence[dict], fmt: str = "json", out: str | None = None) -> None:
    """Print records to stdout and, when ``out`` is set, also write them to that file."""
    text = render_records(records, fmt)
    sys.stdout.write(text)
    if out:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def render_table(
    headers: list[str],
    rows: list[list[str]],
    pretty: bool,
    cell_formatters: list[Callable | None] | None = None,
    stream: TextIO | None = None,
) -> None:
    """Render tabular data either aligned (pretty) or TSV.

    Args:
        headers: Column headers.
        rows: Data rows.
        pretty: If True, align columns; otherwise output TSV.
        cell_formatters: Optional list of functions (one per column) to style cell values.
                        Each function takes (value, row_index) and returns the styled string.
        stream: Destination, stdout by default.
    """
    out = stream if stream is not None else sys.stdout
    if not pretty:
        print("\t".join(headers), file=out)
        for row in rows:
            print("\t".join(str(cell) for cell in row), file=out)
        return

    widths = [
        max(len(str(headers[idx])), max((len(str(row[idx])) for row in rows), default=0))
        for idx in range(len(headers))
    ]

    def fmt_row(row: list[str], row_idx: int) -> str:
        parts = []
        for col_idx, cell in enumerate(row):
            cell_str = str(cell).ljust(widths[col_idx])
            if cell_formatters and col_idx < len(cell_formatters) and cell_formatters[col_idx]:
                cell_str = cell_formatters[col_idx](cell_str, row_idx)
            parts.append(cell_str)
        return "  ".join(parts).rstrip()

    print("  ".join(str(h).ljust(widths[i]) for i, h in enumerate(headers)).rstrip(), file=out)
    for idx, row in enumerate(rows):
        print(fmt_row(row, idx), file=out)


def is_pretty_output(stream: TextIO | None = None) -> bool:
    """Aligned tables on a terminal, TSV when piped."""
    target = stream if stream is not None else sys.stdout
    isatty = getattr(target, "isatty", None)
    return bool(isatty and isatty())


def short_number(value: Any) -> str:
    """Compact rendering for human summaries (not for data files)."""
    if isinstance(value, (bool, np.bool_)):
        return "yes" if value else "no"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if math.isinf(number) or math.isnan(number):
            return format_number(number)
        return f"{number:.6g}"
    return str(value)


def summary_rows(rows: Iterable[dict]) -> tuple[list[str], list[list[str]]]:
    """Headers and short-formatted cells for a list of homogeneous row dicts."""
    materialised = [flatten_record(row) for row in rows]
    headers: list[str] = []
    for row in materialised:
        headers.extend(key for key in row if key not in headers)
    cells = [[short_number(row.get(key, "")) for key in headers] for row in materialised]
    return headers, cells
