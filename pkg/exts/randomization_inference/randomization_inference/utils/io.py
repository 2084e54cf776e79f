"""CSV ingestion and JSON/CSV emission."""

from __future__ import annotations

import json
import math
import numpy as np
import os
import pandas as pd
from collections.abc import Sequence
from typing import Any

from ..errors import StructuralError

HEADER_LINES = 1
"""Number of lines before the first data row."""


def read_table(path: str) -> pd.DataFrame:
    """Read a UTF-8 CSV file with a header row, keeping every cell as text.

    Raises:
        StructuralError: When the file is missing, empty or has no header row.
    """
    if not os.path.isfile(path):
        raise StructuralError(f"Input file not found: '{path}'.")
    try:
        frame = pd.read_csv(path, dtype=str, encoding="utf-8", keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError as e:
        raise StructuralError(f"Input file '{path}' is empty; a header row is required.") from e
    except pd.errors.ParserError as e:
        raise StructuralError(f"Input file '{path}' is not a valid CSV file: {e}") from e
    frame.columns = [str(c).strip() for c in frame.columns]
    return frame


def _require_columns(frame: pd.DataFrame, columns: Sequence[str], path: str):
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise StructuralError(
            f"Column(s) {missing} not found in '{path}'. Available columns: {list(frame.columns)}."
        )


def numeric_column(frame: pd.DataFrame, column: str, path: str = "<input>", allow_empty: bool = False) -> np.ndarray:
    """Parse a text column as floats with '.' as the decimal separator.

    Args:
        frame: Table read by :func:`read_table`.
        column: Column name.
        path: File name used in error messages.
        allow_empty: Whether empty cells are dropped instead of reported. Defaults to False.

    Raises:
        StructuralError: When a cell is not a number. The message lists the offending file line numbers.
    """
    _require_columns(frame, [column], path)
    text = frame[column].astype(str).str.strip()
    if allow_empty:
        text = text[text != ""]
    values = pd.to_numeric(text, errors="coerce")
    bad = values.isna() | ~np.isfinite(values.fillna(0.0))
    if bad.any():
        # file line = header + 1-based row position
        lines = [int(i) + HEADER_LINES + 1 for i in values.index[bad]]
        shown = ", ".join(str(line) for line in lines[:10])
        raise StructuralError(f"Malformed numeric value(s) in column '{column}' of '{path}' at line(s) {shown}.")
    return values.to_numpy(dtype=float)


def label_column(frame: pd.DataFrame, column: str, path: str = "<input>") -> tuple[np.ndarray, np.ndarray]:
    """Encode a text label column as integer codes.

    Returns:
        A tuple of the integer code per row and the distinct labels in first-appearance order.
    """
    _require_columns(frame, [column], path)
    text = frame[column].astype(str).str.strip()
    empty = text == ""
    if empty.any():
        lines = [int(i) + HEADER_LINES + 1 for i in text.index[empty]]
        raise StructuralError(f"Empty label in column '{column}' of '{path}' at line(s) {lines[:10]}.")
    codes, uniques = pd.factorize(text)
    return codes.astype(np.int64), np.asarray(uniques)


def read_columns(path: str, columns: Sequence[str]) -> dict[str, np.ndarray]:
    """Read numeric columns of a CSV file."""
    frame = read_table(path)
    _require_columns(frame, columns, path)
    return {c: numeric_column(frame, c, path) for c in columns}


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays and non-finite floats to JSON-compatible values.

    Non-finite floats are written as the strings ``"inf"``, ``"-inf"`` and ``"nan"``.
    """
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if callable(value):
        return f"{getattr(value, '__module__', '')}:{getattr(value, '__qualname__', repr(value))}"
    return value


def dump_json(payload: dict, path: str | None = None) -> str:
    """Serialize ``payload`` as UTF-8 JSON and write it to ``path`` when given."""
    text = json.dumps(to_jsonable(payload), indent=2, sort_keys=False, ensure_ascii=False, allow_nan=False)
    if path is not None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    return text


def dump_table(table: pd.DataFrame, path: str | None = None) -> str:
    """Serialize a table as CSV and write it to ``path`` when given."""
    text = table.to_csv(index=False, float_format="%.10g")
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    return text
