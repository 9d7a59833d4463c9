"""
Numeric output formatting shared by every artifact the commands write.

All floating values leave the program with TRICHONET_FLOAT_DIGITS
significant digits so that reruns diff cleanly.
"""

import math
from pathlib import Path
from typing import Dict, Iterable, Optional, Sequence

import pandas as pd
from django.conf import settings


def float_digits() -> int:
    return getattr(settings, 'TRICHONET_FLOAT_DIGITS', 9)


def format_float(value: float, digits: Optional[int] = None) -> str:
    """Format a float with a fixed number of significant digits ("inf" for infinity)."""
    if value is None:
        return ''
    if isinstance(value, float) and math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    digits = digits or float_digits()
    return f"{value:.{digits}g}"


def round_float(value: float, digits: Optional[int] = None) -> float:
    """Round a float to a fixed number of significant digits (for JSON output)."""
    if value is None or not math.isfinite(value):
        return value
    return float(format_float(value, digits))


def write_table(path: Path, columns: Dict[str, Sequence], integer_columns: Iterable[str] = ()) -> Path:
    """
    Write a column-oriented table as UTF-8 CSV with a header row.

    Integer columns are written as integers; every other column goes
    through the significant-digit float format.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    frame = pd.DataFrame(columns)
    for name in integer_columns:
        frame[name] = frame[name].astype('int64')

    frame.to_csv(
        path,
        index=False,
        float_format=f"%.{float_digits()}g",
        lineterminator='\n',
        encoding='utf-8',
    )
    return path
