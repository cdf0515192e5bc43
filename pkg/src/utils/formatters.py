"""Formatting utilities for result files and console display."""

import math
from typing import Optional

from rich.text import Text

from const import FLOAT_DIGITS


def format_float(value: float, digits: int = FLOAT_DIGITS) -> str:
    """Format a float with a fixed number of significant digits.

    Args:
        value: Number to format
        digits: Significant digits (17 round-trips any double)

    Returns:
        String like "0.15953400114645373", "nan" or "inf"
    """
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}g}"


def format_complex(value: complex, digits: int = FLOAT_DIGITS) -> str:
    """Format a complex number as "re+imj" with significant digits on both parts."""
    re = format_float(value.real, digits)
    im = format_float(abs(value.imag), digits)
    sign = "-" if value.imag < 0 or (value.imag == 0 and math.copysign(1.0, value.imag) < 0) else "+"
    return f"{re}{sign}{im}j"


def round_floats(obj, digits: int = FLOAT_DIGITS):
    """Recursively normalise floats in a JSON-able structure.

    Floats are re-parsed from their 17-digit representation; NaN and
    infinities become strings so json.dump never emits invalid JSON.
    """
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        if math.isfinite(obj):
            return float(format_float(obj, digits))
        return format_float(obj, digits)
    if isinstance(obj, complex):
        return [round_floats(obj.real, digits), round_floats(obj.imag, digits)]
    if isinstance(obj, dict):
        return {str(k): round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v, digits) for v in obj]
    # numpy scalars
    if hasattr(obj, "item"):
        return round_floats(obj.item(), digits)
    return obj


def format_verdict(passed: Optional[bool], label: Optional[str] = None) -> Text:
    """Format a pass/fail verdict with colors.

    Args:
        passed: True, False, or None when the check did not apply
        label: Override text

    Returns:
        Rich Text: PASS (green), FAIL (bold red) or N/A (dim)
    """
    if passed is None:
        return Text(label or "N/A", style="dim")
    if passed:
        return Text(label or "PASS", style="green")
    return Text(label or "FAIL", style="bold red")


def format_estimate(value: float, stderr: Optional[float] = None, digits: int = 4) -> str:
    """Format an estimate with optional standard error.

    Returns:
        "0.1234 ± 0.0012" or "0.1234"
    """
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "-"
    if stderr is None:
        return f"{value:.{digits}g}"
    return f"{value:.{digits}g} ± {stderr:.2g}"


def format_seconds(seconds: float) -> str:
    """Format wall time as human readable.

    Returns:
        Formatted string like "850ms", "12.3s" or "4m 05s"
    """
    if seconds < 1:
        return f"{int(seconds * 1000)}ms"
    if seconds < 60:
        return f"{seconds:.1f}s"
    mins, secs = divmod(int(seconds), 60)
    return f"{mins}m {secs:02d}s"
