"""Fixed-point arithmetic for acquisition costs and budgets.

Total spend never exceeding the global budget is a hard contract, and float
drift over long streams would corrupt it, so every money-like quantity is an
integer count of micro cost-units. Conversion from decimal inputs is exact;
values finer than the scale are rejected rather than rounded.
"""

from __future__ import annotations

from fractions import Fraction

SCALE = 10**6  # micro-units per cost unit


class PrecisionError(ValueError):
    """Raised for cost values finer than the fixed-point scale."""


def to_units(value: int | float | str | Fraction) -> int:
    """Convert a decimal cost/budget value to integer micro-units, exactly."""
    if isinstance(value, bool):
        raise TypeError("cost value must be numeric, not bool")
    if isinstance(value, int):
        frac = Fraction(value)
    elif isinstance(value, Fraction):
        frac = value
    elif isinstance(value, float):
        # repr of a float is the shortest decimal that round-trips, so this
        # matches what the caller wrote (0.1 -> 1/10, not the binary float).
        frac = Fraction(str(value))
    elif isinstance(value, str):
        try:
            frac = Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a numeric value: {value!r}") from exc
    else:
        raise TypeError(f"cost value must be numeric, got {type(value).__name__}")
    scaled = frac * SCALE
    if scaled.denominator != 1:
        raise PrecisionError(
            f"value {value!r} needs more than {len(str(SCALE)) - 1} decimal places"
        )
    return int(scaled)


def from_units(units: int) -> float:
    return units / SCALE


def format_units(units: int) -> str:
    """Render micro-units as an exact decimal string (no trailing zeros)."""
    sign = "-" if units < 0 else ""
    whole, rem = divmod(abs(units), SCALE)
    if rem == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{rem:06d}".rstrip("0")


def scaled_floor(factor: Fraction, units: int) -> int:
    """floor(factor * units) computed without float error."""
    return int((factor * units) // 1)


def fraction_from_decimal(value: float | str) -> Fraction:
    """Exact rational for a decimal the user wrote (e.g. an alpha of 0.1)."""
    return Fraction(str(value)) if isinstance(value, float) else Fraction(value)
