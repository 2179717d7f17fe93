from fractions import Fraction

import pytest

from budget_stream.units import (
    SCALE,
    PrecisionError,
    format_units,
    fraction_from_decimal,
    from_units,
    scaled_floor,
    to_units,
)


def test_to_units_exact_decimals():
    assert to_units("10") == 10 * SCALE
    assert to_units("0.25") == SCALE // 4
    assert to_units(10) == 10 * SCALE
    assert to_units(0.1) == SCALE // 10
    assert to_units("1e-3") == SCALE // 1000
    assert to_units(Fraction(1, 4)) == SCALE // 4


def test_to_units_rejects_sub_scale_precision():
    with pytest.raises(PrecisionError):
        to_units("0.0000001")


def test_to_units_rejects_non_numeric():
    with pytest.raises(ValueError):
        to_units("abc")
    with pytest.raises(TypeError):
        to_units(None)
    with pytest.raises(TypeError):
        to_units(True)


def test_format_units_round_trip():
    for text in ["10", "0.25", "0", "123.456789", "3"]:
        assert to_units(format_units(to_units(text))) == to_units(text)
    assert format_units(10 * SCALE) == "10"
    assert format_units(SCALE // 4) == "0.25"
    assert format_units(0) == "0"
    assert format_units(-SCALE // 2) == "-0.5"


def test_from_units():
    assert from_units(SCALE) == 1.0
    assert from_units(SCALE // 2) == 0.5


def test_scaled_floor_is_exact():
    # 0.1 * 700 * 181 = 12670 cost units, no float drift
    assert scaled_floor(fraction_from_decimal(0.1) * 700, to_units(181)) == to_units(12670)
    # flooring: 1/3 of 1 unit
    assert scaled_floor(Fraction(1, 3), SCALE) == SCALE // 3


def test_fraction_from_decimal():
    assert fraction_from_decimal(0.1) == Fraction(1, 10)
    assert fraction_from_decimal("0.2") == Fraction(1, 5)
