from fractions import Fraction

import numpy as np
import pytest

from common.numeric import (
    NumericMode, approx_equal, as_number, format_number, parse_number, promote, to_array,
)
from common.utils import digest_payload, mixed_radix_strides, product_size


def test_parse_number():
    assert parse_number("3/4") == Fraction(3, 4)
    assert parse_number(" 2 ") == Fraction(2)
    assert parse_number("0.25") == Fraction(1, 4)
    with pytest.raises(ValueError):
        parse_number("abc")


def test_decimals_are_exact_in_rational_mode():
    assert parse_number("0.1") == Fraction(1, 10)
    assert parse_number("1e-3") == Fraction(1, 1000)
    assert as_number("0.1", NumericMode.RATIONAL) == Fraction(1, 10)
    assert as_number(0.1, NumericMode.RATIONAL) == Fraction(1, 10)
    assert as_number(np.float64(0.2), NumericMode.RATIONAL) == Fraction(1, 5)
    assert as_number("0.1", NumericMode.DOUBLE) == 0.1
    assert isinstance(parse_number("inf"), float)


def test_format_number_lowest_terms():
    assert format_number(Fraction(2, 4)) == "1/2"
    assert format_number(Fraction(3)) == "3"
    assert format_number(np.float64(0.5)) == 0.5


def test_rational_mode_refuses_non_finite():
    with pytest.raises(ValueError):
        as_number(float("nan"), NumericMode.RATIONAL)


def test_promote():
    assert promote(NumericMode.RATIONAL, NumericMode.RATIONAL) is NumericMode.RATIONAL
    assert promote(NumericMode.RATIONAL, NumericMode.DOUBLE) is NumericMode.DOUBLE


def test_approx_equal_modes():
    assert not approx_equal(Fraction(1, 3), Fraction(1, 3) + Fraction(1, 10 ** 12), NumericMode.RATIONAL)
    assert approx_equal(1 / 3, 1 / 3 + 1e-12, NumericMode.DOUBLE)
    assert not approx_equal(Fraction(1) + Fraction(1, 10 ** 12), 1, NumericMode.RATIONAL)
    assert not approx_equal(1, Fraction(1) - Fraction(1, 10 ** 12), NumericMode.RATIONAL)
    assert approx_equal(Fraction(2, 2), 1, NumericMode.RATIONAL)


def test_to_array_modes():
    exact = to_array([["1/2", 0], [Fraction(1, 2), 1]], NumericMode.RATIONAL)
    assert exact.dtype == object
    assert exact[0, 0] == Fraction(1, 2)
    assert to_array([["1/4", 0.5]], NumericMode.DOUBLE).tolist() == [[0.25, 0.5]]


def test_digest_is_order_independent():
    assert digest_payload({"a": 1, "b": [1, 2]}) == digest_payload({"b": [1, 2], "a": 1})
    assert digest_payload({"a": 1}) != digest_payload({"a": 2})


def test_mixed_radix():
    assert mixed_radix_strides([2, 3, 4]) == [12, 4, 1]
    assert product_size([2, 3, 4]) == 24
    assert product_size([]) == 1
