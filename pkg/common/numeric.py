# common/numeric.py
"""
Modo numérico dual: racionales exactos (Fraction) o dobles con tolerancia ε.
"""
from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from config import NUMERIC_EPSILON

Number = Union[Fraction, float]


class NumericMode(str, enum.Enum):
    RATIONAL = "rational"
    DOUBLE = "double"


def promote(*modes: NumericMode) -> NumericMode:
    """Mezclar racional y doble promociona a doble."""
    return NumericMode.DOUBLE if NumericMode.DOUBLE in modes else NumericMode.RATIONAL


def as_number(value, mode: NumericMode) -> Number:
    """Convierte un valor (int, float, Fraction, str 'n/d') al modo pedido."""
    if isinstance(value, str):
        value = parse_number(value)
    if mode is NumericMode.RATIONAL:
        if isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError(f"Non-finite value {value!r} in rational mode")
            # decimal JSON literals: 0.1 → 1/10
            return Fraction(str(float(value)))
        return Fraction(value)
    return float(value)


def parse_number(text: str) -> Number:
    """'3/4' → Fraction(3, 4); '0.1' → Fraction(1, 10); 'inf' → float."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


def format_number(value: Number):
    """Serialización JSON: racionales como 'num/den' en términos mínimos."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (np.floating, float)):
        return float(value)
    return value


def is_zero(value: Number, mode: NumericMode, eps: float = NUMERIC_EPSILON) -> bool:
    if mode is NumericMode.RATIONAL:
        return value == 0
    return abs(value) <= eps


def is_positive(value: Number, mode: NumericMode, eps: float = NUMERIC_EPSILON) -> bool:
    if mode is NumericMode.RATIONAL:
        return value > 0
    return value > eps


def is_negative(value: Number, mode: NumericMode, eps: float = NUMERIC_EPSILON) -> bool:
    if mode is NumericMode.RATIONAL:
        return value < 0
    return value < -eps


def approx_equal(a: Number, b: Number, mode: NumericMode, eps: float = NUMERIC_EPSILON) -> bool:
    if mode is NumericMode.RATIONAL:
        return as_number(a, mode) == as_number(b, mode)
    return abs(float(a) - float(b)) <= eps


def to_array(values: Iterable, mode: NumericMode) -> np.ndarray:
    """Array numpy en el modo pedido: dtype=object (Fraction) o float64."""
    if mode is NumericMode.RATIONAL:
        arr = np.array(values, dtype=object)
        flat = arr.reshape(-1)
        for idx, item in enumerate(flat):
            flat[idx] = as_number(item, mode)
        return flat.reshape(arr.shape)
    arr = np.array(values, dtype=object)
    return np.array([as_number(v, mode) for v in arr.reshape(-1)], dtype=float).reshape(arr.shape)


def zeros(shape, mode: NumericMode) -> np.ndarray:
    if mode is NumericMode.RATIONAL:
        arr = np.empty(shape, dtype=object)
        arr.fill(Fraction(0))
        return arr
    return np.zeros(shape, dtype=float)
