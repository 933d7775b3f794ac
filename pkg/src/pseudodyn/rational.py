"""Exact rational parsing/formatting and the unbounded marker.

All verdict-relevant numbers in this library are `fractions.Fraction`;
floats only ever appear in rendered log/entropy columns.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError


class Unbounded:
    """Marker for "any value works": no finite constraint exists."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "unbounded"


UNBOUNDED = Unbounded()


def is_unbounded(value) -> bool:
    return isinstance(value, Unbounded)


def parse_rational(value) -> Fraction:
    """Parse an exact rational from int, Fraction, or a 'p/q' / decimal string.

    Floats are rejected: a float has already lost the author's intent, so
    model files must use strings or integers for non-integral values.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse rational from {value!r}") from exc
    if isinstance(value, float):
        # Read the float as the decimal literal it prints as; model files
        # should prefer 'p/q' strings, and the JSON loader parses decimal
        # literals exactly before a float is ever constructed.
        return Fraction(str(value))
    raise InputError(f"cannot parse rational from {value!r}")


def format_rational(value) -> str:
    if is_unbounded(value):
        return "unbounded"
    frac = Fraction(value)
    if frac.denominator == 1:
        return str(frac.numerator)
    return f"{frac.numerator}/{frac.denominator}"
