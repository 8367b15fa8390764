"""Exact rational parsing and canonical string form."""

from __future__ import annotations

from decimal import Decimal, InvalidOperation
from fractions import Fraction
from numbers import Rational


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions and strings ("3", "1/3", "0.125") to a Fraction.

    Floats are refused: they would silently import binary rounding. Decimal
    strings are parsed exactly, so "0.1" is 1/10.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not weights")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            try:
                return Fraction(int(num), int(den))
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"not a rational: {value!r}") from exc
        try:
            d = Decimal(text)
        except InvalidOperation as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
        if not d.is_finite():
            raise ValueError(f"not a rational: {value!r}")
        return Fraction(d)
    raise TypeError(f"cannot read {type(value).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    """Lowest-terms "p/q", or "p" for integers."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
