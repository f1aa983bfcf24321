"""Exact rational parsing, formatting and decimal rounding helpers."""

from __future__ import annotations

from fractions import Fraction


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or a plain integer/decimal string into a Fraction."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(text)


def format_rational(value: Fraction) -> str:
    """Render a Fraction as "p/q" (or "p" when the denominator is 1)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def round_half_even(value: Fraction, places: int) -> str:
    """Round exactly to `places` decimals with ties to even; returns a string."""
    value = Fraction(value)
    sign = "-" if value < 0 else ""
    scaled = abs(value) * 10**places
    whole, rem = divmod(scaled.numerator, scaled.denominator)
    double = 2 * rem
    if double > scaled.denominator or (double == scaled.denominator and whole % 2 == 1):
        whole += 1
    return _place_point(sign, whole, places)


def truncate_decimal(value: Fraction, places: int) -> str:
    """Truncate toward zero to `places` decimals; returns a string."""
    value = Fraction(value)
    sign = "-" if value < 0 else ""
    scaled = abs(value) * 10**places
    whole = scaled.numerator // scaled.denominator
    return _place_point(sign, whole, places)


def _place_point(sign: str, units: int, places: int) -> str:
    digits = str(units).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"
