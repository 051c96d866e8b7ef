"""Exact decimal <-> Fraction helpers.

All numerics in the engine are fractions.Fraction. Numbers cross the
boundary of the system as decimal strings ("5119.0", "0.9652") so that
no value is ever rounded on the way in or out.
"""

from __future__ import annotations

import re
from fractions import Fraction

_DECIMAL_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)$")
_FRACTION_RE = re.compile(r"^([+-]?\d+)/(\d+)$")


def parse_number(text: str) -> Fraction:
    """Parse a decimal string (or "p/q") into an exact Fraction."""
    text = text.strip()
    if _DECIMAL_RE.match(text):
        return Fraction(text)
    m = _FRACTION_RE.match(text)
    if m:
        return Fraction(int(m.group(1)), int(m.group(2)))
    raise ValueError(f"not a decimal or fraction literal: {text!r}")


def to_fraction(value) -> Fraction:
    """Coerce int/float/str/Fraction to an exact Fraction.

    Floats go through repr() so that 0.1 means the decimal 0.1 the caller
    typed, not the binary float it became.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not numeric values")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return parse_number(repr(value))
    if isinstance(value, str):
        return parse_number(value)
    raise ValueError(f"cannot convert {value!r} to a rational")


def has_finite_decimal(q: Fraction) -> bool:
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


def format_decimal(q: Fraction) -> str:
    """Shortest exact decimal, always with a fractional part: 5119 -> "5119.0".

    Raises ValueError when the fraction has no finite decimal expansion.
    """
    if not has_finite_decimal(q):
        raise ValueError(f"{q} has no finite decimal expansion")
    sign = "-" if q < 0 else ""
    q = abs(q)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    k = max(twos, fives)
    scaled = q.numerator * 10**k // q.denominator
    digits = str(scaled).rjust(k + 1, "0")
    whole, frac = (digits[:-k], digits[-k:]) if k else (digits, "")
    frac = frac.rstrip("0") or "0"
    return f"{sign}{whole}.{frac}"


def format_exact(q: Fraction) -> str:
    """Exact text for any rational: finite decimal when possible, else "p/q"."""
    if has_finite_decimal(q):
        return format_decimal(q)
    return f"{q.numerator}/{q.denominator}"


def format_coefficient(q: Fraction) -> str:
    """Compact exact text used for atom coefficients: "2", "0.5", "1/3"."""
    if q.denominator == 1:
        return str(q.numerator)
    return format_exact(q)


def round_to_places(q: Fraction, places: int) -> Fraction:
    """Round half away from zero to the given number of decimal places."""
    scale = 10**places
    scaled = q * scale
    sign = -1 if scaled < 0 else 1
    n = abs(scaled)
    whole = n.numerator // n.denominator
    rem = n - whole
    if 2 * rem >= 1:
        whole += 1
    return Fraction(sign * whole, scale)


def format_confidence(q: Fraction) -> str:
    """Confidence shown with at most four decimal places: 1 -> "1.0"."""
    return format_decimal(round_to_places(q, 4))
