"""Rational number helpers: coercion, JSON round-tripping, formatting.

All structural computations in this package run over ``fractions.Fraction``.
JSON files store rationals as plain ints when integral and as ``"p/q"``
strings otherwise, so reports stay exact and byte-reproducible.
"""

from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def to_fraction(x) -> Fraction:
    """Coerce an int, Fraction, "p/q" string, or float to Fraction.

    Floats convert exactly (binary value), which keeps float inputs usable
    in exact mode without hidden rounding.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a number")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def num_to_json(x: Fraction):
    """Fraction -> JSON scalar (int when integral, 'p/q' string otherwise)."""
    x = Fraction(x)
    if x.denominator == 1:
        return int(x)
    return f"{x.numerator}/{x.denominator}"


def num_from_json(x) -> Fraction:
    return to_fraction(x)


def fmt(x: Fraction) -> str:
    """Short human-readable form, e.g. '5/3' or '2'."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
