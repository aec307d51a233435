"""Exact rational helpers shared by every JSON and CSV surface."""

import math
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, List, Union

from marketeq.errors import InvalidGameError

RATIONALIZE_DENOMINATOR = 10**6

RationalLike = Union[int, float, str, Fraction]


def parse_rational(value: RationalLike) -> Fraction:
    """Parse `"p/q"`, an integer, a decimal string or a float.

    Floats (and irrational inputs tabulated as floats) are rationalized with
    denominator `RATIONALIZE_DENOMINATOR`; use `is_rationalized` to detect it.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidGameError(f"Expected a rational, got boolean {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InvalidGameError(f"Expected a finite rational, got {value!r}")
        return rationalize(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidGameError(f"Cannot parse rational {value!r}: {e}")
    raise InvalidGameError(f"Expected a rational, got {type(value).__name__}")


def rationalize(value: float, denominator: int = RATIONALIZE_DENOMINATOR) -> Fraction:
    return Fraction(round(value * denominator), denominator)


def format_rational(value: Fraction) -> str:
    """Serialize as `"p/q"`, or `"p"` for integers"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Fraction, digits: int = 12) -> str:
    """Decimal rendering with `digits` significant digits"""
    value = Fraction(value)
    if value == 0:
        return "0"
    with localcontext() as ctx:
        ctx.prec = digits
        rendered = Decimal(value.numerator) / Decimal(value.denominator)
    return format(rendered.normalize(), "f")


def parse_rationals(values: Iterable[RationalLike]) -> List[Fraction]:
    return [parse_rational(v) for v in values]


def format_rationals(values: Iterable[Fraction]) -> List[str]:
    return [format_rational(v) for v in values]
