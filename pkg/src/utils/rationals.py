from fractions import Fraction
from typing import Union

from src.errors import InvalidParameter


def format_rational(value: Union[Fraction, int]) -> str:
    """Lowest-terms ``a/b`` text, always with a denominator."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParameter(f"Not a rational number: {text!r}") from exc
