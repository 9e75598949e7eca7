from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

import numpy as np

Real = Union[Fraction, int, float]


def is_exact(value) -> bool:
    return isinstance(value, Rational) and not isinstance(value, bool)


def same(a: Real, b: Real, tol: float) -> bool:
    """Equality on real parameters: exact for rationals, within tol otherwise."""
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(float(a) - float(b)) <= tol


def is_zero(value, tol: float) -> bool:
    if is_exact(value):
        return value == 0
    return abs(complex(value)) <= tol


def as_complex(value) -> complex:
    if is_exact(value):
        return complex(float(value))
    return complex(value)


def to_real(value, field: str = "value") -> Real:
    """Parse a JSON scalar: strings and ints are exact, floats stay floats."""
    if isinstance(value, bool):
        raise ValueError(f"{field}: expected a number, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"{field}: cannot parse {value!r} as an exact rational") from e
    raise ValueError(f"{field}: expected a number, got {type(value).__name__}")


def real_to_json(value: Real):
    if is_exact(value):
        value = Fraction(value)
        return str(value.numerator) if value.denominator == 1 else str(value)
    return float(value)


def rank(rows: Sequence[Iterable[complex]], tol: float) -> int:
    matrix = np.array([list(map(as_complex, row)) for row in rows], dtype=complex)
    if matrix.size == 0:
        return 0
    return int(np.linalg.matrix_rank(matrix, tol=tol))
