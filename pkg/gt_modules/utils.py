from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

import numpy as np
from sympy import prime

RationalLike = Union[int, Fraction, str]


def exists(v):
    return v is not None


def default(v, d):
    return v if exists(v) else d


# exact numbers


def to_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, bool):
        raise ValueError(f"Not a rational number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"Not a rational number: {value!r}") from None
    raise ValueError(f"Not a rational number: {value!r}")


def format_fraction(value: Fraction) -> str:
    # "p/q", or "p" for integers
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def is_integral(value: Fraction) -> bool:
    return Fraction(value).denominator == 1


# randomness


def as_rng(seed: int | np.random.Generator | None = None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def seed_of(rng) -> int | None:
    # the integer seed to record in a report, if there is one
    return rng if isinstance(rng, int) else None


def odd_primes(count: int, start: int = 0) -> list[int]:
    # the (start+1)-th odd prime onwards
    return [prime(i) for i in range(start + 2, start + 2 + count)]
