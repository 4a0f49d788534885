"""Negative ("minus") continued fractions.

An expansion ``[x1, ..., xn]`` with every ``xi >= 2`` stands for

    x1 - 1/(x2 - 1/(... - 1/xn))

and always evaluates to a rational number greater than 1.  Every rational
``r > 1`` has exactly one such expansion.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

__all__ = [
    "as_fraction",
    "check_expansion",
    "cf_eval",
    "cf_expand",
    "riemenschneider_dual",
    "format_rational",
]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value: Fraction | int) -> str:
    return str(Fraction(value))


def check_expansion(terms: Sequence[int]) -> tuple[int, ...]:
    terms = tuple(terms)
    if not terms:
        raise ValueError("a continued fraction expansion needs at least one term")
    for t in terms:
        if isinstance(t, bool) or not isinstance(t, int):
            raise TypeError(f"expansion terms must be integers, got {t!r}")
        if t < 2:
            raise ValueError(f"expansion terms must be >= 2, got {list(terms)}")
    return terms


def cf_eval(terms: Sequence[int]) -> Fraction:
    terms = check_expansion(terms)
    p, q = terms[-1], 1
    for t in reversed(terms[:-1]):
        p, q = t * p - q, p  # t - q/p
    return Fraction(p, q)


def cf_expand(r) -> tuple[int, ...]:
    """Return the unique expansion with all terms >= 2 evaluating to ``r``.

    Greedy: emit ``t = ceil(r)`` and continue with ``1/(t - r)`` until the
    remainder vanishes.  Raises ValueError when ``r <= 1``.
    """
    r = as_fraction(r)
    if r <= 1:
        raise ValueError(f"only rationals > 1 have a negative expansion, got {r}")
    p, q = r.numerator, r.denominator
    terms = []
    while True:
        t = -(-p // q)
        terms.append(t)
        if t * q == p:
            return tuple(terms)
        p, q = q, t * q - p  # 1/(t - p/q)


def riemenschneider_dual(terms: Sequence[int]) -> tuple[int, ...]:
    """Expansion of ``1/(1 - r)`` where ``1/r = [terms]``.

    This is the chain of the other side in the point-rule picture; the
    operation is an involution.
    """
    r = 1 / cf_eval(terms)
    return cf_expand(1 / (1 - r))
