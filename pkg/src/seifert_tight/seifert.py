"""Seifert invariants of Seifert fibered spaces over the 2-sphere."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .cf import as_fraction

__all__ = [
    "SeifertInvariants",
    "RealizabilityWitness",
    "normalize",
    "euler_number",
    "reverse_orientation",
    "realizable",
]


def _sort_key(r: Fraction):
    # descending by value; equal values are equal Fractions, (num, den) is a
    # tie-break that keeps the order total
    return (-r, r.numerator, r.denominator)


@dataclass(frozen=True)
class SeifertInvariants:
    """``Y(e0; r1, ..., rk)`` with ``0 < ri < 1`` sorted descending."""

    e0: int
    ratios: tuple[Fraction, ...]

    def __post_init__(self):
        if isinstance(self.e0, bool) or not isinstance(self.e0, int):
            raise TypeError("e0 must be an integer")
        ratios = tuple(as_fraction(r) for r in self.ratios)
        for r in ratios:
            if not 0 < r < 1:
                raise ValueError(f"Seifert ratios must lie in (0, 1), got {r}")
        object.__setattr__(self, "ratios", tuple(sorted(ratios, key=_sort_key)))

    @property
    def k(self) -> int:
        return len(self.ratios)

    def euler_number(self) -> Fraction:
        return euler_number(self)

    def to_json(self) -> dict:
        return {"e0": self.e0, "ratios": [str(r) for r in self.ratios]}

    @classmethod
    def from_json(cls, data: dict) -> "SeifertInvariants":
        return normalize(int(data["e0"]), [as_fraction(r) for r in data["ratios"]])

    def __str__(self):
        inner = ", ".join(str(r) for r in self.ratios)
        return f"Y({self.e0}; {inner})" if inner else f"Y({self.e0})"


@dataclass(frozen=True)
class RealizabilityWitness:
    m: int
    a: int

    def __post_init__(self):
        if not (self.m > self.a > 0 and math.gcd(self.m, self.a) == 1):
            raise ValueError(f"invalid witness (m, a) = ({self.m}, {self.a})")


def normalize(e0: int, ratios: Iterable) -> SeifertInvariants:
    """Fold integer parts of arbitrary rational ratios into ``e0``.

    Integral ratios are absorbed completely and dropped.
    """
    e0 = int(e0)
    kept = []
    for r in ratios:
        r = as_fraction(r)
        whole = math.floor(r)
        e0 += whole
        if r != whole:
            kept.append(r - whole)
    return SeifertInvariants(e0, tuple(kept))


def euler_number(si: SeifertInvariants) -> Fraction:
    return si.e0 + sum(si.ratios, Fraction(0))


def reverse_orientation(si: SeifertInvariants) -> SeifertInvariants:
    """``-Y(e0; r1..rk) = Y(-k - e0; 1 - r1, ..., 1 - rk)``."""
    return SeifertInvariants(-si.k - si.e0, tuple(1 - r for r in si.ratios))


def _satisfies(r1, r2, r3, m, a) -> bool:
    # all three inequalities are strict; equality does not count
    return 1 / r1 > Fraction(m, a) and 1 / r2 > Fraction(m, m - a) and 1 / r3 > m


def realizable(si: SeifertInvariants) -> Optional[RealizabilityWitness]:
    """Lexicographically least coprime ``(m, a)``, ``m > a > 0``, realizing
    the (sorted) triple of ratios, or None when the triple is not realizable.

    Since ``1/r3 > m`` is required, ``m`` ranges over ``2 .. ceil(1/r3) - 1``.
    """
    if si.k != 3:
        raise ValueError(f"realizability is defined for three fibers, got k = {si.k}")
    r1, r2, r3 = si.ratios
    bound = 1 / r3
    m = 2
    while m < bound:
        for a in range(1, m):
            if math.gcd(m, a) == 1 and _satisfies(r1, r2, r3, m, a):
                return RealizabilityWitness(m, a)
        m += 1
    return None
