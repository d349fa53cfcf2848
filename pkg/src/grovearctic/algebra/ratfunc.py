"""Rational functions kept as unreduced (numerator, denominator) pairs."""

from __future__ import annotations

from dataclasses import dataclass

from .poly import PolyQ
from .series import TruncSeries3, series_inverse


@dataclass(frozen=True)
class RatFuncQ:
    num: PolyQ
    den: PolyQ

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")

    @classmethod
    def of(cls, num, den=1, gens=("x", "y", "z")) -> "RatFuncQ":
        if not isinstance(num, PolyQ):
            num = PolyQ.const(num, gens)
        if not isinstance(den, PolyQ):
            den = PolyQ.const(den, num.gens)
        num, den = num._align(den)
        return cls(num, den)

    def __add__(self, other: "RatFuncQ") -> "RatFuncQ":
        other = _lift(other, self.num.gens)
        if self.den == other.den:
            return RatFuncQ.of(self.num + other.num, self.den)
        return RatFuncQ.of(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RatFuncQ":
        return RatFuncQ(-self.num, self.den)

    def __sub__(self, other) -> "RatFuncQ":
        return self + (-_lift(other, self.num.gens))

    def __mul__(self, other) -> "RatFuncQ":
        other = _lift(other, self.num.gens)
        return RatFuncQ.of(self.num * other.num, self.den * other.den)

    def equals(self, other) -> bool:
        """Equality as rational functions, by cross-multiplication."""
        other = _lift(other, self.num.gens)
        return self.num * other.den == other.num * self.den

    def series(self, D: int) -> TruncSeries3:
        """Power series expansion up to total degree D (denominator must be a unit)."""
        return TruncSeries3.from_poly(self.num, D) * series_inverse(TruncSeries3.from_poly(self.den, D))

    def evaluate(self, point):
        return self.num.evaluate(point) / self.den.evaluate(point)

    def to_json(self) -> dict:
        return {"numerator": self.num.to_json(), "denominator": self.den.to_json()}


def _lift(value, gens) -> RatFuncQ:
    if isinstance(value, RatFuncQ):
        return value
    return RatFuncQ.of(value, 1, gens)
