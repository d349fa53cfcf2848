"""Trivariate power series truncated at a total degree."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterator, Tuple

from .poly import PolyQ, as_fraction

Idx = Tuple[int, int, int]


def graded_indices(D: int) -> Iterator[Idx]:
    """All (i,j,k) with i+j+k <= D, by total degree then lexicographically."""
    for d in range(D + 1):
        for i in range(d, -1, -1):
            for j in range(d - i, -1, -1):
                yield (i, j, d - i - j)


class TruncSeries3:
    """Exact series in (x, y, z) modulo all monomials of total degree > D.

    Only nonzero coefficients are stored, which keeps products with sparse
    factors (denominators such as det A) cheap.
    """

    __slots__ = ("D", "coeffs")

    def __init__(self, D: int, coeffs: Dict[Idx, object] | None = None):
        if D < 0:
            raise ValueError("cutoff must be nonnegative")
        self.D = D
        self.coeffs: Dict[Idx, Fraction] = {}
        for idx, c in (coeffs or {}).items():
            if sum(idx) <= D and min(idx) >= 0:
                c = as_fraction(c)
                if c:
                    self.coeffs[tuple(idx)] = c

    @classmethod
    def from_poly(cls, p: PolyQ, D: int) -> "TruncSeries3":
        p = p.with_gens(("x", "y", "z"))
        if any(min(e) < 0 for e in p.terms):
            raise ValueError("negative exponents have no power-series expansion")
        return cls(D, p.terms)

    @classmethod
    def one(cls, D: int) -> "TruncSeries3":
        return cls(D, {(0, 0, 0): 1})

    def __getitem__(self, idx: Idx) -> Fraction:
        if sum(idx) > self.D:
            raise IndexError("coefficient beyond the truncation degree")
        return self.coeffs.get(tuple(idx), Fraction(0))

    coefficient = __getitem__

    def _check(self, other: "TruncSeries3"):
        if other.D != self.D:
            raise ValueError("series cutoffs differ")

    def __add__(self, other: "TruncSeries3") -> "TruncSeries3":
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return TruncSeries3(self.D, out)

    def __neg__(self) -> "TruncSeries3":
        return TruncSeries3(self.D, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "TruncSeries3") -> "TruncSeries3":
        return self + (-other)

    def scale(self, factor) -> "TruncSeries3":
        f = as_fraction(factor)
        return TruncSeries3(self.D, {k: c * f for k, c in self.coeffs.items()})

    def __mul__(self, other) -> "TruncSeries3":
        if not isinstance(other, TruncSeries3):
            return self.scale(other)
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) > len(b):
            a, b = b, a
        D = self.D
        out: Dict[Idx, Fraction] = {}
        get = out.get
        bitems = sorted(b.items(), key=lambda kv: sum(kv[0]))
        for (i1, j1, k1), c1 in a.items():
            room = D - i1 - j1 - k1
            for (i2, j2, k2), c2 in bitems:
                if i2 + j2 + k2 > room:
                    break
                key = (i1 + i2, j1 + j2, k1 + k2)
                out[key] = get(key, 0) + c1 * c2
        return TruncSeries3(D, out)

    __rmul__ = __mul__

    def inverse(self) -> "TruncSeries3":
        return series_inverse(self)

    def times_geometric(self, axis: int) -> "TruncSeries3":
        """Multiply by 1/(1 - x_axis), i.e. prefix sums along one axis."""
        out: Dict[Idx, Fraction] = {}
        for idx in graded_indices(self.D):
            prev = list(idx)
            prev[axis] -= 1
            acc = self.coeffs.get(idx, 0)
            if prev[axis] >= 0:
                acc = acc + out.get(tuple(prev), 0)
            if acc:
                out[idx] = acc
        return TruncSeries3(self.D, out)

    def times_monomial(self, exp: Idx) -> "TruncSeries3":
        return TruncSeries3(
            self.D,
            {tuple(a + b for a, b in zip(k, exp)): c for k, c in self.coeffs.items()},
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, TruncSeries3) and self.D == other.D and self.coeffs == other.coeffs

    __hash__ = None


def series_inverse(s: TruncSeries3) -> TruncSeries3:
    """1/s by the coefficient recurrence c_a = -(1/s_0) * sum_{b != 0} s_b c_{a-b}."""
    s0 = s.coeffs.get((0, 0, 0), 0)
    if not s0:
        raise ZeroDivisionError("series with zero constant term is not a unit")
    inv0 = 1 / Fraction(s0)
    rest = [(k, c) for k, c in s.coeffs.items() if k != (0, 0, 0)]
    out: Dict[Idx, Fraction] = {}
    for idx in graded_indices(s.D):
        if idx == (0, 0, 0):
            out[idx] = inv0
            continue
        i, j, k = idx
        acc = 0
        for (a, b, c), coeff in rest:
            if a <= i and b <= j and c <= k:
                prev = out.get((i - a, j - b, k - c))
                if prev:
                    acc += coeff * prev
        if acc:
            out[idx] = -acc * inv0
    return TruncSeries3(s.D, out)
