"""Laplacian of the torus graph with (z, w) monodromy, its determinant and Newton polygon.

Vertices of T_{m,n} are the points of the plane i+j+k = -1 modulo the torus
lattice, written in the (a, b) coordinates of the conductance module; each
torus edge class is the long diagonal of one level-0 rhombus.  Edges that
leave the fundamental domain pick up a monomial in z, w depending on the
lattice translation involved (see `_character`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .algebra import PolyQ, det_bareiss
from .algebra.elim import det_by_interpolation
from .conductance import TorusConductance, plane_coords, reduce_plane, torus_slots
from .lattice import Rhombus

ZW = ("z", "w")


def _character(x: int, y: int, m: int, n: int) -> PolyQ:
    """Monodromy of the lattice vector x*(m,0) + y*(n,n).

    When m divides n this is z^(-x - y*n/m) w^(-y), which gives the printed
    T_{1,2} matrix literally; otherwise z^x w^(-y).  Both conventions give
    the hexagon (+-n,0), (0,+-m), (n,m), (-n,-m) as Newton polygon.
    """
    if n % m == 0:
        return PolyQ.monomial((-(x + y * (n // m)), -y), 1, ZW)
    return PolyQ.monomial((x, -y), 1, ZW)


def vertex_labels(m: int, n: int) -> List[Tuple[int, int]]:
    return [(a, b) for b in range(n) for a in range(m)]


@dataclass(frozen=True)
class LaurentMatrix:
    m: int
    n: int
    vertices: List[Tuple[int, int]]
    entries: List[List[PolyQ]]

    def at(self, z, w) -> List[List[PolyQ]]:
        return [[e.subs({"z": z, "w": w}) for e in row] for row in self.entries]

    def to_text(self) -> List[List[str]]:
        return [[e.to_text() for e in row] for row in self.entries]


def laplacian(base: TorusConductance) -> LaurentMatrix:
    """Delta(f)(v) = sum over edges c(v,v') (f(v) - monodromy * f(v'))."""
    m, n = base.m, base.n
    verts = vertex_labels(m, n)
    pos = {v: k for k, v in enumerate(verts)}
    size = len(verts)
    zero = PolyQ.const(0, ZW)
    L = [[zero] * size for _ in range(size)]
    for axis, (a, b) in torus_slots(m, n):
        c = base.value(axis, (a, b))
        c = c if isinstance(c, PolyQ) else PolyQ.const(c, ZW)
        anchor = (b - a, a, -b)  # (0,0,0) + a*(-1,1,0) + b*(1,0,-1)
        ends = Rhombus(axis, anchor).long_diagonal()
        (r1, (x1, y1)), (r2, (x2, y2)) = (reduce_plane(*plane_coords(p), m, n) for p in ends)
        i, j = pos[r1], pos[r2]
        L[i][i] = L[i][i] + c
        L[j][j] = L[j][j] + c
        L[i][j] = L[i][j] - c * _character(x2 - x1, y2 - y1, m, n)
        L[j][i] = L[j][i] - c * _character(x1 - x2, y1 - y2, m, n)
    return LaurentMatrix(m, n, verts, L)


def char_poly(L: LaurentMatrix) -> PolyQ:
    """P(z, w) = det Delta(z, w) over the Laurent ring.

    Each row is multiplied by a monomial clearing its negative exponents, the
    polynomial determinant is taken, and the monomial factor is divided out.
    """
    rows = []
    shift = [0, 0]
    for row in L.entries:
        nonzero = [e for e in row if not e.is_zero()]
        lift = [max(0, -min(e.min_degree(v) for e in nonzero)) if nonzero else 0 for v in ZW]
        mono = PolyQ.monomial(tuple(lift), 1, ZW)
        rows.append([e * mono for e in row])
        shift[0] += lift[0]
        shift[1] += lift[1]
    gens = rows[0][0].gens
    for row in rows:
        for e in row:
            gens = e._align(PolyQ.const(0, gens))[1].gens
    rows = [[e.with_gens(gens) for e in row] for row in rows]
    used = {v for row in rows for e in row for v in e.used_vars()}
    d = det_by_interpolation(rows, gens) if len(used) <= 3 else det_bareiss(rows)
    return d * PolyQ.monomial((-shift[0], -shift[1]), 1, ZW)


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: List[Tuple[int, int]]  # counterclockwise, starting from the lowest-then-leftmost point
    degenerate: bool

    def is_centrally_symmetric(self) -> bool:
        pts = set(self.vertices)
        return all((-a, -b) in pts for a, b in pts)

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices], "degenerate": self.degenerate}


def support(P: PolyQ, variables: Sequence[str] = ZW) -> List[Tuple[int, int]]:
    """Exponents in (z, w) whose coefficient (a polynomial in the other variables) is nonzero."""
    idx = [P.gens.index(v) if v in P.gens else None for v in variables]
    sums: Dict[Tuple[int, int], PolyQ] = {}
    for exp, c in P.terms.items():
        key = tuple(exp[k] if k is not None else 0 for k in idx)
        rest = tuple(0 if k in idx else e for k, e in enumerate(exp))
        sums.setdefault(key, {})
        sums[key][rest] = sums[key].get(rest, 0) + c
    return sorted(k for k, coeffs in sums.items() if any(coeffs.values()))


def convex_hull(points: Sequence[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Monotone chain hull, counterclockwise, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: List[Tuple[int, int]] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Tuple[int, int]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def newton_polygon(P: PolyQ, variables: Sequence[str] = ZW) -> NewtonPolygon:
    if P.is_zero():
        raise ValueError("the zero polynomial has no Newton polygon")
    hull = convex_hull(support(P, variables))
    if len(hull) >= 3:
        start = min(range(len(hull)), key=lambda k: (hull[k][1], hull[k][0]))
        hull = hull[start:] + hull[:start]
    return NewtonPolygon(hull, len(hull) < 3)


def expected_hexagon(m: int, n: int) -> List[Tuple[int, int]]:
    """(+-n,0), (0,+-m), (n,m), (-n,-m), as a set for comparison."""
    return sorted([(n, 0), (-n, 0), (0, m), (0, -m), (n, m), (-n, -m)])
