"""Exact solvers for the cube recurrence and its conductance-weighted version.

Values may be Fractions or any type with field operations (the `Dual`
numbers below give exact first derivatives).  Lattice functions are plain
dicts from points to values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .lattice import AXES, InitialConditions, Point3, Rhombus, in_octant, level, sub, unit

LatticeFunction = Dict[Point3, object]


class IncompleteBoundary(KeyError):
    """A value needed by the recurrence is missing from the boundary data."""


class ConsistencyError(ValueError):
    """Conductances violate the Y-Delta relations at `anchor`."""

    def __init__(self, anchor: Point3, axis: str):
        super().__init__(f"conductance at {axis}{anchor} is not Y-Delta consistent")
        self.anchor = anchor
        self.axis = axis


def _lower_neighbours(t: Point3):
    i, j, k = t
    return (
        (i - 1, j, k), (i, j - 1, k - 1),
        (i, j - 1, k), (i - 1, j, k - 1),
        (i, j, k - 1), (i - 1, j - 1, k),
        (i - 1, j - 1, k - 1),
    )


def _solve_order(ic: InitialConditions, order: Optional[Sequence[Point3]]) -> List[Point3]:
    if order is None:
        return sorted(ic.removed, key=lambda p: (level(p), p))
    order = list(order)
    if set(order) != set(ic.removed) or len(order) != len(ic.removed):
        raise ValueError("order must list every removed cube exactly once")
    return order


def _fetch(f: Mapping[Point3, object], p: Point3):
    try:
        return f[p]
    except KeyError:
        raise IncompleteBoundary(f"no value at {p}") from None


def solve_cube_recurrence(boundary: Mapping[Point3, object], ic: InitialConditions, order: Optional[Sequence[Point3]] = None) -> LatticeFunction:
    """Extend boundary values on I to the removed cubes.

    Cubes are processed from the deepest level up (or in the given order,
    which must only use values already known).
    """
    f = dict(boundary)
    for t in _solve_order(ic, order):
        a1, a2, b1, b2, c1, c2, bottom = (_fetch(f, p) for p in _lower_neighbours(t))
        f[t] = (a1 * a2 + b1 * b2 + c1 * c2) / bottom
    return f


def solve_generalized_recurrence(boundary: Mapping[Point3, object], field, ic: InitialConditions, order: Optional[Sequence[Point3]] = None) -> LatticeFunction:
    """g_t * g_{t-(1,1,1)} = U g_{t-e_i} g_{t-e_j-e_k} + V g_{t-e_j} g_{t-e_i-e_k} + W g_{t-e_k} g_{t-e_i-e_j}."""
    g = dict(boundary)
    for t in _solve_order(ic, order):
        w = field.weights(t)
        a1, a2, b1, b2, c1, c2, bottom = (_fetch(g, p) for p in _lower_neighbours(t))
        g[t] = (w.U * a1 * a2 + w.V * b1 * b2 + w.W * c1 * c2) / bottom
    return g


def conductance_from_f(f: Mapping[Point3, object], axis: str, anchor: Point3):
    """C^f_q(p) = (f at the long diagonal's ends) / (f at the short diagonal's ends)."""
    r = Rhombus(axis, anchor)
    (l1, l2), (s1, s2) = r.long_diagonal(), r.short_diagonal()
    den = _fetch(f, s1) * _fetch(f, s2)
    if not den:
        raise ZeroDivisionError(f"f vanishes on the short diagonal of {axis}{anchor}")
    return _fetch(f, l1) * _fetch(f, l2) / den


def f_from_conductance(field, depth: int, check: bool = True) -> LatticeFunction:
    """A cube-recurrence solution on the box [-depth, 0]^3 whose conductances are `field`.

    f = 1 on the three coordinate rays, the coordinate planes are filled from
    the conductance of each boundary rhombus, and the interior from the cube
    recurrence solved downward.  With `check`, every rhombus inside the box
    is compared against `field` and the first mismatch raises.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    f: LatticeFunction = {}
    for d in range(depth + 1):
        f[(-d, 0, 0)] = Fraction(1)
        f[(0, -d, 0)] = Fraction(1)
        f[(0, 0, -d)] = Fraction(1)
    # faces: the rhombus of type q anchored on the face q = 0 determines its bottom vertex
    for axis in AXES:
        s_ax, t_ax = (ax for ax in AXES if ax != axis)
        for u in range(0, depth):
            for v in range(0, depth):
                p = (0, 0, 0)
                p = sub(sub(p, tuple(u * x for x in unit(s_ax))), tuple(v * x for x in unit(t_ax)))
                r = Rhombus(axis, p)
                top, ps, pt, bottom = r.vertices()
                f[bottom] = f[ps] * f[pt] / (f[top] * field.C(axis, p))
    interior = [
        (-i, -j, -k)
        for i in range(1, depth + 1)
        for j in range(1, depth + 1)
        for k in range(1, depth + 1)
    ]
    interior.sort(key=lambda q: (-level(q), q), reverse=False)
    for q in interior:
        i0, j0, k0 = q[0] + 1, q[1] + 1, q[2] + 1
        num = (
            f[(i0 - 1, j0, k0)] * f[(i0, j0 - 1, k0 - 1)]
            + f[(i0, j0 - 1, k0)] * f[(i0 - 1, j0, k0 - 1)]
            + f[(i0, j0, k0 - 1)] * f[(i0 - 1, j0 - 1, k0)]
        )
        f[q] = num / f[(i0, j0, k0)]
    if check:
        for p in f:
            for axis in AXES:
                r = Rhombus(axis, p)
                if all(v in f for v in r.vertices()):
                    if conductance_from_f(f, axis, p) != field.C(axis, p):
                        raise ConsistencyError(p, axis)
    return f


# Y-Delta layers


@dataclass(frozen=True)
class YDeltaLayer:
    """Long-diagonal conductances of all rhombi anchored at level `level`.

    The table is indexed by (axis, torus class) as in the conductance module.
    """

    level: int
    m: int
    n: int
    table: Mapping[Tuple[str, Tuple[int, int]], Fraction]

    def step(self) -> "YDeltaLayer":
        return ydelta_layer_step(self)


def ydelta_layer_step(layer: YDeltaLayer) -> YDeltaLayer:
    from .conductance import ydelta_layer_step as step_table

    return YDeltaLayer(layer.level - 1, layer.m, layer.n, step_table(layer.table, layer.m, layer.n))


def ydelta_consistent(field, anchor: Point3) -> bool:
    """Check the three Y-Delta relations between the rhombi at `anchor` and below it."""
    ca, cb, cc = (field.C(ax, anchor) for ax in AXES)
    star = ca * cb + ca * cc + cb * cc
    return all(
        field.C(ax, sub(anchor, unit(ax))) * star == field.C(ax, anchor) for ax in AXES
    )


# exact first derivatives


class Dual:
    """a + b*eps with eps^2 = 0, over exact rationals."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @staticmethod
    def _lift(x) -> "Dual":
        return x if isinstance(x, Dual) else Dual(x)

    def __add__(self, other):
        o = self._lift(other)
        return Dual(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return Dual(self.a - o.a, self.b - o.b)

    def __mul__(self, other):
        o = self._lift(other)
        return Dual(self.a * o.a, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        return Dual(self.a / o.a, (self.b * o.a - self.a * o.b) / (o.a * o.a))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"Dual({self.a}, {self.b})"


def boundary_points(ic: InitialConditions) -> List[Point3]:
    """Members of I that the recurrence on the removed cubes actually reads."""
    pts = set()
    for t in ic.removed:
        for p in _lower_neighbours(t):
            if p in ic:
                pts.add(p)
    if not ic.removed:
        pts.add((0, 0, 0))
    return sorted(pts)


def origin_derivative(field, ic: InitialConditions, vertex: Point3) -> Fraction:
    """Exact d g_{0,0,0} / d g_vertex at the all-ones boundary."""
    if vertex not in ic:
        raise ValueError(f"{vertex} is not in the initial-condition set")
    boundary = {p: Dual(1, 1 if p == vertex else 0) for p in boundary_points(ic)}
    boundary.setdefault(vertex, Dual(1, 1))
    g = solve_generalized_recurrence(boundary, field, ic)
    return g[(0, 0, 0)].b


def origin_difference(field, ic: InitialConditions, vertex: Point3, eps: Fraction = Fraction(1, 10**6)) -> Fraction:
    """Two-sided difference quotient of g_{0,0,0} in g_vertex at the all-ones boundary."""
    pts = boundary_points(ic)

    def value(x):
        b = {p: Fraction(1) for p in pts}
        b[vertex] = x
        return solve_generalized_recurrence(b, field, ic)[(0, 0, 0)]

    return (value(1 + eps) - value(1 - eps)) / (2 * eps)
