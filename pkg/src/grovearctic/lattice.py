"""Geometry of the lower octant: initial conditions, rhombi and their diagonals.

Points are plain integer triples.  An initial-condition set is stored by its
finite set `removed` of cubes (the paper's U); the lower set L is everything
else in the nonpositive octant and I = {p in L : p + (1,1,1) not in L}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, List, Tuple

Point3 = Tuple[int, int, int]
AXES = ("a", "b", "c")
_UNIT = {"a": (1, 0, 0), "b": (0, 1, 0), "c": (0, 0, 1)}


def add(p: Point3, q: Point3) -> Point3:
    return (p[0] + q[0], p[1] + q[1], p[2] + q[2])


def sub(p: Point3, q: Point3) -> Point3:
    return (p[0] - q[0], p[1] - q[1], p[2] - q[2])


def level(p: Point3) -> int:
    return p[0] + p[1] + p[2]


def in_octant(p: Point3) -> bool:
    return p[0] <= 0 and p[1] <= 0 and p[2] <= 0


def unit(axis: str) -> Point3:
    return _UNIT[axis]


def other_axes(axis: str) -> Tuple[str, str]:
    """The two axes spanning a rhombus of the given type, in cyclic order."""
    k = AXES.index(axis)
    return AXES[(k + 1) % 3], AXES[(k + 2) % 3]


@dataclass(frozen=True, order=True)
class Rhombus:
    """Rhombus r_q(anchor): the anchor is its top vertex; the face normal is e_q."""

    axis: str
    anchor: Point3

    def __post_init__(self):
        if self.axis not in _UNIT:
            raise ValueError(f"unknown rhombus axis {self.axis!r}")

    def vertices(self) -> Tuple[Point3, Point3, Point3, Point3]:
        s, t = other_axes(self.axis)
        p = self.anchor
        ps, pt = sub(p, unit(s)), sub(p, unit(t))
        return (p, ps, pt, sub(ps, unit(t)))

    def long_diagonal(self) -> Tuple[Point3, Point3]:
        """E_q: joins the two middle vertices (lies one level below the anchor)."""
        _, ps, pt, _ = self.vertices()
        return (ps, pt)

    def short_diagonal(self) -> Tuple[Point3, Point3]:
        """e_q: joins the anchor to the bottom vertex."""
        p, _, _, bottom = self.vertices()
        return (p, bottom)


@dataclass(frozen=True)
class InitialConditions:
    removed: FrozenSet[Point3]

    def __post_init__(self):
        removed = frozenset(tuple(p) for p in self.removed)
        object.__setattr__(self, "removed", removed)
        for p in removed:
            if not in_octant(p):
                raise ValueError(f"removed cube {p} is outside the octant")
            for axis in AXES:
                q = add(p, unit(axis))
                if in_octant(q) and q not in removed:
                    raise ValueError(f"removed set is not closed upward at {p}")

    @classmethod
    def empty(cls) -> "InitialConditions":
        return cls(frozenset())

    def in_lower(self, p: Point3) -> bool:
        return in_octant(p) and p not in self.removed

    def __contains__(self, p: Point3) -> bool:
        """Membership in I."""
        return self.in_lower(p) and not self.in_lower(add(p, (1, 1, 1)))

    def with_cube(self, cube: Point3) -> "InitialConditions":
        return InitialConditions(self.removed | {cube})

    def is_addable(self, cube: Point3) -> bool:
        """A cube of L can join the removed set when everything above it already has."""
        if not self.in_lower(cube):
            return False
        return all(not self.in_lower(add(cube, unit(ax))) for ax in AXES)

    def contains_rhombus(self, r: Rhombus) -> bool:
        return all(v in self for v in r.vertices())

    def min_level(self) -> int:
        return min((level(p) for p in self.removed), default=1)

    def schedule(self) -> List[Point3]:
        """Default shuffle order: decreasing level, ties lexicographic."""
        return sorted(self.removed, key=lambda p: (-level(p), p))


def standard_initial_conditions(n: int) -> InitialConditions:
    """I(n): the removed cubes are the octant points with i+j+k >= 2-n."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("order must be a positive integer")
    removed = set()
    for i in range(0, -(n - 1), -1):
        for j in range(0, -(n - 1) - i, -1):
            for k in range(0, -(n - 1) - i - j, -1):
                if i + j + k >= 2 - n:
                    removed.add((i, j, k))
    return InitialConditions(frozenset(removed))


def cubes_above(p: Point3) -> FrozenSet[Point3]:
    """Octant points q >= p componentwise (an upward-closed set)."""
    return frozenset(
        (i, j, k)
        for i in range(p[0], 1)
        for j in range(p[1], 1)
        for k in range(p[2], 1)
    )


def minimal_conditions_for(r: Rhombus) -> InitialConditions:
    """Smallest initial-condition set whose member set contains the rhombus."""
    start = add(r.anchor, unit(r.axis))
    return InitialConditions(cubes_above(start) if in_octant(start) else frozenset())


def minimal_conditions_around(p: Point3) -> InitialConditions:
    """Smallest initial-condition set containing all three rhombi anchored at p."""
    removed = set()
    for axis in AXES:
        q = add(p, unit(axis))
        if in_octant(q):
            removed |= cubes_above(q)
    return InitialConditions(frozenset(removed))


def removable_cubes(ic: InitialConditions) -> List[Point3]:
    """Removed cubes whose six lower neighbours all lie in I, sorted.

    These are exactly the cubes that could have been the last one added.
    """
    out = []
    for p in ic.removed:
        nbrs = [
            sub(p, (1, 0, 0)), sub(p, (0, 1, 0)), sub(p, (0, 0, 1)),
            sub(p, (1, 1, 0)), sub(p, (1, 0, 1)), sub(p, (0, 1, 1)),
        ]
        if all(q in ic for q in nbrs):
            out.append(p)
    return sorted(out)


def addable_cubes(ic: InitialConditions) -> List[Point3]:
    """Cubes of L that can be added next (their upper neighbours are removed)."""
    candidates = {(0, 0, 0)} if (0, 0, 0) not in ic.removed else set()
    for p in ic.removed:
        for axis in AXES:
            q = sub(p, unit(axis))
            if in_octant(q):
                candidates.add(q)
    return sorted(q for q in candidates if ic.is_addable(q))


def _window_points(ic: InitialConditions, depth: int) -> Iterator[Point3]:
    for i in range(0, -depth - 1, -1):
        for j in range(0, -depth - 1, -1):
            for k in range(0, -depth - 1, -1):
                yield (i, j, k)


def rhombi_of(ic: InitialConditions, depth: int | None = None) -> List[Rhombus]:
    """Rhombi with all four vertices in I and anchors in the box [-depth, 0]^3.

    I is infinite, so a window is required; the default depth reaches two
    levels below the deepest removed cube.
    """
    if depth is None:
        depth = max(2, 2 - ic.min_level()) if ic.removed else 2
    out = []
    for p in _window_points(ic, depth):
        if p not in ic:
            continue
        for axis in AXES:
            r = Rhombus(axis, p)
            if ic.contains_rhombus(r):
                out.append(r)
    return sorted(out)


def rhombi_containing(v: Point3, ic: InitialConditions) -> Iterable[Rhombus]:
    """All rhombi of I having v as a vertex."""
    for axis in AXES:
        s, t = other_axes(axis)
        for anchor in (v, add(v, unit(s)), add(v, unit(t)), add(add(v, unit(s)), unit(t))):
            r = Rhombus(axis, anchor)
            if in_octant(anchor) and ic.contains_rhombus(r):
                yield r
