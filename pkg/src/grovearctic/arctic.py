"""Homogeneous parts at (1,1,1), projective duals, and arctic-curve slices.

The dual of a plane curve f(x,y,z) = 0 is found by putting z = -u x - v y
(the line ux + vy + z = 0, i.e. w = 1), so that g(x, y) = f(x, y, -ux - vy)
is a binary form whose repeated roots mark tangent lines.  In the chart
y = 1 the eliminant is Res_x(g, dg/dx).  It also contains the leading
coefficient of g (tangency at infinity in the chart) and repeated factors
from singular points of f; both are removed, and what remains is
homogenized with w.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import PolyQ, gcd, resultant, squarefree_decomposition

XYZ = ("x", "y", "z")
UVW = ("u", "v", "w")


@dataclass(frozen=True)
class PlaneCurve:
    poly: PolyQ
    note: str = ""

    def __post_init__(self):
        if self.poly.is_zero():
            raise ValueError("a plane curve needs a nonzero polynomial")
        if not self.poly.is_homogeneous():
            raise ValueError("plane curve polynomial must be homogeneous")
        if len(self.poly.gens) != 3:
            raise ValueError("plane curves live in three homogeneous variables")

    @property
    def degree(self) -> int:
        return self.poly.degree()

    @property
    def gens(self) -> Tuple[str, ...]:
        return self.poly.gens

    def proportional_to(self, other: "PlaneCurve | PolyQ") -> bool:
        q = other.poly if isinstance(other, PlaneCurve) else other
        return proportional(self.poly, q)


def proportional(p: PolyQ, q: PolyQ) -> bool:
    """p = c q for a nonzero rational c."""
    p, q = p._align(q)
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    if set(p.terms) != set(q.terms):
        return False
    exp = next(iter(p.terms))
    c = p.terms[exp] / q.terms[exp]
    return all(p.terms[e] == c * q.terms[e] for e in p.terms)


def homogeneous_part_at(P: PolyQ, point: Sequence[int] = (1, 1, 1), note: str = "") -> PlaneCurve:
    """Lowest-degree homogeneous component of P(point + (x, y, z))."""
    if P.is_zero():
        raise ValueError("zero polynomial has no homogeneous part")
    P = P.with_gens(XYZ) if set(P.used_vars()) <= set(XYZ) else P
    shifted = P.shift(dict(zip(XYZ, point)))
    d = shifted.min_degree()
    return PlaneCurve(shifted.homogeneous_component(d).with_gens(XYZ), note)


def vanishing_order(P: PolyQ, point: Sequence[int] = (1, 1, 1)) -> int:
    return P.shift(dict(zip(XYZ, point))).min_degree()


@dataclass
class DualResult:
    curve: PlaneCurve
    eliminant: PolyQ  # Res_x(g, g_x) in (u, v), before cleanup
    removed: Dict[str, PolyQ] = dc_field(default_factory=dict)


def dual_curve(f: PlaneCurve, target: Optional[PolyQ] = None) -> DualResult:
    """Projective dual of f, in (u, v, w) if f is in (x, y, z) and vice versa.

    With a `target`, a factor is never discarded if the target needs it: if
    the target divides the eliminant but not the cleaned result, the cleanup
    falls back to the eliminant with only the leading-coefficient factors removed.
    """
    if f.degree < 2:
        raise ValueError("dual curve requires degree at least 2")
    src = f.gens
    dst = UVW if src == XYZ else XYZ
    x, y, zv = src
    u, v, w = dst
    ring = src + dst[:2]
    F = f.poly.with_gens(ring)
    U, V = PolyQ.var(u, ring), PolyQ.var(v, ring)
    X, Y = PolyQ.var(x, ring), PolyQ.var(y, ring)
    g = F.subs({zv: -U * X - V * Y}).subs({y: 1})
    gx = g.diff(x)
    res = resultant(g, gx, x)
    if res.is_zero():
        raise ValueError("degenerate input: the eliminant vanishes identically")
    plane = tuple(dst[:2])
    E = res.with_gens(plane) if set(res.used_vars()) <= set(plane) else res
    E = E.with_gens(plane)
    lc = g.leading_coefficient_in(x).with_gens(ring)
    lc = lc.with_gens(plane) if set(lc.used_vars()) <= set(plane) else lc
    lc = lc.with_gens(plane)
    removed: Dict[str, PolyQ] = {}
    body = E.primitive()
    stripped = PolyQ.const(1, plane)
    if not lc.is_constant():
        while True:
            h = gcd(body, lc)
            if h.is_constant():
                break
            body = body.divexact(h)
            stripped = stripped * h
    if not stripped.is_constant():
        removed["leading_coefficient"] = stripped
    parts = squarefree_decomposition(body)
    simple = parts.get(1, PolyQ.const(1, plane))
    repeated = PolyQ.const(1, plane)
    for mult, part in parts.items():
        if mult > 1:
            repeated = repeated * part ** mult
    if not repeated.is_constant():
        removed["repeated"] = repeated
    result = simple
    if target is not None:
        t = _dehomogenize(target, dst)
        if t.divides(body) and not t.divides(result):
            result = body
    out = _homogenize(result.primitive(), dst)
    return DualResult(PlaneCurve(out, f"dual of {f.note or 'curve'}"), E, removed)


def _dehomogenize(p: PolyQ, gens: Tuple[str, str, str]) -> PolyQ:
    p = p.with_gens(gens).subs({gens[2]: 1})
    return p.with_gens(gens[:2]) if set(p.used_vars()) <= set(gens[:2]) else p


def _homogenize(p: PolyQ, gens: Tuple[str, str, str]) -> PolyQ:
    p = p.with_gens(gens[:2])
    D = p.degree()
    terms = {(a, b, D - a - b): c for (a, b), c in p.terms.items()}
    return PolyQ(terms, gens)


def raw_eliminant_homogeneous(result: DualResult) -> PolyQ:
    """The eliminant homogenized in (u, v, w), for divisibility checks."""
    return _homogenize(result.eliminant, result.curve.gens)


# real slices


@dataclass
class CurveSlice:
    """Contours of dual(u, v, -1-u-v) = 0 inside the triangle u, v <= 0, u + v >= -1."""

    components: List[np.ndarray]  # each (k, 3) array of (u, v, w) points
    resolution: int
    closed: List[bool]

    def points(self) -> np.ndarray:
        if not self.components:
            return np.zeros((0, 3))
        return np.concatenate(self.components)

    def step(self) -> float:
        return 1.0 / (self.resolution - 1)

    def closed_components(self, min_cells: float = 20.0) -> List[np.ndarray]:
        """Closed contours whose length exceeds `min_cells` grid steps.

        Marching squares leaves loops a few cells long around cusps and
        tangencies; the threshold drops those.
        """
        out = []
        for c, cl in zip(self.components, self.closed):
            if cl and polyline_length(c) >= min_cells * self.step():
                out.append(c)
        return out

    def closed_count(self, min_cells: float = 20.0) -> int:
        return len(self.closed_components(min_cells))


def polyline_length(pts: np.ndarray) -> float:
    return float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))


def inside_polygon(points: np.ndarray, polygon: np.ndarray) -> np.ndarray:
    """Even-odd test in the (u, v) projection."""
    px, py = points[:, 0], points[:, 1]
    x0, y0 = polygon[:, 0], polygon[:, 1]
    x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
    inside = np.zeros(len(points), dtype=bool)
    for a, b, c, d in zip(x0, y0, x1, y1):
        crosses = (b > py) != (d > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = a + (py - b) * (c - a) / (d - b)
        inside ^= crosses & (px < xint)
    return inside


def _float_evaluator(p: PolyQ):
    scale = max(abs(c) for c in p.terms.values())
    items = [(exp, float(c / scale)) for exp, c in sorted(p.terms.items())]
    top = p.degree()

    def ev(U, V, W):
        powers = []
        for base in (U, V, W):
            pw = [np.ones_like(base)]
            for _ in range(top):
                pw.append(pw[-1] * base)
            powers.append(pw)
        total = np.zeros_like(U, dtype=float)
        for (a, b, c), k in items:
            total += k * (powers[0][a] * powers[1][b] * powers[2][c])
        return total

    return ev


def arctic_slice(dual: PlaneCurve, resolution: int = 400, margin_cells: int = 3) -> CurveSlice:
    """Marching-squares trace of the dual curve in the plane u + v + w = -1.

    The grid has `resolution` points per unit along u and v and covers the
    triangle u, v, w <= 0 padded by `margin_cells` grid steps, so curves
    tangent to the sides still come out as closed contours.  Cells outside
    the padded triangle are masked.
    """
    from skimage import measure

    if resolution < 3:
        raise ValueError("resolution must be at least 3")
    step = 1.0 / (resolution - 1)
    pad = margin_cells * step
    count = resolution + 2 * margin_cells
    t = -1.0 - pad + step * np.arange(count)
    Ug, Vg = np.meshgrid(t, t, indexing="ij")
    Wg = -1.0 - Ug - Vg
    vals = _float_evaluator(dual.poly)(Ug, Vg, Wg)
    mask = (Wg <= pad + 1e-12) & (Ug <= pad + 1e-12) & (Vg <= pad + 1e-12)
    contours = measure.find_contours(vals, 0.0, mask=mask)
    comps, closed = [], []
    for c in contours:
        uu = t[0] + c[:, 0] * step
        vv = t[0] + c[:, 1] * step
        pts = np.stack([uu, vv, -1.0 - uu - vv], axis=1)
        comps.append(pts)
        closed.append(bool(len(c) > 3 and np.allclose(c[0], c[-1])))
    return CurveSlice(comps, resolution, closed)


INCENTER = np.array([-1.0, -1.0, -1.0]) / 3.0
INRADIUS = 1.0 / math.sqrt(6.0)


def incircle_deviation(sl: CurveSlice) -> float:
    """Max relative deviation of slice points from the inscribed circle of the triangle."""
    pts = sl.points()
    if len(pts) == 0:
        return math.inf
    d = np.linalg.norm(pts - INCENTER, axis=1)
    return float(np.max(np.abs(d - INRADIUS)) / INRADIUS)


def side_distances(sl: CurveSlice) -> Tuple[float, float, float]:
    """Minimum of -u, -v, -w over the slice: distance (in coordinates) to each side."""
    pts = sl.points()
    return tuple(float(np.min(-pts[:, k])) for k in range(3))


# rendering


_AXIS_COLORS = {"a": "#d62728", "b": "#1f77b4", "c": "#2ca02c"}


def _project(p: Sequence[float]) -> Tuple[float, float]:
    i, j, k = p
    return ((j - i) * math.sqrt(3) / 2, k - (i + j) / 2)


def render_svg(grove=None, slice_: Optional[CurveSlice] = None, n: Optional[int] = None, size: int = 600) -> str:
    """Deterministic SVG: long grove edges colored by axis and the arctic slice over n * triangle."""
    if n is None:
        n = max(1, 1 - grove.ic.min_level()) if grove is not None and grove.ic.removed else 1
    corners = [_project((-n, 0, 0)), _project((0, -n, 0)), _project((0, 0, -n))]
    xs = [c[0] for c in corners]
    ys = [c[1] for c in corners]
    pad = 0.05 * n
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    scale = size / max(x1 - x0, y1 - y0)

    def fmt(pt) -> str:
        return f"{(pt[0] - x0) * scale:.3f},{(y1 - pt[1]) * scale:.3f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<polygon points="{" ".join(fmt(c) for c in corners)}" fill="none" stroke="black" stroke-width="1"/>',
    ]
    if grove is not None:
        out.append('<g stroke-width="0.6" stroke-linecap="round">')
        for axis, p, q in grove.long_edges():
            a, b = _project(p), _project(q)
            out.append(f'<line x1="{fmt(a).split(",")[0]}" y1="{fmt(a).split(",")[1]}" x2="{fmt(b).split(",")[0]}" y2="{fmt(b).split(",")[1]}" stroke="{_AXIS_COLORS[axis]}"/>')
        out.append("</g>")
    if slice_ is not None:
        for comp in slice_.components:
            pts = " ".join(fmt(_project(n * row)) for row in comp)
            out.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
