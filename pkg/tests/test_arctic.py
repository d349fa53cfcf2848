import xml.etree.ElementTree as ET

import numpy as np
import pytest

from grovearctic.algebra import PolyQ
from grovearctic.arctic import (
    UVW,
    XYZ,
    PlaneCurve,
    arctic_slice,
    dual_curve,
    homogeneous_part_at,
    incircle_deviation,
    proportional,
    render_svg,
    side_distances,
    vanishing_order,
)
from grovearctic.conductance import bundled_config
from grovearctic.shuffle import sample_grove

UNIFORM_Q = PolyQ.parse("1 + x*y*z - (x + y + z + y*z + x*z + x*y)/3")
UNIFORM_QT = PolyQ.parse("2*(y*z + x*z + x*y)/3")
UNIFORM_DUAL = PolyQ.parse("v*w + u*w + u*v - (u^2 + v^2 + w^2)/2", UVW)
QUARTIC_QT = PolyQ.parse("255*x^2*y + 255*x*y^2 + 104*x^2*z + 370*x*y*z + 104*y^2*z")


def test_homogeneous_part():
    assert homogeneous_part_at(UNIFORM_Q).poly == UNIFORM_QT
    assert vanishing_order(UNIFORM_Q) == 2
    assert homogeneous_part_at(PolyQ.parse("2/3")).poly == PolyQ.parse("2/3")


def test_plane_curve_requires_homogeneity():
    with pytest.raises(ValueError):
        PlaneCurve(PolyQ.parse("x^2 + y"))


def test_self_dual_conic():
    d = dual_curve(PlaneCurve(PolyQ.parse("x^2 + y^2 - z^2")))
    assert proportional(d.curve.poly, PolyQ.parse("u^2 + v^2 - w^2", UVW))


def test_uniform_dual_and_biduality():
    d = dual_curve(PlaneCurve(UNIFORM_QT))
    assert proportional(d.curve.poly, UNIFORM_DUAL)
    back = dual_curve(d.curve)
    assert back.curve.gens == XYZ and proportional(back.curve.poly, UNIFORM_QT)


def test_dual_rejects_lines():
    with pytest.raises(ValueError):
        dual_curve(PlaneCurve(PolyQ.parse("x + y")))


def test_uniform_slice_is_incircle():
    sl = arctic_slice(PlaneCurve(UNIFORM_DUAL), 800)
    assert sl.closed_count() == 1
    assert incircle_deviation(sl) < 1e-3


def test_cardioid_touches_all_sides():
    sl = arctic_slice(dual_curve(PlaneCurve(QUARTIC_QT)).curve, 600)
    assert len(sl.closed_components()) == 1
    assert max(side_distances(sl)) < sl.step()


def test_svg_empty_is_valid_triangle():
    svg = render_svg()
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")
    assert any(el.tag.endswith("polygon") for el in root.iter())
    assert render_svg() == svg


def test_svg_with_grove_and_curve_is_deterministic():
    g = sample_grove(bundled_config("uniform_t11").field(), 15, 3)
    sl = arctic_slice(PlaneCurve(UNIFORM_DUAL), 200)
    a = render_svg(g, sl, n=15)
    assert a == render_svg(g, sl, n=15)
    ET.fromstring(a)
    assert a.count("<line") >= len(g.longs)


def test_slice_points_in_triangle():
    sl = arctic_slice(PlaneCurve(UNIFORM_DUAL), 300)
    pts = sl.points()
    assert np.allclose(pts.sum(axis=1), -1.0)
    assert (pts <= 1e-9).all()
