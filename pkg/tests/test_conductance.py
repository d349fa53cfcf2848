import json
from fractions import Fraction

import pytest

from grovearctic.conductance import (
    BUNDLED,
    ConfigError,
    ConductanceField,
    TorusConductance,
    all_classes,
    bundled_config,
    check_T_periodicity,
    class_of,
    load_config,
    parse_config,
)
from grovearctic.lattice import AXES
from grovearctic.seriescheck import probe_anchors

F = Fraction


def test_uniform_layers_and_weights():
    field = ConductanceField(TorusConductance.uniform(1, 1))
    assert set(field.layer(-1).values()) == {F(1, 3)}
    assert set(field.layer(-2).values()) == {F(1)}
    for p in probe_anchors(4):
        assert field.weights(p).as_tuple() == (F(1, 3),) * 3


def test_published_weights():
    f52 = bundled_config("t12_n1").field()
    assert f52.weights((0, 0, 0)).as_tuple() == (F(3, 16), F(3, 4), F(1, 16))
    assert f52.weights((0, 0, -1)).as_tuple() == (F(3, 4), F(3, 16), F(1, 16))
    f54 = bundled_config("t12_n3").field()
    assert f54.weights((0, 0, 0)).as_tuple() == (F(1, 2), F(1, 3), F(1, 6))


@pytest.mark.parametrize("name", BUNDLED)
def test_weights_sum_to_one(name):
    field = bundled_config(name).field()
    for p in probe_anchors(6):
        w = field.weights(p)
        assert w.U + w.V + w.W == 1 and min(w.as_tuple()) > 0
        assert w.delta == 1 / field.star_sum(p)


def test_ydelta_consistency_of_field():
    from grovearctic.recurrence import ydelta_consistent

    for name in BUNDLED:
        field = bundled_config(name).field()
        assert all(ydelta_consistent(field, p) for p in probe_anchors(4))


def test_classes():
    assert class_of((0, 0, 0), 1, 1, 1) == class_of((-3, 1, 2), 1, 1, 1)
    assert class_of((-1, -1, -1), 1, 1, 2) == class_of((0, 0, -1), 1, 1, 2)
    reps = [c.rep for c in all_classes(3, 1, 2)]
    expect = [(0, 0, 0), (-2, 0, -1), (-1, 0, 0), (0, 0, -1), (-2, 0, 0), (-1, 0, -1)]
    assert {class_of(r, 3, 1, 2) for r in reps} == {class_of(r, 3, 1, 2) for r in expect}
    assert len(reps) == 6


@pytest.mark.parametrize(
    "name,N,want",
    [("uniform_t11", 1, True), ("t12_n1", 1, True), ("t12_n3", 3, True), ("t12_n3", 1, False), ("t12_n3", 2, False)],
)
def test_periodicity(name, N, want):
    report = check_T_periodicity(bundled_config(name).field(), N)
    assert bool(report.periodic) == want


def test_uniform_period_scale():
    assert check_T_periodicity(bundled_config("uniform_t11").field(), 1).scale == F(1, 3)


def test_config_roundtrip(tmp_path):
    cfg = bundled_config("t12_n3")
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg.to_json()))
    again = load_config(path)
    assert again.to_json() == cfg.to_json()


BASE = {"m": 1, "n": 1, "N": 1, "edges": {"a": "1", "b": "1", "c": "1"}}


@pytest.mark.parametrize(
    "patch,path",
    [
        ({"edges": {"a": "1/0", "b": "1", "c": "1"}}, "edges.a"),
        ({"edges": {"a": "-1", "b": "1", "c": "1"}}, "edges.a"),
        ({"m": 0}, "m"),
        ({"N": "two"}, "N"),
        ({"origin": [1, 0, 0]}, "origin"),
    ],
)
def test_config_errors_name_the_field(patch, path):
    data = dict(BASE, **patch)
    with pytest.raises(ConfigError) as err:
        parse_config(data)
    assert err.value.path == path


def test_missing_edge_rejected():
    with pytest.raises(ConfigError):
        parse_config(dict(BASE, edges={"a": "1", "b": "1"}))


def test_torus_rejects_nonpositive():
    with pytest.raises(ValueError):
        TorusConductance(1, 1, {(ax, (0, 0)): F(0) for ax in AXES})
