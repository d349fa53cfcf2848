import random
from fractions import Fraction

import pytest

from grovearctic.conductance import BUNDLED, ConductanceField, TorusConductance, bundled_config
from grovearctic.lattice import AXES, standard_initial_conditions
from grovearctic.recurrence import (
    ConsistencyError,
    IncompleteBoundary,
    Dual,
    YDeltaLayer,
    boundary_points,
    conductance_from_f,
    f_from_conductance,
    solve_cube_recurrence,
    solve_generalized_recurrence,
    ydelta_consistent,
)

F = Fraction


def ones(ic):
    return {p: F(1) for p in boundary_points(ic)}


def test_cube_recurrence_order_two():
    ic = standard_initial_conditions(2)
    assert solve_cube_recurrence(ones(ic), ic)[(0, 0, 0)] == 3


def test_cube_recurrence_order_independent():
    ic = standard_initial_conditions(3)
    rnd = random.Random(1)
    b = {p: F(rnd.randint(1, 7), rnd.randint(1, 7)) for p in boundary_points(ic)}
    a1 = solve_cube_recurrence(b, ic)
    order = sorted(ic.removed, key=lambda p: (sum(p), tuple(-c for c in p)))
    a2 = solve_cube_recurrence(b, ic, order)
    assert a1 == a2


def test_missing_boundary_raises():
    ic = standard_initial_conditions(2)
    with pytest.raises(IncompleteBoundary):
        solve_cube_recurrence({}, ic)


def test_conductance_from_f():
    ic = standard_initial_conditions(2)
    f = solve_cube_recurrence(ones(ic), ic)
    f.update(ones(ic))
    assert conductance_from_f(f, "a", (0, 0, 0)) == F(1, 3)
    const = {p: F(5) for p in f}
    assert all(conductance_from_f(const, ax, (0, 0, 0)) == 1 for ax in AXES)


@pytest.mark.parametrize("name", BUNDLED)
def test_f_from_conductance_roundtrip(name):
    field = bundled_config(name).field()
    f = f_from_conductance(field, 4)
    assert f[(0, 0, 0)] == f[(-1, 0, 0)] == 1
    for p in [(0, 0, 0), (-1, -1, 0), (-2, -1, -1)]:
        for ax in AXES:
            assert conductance_from_f(f, ax, p) == field.C(ax, p)


def test_inconsistent_field_detected():
    field = bundled_config("uniform_t11").field()

    class Edited:
        def C(self, axis, p):
            return F(2) if (axis, p) == ("b", (-1, -1, 0)) else field.C(axis, p)

    with pytest.raises(ConsistencyError):
        f_from_conductance(Edited(), 3)
    assert not ydelta_consistent(Edited(), (-1, 0, 0))
    assert ydelta_consistent(Edited(), (0, 0, -1))


@pytest.mark.parametrize("name", BUNDLED)
def test_generalized_recurrence_preserves_ones(name):
    field = bundled_config(name).field()
    ic = standard_initial_conditions(3)
    assert solve_generalized_recurrence(ones(ic), field, ic)[(0, 0, 0)] == 1


def test_generalized_recurrence_order_independent():
    field = bundled_config("t12_n1").field()
    ic = standard_initial_conditions(3)
    rnd = random.Random(7)
    b = {p: F(rnd.randint(1, 9), rnd.randint(1, 9)) for p in boundary_points(ic)}
    order = sorted(ic.removed, key=lambda p: (sum(p), tuple(-c for c in p)))
    assert solve_generalized_recurrence(b, field, ic) == solve_generalized_recurrence(b, field, ic, order)


def test_ydelta_layer_steps():
    layer = YDeltaLayer(0, 1, 1, {(ax, (0, 0)): F(1) for ax in AXES})
    once = layer.step()
    assert set(once.table.values()) == {F(1, 3)} and once.level == -1
    assert set(once.step().table.values()) == {F(1)}


def test_layer_step_matches_f_based_conductance():
    field = bundled_config("t12_n1").field()
    f = f_from_conductance(field, 4, check=False)
    for p in [(0, 0, -1), (-1, 0, -1), (-1, -1, -1)]:
        for ax in AXES:
            assert conductance_from_f(f, ax, p) == field.C(ax, p)


def test_dual_numbers():
    x = Dual(3, 1)
    y = x * x / (x + 1)
    assert y.a == F(9, 4)
    assert y.b == F(15, 16)  # d/dx x^2/(x+1) = (x^2 + 2x)/(x+1)^2 at 3
