import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grovearctic.conductance import BUNDLED, ShuffleWeights, bundled_config
from grovearctic.lattice import AXES, Rhombus, rhombi_of, standard_initial_conditions
from grovearctic.shuffle import (
    MAX_ENUMERATION_CUBES,
    TWO128,
    Grove,
    RngStream,
    ScheduleError,
    _threshold_words,
    base_grove,
    choose_short,
    edge_probability_bruteforce,
    enumerate_groves,
    partition_function,
    sample_batch,
    sample_grove,
    shuffle_cube,
    verify_grove_expansion,
)

F = Fraction
UNIFORM = ShuffleWeights(F(1, 3), F(1, 3), F(1, 3), F(1, 3))


def uniform_field():
    return bundled_config("uniform_t11").field()


def test_base_grove():
    g = base_grove()
    assert g.ic.removed == frozenset() and g.longs == frozenset()
    assert base_grove() == g and base_grove().to_json() == g.to_json()
    assert all(g.diagonal(r) == "short" for r in rhombi_of(g.ic))


def test_choose_short_thresholds():
    w = ShuffleWeights(F(1, 4), F(1, 2), F(1, 4), F(1))
    assert choose_short(w, 0) == 0
    assert choose_short(w, TWO128 // 4 - 1) == 0
    assert choose_short(w, TWO128 // 4) == 1
    assert choose_short(w, 3 * TWO128 // 4 - 1) == 1
    assert choose_short(w, 3 * TWO128 // 4) == 2
    assert choose_short(w, TWO128 - 1) == 2


@given(st.fractions(min_value=F(1, 1000), max_value=F(999, 1000)), st.integers(0, TWO128 - 1))
def test_batch_threshold_agrees_with_exact_comparison(u, r):
    hi, lo = _threshold_words(u)
    t = (hi << 64) | lo
    assert (r < t) == (r * u.denominator < u.numerator * TWO128)


def test_uniform_choice_frequencies():
    rng = RngStream(11)
    draws = 30000
    counts = np.bincount([choose_short(UNIFORM, rng.next128()) for _ in range(draws)], minlength=3)
    sd = math.sqrt(draws * (1 / 3) * (2 / 3))
    assert all(abs(c - draws / 3) < 3 * sd for c in counts)


def test_forced_moves_ignore_randomness():
    ic = standard_initial_conditions(2)
    t = (-1, 0, 0)
    lower = {Rhombus(ax, tuple(c - int(a == ax) for c, a in zip(t, AXES))) for ax in AXES}
    # two long upper rhombi: every lower rhombus short, whatever the draw
    two = Grove(ic, frozenset({Rhombus("a", t), Rhombus("b", t)}))
    outs = {shuffle_cube(two, t, UNIFORM, draw=d) for d in (0, TWO128 // 2, TWO128 - 1)}
    assert len(outs) == 1 and not (outs.pop().longs & lower)
    # one long upper rhombus of type c: the lower c rhombus is long
    one = Grove(ic, frozenset({Rhombus("c", t)}))
    outs = {shuffle_cube(one, t, UNIFORM, draw=d) for d in (0, TWO128 - 1)}
    assert len(outs) == 1 and outs.pop().longs & lower == {Rhombus("c", (-1, 0, -1))}


def test_three_long_is_rejected():
    ic = standard_initial_conditions(2)
    t = (-1, -1, 0)
    g = Grove(ic.with_cube((-1, 0, 0)).with_cube((0, -1, 0)), frozenset(Rhombus(ax, t) for ax in AXES))
    with pytest.raises(ValueError):
        shuffle_cube(g, t, UNIFORM, draw=0)


def test_unaddable_cube_raises():
    with pytest.raises(ScheduleError):
        shuffle_cube(base_grove(), (-1, 0, 0), UNIFORM, draw=0)


def test_single_shuffle_law():
    law = enumerate_groves(uniform_field(), 2)
    assert len(law) == 3 and set(law.law.values()) == {F(1, 3)}


@pytest.mark.parametrize("name", BUNDLED)
def test_grove_counts(name):
    field = bundled_config(name).field()
    for n in range(1, 6):
        law = enumerate_groves(field, n)
        assert len(law) == 3 ** (n * n // 4)
        assert law.total() == 1


def test_each_rhombus_has_one_diagonal():
    law = enumerate_groves(uniform_field(), 3)
    for g, _ in law.groves():
        rh = set(rhombi_of(g.ic))
        assert g.longs <= rh


def test_partition_function_uniform():
    assert partition_function(uniform_field(), 1) == (1, 1)
    prod, total = partition_function(uniform_field(), 2)
    assert prod == total == F(1, 3)


def test_enumeration_limits():
    with pytest.raises(ValueError):
        enumerate_groves(uniform_field(), 7)
    ic = standard_initial_conditions(3)
    with pytest.raises(ScheduleError):
        enumerate_groves(uniform_field(), ic=ic, schedule=sorted(ic.removed))
    assert len(standard_initial_conditions(5).removed) <= MAX_ENUMERATION_CUBES < len(standard_initial_conditions(6).removed)


@pytest.mark.parametrize("name", BUNDLED)
def test_edge_probability_independent_of_order(name):
    field = bundled_config(name).field()
    common = set(rhombi_of(standard_initial_conditions(3), 4)) & set(rhombi_of(standard_initial_conditions(4), 4))
    assert len(common) > 20
    law3, law4 = enumerate_groves(field, 3), enumerate_groves(field, 4)
    for r in sorted(common):
        assert law3.probability(lambda g: r in g.longs) == law4.probability(lambda g: r in g.longs)


def test_uniform_first_probability():
    assert edge_probability_bruteforce(uniform_field(), Rhombus("a", (-1, 0, 0)), 2) == F(2, 3)


@pytest.mark.parametrize("name", ["uniform_t11", "t12_n1"])
def test_grove_expansion_of_recurrence(name):
    field = bundled_config(name).field()
    assert verify_grove_expansion(field, 2, 5, seed=1)
    assert verify_grove_expansion(field, 3, 20, seed=2)


def test_sampler_order_one_and_determinism():
    f = uniform_field()
    assert sample_grove(f, 1, 123) == base_grove()
    assert sample_grove(f, 12, 5) == sample_grove(f, 12, 5)
    assert sample_grove(f, 12, 5).to_json() != sample_grove(f, 12, 6).to_json()


def test_seed_range():
    with pytest.raises(ValueError):
        RngStream(-1)
    with pytest.raises(ValueError):
        RngStream(1 << 64)


@settings(max_examples=5, deadline=None)
@given(st.sampled_from(BUNDLED), st.integers(2, 9), st.integers(0, (1 << 64) - 1))
def test_batch_matches_scalar_sampler(name, n, seed):
    field = bundled_config(name).field()
    batch = sample_batch(field, n, 12, seed, chunk=5)
    assert all(batch.grove(s) == sample_grove(field, n, seed, s) for s in range(12))


def test_batch_independent_of_workers_and_chunks():
    f = bundled_config("t12_n1").field()
    a = sample_batch(f, 10, 300, 9, chunk=300, workers=1)
    b = sample_batch(f, 10, 300, 9, chunk=37, workers=4)
    assert all(np.array_equal(a.longs[ax], b.longs[ax]) for ax in AXES)


def test_order_two_frequencies():
    f = uniform_field()
    samples = 30000
    batch = sample_batch(f, 2, samples, 20261018)
    sd = math.sqrt(samples * (1 / 3) * (2 / 3))
    for ax in AXES:
        below = tuple(-int(a == ax) for a in AXES)
        short = samples - batch.frequency(Rhombus(ax, below))
        assert abs(short - samples / 3) < 3 * sd
