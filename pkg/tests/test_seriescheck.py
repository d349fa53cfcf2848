from fractions import Fraction

import pytest

from grovearctic.conductance import bundled_config
from grovearctic.genfun import bundle_from_config, coefficient_tables, solve_system
from grovearctic.lattice import standard_initial_conditions
from grovearctic.seriescheck import (
    ValidationReport,
    crosscheck_probabilities,
    full_suite,
    mc_probes,
    monte_carlo_checks,
    probe_anchors,
)
from grovearctic.shuffle import edge_probability_bruteforce
from grovearctic.lattice import Rhombus


def solved(name):
    return solve_system(bundle_from_config(bundled_config(name)))


def test_probe_anchors():
    anchors = probe_anchors(2)
    assert len(anchors) == 1 + 3 + 6
    assert all(max(a) <= 0 and -sum(a) <= 2 for a in anchors)


@pytest.mark.parametrize("name", ["uniform_t11", "t12_n1"])
def test_crosscheck_exact(name):
    report = crosscheck_probabilities(solved(name), n_enum=3, depth=3)
    assert report.passed, [c.name for c in report.failures()]


def test_first_probability_both_ways():
    b = solved("uniform_t11")
    series = coefficient_tables(b, 2)["p"][(1, 0, 0)]
    brute = edge_probability_bruteforce(b.field, Rhombus("a", (-1, 0, 0)), 2)
    assert series == brute == Fraction(2, 3)


def test_enumeration_order_limit():
    with pytest.raises(ValueError):
        crosscheck_probabilities(solved("uniform_t11"), n_enum=5)


def test_mc_probes_lie_in_top_band():
    n = 30
    ic = standard_initial_conditions(n)
    for r in mc_probes(n):
        assert ic.contains_rhombus(r) and sum(r.anchor) == 1 - n


def test_small_monte_carlo():
    report = monte_carlo_checks(solved("t12_n1"), 12, 3000, seed=4)
    assert report.passed, [c.detail for c in report.failures()]
    assert all(c.sigma is not None for c in report.checks)


def test_full_suite_and_report_json():
    report = full_suite(bundled_config("uniform_t11"))
    assert report.passed
    data = report.to_json()
    assert data["passed"] and all(c["status"] == "pass" for c in data["checks"])


def test_report_failure_propagates():
    r = ValidationReport()
    r.add("ok", True)
    r.add("bad", False, "detail")
    assert not r.passed and [c.name for c in r.failures()] == ["bad"]
