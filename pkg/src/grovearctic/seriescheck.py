"""Cross-validation of series coefficients against enumeration, sampling and derivatives."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .genfun import SystemBundle, coefficient_tables, solve_system
from .lattice import (
    AXES,
    Point3,
    Rhombus,
    level,
    minimal_conditions_around,
    minimal_conditions_for,
    rhombi_of,
    standard_initial_conditions,
)
from .recurrence import origin_derivative, origin_difference
from .shuffle import (
    MAX_ENUMERATION_CUBES,
    Grove,
    enumerate_groves,
    sample_batch,
)

# barycentric positions (fractions of the level) of the Monte Carlo probes;
# all lie well inside the inscribed circle of the uniform case
MC_PROBE_FRACTIONS = ((0.345, 0.345, 0.31), (0.48, 0.28, 0.24), (0.17, 0.415, 0.415), (0.28, 0.55, 0.17))
SIGMA_LIMIT = 4.0
DIFF_TOLERANCE = Fraction(1, 10**4)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    sigma: Optional[float] = None

    def to_json(self) -> dict:
        out = {"name": self.name, "status": "pass" if self.passed else "fail", "detail": self.detail}
        if self.sigma is not None:
            out["sigma"] = self.sigma
        return out


@dataclass
class ValidationReport:
    checks: List[Check] = dc_field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "", sigma: Optional[float] = None) -> None:
        self.checks.append(Check(name, bool(passed), detail, sigma))

    def extend(self, other: "ValidationReport") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_json() for c in self.checks]}


def probe_anchors(depth: int) -> List[Point3]:
    """Anchors (-i,-j,-k) with i+j+k <= depth."""
    return [(-i, -j, -(d - i - j)) for d in range(depth + 1) for i in range(d + 1) for j in range(d - i + 1)]


def _idx(p: Point3) -> Tuple[int, int, int]:
    return (-p[0], -p[1], -p[2])


def exact_enumeration_checks(bundle: SystemBundle, n_enum: int, depth: int) -> ValidationReport:
    """Series coefficients against enumerated probabilities, in every class.

    Two probe families: every rhombus of I(n_enum) (read off one enumeration
    of I(n_enum)), and every anchor with |i|+|j|+|k| <= depth under its own
    minimal initial conditions.
    """
    report = ValidationReport()
    if not bundle.solutions:
        solve_system(bundle)
    ic_n = standard_initial_conditions(n_enum)
    rhombi = [r for r in rhombi_of(ic_n, depth=n_enum + 1) if -level(r.anchor) <= n_enum + 1]
    D = max(depth, n_enum + 1) + 1
    for k, cls in enumerate(bundle.classes):
        field = bundle.field.shifted(cls.rep)
        tabs = coefficient_tables(bundle, D, k)
        law = enumerate_groves(field, ic=ic_n)
        bad = []
        for r in rhombi:
            prob = sum((p for s, p in law.law.items() if r in s), Fraction(0))
            if prob != tabs["pqr"[AXES.index(r.axis)]][_idx(r.anchor)]:
                bad.append(f"{r.axis}{r.anchor}")
        report.add(f"enumeration I({n_enum}) vs series, class {cls.rep}", not bad, f"{len(rhombi)} rhombi; mismatches {bad[:5]}")
        bad = []
        count = 0
        for a in probe_anchors(depth):
            for axis in AXES:
                r = Rhombus(axis, a)
                ic = minimal_conditions_for(r)
                if len(ic.removed) > MAX_ENUMERATION_CUBES:
                    continue
                law = enumerate_groves(field, ic=ic)
                prob = sum((p for s, p in law.law.items() if r in s), Fraction(0))
                count += 1
                if prob != tabs["pqr"[AXES.index(axis)]][_idx(a)]:
                    bad.append(f"{axis}{a}")
            ic = minimal_conditions_around(a)
            if len(ic.removed) <= MAX_ENUMERATION_CUBES:
                law = enumerate_groves(field, ic=ic)
                rate = sum((p * (Grove(ic, s).degree(a) - 2) for s, p in law.law.items()), Fraction(0))
                count += 1
                if rate != tabs["F"][_idx(a)]:
                    bad.append(f"E{a}")
        report.add(f"minimal-condition probes vs series, class {cls.rep}", not bad, f"{count} probes; mismatches {bad[:5]}")
    return report


def derivative_checks(bundle: SystemBundle, depth: int) -> ValidationReport:
    """d g_{0,0,0} / d g_p at the all-ones boundary equals the creation rate E(p)."""
    report = ValidationReport()
    if not bundle.solutions:
        solve_system(bundle)
    tabs = coefficient_tables(bundle, depth, 0)
    bad_exact, bad_diff = [], []
    for a in probe_anchors(depth):
        ic = minimal_conditions_around(a)
        E = tabs["F"][_idx(a)]
        if origin_derivative(bundle.field, ic, a) != E:
            bad_exact.append(a)
        if abs(origin_difference(bundle.field, ic, a) - E) > DIFF_TOLERANCE:
            bad_diff.append(a)
    report.add("exact derivative equals creation rate", not bad_exact, f"mismatches {bad_exact[:5]}")
    report.add("two-sided difference within 1e-4 of creation rate", not bad_diff, f"mismatches {bad_diff[:5]}")
    return report


def mc_probes(n: int) -> List[Rhombus]:
    """Rhombi anchored on the top level 1-n of I(n), at fixed barycentric positions."""
    s = n - 1
    out = []
    for fr in MC_PROBE_FRACTIONS:
        i = round(fr[0] * s)
        j = round(fr[1] * s)
        k = s - i - j
        for axis in AXES:
            out.append(Rhombus(axis, (-i, -j, -k)))
    return out


def monte_carlo_checks(bundle: SystemBundle, n: int, samples: int, seed: int) -> ValidationReport:
    """Sampled long-diagonal frequencies within 4 sigma of the exact series values."""
    report = ValidationReport()
    if not bundle.solutions:
        solve_system(bundle)
    tabs = coefficient_tables(bundle, n - 1, 0)
    batch = sample_batch(bundle.field, n, samples, seed)
    for r in mc_probes(n):
        exact = tabs["pqr"[AXES.index(r.axis)]][_idx(r.anchor)]
        freq = batch.frequency(r) / samples
        p = float(exact)
        sd = math.sqrt(max(p * (1 - p), 0.0) / samples)
        dev = abs(freq - p) / sd if sd > 0 else (0.0 if freq == p else math.inf)
        report.add(
            f"sampler {r.axis}{r.anchor} at n={n}",
            dev <= SIGMA_LIMIT,
            f"frequency {freq:.5f} vs exact {p:.5f} over {samples} samples",
            sigma=dev,
        )
    return report


def crosscheck_probabilities(
    bundle: SystemBundle,
    n_enum: int = 3,
    n_mc: Optional[int] = None,
    samples: int = 0,
    depth: int = 3,
    seed: int = 0,
) -> ValidationReport:
    """Exact enumeration checks, derivative checks and (optionally) a Monte Carlo check."""
    if n_enum > 4:
        raise ValueError("enumeration order is limited to 4")
    report = exact_enumeration_checks(bundle, n_enum, depth)
    report.extend(derivative_checks(bundle, depth))
    if n_mc and samples:
        report.extend(monte_carlo_checks(bundle, n_mc, samples, seed))
    return report


def full_suite(config, n_max: int = 3, depth: int = 3, series_depth: int = 6) -> ValidationReport:
    """Every exact module-level invariant for one configuration."""
    from .conductance import check_T_periodicity
    from .genfun import bundle_from_config, verify_identities
    from .shuffle import alternate_schedule, boltzmann_law, monomial_law, partition_function
    from .spectral import char_poly, expected_hexagon, laplacian, newton_polygon

    report = ValidationReport()
    field = config.field()
    per = check_T_periodicity(field, config.N)
    report.add(f"weights periodic for N={config.N}", per.periodic, f"first failure {per.failure}")
    if not per.periodic:
        return report
    sweep_ok = all(sum(field.weights(a).as_tuple()) == 1 for a in probe_anchors(6))
    report.add("U+V+W = 1 on the depth-6 sweep", sweep_ok)
    bundle = solve_system(bundle_from_config(config))
    size = len(bundle.classes)
    at_zero = [[e.subs({"x": 0, "y": 0, "z": 0}).constant_term() for e in row] for row in bundle.A]
    report.add("A(0,0,0) is the identity", at_zero == [[int(i == j) for j in range(size)] for i in range(size)])
    report.add("det A vanishes at (1,1,1)", bundle.det.subs({"x": 1, "y": 1, "z": 1}).is_zero())
    ids = verify_identities(bundle, series_depth)
    report.add("sum identity F+Gp+Gq+Gr = 1/((1-x)(1-y)(1-z)) in every class", all(ids.sum_identity.values()))
    report.add(f"edge-probability recursions through degree {series_depth}", ids.recursion_ok, "; ".join(ids.failures[:3]))
    report.add("p, q, r in [0,1] and E in [-1,1]", ids.bounds_ok)
    for n in range(1, n_max + 1):
        ic = standard_initial_conditions(n)
        prod, total = partition_function(field, ic=ic)
        report.add(f"partition function, n={n}", prod == total, f"product {prod}, weight sum {total}")
        law = enumerate_groves(field, ic=ic).law
        report.add(f"shuffle law equals w(G)/Z, n={n}", law == boltzmann_law(field, ic))
        report.add(f"shuffle law equals m_f(G)/f_000, n={n}", law == monomial_law(field, ic))
        alt = enumerate_groves(field, ic=ic, schedule=alternate_schedule(ic)).law
        report.add(f"shuffle law independent of removal order, n={n}", law == alt)
    report.extend(crosscheck_probabilities(bundle, n_enum=min(n_max, 4), depth=depth))
    P = char_poly(laplacian(config.torus))
    poly = newton_polygon(P)
    report.add("P(1,1) = 0", P.subs({"z": 1, "w": 1}).is_zero())
    report.add("Newton polygon is the expected hexagon", sorted(poly.vertices) == expected_hexagon(config.m, config.n), str(poly.vertices))
    return report
