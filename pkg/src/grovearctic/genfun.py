"""Generating functions for creation rates and edge probabilities.

For a conductance field whose shuffle weights are periodic modulo the class
lattice, the creation-rate generating functions F^[mu] of the classes satisfy
a finite linear system A F = 1, and the edge-probability generating functions
satisfy A G_p = x/(1-x) (V+W), A G_q = y/(1-y) (U+W), A G_r = z/(1-z) (U+V),
with the weights read at each class representative.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import PolyQ, RatFuncQ, TruncSeries3, cramer, graded_indices, series_inverse
from .conductance import ClassIndex, ConductanceField, FieldConfig, check_T_periodicity, class_of
from .lattice import Point3, add

GENS = ("x", "y", "z")
KINDS = ("F", "p", "q", "r")

# (shift of mu, weight letter, monomial exponent); "1" is the identity term, "xyz" the cube term
_ROW_TERMS = (
    ((0, 0, 0), None, (0, 0, 0)),
    ((-1, -1, -1), None, (1, 1, 1)),
    ((-1, 0, 0), "U", (1, 0, 0)),
    ((0, -1, -1), "U", (0, 1, 1)),
    ((0, -1, 0), "V", (0, 1, 0)),
    ((-1, 0, -1), "V", (1, 0, 1)),
    ((0, 0, -1), "W", (0, 0, 1)),
    ((-1, -1, 0), "W", (1, 1, 0)),
)


class PeriodicityError(ValueError):
    """The field is not periodic for the requested class lattice."""


@dataclass
class SystemBundle:
    m: int
    n: int
    N: int
    classes: List[ClassIndex]
    A: List[List[PolyQ]]
    rhs: Dict[str, List[Fraction]]  # kind -> constant vector (F: ones)
    field: ConductanceField
    solutions: Dict[str, List[RatFuncQ]] = dc_field(default_factory=dict)
    numerators: Dict[str, List[PolyQ]] = dc_field(default_factory=dict)
    det: Optional[PolyQ] = None
    _inverse_cache: Dict[int, object] = dc_field(default_factory=dict, repr=False)

    def inverse_det_series(self, D: int):
        """1/det A expanded to total degree D (cached)."""
        if D not in self._inverse_cache:
            self._inverse_cache[D] = series_inverse(TruncSeries3.from_poly(self.det, D))
        return self._inverse_cache[D]

    def index(self, mu: Point3) -> int:
        cls = class_of(mu, self.N, self.m, self.n)
        for k, c in enumerate(self.classes):
            if c == cls:
                return k
        raise KeyError(mu)

    def prefactor(self, kind: str) -> RatFuncQ:
        """x/(1-x), y/(1-y), z/(1-z) or 1."""
        if kind == "F":
            return RatFuncQ.of(1, 1, GENS)
        v = PolyQ.var("xyz"[KINDS.index(kind) - 1], GENS)
        return RatFuncQ.of(v, 1 - v)

    def to_json(self) -> dict:
        out = {
            "m": self.m,
            "n": self.n,
            "N": self.N,
            "classes": [list(c.rep) for c in self.classes],
            "matrix": [[e.to_text() for e in row] for row in self.A],
            "rhs": {k: [str(v) for v in vec] for k, vec in self.rhs.items()},
        }
        if self.solutions:
            out["determinant"] = self.det.to_text()
            out["solutions"] = {
                kind: [{"numerator": s.num.to_text(), "denominator": s.den.to_text()} for s in sols]
                for kind, sols in self.solutions.items()
            }
        return out


def _canonical_classes(classes: Sequence[ClassIndex], N: int, m: int, n: int) -> List[ClassIndex]:
    return [class_of(c.rep, N, m, n) for c in classes]


def build_system(field: ConductanceField, m: int, n: int, N: int, classes: Optional[Sequence[ClassIndex]] = None, check: bool = True) -> SystemBundle:
    """Matrix A and the right-hand sides, one row and column per class."""
    if check:
        report = check_T_periodicity(field, N)
        if not report:
            mu, g = report.failure
            raise PeriodicityError(f"shuffle weights differ between {mu} and {add(mu, g)}; not periodic for N={N}")
    if classes is None:
        from .conductance import all_classes

        classes = all_classes(N, m, n)
    classes = _canonical_classes(classes, N, m, n)
    if len(set(classes)) != len(classes) or len(classes) != N * m * n:
        raise ValueError("class list must enumerate every class exactly once")
    pos = {c: k for k, c in enumerate(classes)}
    size = len(classes)
    zero = PolyQ.const(0, GENS)
    A = [[zero] * size for _ in range(size)]
    rhs = {"F": [Fraction(1)] * size, "p": [], "q": [], "r": []}
    for row, cls in enumerate(classes):
        w = field.weights(cls.rep)
        letters = {"U": w.U, "V": w.V, "W": w.W, None: Fraction(-1)}
        for shift, letter, exp in _ROW_TERMS:
            col = pos[class_of(add(cls.rep, shift), N, m, n)]
            A[row][col] = A[row][col] + PolyQ.monomial(exp, -letters[letter], GENS)
        rhs["p"].append(w.V + w.W)
        rhs["q"].append(w.U + w.W)
        rhs["r"].append(w.U + w.V)
    return SystemBundle(m, n, N, classes, A, rhs, field)


def bundle_from_config(config: FieldConfig, check: bool = True) -> SystemBundle:
    return build_system(config.field(), config.m, config.n, config.N, config.class_list(), check)


def solve_system(bundle: SystemBundle) -> SystemBundle:
    """Cramer solutions for F, G_p, G_q, G_r.

    G_p[mu] = x/(1-x) * P_p[mu] / Q with Q = det A (and likewise for q, r).
    """
    nums = {}
    det = None
    for kind in KINDS:
        vec = [PolyQ.const(v, GENS) for v in bundle.rhs[kind]]
        num, d = cramer(bundle.A, vec)
        if det is None:
            det = d
            if det.is_zero():
                raise ArithmeticError("the system matrix is singular")
        nums[kind] = num
    bundle.det = det
    bundle.numerators = nums
    for kind in KINDS:
        pre = bundle.prefactor(kind)
        bundle.solutions[kind] = [pre * RatFuncQ.of(p, det) for p in nums[kind]]
    return bundle


@dataclass
class CoefficientTable:
    """values[(i, j, k)] is the coefficient of x^i y^j z^k, i.e. the quantity at (-i, -j, -k)."""

    kind: str
    cls: Point3
    D: int
    values: Dict[Tuple[int, int, int], Fraction]

    def __getitem__(self, idx: Tuple[int, int, int]) -> Fraction:
        if any(c < 0 for c in idx):
            return Fraction(0)
        if sum(idx) > self.D:
            raise KeyError(f"{idx} is beyond the truncation degree {self.D}")
        return self.values.get(tuple(idx), Fraction(0))


def extract_coefficients(g: RatFuncQ, D: int, kind: str = "?", cls: Point3 = (0, 0, 0)) -> CoefficientTable:
    if not g.den.constant_term():
        raise ZeroDivisionError("denominator is not a unit in the power-series ring")
    s = g.series(D)
    return CoefficientTable(kind, cls, D, {idx: s[idx] for idx in graded_indices(D)})


def coefficient_tables(bundle: SystemBundle, D: int, class_index: int = 0) -> Dict[str, CoefficientTable]:
    if not bundle.solutions:
        solve_system(bundle)
    rep = bundle.classes[class_index].rep
    inv = bundle.inverse_det_series(D)
    out = {}
    for a, kind in enumerate(KINDS):
        s = TruncSeries3.from_poly(bundle.numerators[kind][class_index], D) * inv
        if kind != "F":
            exp = [0, 0, 0]
            exp[a - 1] = 1
            s = s.times_monomial(tuple(exp)).times_geometric(a - 1)
        out[kind] = CoefficientTable(kind, rep, D, {idx: s[idx] for idx in graded_indices(D)})
    return out


@dataclass
class IdentityReport:
    sum_identity: Dict[Point3, bool]
    recursion_ok: bool
    bounds_ok: bool
    failures: List[str]

    def __bool__(self) -> bool:
        return all(self.sum_identity.values()) and self.recursion_ok and self.bounds_ok


def verify_identities(bundle: SystemBundle, D: int) -> IdentityReport:
    """Sum identity as exact rational functions, recursions and bounds coefficientwise."""
    if not bundle.solutions:
        solve_system(bundle)
    x, y, z = (PolyQ.var(v, GENS) for v in GENS)
    # F + G_p + G_q + G_r = 1/((1-x)(1-y)(1-z)), multiplied through by det A and the three (1 - v)
    factors = {
        "F": (1 - x) * (1 - y) * (1 - z),
        "p": x * (1 - y) * (1 - z),
        "q": y * (1 - x) * (1 - z),
        "r": z * (1 - x) * (1 - y),
    }
    failures: List[str] = []
    sums = {}
    for k, cls in enumerate(bundle.classes):
        lhs = PolyQ.const(0, GENS)
        for kind in KINDS:
            lhs = lhs + factors[kind] * bundle.numerators[kind][k]
        sums[cls.rep] = lhs == bundle.det
        if not sums[cls.rep]:
            failures.append(f"sum identity fails for class {cls.rep}")
    rec_ok = True
    bounds_ok = True
    for k, cls in enumerate(bundle.classes):
        tabs = coefficient_tables(bundle, D, k)
        E = tabs["F"]
        for idx in E.values:
            for a, kind in enumerate("pqr"):
                prev = list(idx)
                prev[a] -= 1
                prev = tuple(prev)
                val = tabs[kind][idx]
                if not 0 <= val <= 1:
                    bounds_ok = False
                    failures.append(f"{kind}{idx} = {val} outside [0,1] in class {cls.rep}")
                if idx[a] == 0:
                    expect = Fraction(0)
                else:
                    w = bundle.field.weights(add(cls.rep, tuple(-c for c in prev)))
                    factor = (w.V + w.W, w.U + w.W, w.U + w.V)[a]
                    expect = tabs[kind][prev] + factor * E[prev]
                if val != expect:
                    rec_ok = False
                    failures.append(f"recursion for {kind}{idx} fails in class {cls.rep}")
            # E is an expected degree minus two, and at most two of three upper rhombi are long
            if not -1 <= E[idx] <= 1:
                bounds_ok = False
                failures.append(f"E{idx} = {E[idx]} outside [-1,1] in class {cls.rep}")
    return IdentityReport(sums, rec_ok, bounds_ok, failures)


def series_rows(bundle: SystemBundle, D: int) -> List[Tuple[Point3, int, int, int, str, Fraction]]:
    """(class, i, j, k, kind, value) with kind in p, q, r, E; rows sorted."""
    rows = []
    for k, cls in enumerate(bundle.classes):
        tabs = coefficient_tables(bundle, D, k)
        for idx in sorted(tabs["F"].values):
            for kind, name in (("p", "p"), ("q", "q"), ("r", "r"), ("F", "E")):
                rows.append((cls.rep, idx[0], idx[1], idx[2], name, tabs[kind][idx]))
    return rows
