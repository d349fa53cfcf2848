"""Groves, grove shuffling, and exact enumeration of the shuffling tree.

A grove on I is stored as the finite set of rhombi that carry their long
diagonal; every other rhombus of I carries its short diagonal.  The base
grove on I(1) has no long diagonals.

Adding cube t to the removed set replaces the three rhombi anchored at t
(the "upper" rhombi) by the three rhombi r_a(t-e_i), r_b(t-e_j), r_c(t-e_k)
(the "lower" rhombi):

* no upper long diagonal: exactly one lower rhombus becomes short, chosen
  as a, b, c with probabilities U, V, W; the other two become long;
* one upper long diagonal of type q: the lower rhombus of type q is long;
* two upper long diagonals: all lower rhombi are short.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .conductance import ConductanceField, ShuffleWeights
from .lattice import (
    AXES,
    InitialConditions,
    Point3,
    Rhombus,
    level,
    rhombi_containing,
    standard_initial_conditions,
    sub,
    unit,
)

TWO128 = 1 << 128
MAX_ENUMERATION_CUBES = 24


class ScheduleError(ValueError):
    """A cube cannot be added to the current initial conditions."""


@dataclass(frozen=True)
class Grove:
    ic: InitialConditions
    longs: FrozenSet[Rhombus]

    def diagonal(self, r: Rhombus) -> str:
        if not self.ic.contains_rhombus(r):
            raise ValueError(f"{r} is not a rhombus of these initial conditions")
        return "long" if r in self.longs else "short"

    def long_edges(self) -> List[Tuple[str, Point3, Point3]]:
        """(axis, end, end) for each long diagonal, sorted."""
        return sorted((r.axis,) + tuple(sorted(r.long_diagonal())) for r in self.longs)

    def degree(self, v: Point3) -> int:
        deg = 0
        for r in rhombi_containing(v, self.ic):
            edge = r.long_diagonal() if r in self.longs else r.short_diagonal()
            if v in edge:
                deg += 1
        return deg

    def weight(self, field: ConductanceField) -> Fraction:
        w = Fraction(1)
        for r in self.longs:
            w *= field.C(r.axis, r.anchor)
        return w

    def active_vertices(self) -> List[Point3]:
        """Members of I whose degree can differ from 2 (a finite band near the removed cubes)."""
        floor = min(self.ic.min_level(), 1) - 4
        out = []
        for i in range(0, floor - 1, -1):
            for j in range(0, floor - 1 - i, -1):
                for k in range(0, floor - 1 - i - j, -1):
                    p = (i, j, k)
                    if level(p) >= floor and p in self.ic:
                        out.append(p)
        return out

    def monomial_value(self, values: Mapping[Point3, object], default=1):
        """prod over vertices of value^(deg - 2), values missing from the map count as `default`."""
        total = Fraction(1)
        for v in self.active_vertices():
            e = self.degree(v) - 2
            if e:
                x = values.get(v, default)
                total = total * (x ** e if e > 0 else 1 / x ** (-e))
        return total

    def to_json(self) -> dict:
        return {
            "removed_cubes": sorted(list(p) for p in self.ic.removed),
            "long_edges": [
                {"axis": ax, "ends": [list(p), list(q)]} for ax, p, q in self.long_edges()
            ],
        }


def base_grove() -> Grove:
    """The grove on I(1): every rhombus takes its short diagonal."""
    return Grove(InitialConditions.empty(), frozenset())


def _lower(t: Point3, axis: str) -> Rhombus:
    return Rhombus(axis, sub(t, unit(axis)))


def _upper_state(longs: FrozenSet[Rhombus], t: Point3) -> Tuple[bool, bool, bool]:
    return tuple(Rhombus(ax, t) in longs for ax in AXES)


def _replace(longs: FrozenSet[Rhombus], t: Point3, lower_long: Sequence[bool]) -> FrozenSet[Rhombus]:
    out = set(longs)
    for ax in AXES:
        out.discard(Rhombus(ax, t))
    for ax, flag in zip(AXES, lower_long):
        if flag:
            out.add(_lower(t, ax))
    return frozenset(out)


def _branches(up: Tuple[bool, bool, bool]) -> Optional[Tuple[bool, bool, bool]]:
    """Deterministic lower state, or None when the three-way choice applies."""
    count = sum(up)
    if count == 0:
        return None
    if count == 1:
        return up
    if count == 2:
        return (False, False, False)
    raise ValueError("all three upper rhombi long: not a grove")


def choose_short(weights: ShuffleWeights, r: int) -> int:
    """Index of the lower rhombus kept short, from a uniform 128-bit integer r.

    Outcome a when r < U*2^128, b when r < (U+V)*2^128, c otherwise; both
    comparisons are exact in rational arithmetic.
    """
    u = weights.U
    if r * u.denominator < u.numerator * TWO128:
        return 0
    uv = weights.U + weights.V
    if r * uv.denominator < uv.numerator * TWO128:
        return 1
    return 2


class RngStream:
    """Counter-based stream (numpy Philox) keyed by a 64-bit seed and a stream index."""

    def __init__(self, seed: int, stream: int = 0):
        if not 0 <= seed < 1 << 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = seed
        self.stream = stream
        self._gen = np.random.Generator(np.random.Philox(key=np.array([seed, stream], dtype=np.uint64)))

    def words(self, count: int) -> np.ndarray:
        """`count` draws as a (count, 2) array of (high, low) 64-bit words."""
        return self._gen.integers(0, 1 << 64, size=(count, 2), dtype=np.uint64, endpoint=False)

    def next128(self) -> int:
        hi, lo = self.words(1)[0]
        return (int(hi) << 64) | int(lo)


def shuffle_cube(g: Grove, cube: Point3, weights: ShuffleWeights, rng: Optional[RngStream] = None, *, draw: Optional[int] = None) -> Grove:
    """Add `cube` to the removed set and update the grove locally.

    One 128-bit number is consumed per cube (from `draw` or `rng`) whether or
    not the three-way choice occurs, so streams stay aligned with the batch
    sampler.
    """
    if not g.ic.is_addable(cube):
        raise ScheduleError(f"cube {cube} cannot be added to these initial conditions")
    if draw is None:
        if rng is None:
            raise ValueError("either rng or draw is required")
        draw = rng.next128()
    up = _upper_state(g.longs, cube)
    lower = _branches(up)
    if lower is None:
        short = choose_short(weights, draw)
        lower = tuple(k != short for k in range(3))
    return Grove(g.ic.with_cube(cube), _replace(g.longs, cube, lower))


def default_schedule(n: int) -> List[Point3]:
    return standard_initial_conditions(n).schedule()


def sample_grove(field: ConductanceField, n: int, seed: int, stream: int = 0) -> Grove:
    """Random grove on I(n) by shuffling in the level-major order."""
    if n < 1:
        raise ValueError("order must be positive")
    schedule = default_schedule(n)
    rng = RngStream(seed, stream)
    words = rng.words(len(schedule))
    g = base_grove()
    longs = set()
    removed = set()
    for t, (hi, lo) in zip(schedule, words):
        up = tuple(Rhombus(ax, t) in longs for ax in AXES)
        lower = _branches(up)
        if lower is None:
            short = choose_short(field.weights(t), (int(hi) << 64) | int(lo))
            lower = tuple(k != short for k in range(3))
        for ax in AXES:
            longs.discard(Rhombus(ax, t))
        for ax, flag in zip(AXES, lower):
            if flag:
                longs.add(_lower(t, ax))
        removed.add(t)
    return Grove(InitialConditions(frozenset(removed)), frozenset(longs))


# exact enumeration


@dataclass
class WeightedGroveSet:
    ic: InitialConditions
    law: Dict[FrozenSet[Rhombus], Fraction]

    def groves(self) -> List[Tuple[Grove, Fraction]]:
        keys = sorted(self.law, key=lambda s: sorted(s))
        return [(Grove(self.ic, k), self.law[k]) for k in keys]

    def total(self) -> Fraction:
        return sum(self.law.values(), Fraction(0))

    def __len__(self) -> int:
        return len(self.law)

    def probability(self, predicate) -> Fraction:
        return sum((p for k, p in self.law.items() if predicate(Grove(self.ic, k))), Fraction(0))


def enumerate_groves(field: ConductanceField, n: Optional[int] = None, *, ic: Optional[InitialConditions] = None, schedule: Optional[Sequence[Point3]] = None) -> WeightedGroveSet:
    """Every grove reachable by shuffling, with its exact probability."""
    if ic is None:
        if n is None:
            raise ValueError("give an order n or initial conditions")
        ic = standard_initial_conditions(n)
    if len(ic.removed) > MAX_ENUMERATION_CUBES:
        raise ValueError(f"enumeration limited to {MAX_ENUMERATION_CUBES} cubes; got {len(ic.removed)}")
    order = list(schedule) if schedule is not None else ic.schedule()
    if sorted(order) != sorted(ic.removed):
        raise ScheduleError("schedule must list each removed cube once")
    law: Dict[FrozenSet[Rhombus], Fraction] = {frozenset(): Fraction(1)}
    current = InitialConditions.empty()
    for t in order:
        if not current.is_addable(t):
            raise ScheduleError(f"cube {t} is not addable at this point of the schedule")
        w = field.weights(t)
        probs = w.as_tuple()
        nxt: Dict[FrozenSet[Rhombus], Fraction] = {}
        for state, p in law.items():
            up = _upper_state(state, t)
            lower = _branches(up)
            if lower is not None:
                key = _replace(state, t, lower)
                nxt[key] = nxt.get(key, 0) + p
            else:
                for short in range(3):
                    key = _replace(state, t, tuple(k != short for k in range(3)))
                    nxt[key] = nxt.get(key, 0) + p * probs[short]
        law = nxt
        current = current.with_cube(t)
    return WeightedGroveSet(ic, law)


def partition_function(field: ConductanceField, n: Optional[int] = None, *, ic: Optional[InitialConditions] = None) -> Tuple[Fraction, Fraction]:
    """(product of Delta over removed cubes, sum of grove weights)."""
    if ic is None:
        ic = standard_initial_conditions(n)
    product = Fraction(1)
    for t in ic.removed:
        product *= field.weights(t).delta
    law = enumerate_groves(field, ic=ic)
    total = sum((Grove(ic, k).weight(field) for k in law.law), Fraction(0))
    return product, total


def boltzmann_law(field: ConductanceField, ic: InitialConditions) -> Dict[FrozenSet[Rhombus], Fraction]:
    """w(G)/Z over the groves reachable by shuffling onto `ic`."""
    law = enumerate_groves(field, ic=ic)
    weights = {k: Grove(ic, k).weight(field) for k in law.law}
    Z = sum(weights.values(), Fraction(0))
    return {k: w / Z for k, w in weights.items()}


def monomial_law(field: ConductanceField, ic: InitialConditions) -> Dict[FrozenSet[Rhombus], Fraction]:
    """m_f(G)/f_{0,0,0} for the cube-recurrence solution f whose conductances are `field`."""
    from .recurrence import f_from_conductance

    law = enumerate_groves(field, ic=ic)
    depth = 4 - min(ic.min_level(), 1)
    f = f_from_conductance(field, depth)
    return {k: Grove(ic, k).monomial_value(f) / f[(0, 0, 0)] for k in law.law}


def alternate_schedule(ic: InitialConditions) -> List[Point3]:
    """Lexicographically decreasing order: a valid removal order other than level-major."""
    return sorted(ic.removed, reverse=True)


def edge_probability_bruteforce(field: ConductanceField, rhombus: Rhombus, n: Optional[int] = None, *, ic: Optional[InitialConditions] = None) -> Fraction:
    """Probability that `rhombus` carries its long diagonal."""
    if ic is None:
        ic = standard_initial_conditions(n)
    if not ic.contains_rhombus(rhombus):
        raise ValueError(f"{rhombus} is not a rhombus of the initial conditions")
    law = enumerate_groves(field, ic=ic)
    return sum((p for k, p in law.law.items() if rhombus in k), Fraction(0))


def creation_rate_bruteforce(field: ConductanceField, vertex: Point3, ic: InitialConditions) -> Fraction:
    """Expected degree minus two of `vertex` over the shuffling law."""
    if vertex not in ic:
        raise ValueError(f"{vertex} is not in I")
    law = enumerate_groves(field, ic=ic)
    return sum((p * (Grove(ic, k).degree(vertex) - 2) for k, p in law.law.items()), Fraction(0))


def verify_grove_expansion(field: ConductanceField, n: int, trials: int, seed: int = 0) -> bool:
    """g_{0,0,0} from the weighted recurrence equals sum_G P(G) prod g_v^(deg v - 2)."""
    import random

    from .recurrence import boundary_points, solve_generalized_recurrence

    ic = standard_initial_conditions(n)
    law = enumerate_groves(field, ic=ic)
    groves = [(Grove(ic, k), p) for k, p in law.law.items()]
    rnd = random.Random(seed)
    pts = boundary_points(ic)
    for trial in range(trials):
        if trial == 0:
            values = {p: Fraction(1) for p in pts}
        else:
            values = {p: Fraction(rnd.randint(1, 9), rnd.randint(1, 9)) for p in pts}
        lhs = solve_generalized_recurrence(values, field, ic)[(0, 0, 0)]
        rhs = sum((p * g.monomial_value(values) for g, p in groves), Fraction(0))
        if lhs != rhs:
            return False
    return True


# vectorized batch sampler


@dataclass
class BatchSamples:
    """Final long-diagonal indicators for a batch of groves on I(n)."""

    n: int
    anchors: Dict[Point3, int]
    longs: Dict[str, np.ndarray]  # axis -> bool array (samples, anchors)

    @property
    def count(self) -> int:
        return next(iter(self.longs.values())).shape[0]

    def frequency(self, r: Rhombus) -> int:
        idx = self.anchors.get(r.anchor)
        if idx is None:
            return 0
        return int(self.longs[r.axis][:, idx].sum())

    def grove(self, s: int) -> Grove:
        inv = {v: k for k, v in self.anchors.items()}
        longs = set()
        for ax in AXES:
            for idx in np.nonzero(self.longs[ax][s])[0]:
                longs.add(Rhombus(ax, inv[int(idx)]))
        return Grove(standard_initial_conditions(self.n), frozenset(longs))


def _threshold_words(x: Fraction) -> Tuple[int, int]:
    t = -((-x.numerator * TWO128) // x.denominator)  # ceil(x * 2^128)
    t = min(t, TWO128 - 1)
    return t >> 64, t & ((1 << 64) - 1)


def sample_batch(field: ConductanceField, n: int, count: int, seed: int, first_stream: int = 0, chunk: int = 1000, workers: Optional[int] = None) -> BatchSamples:
    """`count` independent groves on I(n); sample s uses stream first_stream + s.

    Each sample equals `sample_grove(field, n, seed, stream)` exactly: cubes at
    one level are independent, so a level is processed as one array step.
    """
    schedule = default_schedule(n)
    pos = {t: k for k, t in enumerate(schedule)}
    anchors: Dict[Point3, int] = {}
    for t in schedule:
        for p in (t,) + tuple(sub(t, unit(ax)) for ax in AXES):
            anchors.setdefault(p, len(anchors))
    by_level: Dict[int, List[Point3]] = {}
    for t in schedule:
        by_level.setdefault(level(t), []).append(t)
    plan = []
    for s in sorted(by_level, reverse=True):
        cubes = by_level[s]
        tu = [_threshold_words(field.weights(t).U) for t in cubes]
        tuv = [_threshold_words(field.weights(t).U + field.weights(t).V) for t in cubes]
        plan.append(
            (
                np.array([pos[t] for t in cubes]),
                np.array([anchors[t] for t in cubes]),
                {ax: np.array([anchors[sub(t, unit(ax))] for t in cubes]) for ax in AXES},
                np.array([w[0] for w in tu], dtype=np.uint64),
                np.array([w[1] for w in tu], dtype=np.uint64),
                np.array([w[0] for w in tuv], dtype=np.uint64),
                np.array([w[1] for w in tuv], dtype=np.uint64),
            )
        )

    def run_chunk(start: int) -> Dict[str, np.ndarray]:
        size = min(chunk, count - start)
        words = np.stack([RngStream(seed, first_stream + start + s).words(len(schedule)) for s in range(size)])
        state = {ax: np.zeros((size, len(anchors)), dtype=bool) for ax in AXES}
        for cols, up_idx, low_idx, tuh, tul, tvh, tvl in plan:
            hi = words[:, cols, 0]
            lo = words[:, cols, 1]
            up = [state[ax][:, up_idx] for ax in AXES]
            nlong = up[0].astype(np.int8) + up[1] + up[2]
            below_u = (hi < tuh) | ((hi == tuh) & (lo < tul))
            below_uv = (hi < tvh) | ((hi == tvh) & (lo < tvl))
            short = np.where(below_u, 0, np.where(below_uv, 1, 2))
            free = nlong == 0
            single = nlong == 1
            for k, ax in enumerate(AXES):
                state[ax][:, up_idx] = False
                state[ax][:, low_idx[ax]] = (free & (short != k)) | (single & up[k])
        return state

    starts = list(range(0, count, chunk))
    workers = workers or default_workers()
    if workers > 1 and len(starts) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            states = list(pool.map(run_chunk, starts))
    else:
        states = [run_chunk(s) for s in starts]
    if not states:
        states = [{ax: np.zeros((0, len(anchors)), dtype=bool) for ax in AXES}]
    longs = {ax: np.concatenate([st[ax] for st in states]) for ax in AXES}
    return BatchSamples(n, anchors, longs)


def default_workers() -> int:
    """Worker threads for batch sampling, capped by the GROVE_THREADS environment variable."""
    import os

    cap = os.environ.get("GROVE_THREADS")
    cpus = os.cpu_count() or 1
    if cap:
        try:
            return max(1, min(int(cap), cpus))
        except ValueError:
            raise ValueError("GROVE_THREADS must be a positive integer") from None
    return min(4, cpus)
