"""Torus conductances, their Y-Delta extension to the octant, and shuffle weights.

Coordinates.  An anchor p at level s = i+j+k is written as
p = (s,0,0) + a*(-1,1,0) + b*(1,0,-1), so (a, b) = (p_j, -p_k).  The torus
T_{m,n} identifies anchors differing by (-m,m,0) and (0,n,-n); in (a, b)
coordinates these are (m,0) and (n,n).  A torus table assigns a conductance
to each pair (axis, (a mod m, b mod n)) on level 0; those are the long
diagonals lying on the plane i+j+k = -1.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra.poly import PolyQ, format_rational, parse_rational
from .lattice import AXES, Point3, add, level

Slot = Tuple[str, Tuple[int, int]]

# Which torus edge class each letter of the T_{1,2} picture occupies.  Fixed
# so that the printed Laplacian and both printed linear systems come out
# literally; see the notes on the `origin` field below.
LETTER_SLOTS = {
    (1, 1): {"a": ("a", (0, 0)), "b": ("b", (0, 0)), "c": ("c", (0, 0))},
    (1, 2): {
        "e": ("a", (0, 0)),
        "b": ("a", (0, 1)),
        "d": ("b", (0, 0)),
        "a": ("b", (0, 1)),
        "f": ("c", (0, 0)),
        "c": ("c", (0, 1)),
    },
}

_SLOT_KEY = re.compile(r"^([abc])\[(-?\d+),(-?\d+)\]$")


def plane_coords(p: Point3) -> Tuple[int, int]:
    return (p[1], -p[2])


def reduce_plane(a: int, b: int, m: int, n: int) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """Reduce (a, b) modulo <(m,0), (n,n)>.

    Returns the representative with 0 <= a < m, 0 <= b < n and the integer
    coefficients (x, y) with (a, b) = rep + x*(m,0) + y*(n,n).
    """
    y, b0 = divmod(b, n)
    a1 = a - n * y
    x, a0 = divmod(a1, m)
    return (a0, b0), (x, y)


def torus_slots(m: int, n: int) -> List[Slot]:
    return [(ax, (a, b)) for ax in AXES for a in range(m) for b in range(n)]


@dataclass(frozen=True)
class TorusConductance:
    """One positive rational (or symbolic PolyQ) per edge class of T_{m,n}."""

    m: int
    n: int
    values: Mapping[Slot, object]
    labels: Mapping[Slot, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("torus dimensions must be positive")
        expected = set(torus_slots(self.m, self.n))
        if set(self.values) != expected:
            missing = sorted(expected - set(self.values))
            raise ValueError(f"torus table must have exactly {len(expected)} entries; missing {missing}")
        for slot, v in self.values.items():
            if not isinstance(v, PolyQ) and not Fraction(v) > 0:
                raise ValueError(f"conductance at {slot} must be positive")
        object.__setattr__(self, "values", dict(self.values))
        object.__setattr__(self, "labels", dict(self.labels))

    def value(self, axis: str, cls: Tuple[int, int]):
        return self.values[(axis, cls)]

    def is_numeric(self) -> bool:
        return not any(isinstance(v, PolyQ) for v in self.values.values())

    @classmethod
    def uniform(cls, m: int = 1, n: int = 1, value=1) -> "TorusConductance":
        return cls(m, n, {s: Fraction(value) for s in torus_slots(m, n)})

    @classmethod
    def from_labels(cls, m: int, n: int, edges: Mapping[str, object], labeling: str = "laplacian-derived-v1") -> "TorusConductance":
        slots = slot_map(m, n, labeling, edges)
        values = {}
        labels = {}
        for label, value in edges.items():
            slot = slots[label]
            values[slot] = value
            labels[slot] = label
        return cls(m, n, values, labels)

    @classmethod
    def symbolic(cls, m: int, n: int, labeling: str = "laplacian-derived-v1") -> "TorusConductance":
        """Each edge class carries its own label as a polynomial variable."""
        if labeling == "laplacian-derived-v1" and (m, n) in LETTER_SLOTS:
            names = sorted(LETTER_SLOTS[(m, n)])
        else:
            names = [f"c_{ax}{a}{b}" for ax, (a, b) in torus_slots(m, n)]
            labeling = "slots-v1"
            edges = {name: PolyQ.var(name, ()) for name in names}
            values = {s: edges[nm] for s, nm in zip(torus_slots(m, n), names)}
            return cls(m, n, values, dict(zip(torus_slots(m, n), names)))
        gens = tuple(names)
        edges = {name: PolyQ.var(name, gens) for name in names}
        return cls.from_labels(m, n, edges, labeling)


def slot_map(m: int, n: int, labeling: str, edges: Mapping[str, object]) -> Dict[str, Slot]:
    if labeling == "laplacian-derived-v1":
        if (m, n) not in LETTER_SLOTS:
            raise ValueError(f"labeling {labeling!r} only covers T_(1,1) and T_(1,2)")
        table = LETTER_SLOTS[(m, n)]
        unknown = sorted(set(edges) - set(table))
        missing = sorted(set(table) - set(edges))
        if unknown or missing:
            raise ValueError(f"edge labels must be exactly {sorted(table)}; unknown {unknown}, missing {missing}")
        return dict(table)
    if labeling == "slots-v1":
        out = {}
        for key in edges:
            match = _SLOT_KEY.match(key.replace(" ", ""))
            if not match:
                raise ValueError(f"slot label {key!r} must look like a[0,1]")
            ax, a, b = match.group(1), int(match.group(2)), int(match.group(3))
            if not (0 <= a < m and 0 <= b < n):
                raise ValueError(f"slot label {key!r} out of range for T_({m},{n})")
            out[key] = (ax, (a, b))
        return out
    raise ValueError(f"unknown labeling {labeling!r}")


@dataclass(frozen=True)
class ShuffleWeights:
    U: Fraction
    V: Fraction
    W: Fraction
    delta: Fraction

    def as_tuple(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (self.U, self.V, self.W)


class ConductanceField:
    """Y-Delta consistent conductances on every rhombus anchored at level <= 0.

    C(axis, p) is the conductance of the long diagonal of the rhombus of
    type `axis` anchored at p.  Level 0 holds the torus table; each lower
    level is produced by `ydelta_layer_step` and memoized.  `origin` is an
    in-plane translation applied before looking up torus classes, and a
    shifted view (C^mu) adds mu to every requested anchor.
    """

    def __init__(self, base: TorusConductance, origin: Point3 = (0, 0, 0), *, _shared=None, shift: Point3 = (0, 0, 0)):
        if not base.is_numeric():
            raise ValueError("a conductance field needs numeric conductances")
        if level(origin) != 0:
            raise ValueError("origin must lie in the plane i+j+k = 0")
        self.base = base
        self.origin = tuple(origin)
        self.shift = tuple(shift)
        if _shared is None:
            top = {s: Fraction(v) for s, v in base.values.items()}
            _shared = ({0: top}, threading.Lock())
        self._layers, self._lock = _shared

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def n(self) -> int:
        return self.base.n

    def shifted(self, mu: Point3) -> "ConductanceField":
        return ConductanceField(self.base, self.origin, _shared=(self._layers, self._lock), shift=add(self.shift, mu))

    def layer(self, s: int) -> Dict[Slot, Fraction]:
        if s > 0:
            raise ValueError(f"level {s} lies above the torus layer")
        table = self._layers.get(s)
        if table is not None:
            return table
        with self._lock:
            lowest = min(self._layers)
            while lowest > s:
                nxt = ydelta_layer_step(self._layers[lowest], self.m, self.n)
                self._layers[lowest - 1] = nxt
                lowest -= 1
        return self._layers[s]

    def slot_of(self, axis: str, p: Point3) -> Tuple[int, Slot]:
        q = add(add(p, self.shift), self.origin)
        a, b = plane_coords(q)
        cls, _ = reduce_plane(a, b, self.m, self.n)
        return level(q), (axis, cls)

    def C(self, axis: str, p: Point3) -> Fraction:
        s, slot = self.slot_of(axis, p)
        if s > 0:
            raise ValueError(f"anchor {p} (shifted) is above level 0")
        return self.layer(s)[slot]

    def star_sum(self, p: Point3) -> Fraction:
        ca, cb, cc = (self.C(ax, p) for ax in AXES)
        return ca * cb + ca * cc + cb * cc

    def weights(self, p: Point3) -> ShuffleWeights:
        return shuffle_weights(self, p)


def ydelta_layer_step(layer: Mapping[Slot, Fraction], m: int, n: int) -> Dict[Slot, Fraction]:
    """Next layer down: C_q(p - e_q) = C_q(p) / (C_aC_b + C_aC_c + C_bC_c)(p).

    Equivalently the short diagonals below are S/C_q and each new long
    diagonal is the reciprocal of the short diagonal of the same rhombus.
    """
    for slot, v in layer.items():
        if not v > 0:
            raise ValueError(f"nonpositive conductance at {slot}")
    star = {}
    for a in range(m):
        for b in range(n):
            ca, cb, cc = (layer[(ax, (a, b))] for ax in AXES)
            star[(a, b)] = ca * cb + ca * cc + cb * cc
    out = {}
    for a in range(m):
        for b in range(n):
            # parent anchor p' + e_q in (a, b) coordinates
            parents = {"a": (a, b), "b": (a + 1, b), "c": (a, b - 1)}
            for ax, (pa, pb) in parents.items():
                cls, _ = reduce_plane(pa, pb, m, n)
                out[(ax, (a, b))] = layer[(ax, cls)] / star[cls]
    return out


def shuffle_weights(field: ConductanceField, p: Point3) -> ShuffleWeights:
    """(U, V, W) at cube p from the three long diagonals just below it."""
    i, j, k = p
    ca = field.C("a", (i - 1, j, k))
    cb = field.C("b", (i, j - 1, k))
    cc = field.C("c", (i, j, k - 1))
    nu, nv, nw = cb * cc, ca * cc, ca * cb
    delta = nu + nv + nw
    return ShuffleWeights(nu / delta, nv / delta, nw / delta, delta)


# equivalence classes


@dataclass(frozen=True, order=True)
class ClassIndex:
    rep: Point3
    N: int
    m: int
    n: int


def class_generators(N: int, m: int, n: int) -> Tuple[Point3, Point3, Point3]:
    return ((-N, 0, 0), (-m, m, 0), (0, n, -n))


def class_of(mu: Point3, N: int, m: int, n: int) -> ClassIndex:
    """Canonical representative modulo <(-N,0,0), (-m,m,0), (0,n,-n)>.

    k is reduced into (-n, 0] with (0,n,-n), then j into (-m, 0] with
    (-m,m,0), then i into (-N, 0] with (-N,0,0).
    """
    i, j, k = mu
    kr = -((-k) % n)
    t = (k - kr) // n
    j, k = j + n * t, kr
    jr = -((-j) % m)
    s = (j - jr) // m
    i, j = i + m * s, jr
    ir = -((-i) % N)
    return ClassIndex((ir, j, k), N, m, n)


def all_classes(N: int, m: int, n: int) -> List[ClassIndex]:
    reps = [(-i, -j, -k) for i in range(N) for j in range(m) for k in range(n)]
    return sorted((class_of(r, N, m, n) for r in reps), key=lambda c: tuple(-x for x in c.rep))


@dataclass
class PeriodicityReport:
    periodic: bool
    N: int
    scale: Optional[Fraction]
    failure: Optional[Tuple[Point3, Point3]] = None

    def __bool__(self) -> bool:
        return self.periodic


def check_T_periodicity(field: ConductanceField, N: int, sample_depth: int = 6) -> PeriodicityReport:
    """Are the shuffle weights invariant under the three class generators?

    Sweeps every anchor with |i|+|j|+|k| <= sample_depth in the octant.
    """
    if N < 1:
        raise ValueError("N must be positive")
    gens = class_generators(N, field.m, field.n)
    failure = None
    for d in range(sample_depth + 1):
        for i in range(d + 1):
            for j in range(d - i + 1):
                mu = (-i, -j, -(d - i - j))
                w = field.weights(mu).as_tuple()
                for g in gens:
                    if field.weights(add(mu, g)).as_tuple() != w:
                        failure = (mu, g)
                        break
                if failure:
                    break
            if failure:
                break
        if failure:
            break
    ratios = {field.layer(-N)[s] / field.layer(0)[s] for s in field.layer(0)}
    scale = ratios.pop() if len(ratios) == 1 else None
    return PeriodicityReport(failure is None, N, scale, failure)


# configuration files


@dataclass
class FieldConfig:
    name: str
    torus: TorusConductance
    N: int
    origin: Point3 = (0, 0, 0)
    classes: Optional[List[Point3]] = None
    labeling: str = "laplacian-derived-v1"

    @property
    def m(self) -> int:
        return self.torus.m

    @property
    def n(self) -> int:
        return self.torus.n

    def field(self) -> ConductanceField:
        return ConductanceField(self.torus, self.origin)

    def class_list(self) -> List[ClassIndex]:
        if self.classes is not None:
            return [ClassIndex(tuple(c), self.N, self.m, self.n) for c in self.classes]
        return all_classes(self.N, self.m, self.n)

    def to_json(self) -> dict:
        edges = {}
        for slot, label in sorted(self.torus.labels.items(), key=lambda kv: kv[1]):
            edges[label] = format_rational(self.torus.values[slot])
        data = {
            "name": self.name,
            "m": self.m,
            "n": self.n,
            "N": self.N,
            "labeling": self.labeling,
            "edges": edges,
            "origin": list(self.origin),
        }
        if self.classes is not None:
            data["classes"] = [list(c) for c in self.classes]
        return data


class ConfigError(ValueError):
    """Invalid configuration; `path` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def parse_config(data: Mapping, name: str = "config") -> FieldConfig:
    for key in ("m", "n", "N", "edges"):
        if key not in data:
            raise ConfigError(key, "missing field")
    for key in ("m", "n", "N"):
        if not isinstance(data[key], int) or isinstance(data[key], bool) or data[key] < 1:
            raise ConfigError(key, "must be a positive integer")
    m, n, N = data["m"], data["n"], data["N"]
    labeling = data.get("labeling", "laplacian-derived-v1")
    if not isinstance(data["edges"], Mapping):
        raise ConfigError("edges", "must be an object mapping labels to rationals")
    edges = {}
    for label, text in data["edges"].items():
        try:
            value = parse_rational(str(text))
        except ValueError as exc:
            raise ConfigError(f"edges.{label}", str(exc)) from None
        if value <= 0:
            raise ConfigError(f"edges.{label}", "conductance must be positive")
        edges[label] = value
    try:
        torus = TorusConductance.from_labels(m, n, edges, labeling)
    except ValueError as exc:
        raise ConfigError("edges", str(exc)) from None
    origin = tuple(data.get("origin", (0, 0, 0)))
    if len(origin) != 3 or not all(isinstance(x, int) for x in origin) or sum(origin) != 0:
        raise ConfigError("origin", "must be three integers summing to 0")
    classes = data.get("classes")
    if classes is not None:
        classes = [tuple(c) for c in classes]
        reps = {class_of(c, N, m, n) for c in classes}
        if len(classes) != N * m * n or len(reps) != N * m * n:
            raise ConfigError("classes", f"must list {N * m * n} distinct classes")
    return FieldConfig(data.get("name", name), torus, N, origin, classes, labeling)


def load_config(path) -> FieldConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"invalid JSON: {exc}") from None
    return parse_config(data, path.stem)


BUNDLED = ("uniform_t11", "t12_n1", "t12_n3")


def bundled_config(name: str) -> FieldConfig:
    """One of the shipped configurations: uniform_t11, t12_n1, t12_n3."""
    from importlib import resources

    if name not in BUNDLED:
        raise KeyError(f"unknown bundled config {name!r}; choose from {BUNDLED}")
    text = resources.files("grovearctic.configs").joinpath(f"{name}.json").read_text()
    return parse_config(json.loads(text), name)
