"""Resultants, multivariate gcd and squarefree decompositions over Q.

Resultants are Sylvester determinants.  When the coefficient ring has at
most three variables the determinant is obtained by evaluating at integer
points and interpolating, which is exact because the Sylvester matrix is
built with formal degrees and the degree bounds below are valid for it.

The gcd follows the dense evaluation/interpolation scheme: strip the
content in the last variable, evaluate that variable at integers, take
gcds of the images recursively, rescale them by the gcd of leading
coefficients, interpolate, and accept only when trial division succeeds.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import count
from typing import Dict, List, Sequence, Tuple

from .linalg import det_bareiss
from .poly import PolyQ

# dense univariate helpers, coefficient lists indexed by degree


def _trim(p: List[Fraction]) -> List[Fraction]:
    while p and not p[-1]:
        p.pop()
    return p


def _udivmod(a: List[Fraction], b: List[Fraction]) -> Tuple[List[Fraction], List[Fraction]]:
    a = list(a)
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("univariate division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    inv = 1 / Fraction(b[-1])
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        factor = a[-1] * inv
        q[shift] = factor
        for k, c in enumerate(b):
            a[shift + k] -= factor * c
        a.pop()
    return _trim(q), _trim(a)


def ugcd(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    """Monic gcd of two dense univariate polynomials (Euclid over Q)."""
    a = _trim([Fraction(c) for c in a])
    b = _trim([Fraction(c) for c in b])
    while b:
        _, r = _udivmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def _ueval(p: Sequence[Fraction], x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _to_dense(p: PolyQ, var: str) -> List[Fraction]:
    k = p.gens.index(var) if var in p.gens else None
    out: List[Fraction] = []
    for exp, c in p.terms.items():
        if any(e for idx, e in enumerate(exp) if idx != k):
            raise ValueError("polynomial is not univariate in the requested variable")
        d = exp[k] if k is not None else 0
        while len(out) <= d:
            out.append(Fraction(0))
        out[d] += c
    return _trim(out)


def _from_dense(coeffs: Sequence[Fraction], var: str, gens: Tuple[str, ...]) -> PolyQ:
    k = gens.index(var)
    terms = {}
    for d, c in enumerate(coeffs):
        if c:
            exp = [0] * len(gens)
            exp[k] = d
            terms[tuple(exp)] = c
    return PolyQ(terms, gens)


# interpolation


def _sample_points():
    yield 0
    for k in count(1):
        yield k
        yield -k


def _newton_interpolate(points: Sequence[int], values: Sequence[PolyQ], var: str, gens: Tuple[str, ...]) -> PolyQ:
    """Polynomial in `var` (coefficients PolyQ) through (points, values)."""
    coeffs = [v.with_gens(gens) for v in values]
    n = len(points)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            coeffs[i] = (coeffs[i] - coeffs[i - 1]).scale(Fraction(1, points[i] - points[i - level]))
    t = PolyQ.var(var, gens)
    result = coeffs[-1]
    for i in range(n - 2, -1, -1):
        result = result * (t - points[i]) + coeffs[i]
    return result


# resultants


def _degree_bound(matrix: Sequence[Sequence[PolyQ]], var: str) -> int:
    rows = sum(max((e.degree(var) for e in row if not e.is_zero()), default=0) for row in matrix)
    n = len(matrix)
    cols = sum(
        max((matrix[i][j].degree(var) for i in range(n) if not matrix[i][j].is_zero()), default=0)
        for j in range(n)
    )
    return max(min(rows, cols), 0)


def det_by_interpolation(matrix: Sequence[Sequence[PolyQ]], gens: Tuple[str, ...]) -> PolyQ:
    """Determinant of a polynomial matrix by recursive evaluation/interpolation."""
    rows = [[e.with_gens(gens) for e in row] for row in matrix]
    used = set()
    for row in rows:
        for e in row:
            used.update(e.used_vars())
    if not used:
        num = [[e.constant_term() for e in row] for row in rows]
        return PolyQ.const(det_bareiss(num), gens)
    var = [g for g in gens if g in used][-1]
    bound = _degree_bound(rows, var)
    points = list(range(bound + 1))
    values = []
    for a in points:
        sub = [[e.subs({var: a}) for e in row] for row in rows]
        values.append(det_by_interpolation(sub, gens))
    return _newton_interpolate(points, values, var, gens)


def sylvester_matrix(f: PolyQ, g: PolyQ, var: str) -> List[List[PolyQ]]:
    f, g = f._align(g)
    m, n = f.degree(var), g.degree(var)
    fc = f.coefficients_in(var)
    gc = g.coefficients_in(var)
    zero = PolyQ.const(0, f.gens)
    size = m + n
    mat = [[zero] * size for _ in range(size)]
    for r in range(n):
        for d in range(m + 1):
            mat[r][r + m - d] = fc.get(d, zero)
    for r in range(m):
        for d in range(n + 1):
            mat[n + r][r + n - d] = gc.get(d, zero)
    return mat


def resultant(f: PolyQ, g: PolyQ, var: str) -> PolyQ:
    """Res_var(f, g) as the Sylvester determinant (coefficient of var^m first)."""
    f, g = f._align(g)
    if var not in f.gens:
        f = f.with_gens(f.gens + (var,))
        g = g.with_gens(f.gens)
    if f.is_zero() or g.is_zero():
        return PolyQ.const(0, f.gens)
    m, n = f.degree(var), g.degree(var)
    if m == 0:
        return f ** n
    if n == 0:
        return g ** m
    mat = sylvester_matrix(f, g, var)
    others = set(f.used_vars()) | set(g.used_vars())
    others.discard(var)
    if len(others) <= 3:
        return det_by_interpolation(mat, f.gens)
    return det_bareiss(mat)


def discriminant(f: PolyQ, var: str) -> PolyQ:
    """Res(f, f') / lc(f) with the usual sign (-1)^(d(d-1)/2)."""
    d = f.degree(var)
    res = resultant(f, f.diff(var), var)
    lc = f.leading_coefficient_in(var)
    out = res / lc
    return -out if (d * (d - 1) // 2) % 2 else out


# gcd


def _content_in(f: PolyQ, var: str) -> List[Fraction]:
    """Monic gcd in Q[var] of the coefficients of f viewed over the other variables."""
    k = f.gens.index(var)
    groups: Dict[tuple, List[Fraction]] = {}
    for exp, c in f.terms.items():
        rest = exp[:k] + exp[k + 1:]
        dense = groups.setdefault(rest, [])
        while len(dense) <= exp[k]:
            dense.append(Fraction(0))
        dense[exp[k]] += c
    g: List[Fraction] = []
    for dense in groups.values():
        g = ugcd(g, dense) if g else ugcd(dense, [])
        if len(g) == 1:
            break
    return g


def _lead_in_others(f: PolyQ, var: str) -> Tuple[tuple, List[Fraction]]:
    """Leading exponent over the non-`var` variables and its coefficient in Q[var]."""
    k = f.gens.index(var)
    best = None
    for exp in f.terms:
        rest = exp[:k] + exp[k + 1:]
        if best is None or rest > best:
            best = rest
    dense: List[Fraction] = []
    for exp, c in f.terms.items():
        if exp[:k] + exp[k + 1:] == best:
            while len(dense) <= exp[k]:
                dense.append(Fraction(0))
            dense[exp[k]] += c
    return best, _trim(dense)


def gcd(f: PolyQ, g: PolyQ) -> PolyQ:
    """Greatest common divisor, normalized to be primitive with positive lead."""
    f, g = f._align(g)
    if f.is_zero():
        return g.primitive()
    if g.is_zero():
        return f.primitive()
    used = [v for v in f.gens if v in set(f.used_vars()) | set(g.used_vars())]
    gens = f.gens
    if not used:
        return PolyQ.const(1, gens)
    if len(used) == 1:
        v = used[0]
        h = ugcd(_to_dense(f, v), _to_dense(g, v))
        return _from_dense(h, v, gens).primitive()
    t = used[-1]
    cf, cg = _content_in(f, t), _content_in(g, t)
    cont = _from_dense(ugcd(cf, cg), t, gens)
    ppf = f.divexact(_from_dense(cf, t, gens))
    ppg = g.divexact(_from_dense(cg, t, gens))
    _, lf = _lead_in_others(ppf, t)
    _, lg = _lead_in_others(ppg, t)
    gamma = ugcd(lf, lg)
    bound = min(ppf.degree(t), ppg.degree(t)) + len(gamma) - 1
    points: List[int] = []
    images: List[PolyQ] = []
    best = None
    for a in _sample_points():
        if not _ueval(lf, a) or not _ueval(lg, a):
            continue
        img = gcd(ppf.subs({t: a}), ppg.subs({t: a}))
        if img.is_constant():
            return cont.primitive()
        lead = max(img.terms)
        if best is not None and lead > best:
            continue  # unlucky evaluation point
        if best is None or lead < best:
            best, points, images = lead, [], []
        img = img.scale(_ueval(gamma, a) / img.terms[lead])
        points.append(a)
        images.append(img)
        if len(points) > bound:
            cand = _newton_interpolate(points, images, t, gens)
            cand = cand.divexact(_from_dense(_content_in(cand, t), t, gens))
            if cand.divides(ppf) and cand.divides(ppg):
                return (cont * cand).primitive()
            if len(points) > 4 * bound + 8:
                raise ArithmeticError("gcd interpolation failed to stabilize")
    raise AssertionError("unreachable")


# squarefree parts


def squarefree_part(f: PolyQ, var: str) -> PolyQ:
    """f / gcd(f, df/dvar), primitive; repeated factors free of `var` survive."""
    if f.is_zero():
        raise ValueError("squarefree part of zero")
    d = f.diff(var)
    if d.is_zero():
        return f.primitive()
    return f.divexact(gcd(f, d)).primitive()


def yun_decomposition(f: PolyQ, var: str) -> Dict[int, PolyQ]:
    """Yun's algorithm in `var` on the primitive part of f w.r.t. `var`.

    Returns {multiplicity: product of factors with that multiplicity}; the
    content (factors free of `var`) is ignored here.
    """
    c = f.diff(var)
    if c.is_zero():
        return {}
    b = gcd(f, c)
    a = f.divexact(b)
    d = c.divexact(b) - a.diff(var)
    out: Dict[int, PolyQ] = {}
    i = 1
    while a.degree(var) > 0:
        h = gcd(a, d)
        if h.degree(var) > 0:
            out[i] = h.primitive()
        a = a.divexact(h)
        d = d.divexact(h) - a.diff(var)
        i += 1
    return out


def squarefree_decomposition(f: PolyQ) -> Dict[int, PolyQ]:
    """Full squarefree decomposition over Q: f = const * prod_i out[i]^i."""
    out: Dict[int, PolyQ] = {}
    rest = f
    for var in f.gens:
        if rest.degree(var) <= 0:
            continue
        parts = yun_decomposition(rest, var)
        for mult, factor in parts.items():
            out[mult] = out[mult] * factor if mult in out else factor
            rest = rest.divexact(factor ** mult)
    return out
