"""Sparse multivariate polynomials with exact rational coefficients.

A `PolyQ` is an immutable map from exponent tuples to nonzero `Fraction`
coefficients over an ordered tuple of variable names.  Exponents may be
negative, so the same type doubles as a Laurent polynomial for ring
operations (addition, multiplication, evaluation); division and gcd
routines require ordinary polynomials.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Mapping, Sequence, Tuple

Exp = Tuple[int, ...]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"not an exact rational: {value!r}")


_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" into a Fraction; reject zero denominators."""
    match = _RATIONAL.match(text)
    if not match:
        raise ValueError(f"malformed rational {text!r}")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class PolyQ:
    __slots__ = ("gens", "terms")

    def __init__(self, terms: Mapping[Exp, object] | None = None, gens: Sequence[str] = ("x", "y", "z")):
        gens = tuple(gens)
        clean: Dict[Exp, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                exp = tuple(exp)
                if len(exp) != len(gens):
                    raise ValueError("exponent length does not match variables")
                c = as_fraction(coeff)
                if c:
                    clean[exp] = clean.get(exp, 0) + c
                    if not clean[exp]:
                        del clean[exp]
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def _raw(cls, terms: Dict[Exp, Fraction], gens: Tuple[str, ...]) -> "PolyQ":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "gens", gens)
        object.__setattr__(obj, "terms", terms)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("PolyQ is immutable")

    # construction

    @classmethod
    def const(cls, value, gens: Sequence[str] = ("x", "y", "z")) -> "PolyQ":
        gens = tuple(gens)
        c = as_fraction(value)
        return cls._raw({(0,) * len(gens): c} if c else {}, gens)

    @classmethod
    def var(cls, name: str, gens: Sequence[str] = ("x", "y", "z")) -> "PolyQ":
        gens = tuple(gens)
        if name not in gens:
            gens = gens + (name,)
        exp = tuple(1 if g == name else 0 for g in gens)
        return cls._raw({exp: Fraction(1)}, gens)

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1, gens: Sequence[str] = ("x", "y", "z")) -> "PolyQ":
        return cls({tuple(exp): coeff}, gens)

    @classmethod
    def gens_of(cls, gens: Sequence[str]) -> Tuple["PolyQ", ...]:
        return tuple(cls.var(g, gens) for g in gens)

    @classmethod
    def parse(cls, text: str, gens: Sequence[str] = ("x", "y", "z")) -> "PolyQ":
        return _Parser(text, tuple(gens)).parse()

    # variable bookkeeping

    def with_gens(self, gens: Sequence[str]) -> "PolyQ":
        """Re-express over `gens`, which must contain every variable in use."""
        gens = tuple(gens)
        if gens == self.gens:
            return self
        index = {g: k for k, g in enumerate(gens)}
        out: Dict[Exp, Fraction] = {}
        for exp, c in self.terms.items():
            new = [0] * len(gens)
            for g, e in zip(self.gens, exp):
                if e:
                    if g not in index:
                        raise ValueError(f"variable {g} is in use and cannot be dropped")
                    new[index[g]] = e
            out[tuple(new)] = c
        return PolyQ._raw(out, gens)

    def used_vars(self) -> Tuple[str, ...]:
        used = [False] * len(self.gens)
        for exp in self.terms:
            for k, e in enumerate(exp):
                if e:
                    used[k] = True
        return tuple(g for g, u in zip(self.gens, used) if u)

    def _align(self, other) -> Tuple["PolyQ", "PolyQ"]:
        if not isinstance(other, PolyQ):
            return self, PolyQ.const(other, self.gens)
        if other.gens == self.gens:
            return self, other
        merged = self.gens + tuple(g for g in other.gens if g not in self.gens)
        return self.with_gens(merged), other.with_gens(merged)

    # predicates

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.gens), Fraction(0))

    def __len__(self) -> int:
        return len(self.terms)

    # ring operations

    def __add__(self, other):
        a, b = self._align(other)
        out = dict(a.terms)
        for exp, c in b.terms.items():
            s = out.get(exp)
            if s is None:
                out[exp] = c
            else:
                s = s + c
                if s:
                    out[exp] = s
                else:
                    del out[exp]
        return PolyQ._raw(out, a.gens)

    __radd__ = __add__

    def __neg__(self):
        return PolyQ._raw({e: -c for e, c in self.terms.items()}, self.gens)

    def __sub__(self, other):
        a, b = self._align(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor) -> "PolyQ":
        f = as_fraction(factor)
        if not f:
            return PolyQ._raw({}, self.gens)
        return PolyQ._raw({e: c * f for e, c in self.terms.items()}, self.gens)

    def __mul__(self, other):
        if not isinstance(other, PolyQ):
            return self.scale(other)
        a, b = self._align(other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out: Dict[Exp, Fraction] = {}
        get = out.get
        bitems = list(b.terms.items())
        nvars = len(a.gens)
        if nvars == 1:
            for (e1,), c1 in a.terms.items():
                for (e2,), c2 in bitems:
                    key = (e1 + e2,)
                    out[key] = get(key, 0) + c1 * c2
        elif nvars == 2:
            for (e1, f1), c1 in a.terms.items():
                for (e2, f2), c2 in bitems:
                    key = (e1 + e2, f1 + f2)
                    out[key] = get(key, 0) + c1 * c2
        elif nvars == 3:
            for (e1, f1, g1), c1 in a.terms.items():
                for (e2, f2, g2), c2 in bitems:
                    key = (e1 + e2, f1 + f2, g1 + g2)
                    out[key] = get(key, 0) + c1 * c2
        else:
            for e1, c1 in a.terms.items():
                for e2, c2 in bitems:
                    key = tuple(p + q for p, q in zip(e1, e2))
                    out[key] = get(key, 0) + c1 * c2
        return PolyQ._raw({e: c for e, c in out.items() if c}, a.gens)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            if isinstance(k, int) and len(self.terms) == 1:
                (exp, c), = self.terms.items()
                return PolyQ._raw({tuple(e * k for e in exp): c ** k}, self.gens)
            raise ValueError("only nonnegative integer powers (or powers of monomials)")
        result = PolyQ.const(1, self.gens)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, PolyQ):
            if other.is_constant() and other.terms:
                return self.scale(1 / other.constant_term())
            return self.divexact(other)
        return self.scale(1 / as_fraction(other))

    def __eq__(self, other):
        if isinstance(other, PolyQ):
            a, b = self._align(other)
            return a.terms == b.terms
        try:
            c = as_fraction(other)
        except TypeError:
            return NotImplemented
        return self.terms == ({(0,) * len(self.gens): c} if c else {})

    __hash__ = None

    # degrees and components

    def _index(self, var: str) -> int:
        try:
            return self.gens.index(var)
        except ValueError:
            raise ValueError(f"unknown variable {var}") from None

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in `var`; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        if var not in self.gens:
            return 0
        k = self._index(var)
        return max(e[k] for e in self.terms)

    def min_degree(self, var: str | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return min(sum(e) for e in self.terms)
        k = self._index(var)
        return min(e[k] for e in self.terms)

    def homogeneous_component(self, d: int) -> "PolyQ":
        return PolyQ._raw({e: c for e, c in self.terms.items() if sum(e) == d}, self.gens)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coefficients_in(self, var: str) -> Dict[int, "PolyQ"]:
        """Split as sum of var^k * c_k; the c_k keep the same variable list."""
        k = self._index(var)
        parts: Dict[int, Dict[Exp, Fraction]] = {}
        for exp, c in self.terms.items():
            d = exp[k]
            rest = exp[:k] + (0,) + exp[k + 1:]
            parts.setdefault(d, {})[rest] = c
        return {d: PolyQ._raw(t, self.gens) for d, t in parts.items()}

    def leading_coefficient_in(self, var: str) -> "PolyQ":
        parts = self.coefficients_in(var)
        return parts[max(parts)] if parts else PolyQ._raw({}, self.gens)

    def support(self) -> list:
        return sorted(self.terms)

    def leading_term(self) -> Tuple[Exp, Fraction]:
        """Largest term in lexicographic order of exponent tuples."""
        exp = max(self.terms)
        return exp, self.terms[exp]

    def content(self) -> Fraction:
        """Positive rational c such that self/c has coprime integer coefficients."""
        from math import gcd, lcm

        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    def normalized(self) -> "PolyQ":
        """Scale so the lexicographically leading coefficient is 1."""
        if not self.terms:
            return self
        return self.scale(1 / self.leading_term()[1])

    def primitive(self) -> "PolyQ":
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if not self.terms:
            return self
        p = self.scale(1 / self.content())
        if p.leading_term()[1] < 0:
            p = -p
        return p

    # calculus and substitution

    def diff(self, var: str) -> "PolyQ":
        if var not in self.gens:
            return PolyQ._raw({}, self.gens)
        k = self._index(var)
        out = {}
        for exp, c in self.terms.items():
            if exp[k]:
                new = exp[:k] + (exp[k] - 1,) + exp[k + 1:]
                out[new] = c * exp[k]
        return PolyQ._raw(out, self.gens)

    def evaluate(self, values):
        """Evaluate at a point given as a mapping var->value or a sequence in gens order."""
        if isinstance(values, Mapping):
            point = [values[g] if g in values else None for g in self.gens]
        else:
            point = list(values)
        total = 0
        for exp, c in self.terms.items():
            term = c
            for v, e in zip(point, exp):
                if e:
                    if v is None:
                        raise ValueError("missing value for a variable in use")
                    term = term * v ** e
            total = total + term
        return total

    def __call__(self, *args):
        return self.evaluate(args)

    def subs(self, mapping: Mapping[str, object]) -> "PolyQ":
        """Substitute polynomials or numbers for variables.

        Substituted variables stay in `gens` (with exponent 0) so that the
        result lives on the same variable list plus any new ones.
        """
        targets = {}
        for name, value in mapping.items():
            if name not in self.gens:
                continue
            if isinstance(value, PolyQ):
                targets[name] = value
            else:
                targets[name] = as_fraction(value)
        if not targets:
            return self
        gens = self.gens
        for value in targets.values():
            if isinstance(value, PolyQ):
                gens = gens + tuple(g for g in value.gens if g not in gens)
        idx = [self._index(name) for name in targets]
        powers: Dict[Tuple[int, int], object] = {}

        def power(k: int, e: int):
            key = (k, e)
            if key not in powers:
                value = targets[self.gens[k]]
                if isinstance(value, PolyQ):
                    powers[key] = value.with_gens(gens) ** e if e >= 0 else value.with_gens(gens) ** e
                else:
                    powers[key] = value ** e
            return powers[key]

        # group terms by the exponents of the substituted variables
        groups: Dict[Tuple[int, ...], Dict[Exp, Fraction]] = {}
        pad = (0,) * (len(gens) - len(self.gens))
        for exp, c in self.terms.items():
            key = tuple(exp[k] for k in idx)
            rest = list(exp)
            for k in idx:
                rest[k] = 0
            groups.setdefault(key, {})[tuple(rest) + pad] = c
        result = PolyQ._raw({}, gens)
        for key, terms in groups.items():
            part = PolyQ._raw(terms, gens)
            for k, e in zip(idx, key):
                if e:
                    part = part * power(k, e)
            result = result + part
        return result

    def shift(self, offsets: Mapping[str, object]) -> "PolyQ":
        """Substitute var -> var + offset for each given variable."""
        return self.subs({v: PolyQ.var(v, self.gens) + o for v, o in offsets.items()})

    # division

    def divmod_lex(self, other: "PolyQ") -> Tuple["PolyQ", "PolyQ"]:
        """Multivariate division by a single divisor in lex order."""
        a, b = self._align(other)
        if not b.terms:
            raise ZeroDivisionError("division by zero polynomial")
        lead_e, lead_c = b.leading_term()
        rem = dict(a.terms)
        quot: Dict[Exp, Fraction] = {}
        rest: Dict[Exp, Fraction] = {}
        bterms = list(b.terms.items())
        while rem:
            exp = max(rem)
            c = rem[exp]
            diff = tuple(p - q for p, q in zip(exp, lead_e))
            if min(diff) < 0:
                rest[exp] = c
                del rem[exp]
                continue
            factor = c / lead_c
            quot[diff] = factor
            for e2, c2 in bterms:
                key = tuple(p + q for p, q in zip(diff, e2))
                v = rem.get(key, 0) - factor * c2
                if v:
                    rem[key] = v
                else:
                    rem.pop(key, None)
        return PolyQ._raw(quot, a.gens), PolyQ._raw(rest, a.gens)

    def divexact(self, other: "PolyQ") -> "PolyQ":
        q, r = self.divmod_lex(other)
        if r.terms:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def divides(self, other: "PolyQ") -> bool:
        """True when self divides other exactly."""
        return not other.divmod_lex(self)[1].terms

    # serialization

    def to_text(self) -> str:
        """Canonical text: terms by descending total degree then descending lex exponent."""
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda e: (-sum(e), tuple(-x for x in e)))
        parts = []
        for exp in keys:
            c = self.terms[exp]
            mono = " ".join(
                (g if e == 1 else f"{g}^{e}") for g, e in zip(self.gens, exp) if e
            )
            mag = format_rational(abs(c))
            body = mag if not mono else (mono if mag == "1" else f"{mag} * {mono}")
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"PolyQ({self.to_text()!r}, gens={self.gens})"

    __str__ = to_text

    def to_json(self) -> dict:
        keys = sorted(self.terms, key=lambda e: (-sum(e), tuple(-x for x in e)))
        return {
            "format": "polyq-v1",
            "gens": list(self.gens),
            "terms": [[list(e), format_rational(self.terms[e])] for e in keys],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PolyQ":
        if data.get("format") != "polyq-v1":
            raise ValueError("unsupported polynomial format")
        gens = tuple(data["gens"])
        return cls({tuple(e): parse_rational(c) for e, c in data["terms"]}, gens)


def poly_sum(items: Iterable[PolyQ], gens: Sequence[str]) -> PolyQ:
    total = PolyQ.const(0, gens)
    for item in items:
        total = total + item
    return total


class _Parser:
    """Recursive-descent parser for + - * / ^ ** ( ) over rationals and variables."""

    _TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")

    def __init__(self, text: str, gens: Tuple[str, ...]):
        self.gens = gens
        self.tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = self._TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
            pos = m.end()
            if m.group(1):
                self.tokens.append(("num", int(m.group(1))))
            elif m.group(2):
                self.tokens.append(("var", m.group(2)))
            else:
                self.tokens.append(("op", m.group(3)))
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self) -> PolyQ:
        value = self.expr()
        if self.pos != len(self.tokens):
            raise ValueError("trailing tokens in polynomial text")
        return value

    def expr(self) -> PolyQ:
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> PolyQ:
        value = self.unary()
        while True:
            tok = self.peek()
            if tok in (("op", "*"), ("op", "/")):
                self.take()
                rhs = self.unary()
                if tok[1] == "*":
                    value = value * rhs
                else:
                    if not rhs.is_constant() or rhs.is_zero():
                        raise ValueError("division only by nonzero constants")
                    value = value.scale(1 / rhs.constant_term())
            elif tok[0] in ("num", "var") or tok == ("op", "("):
                value = value * self.unary()  # implicit multiplication
            else:
                return value

    def unary(self) -> PolyQ:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> PolyQ:
        base = self.atom()
        if self.peek() in (("op", "^"), ("op", "**")):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "num":
                raise ValueError("exponent must be an integer literal")
            return base ** (sign * val)
        return base

    def atom(self) -> PolyQ:
        kind, val = self.take()
        if kind == "num":
            return PolyQ.const(val, self.gens)
        if kind == "var":
            return PolyQ.var(val, self.gens)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return inner
        raise ValueError(f"unexpected token {val!r}")
