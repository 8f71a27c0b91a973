"""Sparse multivariate Laurent polynomials over the rationals.

Terms are stored as a dict from integer exponent tuples to Fraction
coefficients; zero coefficients are never stored.  Negative exponents are
allowed so that group elements with entries like k1^-1 stay symbolic.
"""

from __future__ import annotations

import json
from fractions import Fraction


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise TypeError("polynomial coefficients must be exact rationals")


class MPoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        for exps, c in (terms or {}).items():
            c = _frac(c)
            if len(exps) != nvars:
                raise ValueError("exponent tuple has wrong arity")
            if c:
                clean[tuple(int(e) for e in exps)] = c
        self.terms = clean

    @classmethod
    def const(cls, c, nvars: int) -> "MPoly":
        return cls(nvars, {(0,) * nvars: _frac(c)})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "MPoly":
        exps = [0] * nvars
        exps[i] = 1
        return cls(nvars, {tuple(exps): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other, self.nvars)
        return isinstance(other, MPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise ValueError("mixing polynomials in different variable sets")
            return other
        return MPoly.const(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, Fraction(0)) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MPoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = MPoly.const(1, self.nvars)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __truediv__(self, other):
        """Division by a scalar or by a single-term (monomial) polynomial."""
        if isinstance(other, (int, Fraction)):
            inv = 1 / _frac(other)
            return MPoly(self.nvars, {e: c * inv for e, c in self.terms.items()})
        other = self._coerce(other)
        if len(other.terms) != 1:
            raise ValueError("polynomial division is only supported by monomials")
        (de, dc), = other.terms.items()
        inv = MPoly(self.nvars, {tuple(-x for x in de): 1 / dc})
        return self * inv

    def diff(self, i: int) -> "MPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c * e[i]
        return MPoly(self.nvars, out)

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def evaluate(self, point):
        """Evaluate at numbers (Fraction or complex); exact when inputs are exact."""
        if len(point) != self.nvars:
            raise ValueError("wrong number of values")
        total = None
        for e, c in self.terms.items():
            term = c if isinstance(point[0], (Fraction, int)) else complex(c)
            for x, k in zip(point, e):
                if k:
                    term = term * x**k
            total = term if total is None else total + term
        if total is None:
            return Fraction(0) if (not point or isinstance(point[0], (Fraction, int))) else 0j
        return total

    def compose(self, values) -> "MPoly":
        """Substitute a polynomial for each variable; exponents must be >= 0."""
        if len(values) != self.nvars:
            raise ValueError("wrong number of substitution values")
        nv = values[0].nvars
        total = MPoly(nv, {})
        for e, c in self.terms.items():
            if any(k < 0 for k in e):
                raise ValueError("cannot compose through negative exponents")
            term = MPoly.const(c, nv)
            for v, k in zip(values, e):
                if k:
                    term = term * v**k
            total = total + term
        return total

    def __repr__(self):
        if not self.terms:
            return "MPoly(0)"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join("x%d^%d" % (i, k) for i, k in enumerate(e) if k)
            parts.append(("%s" % c) + ("*" + mono if mono else ""))
        return "MPoly(" + " + ".join(parts) + ")"

    def to_json(self) -> str:
        items = [
            {"exponents": list(e), "coeff": "%d/%d" % (c.numerator, c.denominator)}
            for e, c in sorted(self.terms.items())
        ]
        return json.dumps(items)

    @classmethod
    def from_json(cls, text: str, nvars: int) -> "MPoly":
        data = json.loads(text)
        return cls(nvars, {tuple(d["exponents"]): Fraction(d["coeff"]) for d in data})
