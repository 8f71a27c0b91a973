"""The bigraded ring of quasimodular forms, freely generated by G1, G2, G3.

A form of weight m and depth n is a polynomial in the generators with
deg(G_i) = 2i and G1-degree at most n.  The q-expansion substitutes the
normalized Eisenstein series (with constant multipliers 1, 12, 8) for the
generators; numerical values reattach the factor u^(m/2), u = 2*pi*i/12.
"""

from __future__ import annotations

import cmath
import os
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import NamedTuple

from .errors import InsufficientOrder, NoSolution, NotConvergent
from .qseries import QSeries, eisenstein

# u^(m/2) with u = 2*pi*i/12 turns the integer-coefficient expansions into
# the analytically normalized values; m is even so no branch choice arises.
U_FACTOR = 2j * cmath.pi / 12

# Constant multipliers attached to the generator expansions E_1, E_2, E_3.
GEN_SCALE = {1: 1, 2: 12, 3: 8}

# Tail guard for truncated evaluation: refuse when |q|^order exceeds this.
QTAIL_GUARD = 1e-16


def default_order() -> int:
    """Series order used by numeric evaluation; QMFORMS_SERIES_ORDER overrides."""
    return int(os.environ.get("QMFORMS_SERIES_ORDER", "400"))


class FormSpaceKey(NamedTuple):
    """Weight m and depth bound n selecting the space of forms."""

    m: int
    n: int

    def validate(self) -> "FormSpaceKey":
        if self.m % 2 != 0 or self.m < 0 or self.n < 0 or 2 * self.n > self.m:
            raise ValueError("invalid form space: need even m >= 0 and 0 <= 2n <= m")
        return self


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise TypeError("form coefficients must be exact rationals")


class QMForm:
    """An exact polynomial in G1, G2, G3, homogeneous of even weight.

    terms maps exponent triples (a, b, c) to rational coefficients, with
    2a + 4b + 6c equal to the weight for every stored term.
    """

    __slots__ = ("weight", "terms")

    def __init__(self, weight: int, terms=None):
        if weight % 2 != 0 or weight < 0:
            raise ValueError("weight must be a nonnegative even integer")
        clean = {}
        for (a, b, c), coeff in (terms or {}).items():
            coeff = _frac(coeff)
            if not coeff:
                continue
            if a < 0 or b < 0 or c < 0 or 2 * a + 4 * b + 6 * c != weight:
                raise ValueError(
                    "monomial (%d,%d,%d) is not homogeneous of weight %d" % (a, b, c, weight)
                )
            clean[(a, b, c)] = coeff
        self.weight = weight
        self.terms = clean

    @property
    def depth(self) -> int:
        """G1-degree: the intrinsic depth of the form (0 for the zero form)."""
        return max((a for (a, _, _) in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, QMForm):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.weight == other.weight and self.terms == other.terms

    def __hash__(self):
        return hash((self.weight, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "QMForm(%d, 0)" % self.weight
        parts = []
        for (a, b, c), coeff in sorted(self.terms.items()):
            mono = "".join(
                "%s^%d" % (g, e) if e > 1 else g
                for g, e in (("g1", a), ("g2", b), ("g3", c))
                if e
            )
            parts.append("%s%s" % (coeff, "*" + mono if mono else ""))
        return "QMForm(%d, %s)" % (self.weight, " + ".join(parts))

    def __add__(self, other):
        if not isinstance(other, QMForm):
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.weight != other.weight:
            raise ValueError("cannot add forms of different weights")
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, Fraction(0)) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return QMForm(self.weight, terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return QMForm(self.weight, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _frac(other)
            return QMForm(self.weight, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, QMForm):
            return NotImplemented
        out: dict = {}
        for (a1, b1, c1), x in self.terms.items():
            for (a2, b2, c2), y in other.terms.items():
                e = (a1 + a2, b1 + b2, c1 + c2)
                s = out.get(e, Fraction(0)) + x * y
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return QMForm(self.weight + other.weight, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("form powers must be nonnegative integers")
        result = QMForm(0, {(0, 0, 0): 1})
        for _ in range(e):
            result = result * self
        return result

    def expand(self, order: int) -> QSeries:
        """The exact q-expansion, truncated at the given order."""
        if order < 0:
            raise ValueError("order must be nonnegative")
        total = QSeries([Fraction(0)] * (order + 1))
        for e, coeff in self.terms.items():
            total = total + coeff * _monomial_series(e, order)
        return total

    def derive(self) -> "QMForm":
        """The Ramanujan derivation: the image of d/dz, raising weight by 2.

        Generator images: G1 -> G1^2 - G2/12, G2 -> 4 G1 G2 - 6 G3,
        G3 -> 6 G1 G3 - G2^2 / 3, extended by the Leibniz rule.
        """
        total = QMForm(self.weight + 2, {})
        for (a, b, c), coeff in self.terms.items():
            if a:
                m = QMForm(self.weight - 2, {(a - 1, b, c): coeff * a})
                total = total + m * _D_G1
            if b:
                m = QMForm(self.weight - 4, {(a, b - 1, c): coeff * b})
                total = total + m * _D_G2
            if c:
                m = QMForm(self.weight - 6, {(a, b, c - 1): coeff * c})
                total = total + m * _D_G3
        return total

    def associated(self, n: int, i: int) -> "QMForm":
        """The i-th coefficient form in the depth-n transformation law.

        Equals (1/i!) (d/dG1)^i f divided by binom(n, i); the normalization
        depends on the depth bound n the form is regarded at.
        """
        if i < 0 or i > n:
            raise IndexError("associated index out of range: need 0 <= i <= n")
        if self.depth > n:
            raise ValueError("form has depth %d > bound %d" % (self.depth, n))
        out: dict = {}
        for (a, b, c), coeff in self.terms.items():
            if a < i:
                continue
            out[(a - i, b, c)] = out.get((a - i, b, c), Fraction(0)) + coeff * comb(a, i)
        scale = Fraction(1, comb(n, i))
        return QMForm(self.weight - 2 * i, {e: c * scale for e, c in out.items()})

    def value_at(self, z: complex, order: int | None = None) -> complex:
        """Numerical value at a point z in the upper half plane.

        Evaluates the truncated q-expansion at q = exp(2*pi*i*z) and
        reattaches the weight factor u^(m/2).
        """
        if order is None:
            order = default_order()
        if z.imag <= 0:
            raise ValueError("z must lie in the upper half plane")
        q = cmath.exp(2j * cmath.pi * z)
        if abs(q) ** order >= QTAIL_GUARD:
            raise NotConvergent(
                "Im(z)=%g too small for order %d at tail guard %g" % (z.imag, order, QTAIL_GUARD)
            )
        return U_FACTOR ** (self.weight // 2) * self.expand(order).evaluate(q)

    def to_json(self) -> str:
        import json

        items = [
            {"a": a, "b": b, "c": c, "coeff": "%d/%d" % (x.numerator, x.denominator)}
            for (a, b, c), x in sorted(self.terms.items())
        ]
        return json.dumps({"weight": self.weight, "terms": items})

    @classmethod
    def from_json(cls, text: str) -> "QMForm":
        import json

        data = json.loads(text)
        return cls(
            data["weight"],
            {(d["a"], d["b"], d["c"]): Fraction(d["coeff"]) for d in data["terms"]},
        )


G1 = QMForm(2, {(1, 0, 0): 1})
G2 = QMForm(4, {(0, 1, 0): 1})
G3 = QMForm(6, {(0, 0, 1): 1})
ONE = QMForm(0, {(0, 0, 0): 1})

_D_G1 = QMForm(4, {(2, 0, 0): 1, (0, 1, 0): Fraction(-1, 12)})
_D_G2 = QMForm(6, {(1, 1, 0): 4, (0, 0, 1): -6})
_D_G3 = QMForm(8, {(1, 0, 1): 6, (0, 2, 0): Fraction(-1, 3)})


@lru_cache(maxsize=None)
def _scaled_gen(k: int, order: int) -> QSeries:
    return GEN_SCALE[k] * eisenstein(k, order)


@lru_cache(maxsize=None)
def _monomial_series(exps, order: int) -> QSeries:
    a, b, c = exps
    total = QSeries([Fraction(1)] + [Fraction(0)] * order)
    if a:
        total = total * _scaled_gen(1, order) ** a
    if b:
        total = total * _scaled_gen(2, order) ** b
    if c:
        total = total * _scaled_gen(3, order) ** c
    return total


def monomial_basis(key: FormSpaceKey):
    """Exponent triples spanning the space, ordered by G1-degree then G3-degree."""
    m, n = FormSpaceKey(*key).validate()
    basis = []
    for a in range(min(n, m // 2) + 1):
        rest = m - 2 * a
        for c in range(rest // 6 + 1):
            if (rest - 6 * c) % 4 == 0:
                basis.append((a, (rest - 6 * c) // 4, c))
    return basis


def space_dimension(key: FormSpaceKey) -> int:
    return len(monomial_basis(key))


# Decomposition demands this many coefficients beyond the space dimension,
# so accidental agreement cannot masquerade as membership.
DECOMPOSE_SLACK = 5


def decompose(key: FormSpaceKey, s: QSeries) -> QMForm:
    """The unique form in the keyed space with the given q-expansion.

    Solves an exact rational linear system over the monomial basis and
    verifies the solution against every supplied coefficient; any mismatch
    raises NoSolution.
    """
    key = FormSpaceKey(*key).validate()
    basis = monomial_basis(key)
    dim = len(basis)
    if s.order < dim + DECOMPOSE_SLACK:
        raise InsufficientOrder(
            "need series order >= %d for this space, got %d" % (dim + DECOMPOSE_SLACK, s.order)
        )
    cols = [_monomial_series(e, s.order) for e in basis]
    rows = [[col[k] for col in cols] for k in range(s.order + 1)]
    rhs = [s[k] for k in range(s.order + 1)]
    sol = _solve_exact(rows, rhs)
    if sol is None:
        raise NoSolution("series does not lie in M(m=%d, n=%d)" % key)
    return QMForm(key.m, {e: c for e, c in zip(basis, sol)})


def _solve_exact(rows, rhs):
    """Solve an overdetermined exact system; None if inconsistent.

    The coefficient matrix is assumed to have full column rank (which is the
    freeness of the generators and is checked by expand_rank elsewhere).
    """
    m, n = len(rows), len(rows[0]) if rows else 0
    a = [list(r) + [v] for r, v in zip(rows, rhs)]
    piv_rows = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if a[i][col]), None)
        if piv is None:
            return None  # rank deficiency: freeness violated upstream
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_rows.append((r, col))
        r += 1
    for i in range(r, m):
        if a[i][n]:
            return None  # inconsistent: series not in the space
    sol = [Fraction(0)] * n
    for row, col in piv_rows:
        sol[col] = a[row][n]
    return sol


def expand_rank(key: FormSpaceKey, extra: int = DECOMPOSE_SLACK) -> int:
    """Exact column rank of the expansion map on the monomial basis."""
    basis = monomial_basis(key)
    if not basis:
        return 0
    order = len(basis) + extra
    cols = [_monomial_series(e, order) for e in basis]
    rows = [[col[k] for col in cols] for k in range(order + 1)]
    rank = 0
    m, n = len(rows), len(basis)
    for col in range(n):
        piv = next((i for i in range(rank, m) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for i in range(m):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def assoc_derivative_check(f: QMForm, n: int) -> bool:
    """Exact identity between the associated functions of f and of its derivative.

    With f_i the depth-n associated functions of f (weight m) and g_i the
    depth-(n+1) associated functions of f', checks
    g_i = [i (m - i + 1) / (n + 1)] f_{i-1} + [(n + 1 - i) / (n + 1)] f_i'
    for 0 <= i <= n + 1, as polynomial identities.
    """
    if f.depth > n:
        raise ValueError("form has depth %d > bound %d" % (f.depth, n))
    m = f.weight
    df = f.derive()
    for i in range(n + 2):
        lhs = df.associated(n + 1, i)
        rhs = QMForm(m + 2 - 2 * i, {})
        if 1 <= i <= n + 1:
            rhs = rhs + Fraction(i * (m - i + 1), n + 1) * f.associated(n, i - 1)
        if i <= n:
            rhs = rhs + Fraction(n + 1 - i, n + 1) * f.associated(n, i).derive()
        if lhs != rhs:
            return False
    return True


def slash_transform_check(f: QMForm, n: int, A, z: complex, order: int | None = None) -> float:
    """Residual of the weight-m slash transformation law at a sample point.

    A is an integer matrix ((a, b), (c, d)) of determinant 1.  Returns
    |j^{-m} f(Az) - sum_i binom(n, i) c^i j^{-i} f_i(z)| with j = cz + d.
    """
    (a, b), (c, d) = A
    if a * d - b * c != 1:
        raise ValueError("A must have determinant 1")
    jay = c * z + d
    az = (a * z + b) / jay
    lhs = jay ** (-f.weight) * f.value_at(az, order)
    rhs = 0j
    for i in range(n + 1):
        fi = f.associated(n, i)
        rhs += comb(n, i) * (c / jay) ** i * fi.value_at(z, order)
    return abs(lhs - rhs)
