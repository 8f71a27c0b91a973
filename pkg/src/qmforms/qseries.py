"""Exact truncated power series in q over the rationals.

Coefficients are `fractions.Fraction` throughout, so every identity in this
module is exact.  The named series (Eisenstein, eta^24, j) use the
u-normalized convention: each generator series starts with constant term 1
and has integer coefficients; transcendental prefactors are reattached only
at numerical evaluation time.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import NonUnitSeries


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise TypeError("series coefficients must be exact rationals, got %r" % (c,))


class QSeries:
    """A truncated q-expansion sum_{k=0}^{N} a_k q^k with exact rational a_k.

    Binary operations truncate to the smaller of the two orders; nothing is
    silently padded.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = tuple(_frac(c) for c in coeffs)
        if not coeffs:
            raise ValueError("a series needs at least the q^0 coefficient")
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, QSeries) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        if self.order > 5:
            shown += ", ..."
        return "QSeries([%s], order=%d)" % (shown, self.order)

    def truncate(self, n: int) -> "QSeries":
        if n >= self.order:
            return self
        return QSeries(self.coeffs[: n + 1])

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return QSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)])

    def __sub__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return QSeries([self.coeffs[k] - other.coeffs[k] for k in range(n + 1)])

    def __neg__(self):
        return QSeries([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries([c * other for c in self.coeffs])
        if not isinstance(other, QSeries):
            return NotImplemented
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (n + 1)
        for i in range(min(len(a), n + 1)):
            ai = a[i]
            if not ai:
                continue
            for j in range(min(len(b), n + 1 - i)):
                if b[j]:
                    out[i + j] += ai * b[j]
        return QSeries(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("series powers must be nonnegative integers")
        result = QSeries([Fraction(1)] + [Fraction(0)] * self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def invert(self) -> "QSeries":
        """Multiplicative inverse; requires a unit constant term."""
        a = self.coeffs
        if a[0] == 0:
            raise NonUnitSeries("cannot invert a series with zero constant term")
        n = self.order
        b = [Fraction(0)] * (n + 1)
        b[0] = 1 / a[0]
        for k in range(1, n + 1):
            acc = Fraction(0)
            for i in range(1, min(k, len(a) - 1) + 1):
                if a[i]:
                    acc += a[i] * b[k - i]
            b[k] = -acc / a[0]
        return QSeries(b)

    def theta(self) -> "QSeries":
        """The operator q d/dq: coefficient k becomes k*a_k."""
        return QSeries([k * c for k, c in enumerate(self.coeffs)])

    def evaluate(self, q: complex) -> complex:
        """Horner evaluation of the truncated series at a complex q."""
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * q + (c.numerator / c.denominator)
        return acc

    def to_json(self) -> str:
        return json.dumps(["%d/%d" % (c.numerator, c.denominator) for c in self.coeffs])

    @classmethod
    def from_json(cls, text: str) -> "QSeries":
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError("expected a JSON array of rational strings")
        return cls([Fraction(str(s)) for s in data])


def sigma(i: int, n: int) -> int:
    """Divisor power sum: sum of d**i over the divisors d of n."""
    if i < 1 or n < 1:
        raise ValueError("sigma requires i >= 1 and n >= 1")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**i
            e = n // d
            if e != d:
                total += e**i
        d += 1
    return total


@lru_cache(maxsize=None)
def _bernoulli_classical(n: int) -> Fraction:
    # B_0 = 1, B_1 = -1/2 convention; recurrence sum_{j<=m} C(m+1,j) B_j = 0.
    if n == 0:
        return Fraction(1)
    acc = Fraction(0)
    for j in range(n):
        acc += comb(n + 1, j) * _bernoulli_classical(j)
    return -acc / (n + 1)


def bernoulli(k: int) -> Fraction:
    """The k-th entry of the positive Bernoulli sequence 1/6, 1/30, 1/42, ...

    This is |B_{2k}| in the classical indexing, which is the convention the
    Eisenstein coefficient formulas below use.
    """
    if k < 1:
        raise ValueError("bernoulli requires k >= 1")
    return abs(_bernoulli_classical(2 * k))


@lru_cache(maxsize=None)
def eisenstein(k: int, n: int) -> QSeries:
    """Normalized Eisenstein series of weight 2k, truncated at order n.

    E_k(q) = 1 + (-1)^k (4k / B_k) sum_{m>=1} sigma_{2k-1}(m) q^m, so the
    leading coefficients are -24, 240, -504 for k = 1, 2, 3.
    """
    if k not in (1, 2, 3):
        raise ValueError("eisenstein is defined for k in {1, 2, 3}")
    if n < 0:
        raise ValueError("order must be nonnegative")
    factor = (-1) ** k * Fraction(4 * k) / bernoulli(k)
    coeffs = [Fraction(1)]
    coeffs += [factor * sigma(2 * k - 1, m) for m in range(1, n + 1)]
    return QSeries(coeffs)


@lru_cache(maxsize=None)
def _euler_product(n: int) -> QSeries:
    # prod_{m>=1} (1 - q^m) to order n, via the pentagonal number theorem.
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[0] = Fraction(1)
    m = 1
    while True:
        p1 = m * (3 * m - 1) // 2
        p2 = m * (3 * m + 1) // 2
        if p1 > n and p2 > n:
            break
        s = Fraction((-1) ** m)
        if p1 <= n:
            coeffs[p1] += s
        if p2 <= n:
            coeffs[p2] += s
        m += 1
    return QSeries(coeffs)


@lru_cache(maxsize=None)
def eta24(n: int) -> QSeries:
    """The cusp expansion q * prod_{m>=1} (1 - q^m)^24, truncated at order n."""
    if n < 1:
        raise ValueError("eta24 needs order >= 1")
    body = _euler_product(n - 1) ** 24
    return QSeries((Fraction(0),) + body.coeffs)


def j_classical(n: int):
    """The j-expansion q^{-1} + 744 + 196884 q + ... as a pair.

    Returns (pole, series): the coefficient of q^{-1} and the regular part
    up to order n.  Computed as E_2^3 / eta24 with the q^{-1} shift exposed.
    """
    if n < 0:
        raise ValueError("order must be nonnegative")
    m = n + 1
    num = eisenstein(2, m) ** 3
    shifted = QSeries(eta24(m + 1).coeffs[1:])  # starts 1 - 24q + ...
    full = num * shifted.invert()
    return full.coeffs[0], QSeries(full.coeffs[1:])
