"""Hecke operators on the bigraded ring, via exact q-coefficient formulas.

T_p acts on a weight-m, depth-n expansion by

    b_j = p^(m-n-1) * sum over e | gcd(p, j) of (p/e)^(1-m) * a_{(p/e)(j/e)}

which is the coefficient form of averaging over the upper-triangular coset
representatives [[p/d, b], [0, d]].  Coefficients stay exact rationals
(negative powers of p are allowed).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import NamedTuple

from .errors import InsufficientOrder, InternalConsistencyError, NoSolution
from .forms import DECOMPOSE_SLACK, FormSpaceKey, QMForm, decompose, space_dimension
from .qseries import QSeries


class HeckeContext(NamedTuple):
    """Operator index p together with the form space it acts on."""

    p: int
    key: FormSpaceKey

    def validate(self) -> "HeckeContext":
        if self.p < 1:
            raise ValueError("Hecke index must be a positive integer")
        FormSpaceKey(*self.key).validate()
        return self


def _divisors(n: int):
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def hecke_series(ctx: HeckeContext, s: QSeries, out_order: int | None = None) -> QSeries:
    """Apply T_p to a q-expansion; the output order is floor(s.order / p)."""
    p, (m, n) = HeckeContext(*ctx).validate()
    if out_order is None:
        out_order = s.order // p
    if s.order < p * out_order:
        raise InsufficientOrder(
            "T_%d to order %d needs input order %d, got %d" % (p, out_order, p * out_order, s.order)
        )
    prefactor = Fraction(p) ** (m - n - 1)
    out = []
    for j in range(out_order + 1):
        acc = Fraction(0)
        for e in _divisors(p):
            if j % e == 0:
                acc += Fraction(p // e) ** (1 - m) * s[(p // e) * (j // e)]
        out.append(prefactor * acc)
    return QSeries(out)


def hecke(ctx: HeckeContext, f: QMForm) -> QMForm:
    """Apply T_p to a form, re-decomposed exactly into the same space.

    The operator preserves the space, so a decomposition failure can only
    mean a bug; it is surfaced as InternalConsistencyError.
    """
    p, key = HeckeContext(*ctx).validate()
    key = FormSpaceKey(*key)
    if f.weight != key.m and not f.is_zero():
        raise ValueError("form weight %d does not match context weight %d" % (f.weight, key.m))
    if f.depth > key.n:
        raise ValueError("form depth %d exceeds context bound %d" % (f.depth, key.n))
    out_order = space_dimension(key) + DECOMPOSE_SLACK
    image = hecke_series(ctx, f.expand(p * out_order), out_order)
    try:
        return decompose(key, image)
    except NoSolution as exc:
        raise InternalConsistencyError(
            "T_%d image left M(m=%d, n=%d); the operator must preserve the space" % (p, *key)
        ) from exc


def hecke_commutes_with_derive(ctx: HeckeContext, f: QMForm) -> bool:
    """Exact check that d/dz and T_p commute on f.

    The derivative side acts in the raised space (m + 2, n + 1).
    """
    p, (m, n) = HeckeContext(*ctx).validate()
    raised = HeckeContext(p, FormSpaceKey(m + 2, n + 1))
    return hecke(raised, f.derive()) == hecke(ctx, f).derive()


def composition_exponent(key: FormSpaceKey) -> int:
    """Exponent E in T_p T_q = sum over d | gcd(p,q) of d^E T_{pq/d^2}.

    E = m - 2n - 1.  At depth 0 this is the classical d^(m-1) law; the
    extra d^(-2n) comes from the p^(-n) in the operator normalization
    (each T_N carries N^(m-n-1) rather than N^(m-1)).  Verified exactly on
    arbitrary coefficient sequences; with E = m - n - 1 the law fails
    already for f = G1 at key (2, 1), p = q = 2 (the two sides are 9/4
    and 11/4 times G1).
    """
    m, n = FormSpaceKey(*key).validate()
    return m - 2 * n - 1


def hecke_composition_check(p: int, q: int, key: FormSpaceKey, f: QMForm) -> bool:
    """Exact check of the composition law on a form."""
    key = FormSpaceKey(*key).validate()
    lhs = hecke(HeckeContext(p, key), hecke(HeckeContext(q, key), f))
    rhs = QMForm(key.m, {})
    e = composition_exponent(key)
    for d in _divisors(gcd(p, q)):
        term = hecke(HeckeContext(p * q // (d * d), key), f)
        rhs = rhs + Fraction(d) ** e * term
    return lhs == rhs
