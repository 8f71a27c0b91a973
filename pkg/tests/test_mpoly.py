from fractions import Fraction

import pytest

from qmforms.mpoly import MPoly


def xvars(n):
    return [MPoly.variable(i, n) for i in range(n)]


def test_basic_arithmetic():
    x, y = xvars(2)
    p = (x + y) ** 2
    assert p == x**2 + 2 * x * y + y**2
    assert p - p == MPoly(2, {})
    assert (p * 0).is_zero()


def test_zero_terms_dropped():
    x, y = xvars(2)
    p = x - x + y
    assert list(p.terms) == [(0, 1)]


def test_laurent_exponents():
    x, y = xvars(2)
    inv = MPoly(2, {(-1, 0): 1})
    assert x * inv == MPoly.const(1, 2)
    assert (y / x) * x == y


def test_division_by_monomial_only():
    x, y = xvars(2)
    assert (x**2 * y / x) == x * y
    with pytest.raises(ValueError):
        _ = x / (x + y)


def test_diff():
    x, y = xvars(2)
    p = 3 * x**2 * y + y
    assert p.diff(0) == 6 * x * y
    assert p.diff(1) == 3 * x**2 + MPoly.const(1, 2)


def test_evaluate_exact_and_complex():
    x, y = xvars(2)
    p = x**2 + Fraction(1, 2) * y
    assert p.evaluate((Fraction(2), Fraction(4))) == Fraction(6)
    assert abs(p.evaluate((1j, 2.0)) - (1j * 1j + 1.0)) < 1e-15


def test_compose():
    x, y = xvars(2)
    p = x * y + y**2
    q = p.compose([y, x])  # swap variables
    assert q == x * y + x**2


def test_compose_rejects_negative_exponents():
    p = MPoly(1, {(-1,): 1})
    with pytest.raises(ValueError):
        p.compose([MPoly.variable(0, 1)])


def test_total_degree():
    x, y = xvars(2)
    assert (x**3 * y + y).total_degree() == 4
    assert MPoly(2, {}).total_degree() == 0


def test_json_round_trip():
    x, y = xvars(2)
    p = Fraction(3, 4) * x**2 - y
    assert MPoly.from_json(p.to_json(), 2) == p
