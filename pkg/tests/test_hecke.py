import random
from fractions import Fraction

import pytest

from qmforms.errors import InsufficientOrder
from qmforms.forms import G1, G2, G3, FormSpaceKey, QMForm, monomial_basis
from qmforms.hecke import (
    HeckeContext,
    composition_exponent,
    hecke,
    hecke_commutes_with_derive,
    hecke_composition_check,
    hecke_series,
)
from qmforms.qseries import sigma

K40 = FormSpaceKey(4, 0)
K21 = FormSpaceKey(2, 1)
K60 = FormSpaceKey(6, 0)


def rand_form(rng, key):
    return QMForm(key.m, {e: Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for e in monomial_basis(key)})


def test_series_eigenvalue_weight4():
    s = G2.expand(30)
    out = hecke_series(HeckeContext(2, K40), s)
    assert out == (9 * s).truncate(out.order)


def test_series_eigenvalue_depth1():
    s = G1.expand(30)
    out = hecke_series(HeckeContext(2, K21), s)
    assert out == (Fraction(3, 2) * s).truncate(out.order)


def test_series_identity_operator():
    s = G2.expand(12)
    assert hecke_series(HeckeContext(1, K40), s) == s


def test_series_insufficient_order():
    with pytest.raises(InsufficientOrder):
        hecke_series(HeckeContext(2, K40), G2.expand(10), out_order=8)


def test_form_examples():
    assert hecke(HeckeContext(2, K40), G2) == 9 * G2
    assert hecke(HeckeContext(3, K21), G1) == Fraction(4, 3) * G1


def test_discriminant_eigenform():
    delta = G2**3 - 27 * G3 * G3
    key = FormSpaceKey(12, 0)
    out = hecke(HeckeContext(2, key), delta)
    s = delta.expand(40)
    hs = hecke_series(HeckeContext(2, key), s)
    ratio = hs[1] / s[1]
    assert out == ratio * delta
    assert ratio == -24


def test_eigenvalue_family():
    for p in (2, 3, 5, 7):
        assert hecke(HeckeContext(p, K21), G1) == Fraction(sigma(1, p), p) * G1
        assert hecke(HeckeContext(p, K40), G2) == sigma(3, p) * G2
        assert hecke(HeckeContext(p, K60), G3) == sigma(5, p) * G3


def test_input_validation():
    with pytest.raises(ValueError):
        hecke(HeckeContext(2, K40), G3)
    with pytest.raises(ValueError):
        hecke(HeckeContext(2, FormSpaceKey(4, 0)), G1 * G1)
    with pytest.raises(ValueError):
        HeckeContext(0, K40).validate()


def test_commutes_with_derive():
    assert hecke_commutes_with_derive(HeckeContext(2, K21), G1)
    assert hecke_commutes_with_derive(HeckeContext(3, K40), G2)
    assert hecke_commutes_with_derive(HeckeContext(2, FormSpaceKey(6, 1)), G1 * G2)


def test_composition_examples():
    assert hecke_composition_check(2, 3, K40, G2)
    assert hecke_composition_check(2, 2, K40, G2)
    assert hecke_composition_check(2, 2, K21, G1)


def test_composition_exponent_is_depth_corrected():
    # the depth-0 shape d^(m-n-1) fails at (m, n) = (2, 1):
    # T2 T2 g1 = 9/4 g1 while T4 g1 + 2^0 T1 g1 = 11/4 g1
    assert composition_exponent(K21) == -1
    assert composition_exponent(K40) == 3
    lhs = hecke(HeckeContext(2, K21), hecke(HeckeContext(2, K21), G1))
    assert lhs == Fraction(9, 4) * G1
    naive = hecke(HeckeContext(4, K21), G1) + hecke(HeckeContext(1, K21), G1)
    assert naive == Fraction(11, 4) * G1
    assert lhs != naive
    assert lhs == hecke(HeckeContext(4, K21), G1) + Fraction(1, 2) * hecke(HeckeContext(1, K21), G1)


def test_composition_random_forms():
    rng = random.Random(23)
    for _ in range(10):
        m = rng.choice([2, 4, 6, 8, 10, 12])
        key = FormSpaceKey(m, rng.randint(0, m // 2))
        f = rand_form(rng, key)
        p, q = rng.choice([2, 3, 4]), rng.choice([2, 3, 4])
        assert hecke_composition_check(p, q, key, f)


def test_closure_random_forms():
    rng = random.Random(29)
    for _ in range(8):
        m = rng.choice([4, 6, 8, 10, 12])
        key = FormSpaceKey(m, rng.randint(0, m // 2))
        hecke(HeckeContext(rng.choice([2, 3, 4, 5]), key), rand_form(rng, key))
