import cmath
import math
import random
from fractions import Fraction
from math import comb

import pytest

from qmforms.errors import InsufficientOrder, NoSolution, NotConvergent
from qmforms.forms import (
    G1,
    G2,
    G3,
    ONE,
    FormSpaceKey,
    QMForm,
    assoc_derivative_check,
    decompose,
    expand_rank,
    monomial_basis,
    slash_transform_check,
    space_dimension,
)
from qmforms.qseries import QSeries, eisenstein, eta24


def rand_form(rng, key):
    return QMForm(key.m, {e: Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for e in monomial_basis(key)})


class TestMonomialBasis:
    def test_examples(self):
        assert monomial_basis(FormSpaceKey(4, 0)) == [(0, 1, 0)]
        assert monomial_basis(FormSpaceKey(4, 1)) == [(0, 1, 0)]
        assert monomial_basis(FormSpaceKey(4, 2)) == [(0, 1, 0), (2, 0, 0)]
        assert monomial_basis(FormSpaceKey(12, 0)) == [(0, 3, 0), (0, 0, 2)]

    def test_weight_2_depth_1_is_one_dimensional(self):
        assert monomial_basis(FormSpaceKey(2, 1)) == [(1, 0, 0)]

    def test_invalid_keys_rejected(self):
        with pytest.raises(ValueError):
            monomial_basis(FormSpaceKey(3, 0))
        with pytest.raises(ValueError):
            monomial_basis(FormSpaceKey(4, 3))


class TestQMForm:
    def test_construction_validates_homogeneity(self):
        with pytest.raises(ValueError):
            QMForm(4, {(1, 0, 0): 1})
        with pytest.raises(ValueError):
            QMForm(3, {})

    def test_depth_and_weight(self):
        f = G1 * G1 * G2
        assert f.weight == 8
        assert f.depth == 2
        assert QMForm(6, {}).depth == 0

    def test_product_grading(self):
        rng = random.Random(2)
        for _ in range(10):
            k1 = FormSpaceKey(rng.choice([2, 4, 6]), 0)
            k1 = FormSpaceKey(k1.m, rng.randint(0, k1.m // 2))
            k2 = FormSpaceKey(rng.choice([2, 4, 6, 8]), 0)
            k2 = FormSpaceKey(k2.m, rng.randint(0, k2.m // 2))
            f, g = rand_form(rng, k1), rand_form(rng, k2)
            if f.is_zero() or g.is_zero():
                continue
            assert (f * g).weight == f.weight + g.weight
            assert (f * g).depth <= f.depth + g.depth

    def test_json_round_trip(self):
        f = Fraction(3, 4) * G1 * G1 * G2 - 2 * G2 * G2
        assert QMForm.from_json(f.to_json()) == f


class TestExpand:
    def test_examples(self):
        assert G2.expand(2).coeffs == (12, 2880, 25920)
        assert (G1 * G1).expand(1).coeffs == (1, -48)
        assert QMForm(10, {}).expand(5).coeffs == (0,) * 6

    def test_matches_eisenstein_series(self):
        assert G1.expand(30) == eisenstein(1, 30)
        assert G2.expand(30) == 12 * eisenstein(2, 30)
        assert G3.expand(30) == 8 * eisenstein(3, 30)


class TestDecompose:
    def test_round_trip_examples(self):
        s = (G1 * G1).expand(8)
        assert decompose(FormSpaceKey(4, 2), s) == G1 * G1

    def test_derivative_of_g1(self):
        # the derivative of a depth-1 form has depth 2
        s = 12 * G1.expand(12).theta()
        assert decompose(FormSpaceKey(4, 2), s) == G1 * G1 - Fraction(1, 12) * G2

    def test_no_weight_two_modular_form(self):
        with pytest.raises(NoSolution):
            decompose(FormSpaceKey(2, 0), eisenstein(1, 10))

    def test_insufficient_depth_is_no_solution(self):
        s = 12 * G1.expand(12).theta()
        with pytest.raises(NoSolution):
            decompose(FormSpaceKey(4, 1), s)

    def test_insufficient_order(self):
        with pytest.raises(InsufficientOrder):
            decompose(FormSpaceKey(4, 2), G2.expand(4))

    def test_corrupted_series_rejected(self):
        s = G2.expand(10)
        bad = QSeries(s.coeffs[:-1] + (s.coeffs[-1] + 1,))
        with pytest.raises(NoSolution):
            decompose(FormSpaceKey(4, 2), bad)

    def test_random_round_trips(self):
        rng = random.Random(31)
        for _ in range(20):
            m = rng.choice(range(2, 17, 2))
            key = FormSpaceKey(m, rng.randint(0, m // 2))
            f = rand_form(rng, key)
            assert decompose(key, f.expand(space_dimension(key) + 5)) == f


class TestFreeness:
    def test_full_rank_small_keys(self):
        for m in range(0, 13, 2):
            for n in range(0, m // 2 + 1):
                key = FormSpaceKey(m, n)
                assert expand_rank(key) == space_dimension(key)


class TestDerive:
    def test_generator_images(self):
        assert G1.derive() == G1 * G1 - Fraction(1, 12) * G2
        assert G2.derive() == 4 * G1 * G2 - 6 * G3
        assert G3.derive() == 6 * G1 * G3 - Fraction(1, 3) * G2 * G2
        assert ONE.derive().is_zero()

    def test_series_shadow(self):
        for g in (G1, G2, G3, G1 * G2, G2 * G3):
            assert g.derive().expand(40) == 12 * g.expand(40).theta()

    def test_grading(self):
        rng = random.Random(5)
        for _ in range(10):
            m = rng.choice([2, 4, 6, 8])
            key = FormSpaceKey(m, rng.randint(0, m // 2))
            f = rand_form(rng, key)
            df = f.derive()
            if df.is_zero():
                continue
            assert df.weight == m + 2
            assert df.depth <= f.depth + 1

    def test_leibniz(self):
        f, g = G1 * G2, G3
        assert (f * g).derive() == f.derive() * g + f * g.derive()


class TestAssociated:
    def test_examples(self):
        assert G1.associated(1, 1) == ONE
        assert G2.associated(0, 0) == G2
        assert (G1 * G1).associated(2, 1) == G1

    def test_index_errors(self):
        with pytest.raises(IndexError):
            G1.associated(1, 2)
        with pytest.raises(ValueError):
            (G1 * G1).associated(1, 0)

    def test_derivative_structure(self):
        assert assoc_derivative_check(G1, 1)
        assert assoc_derivative_check(G2, 0)
        assert assoc_derivative_check(G1 * G2, 1)
        assert assoc_derivative_check(G1 * G1 * G3, 3)

    def test_product_rule_for_associated_functions(self):
        rng = random.Random(17)
        for _ in range(6):
            mk = rng.choice([2, 4, 6])
            nk = rng.randint(0, mk // 2)
            ml = rng.choice([2, 4, 6])
            nl = rng.randint(0, ml // 2)
            f = rand_form(rng, FormSpaceKey(mk, nk))
            g = rand_form(rng, FormSpaceKey(ml, nl))
            for r in range(nk + nl + 1):
                lhs = (f * g).associated(nk + nl, r)
                rhs = QMForm(mk + ml - 2 * r, {})
                for s in range(r + 1):
                    if s > nk or r - s > nl:
                        continue
                    coeff = Fraction(comb(nk, s) * comb(nl, r - s), comb(nk + nl, r))
                    rhs = rhs + coeff * (f.associated(nk, s) * g.associated(nl, r - s))
                assert lhs == rhs


class TestValueAt:
    def test_constant(self):
        assert abs(ONE.value_at(0.3 + 2j, 50) - 1) < 1e-15

    def test_weight4_closed_form(self):
        # E4(i) = 3 Gamma(1/4)^8 / (2 pi)^6
        oracle = 12 * (2j * math.pi / 12) ** 2 * 3 * math.gamma(0.25) ** 8 / (2 * math.pi) ** 6
        assert abs(G2.value_at(1j, 300) / oracle - 1) < 1e-12

    def test_discriminant_constant(self):
        z = 1.1j
        lhs = 27 * G3.value_at(z) ** 2 - G2.value_at(z) ** 3
        q = cmath.exp(2j * cmath.pi * z)
        rhs = -((2j * cmath.pi) ** 6) * eta24(400).evaluate(q)
        assert abs(lhs - rhs) < 1e-9

    def test_not_convergent(self):
        with pytest.raises(NotConvergent):
            G2.value_at(0.001j, 400)

    def test_rejects_lower_half_plane(self):
        with pytest.raises(ValueError):
            G2.value_at(-1j)


class TestSlashTransform:
    def test_modular_weight4(self):
        res = slash_transform_check(G2, 0, ((0, -1), (1, 0)), 2j)
        assert res < 1e-9

    def test_translation_invariance(self):
        res = slash_transform_check(G1, 1, ((1, 1), (0, 1)), 1j)
        assert res < 1e-12

    def test_depth_two(self):
        res = slash_transform_check(G1 * G1, 2, ((2, 1), (1, 1)), 0.3 + 1.2j)
        assert res < 1e-8

    def test_rejects_non_unimodular(self):
        with pytest.raises(ValueError):
            slash_transform_check(G2, 0, ((2, 0), (0, 1)), 1j)
