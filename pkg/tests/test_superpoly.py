import random
from fractions import Fraction

import pytest

from superlie.sampling import random_poly
from superlie.scalars import QuadExt
from superlie.superpoly import (AmbientMismatch, GradingType, SuperPoly,
                                lambda_signature, parse_poly)

SIG = lambda_signature(2, 3)
J = 5


def gen(name):
    return SuperPoly.gen(SIG, name, J)


class TestMul:
    def test_nilpotence(self):
        assert (gen("xi1") * gen("xi1")).is_zero()

    def test_supercommutativity_sign(self):
        assert gen("xi2") * gen("xi1") == -(gen("xi1") * gen("xi2"))

    def test_cross_terms_cancel(self):
        x1, xi1 = gen("x1"), gen("xi1")
        assert (x1 + xi1) * (x1 - xi1) == x1 * x1

    def test_ambient_mismatch(self):
        other = SuperPoly.gen(lambda_signature(1, 1), "x1", J)
        with pytest.raises(AmbientMismatch):
            gen("x1") * other

    def test_jet_truncation(self):
        x1 = SuperPoly.gen(SIG, "x1", 2)
        cube = x1 * x1 * x1
        assert cube.is_zero() and cube.jet == 2


class TestPartial:
    def test_left_derivative_first(self):
        assert (gen("xi1") * gen("xi2")).partial("xi1") == gen("xi2")

    def test_left_derivative_transposition(self):
        assert (gen("xi1") * gen("xi2")).partial("xi2") == -gen("xi1")

    def test_even_partial(self):
        f = gen("x1") * gen("x1") * gen("xi3")
        assert f.partial("x1") == (gen("x1") * gen("xi3")).scale(2)

    def test_unknown_generator(self):
        with pytest.raises(Exception):
            gen("x1").partial("zz")


class TestWeightedDegree:
    def test_examples(self):
        t = GradingType((1, 2), (2, 1, 1))
        mono = gen("x1") * gen("x1") * gen("xi1")
        assert mono.weighted_degree(t) == 4
        assert SuperPoly.const(SIG, 1, J).weighted_degree(
            GradingType((1, 1), (1, 1, 1))) == 0
        assert (gen("xi1") * gen("xi2")).weighted_degree(
            GradingType((1, 1), (1, 1, 1))) == 2

    def test_split(self):
        t = GradingType((1, 1), (1, 1, 1))
        f = gen("x1") + gen("xi1") * gen("xi2")
        parts = f.weighted_terms(t)
        assert sorted(parts) == [1, 2]
        assert parts[1] == gen("x1")


class TestSubstitution:
    def test_identity(self):
        f = gen("x1") * gen("xi1") + gen("x2")
        eye2 = [[1, 0], [0, 1]]
        eye3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        assert f.substitute_linear(eye2, eye3) == f

    def test_swap_sign(self):
        f = gen("xi1") * gen("xi2")
        swap = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
        assert f.substitute_linear([[1, 0], [0, 1]], swap) == -f

    def test_scaling(self):
        lam = Fraction(1, 3)
        f = gen("x1") * gen("xi1")
        g = f.substitute_linear([[lam, 0], [0, 1]],
                                [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        assert g == f.scale(lam)

    def test_singular_rejected(self):
        with pytest.raises(ValueError):
            gen("x1").substitute_linear([[1, 1], [1, 1]],
                                        [[1, 0, 0], [0, 1, 0], [0, 0, 1]])

    def test_composition(self):
        rng = random.Random(2)
        eye3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        for _ in range(20):
            def rand_inv2():
                while True:
                    m = [[Fraction(rng.randrange(-2, 3)) for _ in range(2)]
                         for _ in range(2)]
                    if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0:
                        return m
            g1, g2 = rand_inv2(), rand_inv2()
            prod = [[sum(g1[i][k] * g2[k][j] for k in range(2))
                     for j in range(2)] for i in range(2)]
            f = random_poly(rng, SIG, J)
            lhs = f.substitute_linear(g1, eye3).substitute_linear(g2, eye3)
            rhs = f.substitute_linear(prod, eye3)
            assert lhs == rhs


class TestAlgebraLaws:
    def test_supercommutativity_and_associativity(self):
        rng = random.Random(7)
        for _ in range(60):
            pf, pg = rng.randrange(2), rng.randrange(2)
            f = random_poly(rng, SIG, J, pf)
            g = random_poly(rng, SIG, J, pg)
            h = random_poly(rng, SIG, J)
            s = -1 if pf and pg else 1
            assert f * g == (g * f).scale(s)
            assert (f * g) * h == f * (g * h)

    def test_leibniz_all_generators(self):
        rng = random.Random(8)
        names = list(SIG.even) + list(SIG.odd)
        for _ in range(40):
            pf = rng.randrange(2)
            f = random_poly(rng, SIG, J, pf)
            g = random_poly(rng, SIG, J)
            for name in names:
                p_d = 0 if name in SIG.even else 1
                s = -1 if p_d and pf else 1
                lhs = (f * g).partial(name)
                rhs = f.partial(name) * g + (f * g.partial(name)).scale(s)
                assert (lhs - rhs).is_zero(), name

    def test_odd_partials_anticommute(self):
        rng = random.Random(9)
        for _ in range(30):
            f = random_poly(rng, SIG, J)
            for a in SIG.odd:
                for b in SIG.odd:
                    lhs = f.partial(a).partial(b)
                    rhs = f.partial(b).partial(a)
                    assert (lhs + rhs).is_zero()
            for a in SIG.even:
                for b in SIG.odd:
                    assert f.partial(a).partial(b) == f.partial(b).partial(a)


class TestTextRoundTrip:
    def test_examples(self):
        f = (gen("x1") * gen("x1") * gen("xi1")).scale(Fraction(-3, 2)) + \
            gen("xi2") + SuperPoly.const(SIG, Fraction(1, 7), J)
        assert parse_poly(SIG, str(f), J) == f

    def test_extension_coefficients(self):
        c = QuadExt(Fraction(1, 2), Fraction(3), -1)
        f = gen("x2").scale(c) - gen("xi3")
        assert parse_poly(SIG, str(f), J) == f

    def test_random_roundtrip(self):
        rng = random.Random(4)
        for _ in range(60):
            f = random_poly(rng, SIG, J, terms=4)
            assert parse_poly(SIG, str(f), J) == f

    def test_zero(self):
        assert parse_poly(SIG, "0", J).is_zero()
