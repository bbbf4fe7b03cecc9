import random
from fractions import Fraction

import pytest

from superlie.fields import VectorField
from superlie.forms import (FormSpace, contact_form, odd_contact_form,
                            odd_symplectic_form, symplectic_form)
from superlie.sampling import random_field
from superlie.superpoly import (GradingType, SuperPoly, lambda_signature)

BASE = lambda_signature(2, 2)
FS = FormSpace(BASE)
J = 6


def gen(name):
    return SuperPoly.gen(BASE, name, J)


def rand_form(rng, terms=4):
    sig = FS.sig
    out = {}
    for _ in range(terms):
        exps = tuple(rng.randrange(0, 2) for _ in range(sig.n_even))
        mask = rng.randrange(0, 1 << sig.n_odd)
        out[(exps, mask)] = Fraction(rng.randrange(-2, 3))
    return SuperPoly(sig, J, out)


class TestLieDerivative:
    def test_constant_field_kills_symbol(self):
        x = VectorField.d_dgen(BASE, "x1", J)
        assert FS.lie_derivative(x, FS.d_even(0)).is_zero()

    def test_d_of_image(self):
        x = VectorField.zero(BASE, J).replace(0, gen("x2"))  # x2 d/dx1
        assert FS.lie_derivative(x, FS.d_even(0)) == FS.d_even(1)

    def test_symplectic_generator(self):
        # X = p1 d/dq1 kills dp1 dq1 (k=1, n=0)
        fs, omega = symplectic_form(1, 0, [], J)
        base = fs.base
        x = VectorField.zero(base, J).replace(1, SuperPoly.gen(base, "x1", J))
        assert fs.lie_derivative(x, omega).is_zero()

    def test_bracket_compatibility(self):
        rng = random.Random(41)
        for _ in range(50):
            px, py = rng.randrange(2), rng.randrange(2)
            x = random_field(rng, BASE, J, px)
            y = random_field(rng, BASE, J, py)
            w = rand_form(rng)
            s = -1 if px and py else 1
            lhs = FS.lie_derivative(x.bracket(y), w)
            rhs = FS.lie_derivative(x, FS.lie_derivative(y, w)) - \
                FS.lie_derivative(y, FS.lie_derivative(x, w)).scale(s)
            assert (lhs - rhs).is_zero()

    def test_cartan_formula(self):
        rng = random.Random(43)
        for _ in range(40):
            p = rng.randrange(2)
            x = random_field(rng, BASE, J, p)
            w = rand_form(rng)
            s = -1 if p else 1
            lhs = FS.interior(x, FS.exterior_d(w)) + \
                FS.exterior_d(FS.interior(x, w)).scale(s)
            assert (lhs - FS.lie_derivative(x, w)).is_zero()

    def test_d_squared_zero(self):
        rng = random.Random(47)
        for _ in range(30):
            w = rand_form(rng)
            assert FS.exterior_d(FS.exterior_d(w)).is_zero()


class TestPullback:
    def test_identity(self):
        rng = random.Random(51)
        eye2 = [[1, 0], [0, 1]]
        for _ in range(10):
            w = rand_form(rng)
            assert FS.pullback(eye2, eye2, w) == w

    def test_odd_swap_conjugates_gram(self):
        # swapping xi1 <-> xi2 on sum c_ij dxi_i dxi_j conjugates c by the
        # permutation; with c = I the form is invariant
        fs, omega = symplectic_form(0, 2, [[1, 0], [0, 1]], J)
        swap = [[0, 1], [1, 0]]
        assert fs.pullback([], swap, omega) == omega
        fs2, omega2 = symplectic_form(0, 2, [[1, 0], [0, 2]], J)
        _, expect = symplectic_form(0, 2, [[2, 0], [0, 1]], J)
        assert fs2.pullback([], swap, omega2) == expect

    def test_morphism_property(self):
        rng = random.Random(53)
        g_even = [[1, 1], [0, 1]]
        g_odd = [[1, 0], [2, 1]]
        for _ in range(25):
            w1, w2 = rand_form(rng, 3), rand_form(rng, 3)
            lhs = FS.pullback(g_even, g_odd, w1 * w2)
            rhs = FS.pullback(g_even, g_odd, w1) * FS.pullback(g_even, g_odd, w2)
            assert (lhs - rhs).is_zero()

    def test_singular_rejected(self):
        with pytest.raises(ValueError):
            FS.pullback([[1, 1], [1, 1]], [[1, 0], [0, 1]], rand_form(random.Random(1)))

    def test_scaling_identity_symplectic(self):
        # substituting p -> lam * p in the form of the lam-scaled Gram matrix
        # gives exactly lam times the unscaled form
        for lam in (Fraction(2), Fraction(-3), Fraction(1, 5)):
            for k in (1, 2):
                for n in (1, 2):
                    gram = [[1 if i == j else 0 for j in range(n)]
                            for i in range(n)]
                    lgram = [[lam * x for x in row] for row in gram]
                    fs, sig_l = symplectic_form(k, n, lgram, J)
                    _, sig_1 = symplectic_form(k, n, gram, J)
                    ge = [[lam if (i == j and i < k) else (1 if i == j else 0)
                           for j in range(2 * k)] for i in range(2 * k)]
                    go = [[1 if i == j else 0 for j in range(n)]
                          for i in range(n)]
                    assert fs.pullback(ge, go, sig_l) == sig_1.scale(lam)
                    # equivalent statement with the inverse substitution
                    gei = [[1 / lam if (i == j and i < k) else (1 if i == j else 0)
                            for j in range(2 * k)] for i in range(2 * k)]
                    assert fs.pullback(gei, go, sig_1) == sig_l.scale(1 / lam)


class TestBuilders:
    def test_homogeneity_under_principal(self):
        fs, omega = symplectic_form(1, 2, [[1, 0], [0, 1]], J)
        t = fs.grading(GradingType((1, 1), (1, 1)))
        assert omega.weighted_degree(t) == 2
        fs, omega = contact_form(1, 2, [[1, 0], [0, 1]], J)
        t = fs.grading(GradingType((2, 1, 1), (1, 1)))
        assert omega.weighted_degree(t) == 2
        fs, omega = odd_symplectic_form(3, J)
        t = fs.grading(GradingType((1, 1, 1), (1, 1, 1)))
        assert omega.weighted_degree(t) == 2
        fs, omega = odd_contact_form(2, J)
        t = fs.grading(GradingType((1, 1), (1, 1, 2)))
        assert omega.weighted_degree(t) == 2
        # subprincipal grading keeps the odd contact form homogeneous
        t = fs.grading(GradingType((1, 1), (0, 0, 1)))
        assert omega.weighted_degree(t) == 1

    def test_inhomogeneous_case(self):
        # identity Gram under the subprincipal-type weights mixes degrees
        fs, omega = symplectic_form(1, 2, [[1, 0], [0, 1]], J)
        t = fs.grading(GradingType((1, 1), (2, 0)))
        assert omega.weighted_degree(t) is None
