import random
from fractions import Fraction

import pytest

from superlie.linalg import (DimensionError, Matrix, SpanReducer,
                             bareiss_echelon, in_span, invert, nullspace,
                             rank, solve, sparse_kernel)
from superlie.scalars import QuadExt


def plain_gauss_nullspace(mat):
    """Independent oracle: textbook fraction-based Gauss-Jordan kernel."""
    m = [[Fraction(x) if isinstance(x, int) else x for x in row] for row in mat]
    if not m:
        return []
    rows, cols = len(m), len(m[0])
    piv_cols = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        m[r] = [x / m[r][c] for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    free = [c for c in range(cols) if c not in piv_cols]
    out = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for i, pc in enumerate(piv_cols):
            v[pc] = -m[i][fc]
        out.append(v)
    return out


class TestNullspace:
    def test_rank_one_normal_form(self):
        assert nullspace([[1, 1], [2, 2]]) == [[Fraction(-1), Fraction(1)]]

    def test_identity_empty(self):
        assert nullspace([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == []

    def test_single_row_against_oracle(self):
        mat = [[1, 2, 3]]
        ns = nullspace(mat)
        assert len(ns) == 2
        for v in ns:
            assert Matrix(mat).mul_vector(v) == [0]
        assert ns == plain_gauss_nullspace(mat)

    def test_random_against_oracle(self):
        rng = random.Random(5)
        for _ in range(40):
            rows = rng.randrange(1, 6)
            cols = rng.randrange(1, 7)
            mat = [[Fraction(rng.randrange(-4, 5)) for _ in range(cols)]
                   for _ in range(rows)]
            ns = nullspace(mat)
            assert ns == plain_gauss_nullspace(mat)
            for v in ns:
                assert all(x == 0 for x in Matrix(mat).mul_vector(v))
            assert len(ns) == cols - rank(mat)

    def test_quadratic_extension_entries(self):
        s = QuadExt(0, 1, 2)
        mat = [[s, Fraction(2)], [Fraction(1), s]]  # det = 2 - 2 = 0
        ns = nullspace(mat)
        assert len(ns) == 1
        assert all(x == 0 for x in Matrix(mat).mul_vector(ns[0]))


class TestInSpan:
    def test_zero_vector(self):
        assert in_span([0, 0, 0], [[1, 0, 0], [0, 1, 0]]) == [0, 0]

    def test_constructed_membership(self):
        b1, b2 = [1, 0, 2], [0, 1, 1]
        v = [b1[i] + 2 * b2[i] for i in range(3)]
        assert in_span(v, [b1, b2]) == [1, 2]

    def test_outside(self):
        assert in_span([0, 0, 1], [[1, 0, 0], [0, 1, 0]]) is None

    def test_ragged_rejected(self):
        with pytest.raises(DimensionError):
            in_span([1, 0], [[1, 0, 0]])


class TestDense:
    def test_bareiss_integrality(self):
        # integer input stays integral through forward elimination
        mat = [[2, 3, 5], [7, 11, 13], [17, 19, 23]]
        ech, piv = bareiss_echelon(mat)
        for row in ech:
            for x in row:
                assert Fraction(x).denominator == 1

    def test_invert(self):
        g = [[1, 2], [3, 5]]
        gi = invert(g)
        assert gi == [[Fraction(-5), Fraction(2)], [Fraction(3), Fraction(-1)]]
        with pytest.raises(DimensionError):
            invert([[1, 1], [1, 1]])

    def test_solve(self):
        assert solve([[2, 0], [0, 4]], [6, 8]) == [3, 2]
        assert solve([[1, 1], [1, 1]], [1, 2]) is None


class TestSparse:
    def test_sparse_kernel_matches_dense(self):
        rng = random.Random(9)
        for _ in range(40):
            rows = rng.randrange(1, 7)
            cols = rng.randrange(1, 7)
            dense = [[Fraction(rng.randrange(-3, 4)) if rng.random() < 0.5
                      else Fraction(0) for _ in range(cols)]
                     for _ in range(rows)]
            columns = [{r: dense[r][c] for r in range(rows) if dense[r][c] != 0}
                       for c in range(cols)]
            kern = sparse_kernel(columns)
            assert len(kern) == len(nullspace(dense))
            for coeffs in kern:
                out = [Fraction(0)] * rows
                for c, v in coeffs.items():
                    for r in range(rows):
                        out[r] += dense[r][c] * v
                assert all(x == 0 for x in out)

    def test_span_reducer(self):
        sr = SpanReducer()
        assert sr.add({0: Fraction(2), 1: Fraction(4)})
        assert not sr.add({0: Fraction(1), 1: Fraction(2)})
        assert sr.add({1: Fraction(1)})
        assert sr.dim == 2
        assert sr.contains({0: Fraction(5), 1: Fraction(-7)})
        assert not sr.contains({2: Fraction(1)})
        # insertion order does not change the final span
        sr2 = SpanReducer()
        sr2.add({1: Fraction(1)})
        sr2.add({0: Fraction(1), 1: Fraction(2)})
        assert sr2.rows.keys() == sr.rows.keys()
        assert all(sr2.contains(r) for r in sr.basis())
