"""Quadratic forms over Q and R: exact invariants and the existence and
counting statements for the twisted families.

Only square-class and signature invariants are computed; full rational
equivalence is out of scope.  The congruence diagonalization is exact, with
the standard row-and-column addition trick for zero diagonal pivots.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import linalg
from .scalars import ScalarDomainError, is_square_in, squarefree_part


class FormError(ValueError):
    pass


@dataclass(frozen=True)
class SignatureClass:
    positives: int
    negatives: int

    @property
    def dim(self) -> int:
        return self.positives + self.negatives

    def flipped(self) -> "SignatureClass":
        return SignatureClass(self.negatives, self.positives)


class QuadraticForm:
    """Symmetric nondegenerate Gram matrix over Q."""

    def __init__(self, gram):
        rows = linalg._rows_of(gram)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise FormError("Gram matrix must be square")
        for i in range(n):
            for j in range(n):
                if rows[i][j] != rows[j][i]:
                    raise FormError("Gram matrix must be symmetric")
        self.n = n
        self.gram = [[Fraction(x) for x in row] for row in rows]
        self._det = _det(self.gram)
        if self._det == 0:
            raise FormError("Gram matrix must be nondegenerate")

    @classmethod
    def diagonal(cls, entries) -> "QuadraticForm":
        n = len(entries)
        return cls([[Fraction(entries[i]) if i == j else Fraction(0)
                     for j in range(n)] for i in range(n)])

    @classmethod
    def identity(cls, n: int) -> "QuadraticForm":
        return cls.diagonal([1] * n)

    @property
    def det(self) -> Fraction:
        return self._det

    def congruent_by(self, g) -> "QuadraticForm":
        """g^T . gram . g for an invertible rational matrix g."""
        rows = linalg._rows_of(g)
        n = self.n
        if len(rows) != n or any(len(r) != n for r in rows):
            raise FormError("congruence matrix size mismatch")
        gt_q = [[sum(rows[k][i] * self.gram[k][j] for k in range(n))
                 for j in range(n)] for i in range(n)]
        out = [[sum(gt_q[i][k] * rows[k][j] for k in range(n))
                for j in range(n)] for i in range(n)]
        return QuadraticForm(out)

    def __repr__(self):
        return f"QuadraticForm({self.gram})"


def _det(rows) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return rows[0][0]
    out = Fraction(0)
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        out += rows[0][j] * _det(minor) * (1 if j % 2 == 0 else -1)
    return out


def discriminant_class(q: QuadraticForm, field: str = "Q"):
    """Square-class representative of det(q): square-free integer over Q,
    sign over R."""
    d = q.det
    if field == "Q":
        return squarefree_part(d)
    if field == "R":
        return 1 if d > 0 else -1
    raise ScalarDomainError(f"unknown field {field!r}")


def signature(q: QuadraticForm) -> SignatureClass:
    """Exact congruence diagonalization; counts of positive and negative
    diagonal entries."""
    n = q.n
    a = [row[:] for row in q.gram]
    pos = neg = 0
    for i in range(n):
        if a[i][i] == 0:
            # find a usable pivot: a nonzero later diagonal entry, or build
            # one by a symmetric row/column addition
            k = next((k for k in range(i + 1, n) if a[k][k] != 0), None)
            if k is not None:
                a[i], a[k] = a[k], a[i]
                for row in a:
                    row[i], row[k] = row[k], row[i]
            else:
                k = next((k for k in range(i + 1, n) if a[i][k] != 0), None)
                if k is None:
                    raise FormError("degenerate block in diagonalization")
                for j in range(n):
                    a[i][j] += a[k][j]
                for j in range(n):
                    a[j][i] += a[j][k]
        p = a[i][i]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for r in range(i + 1, n):
            f = a[r][i] / p
            if f == 0:
                continue
            for j in range(n):
                a[r][j] -= f * a[i][j]
            for j in range(n):
                a[j][r] -= f * a[j][i]
    return SignatureClass(pos, neg)


def exists_form(family: str, q: QuadraticForm, field: str = "Q"
                ) -> tuple[bool, str]:
    """Existence of the twisted families: E16 needs -det(q) a square in six
    variables, S12 needs det(q) a square in four."""
    if family == "E16":
        if q.n != 6:
            raise FormError("E16 needs a form in six indeterminates")
        ok = is_square_in(-q.det, field)
        return ok, (f"-det = {-q.det} is{'' if ok else ' not'} a square "
                    f"over {field}")
    if family == "S12":
        if q.n != 4:
            raise FormError("S12 needs a form in four indeterminates")
        ok = is_square_in(q.det, field)
        return ok, (f"det = {q.det} is{'' if ok else ' not'} a square "
                    f"over {field}")
    raise FormError(f"unknown family {family!r}")


def real_form_count(family: str, n: Optional[int] = None) -> int:
    """Number of real forms: enumerate signature classes (p, n-p) modulo the
    scalar flip (p, k) ~ (k, p), intersected with the family's discriminant
    condition."""
    if family in ("H", "K"):
        if n is None or n < 1:
            raise FormError("H/K count needs n >= 1")
        sigs = {tuple(sorted((p, n - p))) for p in range(n + 1)}
        return len(sigs)
    if family == "E16":
        nn = 6
        sigs = set()
        for p in range(nn + 1):
            # -det > 0 over R iff the number of negatives is odd
            if (nn - p) % 2 == 1:
                sigs.add(tuple(sorted((p, nn - p))))
        return len(sigs)
    if family == "S12":
        nn = 4
        sigs = set()
        for p in range(nn + 1):
            if (nn - p) % 2 == 0:
                sigs.add(tuple(sorted((p, nn - p))))
        return len(sigs)
    raise FormError(f"unknown family {family!r}")


def scalar_equiv_real(q: QuadraticForm, q2: QuadraticForm) -> bool:
    """Equivalence over R up to a nonzero scalar: equal or flipped
    signatures."""
    if q.n != q2.n:
        raise FormError("dimension mismatch")
    s1, s2 = signature(q), signature(q2)
    return s1 == s2 or s1 == s2.flipped()


def parse_form(text: str) -> QuadraticForm:
    """CLI grammar: ``diag:1,1,-1`` or ``gram:[[0,1],[1,0]]``."""
    text = text.strip()
    if text.startswith("diag:"):
        entries = [Fraction(tok) for tok in text[len("diag:"):].split(",")]
        return QuadraticForm.diagonal(entries)
    if text.startswith("gram:"):
        import ast

        body = ast.literal_eval(text[len("gram:"):])
        return QuadraticForm([[Fraction(x) for x in row] for row in body])
    raise FormError(f"cannot parse form {text!r} (use diag:... or gram:[[...]])")
