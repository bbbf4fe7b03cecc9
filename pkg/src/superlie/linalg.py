"""Exact dense and sparse linear algebra over Q and Q(sqrt(d)).

Dense elimination is fraction-free in the Bareiss style (division only by the
previous pivot, an exact determinant identity), followed by normalization to
reduced echelon form with unit pivots.  Pivoting is positional: first nonzero
entry in column order, never by magnitude, so results are deterministic and
meaningful over quadratic extensions where magnitude has no invariant sense.

``SpanReducer`` is the incremental sparse counterpart used by closure checks
and subalgebra generation, where thousands of membership queries hit one
growing span.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .scalars import ONE, ZERO, Scalar, scalar_inverse


class DimensionError(ValueError):
    """Raised on ragged or incompatible shapes."""


class Matrix:
    """Dense exact matrix: a rectangular list of rows of scalars."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[Scalar]]):
        rows = [list(r) for r in entries]
        if rows:
            w = len(rows[0])
            if any(len(r) != w for r in rows):
                raise DimensionError("ragged matrix rows")
        else:
            w = 0
        self.rows = len(rows)
        self.cols = w
        self.entries = rows

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def mul_vector(self, v: Sequence[Scalar]) -> list[Scalar]:
        if len(v) != self.cols:
            raise DimensionError("vector length does not match matrix columns")
        return [sum((row[j] * v[j] for j in range(self.cols)), start=ZERO)
                for row in self.entries]


def _coerce(x) -> Scalar:
    return Fraction(x) if isinstance(x, int) else x


def _rows_of(m) -> list[list[Scalar]]:
    if isinstance(m, Matrix):
        return [[_coerce(x) for x in row] for row in m.entries]
    return [[_coerce(x) for x in row] for row in m]


def bareiss_echelon(m) -> tuple[list[list[Scalar]], list[int]]:
    """Fraction-free row echelon form.

    Returns ``(rows, pivot_cols)``.  Rows below the rank are dropped.  Entries
    of an integer input stay integral throughout.
    """
    a = _rows_of(m)
    if not a:
        return [], []
    nrows, ncols = len(a), len(a[0])
    pivots: list[int] = []
    prev = ONE
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                num = a[r][c] * a[i][j] - a[i][c] * a[r][j]
                a[i][j] = num / prev
            a[i][c] = ZERO
        prev = a[r][c]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a[:r], pivots


def rref(m) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form with unit pivots (deterministic)."""
    rows, pivots = bareiss_echelon(m)
    if not rows:
        return [], []
    ncols = len(rows[0])
    for r in range(len(rows) - 1, -1, -1):
        c = pivots[r]
        inv = scalar_inverse(rows[r][c])
        rows[r] = [x * inv for x in rows[r]]
        for i in range(r):
            f = rows[i][c]
            if f != 0:
                rows[i] = [rows[i][j] - f * rows[r][j] for j in range(ncols)]
    return rows, pivots


def rank(m) -> int:
    return len(bareiss_echelon(m)[0])


def nullspace(m) -> list[list[Scalar]]:
    """Exact basis of the right kernel, in reduced echelon normal form.

    One basis vector per free column, carrying entry 1 there; basis vectors
    listed in increasing free-column order.
    """
    a = _rows_of(m)
    if not a:
        return []
    ncols = len(a[0])
    rows, pivots = rref(a)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v: list[Scalar] = [ZERO] * ncols
        v[fc] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(v)
    return basis


def solve(a, b: Sequence[Scalar]) -> Optional[list[Scalar]]:
    """One exact solution of ``a x = b``, or None when inconsistent."""
    rows = _rows_of(a)
    if not rows:
        return [] if all(x == 0 for x in b) else None
    if len(b) != len(rows):
        raise DimensionError("right-hand side length mismatch")
    ncols = len(rows[0])
    aug = [rows[i] + [b[i]] for i in range(len(rows))]
    red, pivots = rref(aug)
    x: list[Scalar] = [ZERO] * ncols
    for r, pc in enumerate(pivots):
        if pc == ncols:
            return None
        x[pc] = red[r][ncols]
    return x


def in_span(v: Sequence[Scalar], basis: Sequence[Sequence[Scalar]]) -> Optional[list[Scalar]]:
    """Exact coordinates of ``v`` in ``span(basis)``, or None if outside.

    The zero vector always yields all-zero coordinates.
    """
    n = len(v)
    for b in basis:
        if len(b) != n:
            raise DimensionError("basis vector length mismatch")
    if not basis:
        return [] if all(x == 0 for x in v) else None
    cols = [[basis[k][i] for k in range(len(basis))] for i in range(n)]
    return solve(cols, list(v))


def invert(m) -> list[list[Scalar]]:
    """Exact inverse of a square matrix; raises on singular input."""
    rows = _rows_of(m)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionError("inverse of a non-square matrix")
    aug = [rows[i] + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise DimensionError("singular matrix")
    return [red[i][n:] for i in range(n)]


def sparse_kernel(columns: Sequence[dict]) -> list[dict[int, Scalar]]:
    """Kernel of the sparse linear map with the given columns.

    Each column is a dict mapping orderable row keys to scalars.  Columns are
    eliminated left to right with the smallest row key as pivot, tracking the
    combination that reduced each column; a column reducing to zero yields a
    kernel vector (dict column-index -> coefficient).  Deterministic, and far
    cheaper than dense elimination when columns carry few entries.
    """
    rows: dict = {}
    kernel: list[dict[int, Scalar]] = []
    for k, col in enumerate(columns):
        v = {key: c for key, c in col.items() if c != 0}
        coords = {k: ONE}
        while v:
            piv = min(v)
            hit = rows.get(piv)
            if hit is None:
                break
            rv, rc = hit
            f = v[piv]
            for key, c in rv.items():
                nv = v.get(key, ZERO) - f * c
                if nv == 0:
                    v.pop(key, None)
                else:
                    v[key] = nv
            for key, c in rc.items():
                nv = coords.get(key, ZERO) - f * c
                if nv == 0:
                    coords.pop(key, None)
                else:
                    coords[key] = nv
        if not v:
            kernel.append(coords)
        else:
            piv = min(v)
            inv = scalar_inverse(v[piv])
            rows[piv] = ({key: c * inv for key, c in v.items()},
                         {key: c * inv for key, c in coords.items()})
    return kernel


def sparse_solve(columns: Sequence[dict], rhs: dict) -> Optional[dict[int, Scalar]]:
    """One solution x of sum_k x_k col_k = rhs over sparse columns, or None.

    Same elimination as :func:`sparse_kernel` but without accumulating kernel
    vectors; returns a dict column-index -> coefficient.
    """
    rows: dict = {}
    for k, col in enumerate(columns):
        v = {key: c for key, c in col.items() if c != 0}
        coords = {k: ONE}
        while v:
            piv = min(v)
            hit = rows.get(piv)
            if hit is None:
                break
            rv, rc = hit
            f = v[piv]
            for key, c in rv.items():
                nv = v.get(key, ZERO) - f * c
                if nv == 0:
                    v.pop(key, None)
                else:
                    v[key] = nv
            for key, c in rc.items():
                nv = coords.get(key, ZERO) - f * c
                if nv == 0:
                    coords.pop(key, None)
                else:
                    coords[key] = nv
        if v:
            piv = min(v)
            inv = scalar_inverse(v[piv])
            rows[piv] = ({key: c * inv for key, c in v.items()},
                         {key: c * inv for key, c in coords.items()})
    v = {key: c for key, c in rhs.items() if c != 0}
    sol: dict[int, Scalar] = {}
    while v:
        piv = min(v)
        hit = rows.get(piv)
        if hit is None:
            return None
        rv, rc = hit
        f = v[piv]
        for key, c in rv.items():
            nv = v.get(key, ZERO) - f * c
            if nv == 0:
                v.pop(key, None)
            else:
                v[key] = nv
        for key, c in rc.items():
            nv = sol.get(key, ZERO) + f * c
            if nv == 0:
                sol.pop(key, None)
            else:
                sol[key] = nv
    return sol


class SpanReducer:
    """Incremental echelon basis over sparse vectors (dict key -> scalar).

    Keys may be any totally ordered hashable; the pivot of a row is its
    smallest key, which makes insertion order irrelevant to the final span
    and keeps the reduction deterministic.
    """

    __slots__ = ("rows",)

    def __init__(self) -> None:
        # pivot key -> normalized row (dict with row[pivot] == 1)
        self.rows: dict = {}

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _reduce(self, vec: dict) -> dict:
        v = {k: c for k, c in vec.items() if c != 0}
        while v:
            piv = min(v)
            row = self.rows.get(piv)
            if row is None:
                return v
            f = v[piv]
            for k, c in row.items():
                nv = v.get(k, ZERO) - f * c
                if nv == 0:
                    v.pop(k, None)
                else:
                    v[k] = nv
        return v

    def contains(self, vec: dict) -> bool:
        return not self._reduce(vec)

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; returns True when the span grew."""
        v = self._reduce(vec)
        if not v:
            return False
        piv = min(v)
        inv = scalar_inverse(v[piv])
        row = {k: c * inv for k, c in v.items()}
        # back-substitute into existing rows so stored rows stay reduced
        for p, r in self.rows.items():
            f = r.get(piv)
            if f is not None and f != 0:
                for k, c in row.items():
                    nv = r.get(k, ZERO) - f * c
                    if nv == 0:
                        r.pop(k, None)
                    else:
                        r[k] = nv
        self.rows[piv] = row
        return True

    def basis(self) -> list[dict]:
        return [dict(self.rows[p]) for p in sorted(self.rows)]
