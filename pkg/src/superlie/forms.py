"""Differential superforms over the truncated coefficient superalgebra.

The form algebra is the same supercommutative engine with extra generators:
the differential of an even series variable is a new anticommuting generator
and the differential of an odd variable is a new commuting one, so the single
total-parity Koszul rule of :mod:`superlie.superpoly` drives every sign.  The
exterior differential is an odd derivation; the Lie derivative along a vector
field X is the parity-p(X) derivation acting as X on coefficients and sending
each d-symbol to d of the image of its variable; the interior product is the
parity-(p(X)+1) derivation contracting d-symbols into coefficients.
"""

from __future__ import annotations

from typing import Optional

from . import linalg
from .scalars import Scalar
from .fields import VectorField, ParityError
from .superpoly import (AmbientMismatch, GradingType, Signature, SuperPoly,
                        lambda_signature)


class FormSpace:
    """Superform algebra attached to a base signature of m even series
    variables and n odd variables."""

    def __init__(self, base: Signature):
        self.base = base
        m, n = base.n_even, base.n_odd
        self.m, self.n = m, n
        self.sig = Signature(
            even=base.even + tuple(f"d{o}" for o in base.odd),
            odd=base.odd + tuple(f"d{e}" for e in base.even),
            truncated=base.truncated + (False,) * n,
        )

    # -- embeddings ------------------------------------------------------------

    def include(self, f: SuperPoly) -> SuperPoly:
        if f.sig != self.base:
            raise AmbientMismatch("polynomial over wrong base")
        pad = (0,) * self.n
        terms = {(exps + pad, mask): c for (exps, mask), c in f.terms.items()}
        return SuperPoly(self.sig, f.jet, terms, _clean=True)

    def coefficient_part(self, w: SuperPoly) -> SuperPoly:
        """The degree-zero (no d-symbols) part, as a base polynomial."""
        m, n = self.m, self.n
        out = {}
        for (exps, mask), c in w.terms.items():
            if any(exps[m:]) or (mask >> n):
                continue
            out[(exps[:m], mask)] = c
        return SuperPoly(self.base, w.jet, out, _clean=True)

    def d_even(self, i: int) -> SuperPoly:
        """The symbol d(x_i), an anticommuting generator."""
        return SuperPoly.gen(self.sig, f"d{self.base.even[i]}")

    def d_odd(self, j: int) -> SuperPoly:
        """The symbol d(xi_j), a commuting generator."""
        return SuperPoly.gen(self.sig, f"d{self.base.odd[j]}")

    # -- operators ----------------------------------------------------------------

    def exterior_d(self, w: SuperPoly) -> SuperPoly:
        """Exterior differential; the result is trusted one jet order lower,
        since the dx_i-coefficient of d(f) is a partial derivative of f."""
        even_images: list[Optional[SuperPoly]] = [None] * self.sig.n_even
        odd_images: list[Optional[SuperPoly]] = [None] * self.sig.n_odd
        for i in range(self.m):
            even_images[i] = self.d_even(i)
        for j in range(self.n):
            odd_images[j] = self.d_odd(j)
        out = w.derivation(1, even_images, odd_images)
        return out if out.jet is None else out.with_jet(out.jet - 1)

    def lie_derivative(self, x: VectorField, w: SuperPoly) -> SuperPoly:
        """L_X on forms: the parity-p(X) derivation with L_X(v) = X(v) on
        coefficients and L_X(dv) = (-1)^{p(X)} d(X(v)) on symbols.

        The sign on d-symbols is forced: it is the unique choice for which
        L commutes with d in the graded sense and L_{[X,Y]} = [L_X, L_Y]
        holds for odd fields (equivalently, Cartan's formula
        L_X = i_X d + (-1)^{p(X)} d i_X).
        """
        if x.sig != self.base:
            raise AmbientMismatch("field over wrong base")
        p = x.parity()
        if p is None:
            raise ParityError("Lie derivative needs a parity-homogeneous field")
        m, n = self.m, self.n
        sgn = -1 if p else 1
        even_images: list[Optional[SuperPoly]] = [None] * self.sig.n_even
        odd_images: list[Optional[SuperPoly]] = [None] * self.sig.n_odd
        for i in range(m):
            img = self.include(x.coeffs[i])
            even_images[i] = img
            odd_images[n + i] = self.exterior_d(img).scale(sgn)
        for j in range(n):
            img = self.include(x.coeffs[m + j])
            odd_images[j] = img
            even_images[m + j] = self.exterior_d(img).scale(sgn)
        out = w.derivation(p, even_images, odd_images)
        jet = SuperPoly._min_jet(w.jet, x.jet)
        return out if jet is None else out.with_jet(jet - 1)

    def interior(self, x: VectorField, w: SuperPoly) -> SuperPoly:
        """i_X: the derivation of parity p(X)+1 killing coefficients and
        sending each d-symbol to the corresponding field coefficient."""
        if x.sig != self.base:
            raise AmbientMismatch("field over wrong base")
        p = x.parity()
        if p is None:
            raise ParityError("interior product needs a parity-homogeneous field")
        m, n = self.m, self.n
        even_images: list[Optional[SuperPoly]] = [None] * self.sig.n_even
        odd_images: list[Optional[SuperPoly]] = [None] * self.sig.n_odd
        for i in range(m):
            odd_images[n + i] = self.include(x.coeffs[i])
        for j in range(n):
            even_images[m + j] = self.include(x.coeffs[m + j])
        return w.derivation((p + 1) & 1, even_images, odd_images)

    def pullback(self, g_even, g_odd, w: SuperPoly) -> SuperPoly:
        """Linear change of variables applied to a form: x and dx transform by
        the even matrix, xi and dxi by the odd matrix (row convention as in
        :meth:`SuperPoly.substitute_linear`)."""
        m, n = self.m, self.n
        ge = linalg._rows_of(g_even)
        go = linalg._rows_of(g_odd)
        if len(ge) != m or len(go) != n:
            raise AmbientMismatch("substitution matrix size mismatch")
        if (m and linalg.rank(ge) < m) or (n and linalg.rank(go) < n):
            raise ValueError("singular substitution matrix")
        sig = self.sig
        jet = w.jet

        def lin(indices: list[str], row) -> SuperPoly:
            p = SuperPoly.zero(sig, jet)
            for name, c in zip(indices, row):
                if c != 0:
                    p = p + SuperPoly.gen(sig, name, jet).scale(c)
            return p

        even_images = []
        for i in range(m):
            even_images.append(lin(list(self.base.even), ge[i]))
        for j in range(n):
            even_images.append(lin([f"d{o}" for o in self.base.odd], go[j]))
        odd_images = []
        for j in range(n):
            odd_images.append(lin(list(self.base.odd), go[j]))
        for i in range(m):
            odd_images.append(lin([f"d{e}" for e in self.base.even], ge[i]))
        return w.morphism(even_images, odd_images)

    # -- grading ---------------------------------------------------------------------

    def grading(self, t: GradingType) -> GradingType:
        """Extend base weights to the form algebra: wt(dv) = wt(v)."""
        return GradingType(
            even_weights=t.even_weights + t.odd_weights,
            odd_weights=t.odd_weights + t.even_weights,
        )


# ---------------------------------------------------------------------------
# The defining differential forms of the constraint families
# ---------------------------------------------------------------------------

def _gram_rows(c) -> list[list[Scalar]]:
    return linalg._rows_of(c)


def symplectic_form(k: int, n: int, gram, jet: Optional[int] = None
                    ) -> tuple[FormSpace, SuperPoly]:
    """Even supersymplectic form sum dp_i dq_i + sum c_ij dxi_i dxi_j on the
    base with 2k even variables (p_i = x_i, q_i = x_{k+i}) and n odd ones."""
    base = lambda_signature(2 * k, n)
    fs = FormSpace(base)
    c = _gram_rows(gram)
    w = SuperPoly.zero(fs.sig, jet)
    for i in range(k):
        w = w + fs.d_even(i) * fs.d_even(k + i)
    for i in range(n):
        for j in range(n):
            if c[i][j] != 0:
                w = w + (fs.d_odd(i) * fs.d_odd(j)).scale(c[i][j])
    return fs, w.with_jet(jet)


def contact_form(k: int, n: int, gram, jet: Optional[int] = None
                 ) -> tuple[FormSpace, SuperPoly]:
    """Even supercontact form dt + sum(p_i dq_i - q_i dp_i) + sum c_ij xi_i dxi_j
    on the base with 2k+1 even variables (t = x_1, p_i = x_{1+i},
    q_i = x_{1+k+i}) and n odd ones."""
    base = lambda_signature(2 * k + 1, n)
    fs = FormSpace(base)
    c = _gram_rows(gram)
    w = fs.d_even(0)
    for i in range(k):
        p = fs.include(SuperPoly.gen(base, base.even[1 + i], jet))
        q = fs.include(SuperPoly.gen(base, base.even[1 + k + i], jet))
        w = w + p * fs.d_even(1 + k + i) - q * fs.d_even(1 + i)
    for i in range(n):
        xi = fs.include(SuperPoly.gen(base, base.odd[i], jet))
        for j in range(n):
            if c[i][j] != 0:
                w = w + (xi * fs.d_odd(j)).scale(c[i][j])
    return fs, w.with_jet(jet)


def odd_symplectic_form(n: int, jet: Optional[int] = None
                        ) -> tuple[FormSpace, SuperPoly]:
    """Odd supersymplectic form sum dx_i dxi_i on the (n, n) base."""
    base = lambda_signature(n, n)
    fs = FormSpace(base)
    w = SuperPoly.zero(fs.sig, jet)
    for i in range(n):
        w = w + fs.d_even(i) * fs.d_odd(i)
    return fs, w.with_jet(jet)


def odd_contact_form(n: int, jet: Optional[int] = None
                     ) -> tuple[FormSpace, SuperPoly]:
    """Odd supercontact form dxi_{n+1} + sum(xi_i dx_i + x_i dxi_i) on the
    (n, n+1) base."""
    base = lambda_signature(n, n + 1)
    fs = FormSpace(base)
    w = fs.d_odd(n)
    for i in range(n):
        xi = fs.include(SuperPoly.gen(base, base.odd[i], jet))
        x = fs.include(SuperPoly.gen(base, base.even[i], jet))
        w = w + xi * fs.d_even(i) + x * fs.d_odd(i)
    return fs, w.with_jet(jet)
