"""Vector fields on the formal superspace: continuous derivations of the
coefficient algebra, their supercommutator, divergence, and the quotient
realization of the Poisson-type bracket on even symplectic pairs.

A field is stored by its coefficient polynomials, one per generator of the
base algebra.  Brackets require parity-homogeneous operands (split first with
:meth:`VectorField.parity_parts` when needed); the result's jet order drops
by one, reflecting the derivative taken.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .scalars import ONE, Scalar
from .superpoly import (AmbientMismatch, GradingType, Mono, Signature,
                        SuperPoly, mono_parity)


class ParityError(ValueError):
    """Raised when an operation needs a parity-homogeneous field."""


class VectorField:
    """Derivation sum(P_i d/dx_i) + sum(Q_j d/dxi_j) of a base algebra."""

    __slots__ = ("sig", "coeffs")

    def __init__(self, sig: Signature, coeffs: Sequence[SuperPoly]):
        if len(coeffs) != sig.n_even + sig.n_odd:
            raise AmbientMismatch("need one coefficient per generator")
        for c in coeffs:
            if c.sig != sig:
                raise AmbientMismatch("coefficient over wrong signature")
        self.sig = sig
        self.coeffs = tuple(coeffs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, sig: Signature, jet: Optional[int] = None) -> "VectorField":
        z = SuperPoly.zero(sig, jet)
        return cls(sig, [z] * (sig.n_even + sig.n_odd))

    @classmethod
    def d_dgen(cls, sig: Signature, name: str, jet: Optional[int] = None) -> "VectorField":
        """The coordinate derivation in the named generator."""
        slot = (sig.even_index(name) if name in sig.even
                else sig.n_even + sig.odd_index(name))
        z = SuperPoly.zero(sig, jet)
        coeffs = [z] * (sig.n_even + sig.n_odd)
        coeffs[slot] = SuperPoly.const(sig, ONE, jet)
        return cls(sig, coeffs)

    def replace(self, slot: int, poly: SuperPoly) -> "VectorField":
        cs = list(self.coeffs)
        cs[slot] = poly
        return VectorField(self.sig, cs)

    # -- structure -----------------------------------------------------------

    @property
    def jet(self) -> Optional[int]:
        jets = [c.jet for c in self.coeffs]
        out: Optional[int] = None
        for j in jets:
            out = SuperPoly._min_jet(out, j)
        return out

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.sig == other.sig and self.coeffs == other.coeffs

    def __add__(self, other: "VectorField") -> "VectorField":
        if self.sig != other.sig:
            raise AmbientMismatch("fields over different signatures")
        return VectorField(self.sig, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "VectorField":
        return VectorField(self.sig, [-c for c in self.coeffs])

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def scale(self, c) -> "VectorField":
        return VectorField(self.sig, [p.scale(c) for p in self.coeffs])

    def parity(self) -> Optional[int]:
        """Parity of the derivation, or None when mixed.

        d/dx_i is even and d/dxi_j is odd, so the field parity is the parity
        of any even-slot coefficient and the opposite of any odd-slot one.
        """
        ps = set()
        ne = self.sig.n_even
        for slot, c in enumerate(self.coeffs):
            p = c.parity()
            if c.is_zero():
                continue
            if p is None:
                return None
            ps.add(p if slot < ne else (p ^ 1))
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def parity_parts(self) -> tuple["VectorField", "VectorField"]:
        """Split into (even part, odd part)."""
        ne = self.sig.n_even
        ev, od = [], []
        for slot, c in enumerate(self.coeffs):
            want_even = 0 if slot < ne else 1
            parts = {0: SuperPoly.zero(self.sig, c.jet),
                     1: SuperPoly.zero(self.sig, c.jet)}
            for m, v in c.terms.items():
                parts[mono_parity(m)] = parts[mono_parity(m)] + \
                    SuperPoly(self.sig, c.jet, {m: v}, _clean=True)
            ev.append(parts[want_even])
            od.append(parts[want_even ^ 1])
        return VectorField(self.sig, ev), VectorField(self.sig, od)

    # -- action and bracket ------------------------------------------------------

    def apply(self, f: SuperPoly) -> SuperPoly:
        """X(f) with left partial derivatives and left coefficients."""
        if f.sig != self.sig:
            raise AmbientMismatch("argument over wrong signature")
        sig = self.sig
        out = SuperPoly.zero(sig, SuperPoly._min_jet(self.jet, f.jet))
        for i in range(sig.n_even):
            p = self.coeffs[i]
            if p.is_zero():
                continue
            out = out + p * f.partial_even(i)
        for j in range(sig.n_odd):
            q = self.coeffs[sig.n_even + j]
            if q.is_zero():
                continue
            out = out + q * f.partial_odd(j)
        return out

    def bracket(self, other: "VectorField") -> "VectorField":
        """Supercommutator [X, Y] = XY - (-1)^{p(X)p(Y)} YX as a field."""
        px, py = self.parity(), other.parity()
        if px is None or py is None:
            raise ParityError("bracket needs parity-homogeneous fields")
        sgn = -ONE if (px and py) else ONE
        coeffs = []
        for slot in range(self.sig.n_even + self.sig.n_odd):
            a = self.apply(other.coeffs[slot])
            b = other.apply(self.coeffs[slot])
            coeffs.append(a - b.scale(sgn))
        return VectorField(self.sig, coeffs)

    def divergence(self) -> SuperPoly:
        """div X = sum dP_i/dx_i + sum (-1)^{p(Q_j)} dQ_j/dxi_j.

        The sign convention is the one pinned by the cocycle identity
        div[X,Y] = X(div Y) - (-1)^{p(X)p(Y)} Y(div X).
        """
        sig = self.sig
        out = SuperPoly.zero(sig, self.jet)
        for i in range(sig.n_even):
            out = out + self.coeffs[i].partial_even(i)
        for j in range(sig.n_odd):
            q = self.coeffs[sig.n_even + j]
            if q.is_zero():
                continue
            for m, v in q.terms.items():
                mono_p = mono_parity(m)
                piece = SuperPoly(sig, q.jet, {m: v}, _clean=True).partial_odd(j)
                out = out + (piece if mono_p == 0 else -piece)
        return out

    # -- grading -------------------------------------------------------------------

    def weighted_degree(self, t: GradingType) -> Optional[int]:
        """Degree under the grading of the given type, or None if mixed/zero.

        A term u d/dv has degree wt(u) - wt(v).
        """
        sig = self.sig
        degs = set()
        for slot, c in enumerate(self.coeffs):
            shift = (t.even_weights[slot] if slot < sig.n_even
                     else t.odd_weights[slot - sig.n_even])
            for m in c.terms:
                degs.add(t.weight(m) - shift)
        if len(degs) == 1:
            return degs.pop()
        return None

    # -- linearization ----------------------------------------------------------------

    def vectorize(self) -> dict[tuple[int, Mono], Scalar]:
        """Sparse coordinates of the field in the (slot, monomial) basis."""
        out = {}
        for slot, c in enumerate(self.coeffs):
            for m, v in c.terms.items():
                out[(slot, m)] = v
        return out

    def __str__(self) -> str:
        sig = self.sig
        names = list(sig.even) + list(sig.odd)
        parts = []
        for slot, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            parts.append(f"({c})*d/d{names[slot]}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"VectorField({self})"


def vf_bracket(x: VectorField, y: VectorField) -> VectorField:
    return x.bracket(y)


def field_from_vector(sig: Signature, vec: dict, jet: Optional[int]) -> VectorField:
    """Inverse of :meth:`VectorField.vectorize`."""
    polys = [dict() for _ in range(sig.n_even + sig.n_odd)]
    for (slot, mono), c in vec.items():
        polys[slot][mono] = c
    return VectorField(sig, [SuperPoly(sig, jet, d) for d in polys])


# ---------------------------------------------------------------------------
# Poisson-type quotient bracket on Lambda(2k, n) / constants
# ---------------------------------------------------------------------------

def h_bracket(f: SuperPoly, g: SuperPoly, k: int, n: int) -> SuperPoly:
    """Bracket on the quotient of the algebra in p_1..p_k, q_1..q_k, xi_1..xi_n
    by constants:

        [f, g] = sum_i (df/dp_i dg/dq_i - df/dq_i dg/dp_i)
                 - (-1)^{p(f)} sum_i df/dxi_i dg/dxi_{n-i+1}

    followed by removal of the constant term.  p_i is even generator i and
    q_i is even generator k+i of the ambient signature.
    """
    sig = f.sig
    if sig.n_even != 2 * k or sig.n_odd != n:
        raise AmbientMismatch("ambient must have 2k even and n odd generators")
    if g.sig != sig:
        raise AmbientMismatch("operands over different signatures")
    pf = f.parity()
    if pf is None:
        raise ParityError("h_bracket needs parity-homogeneous first argument")
    out = SuperPoly.zero(sig, SuperPoly._min_jet(f.jet, g.jet))
    for i in range(k):
        out = out + f.partial_even(i) * g.partial_even(k + i)
        out = out - f.partial_even(k + i) * g.partial_even(i)
    sgn = ONE if pf else -ONE      # -(-1)^{p(f)}
    for i in range(n):
        out = out + (f.partial_odd(i) * g.partial_odd(n - 1 - i)).scale(sgn)
    const_mono = ((0,) * sig.n_even, 0)
    if const_mono in out.terms:
        t = dict(out.terms)
        t.pop(const_mono)
        out = SuperPoly(sig, out.jet, t, _clean=True)
    return out


def hamiltonian_field(f: SuperPoly, k: int, n: int) -> VectorField:
    """The derivation [f, -] of the h_bracket, as a vector field.

    Acting on generators: [f, p_j] = -df/dq_j, [f, q_j] = df/dp_j,
    [f, xi_l] = -(-1)^{p(f)} df/dxi_{n-l+1}.
    """
    sig = f.sig
    pf = f.parity()
    if pf is None:
        raise ParityError("hamiltonian field needs parity-homogeneous input")
    coeffs = []
    for j in range(k):
        coeffs.append(-f.partial_even(k + j))
    for j in range(k):
        coeffs.append(f.partial_even(j))
    sgn = ONE if pf else -ONE
    for l in range(n):
        coeffs.append(f.partial_odd(n - 1 - l).scale(sgn))
    return VectorField(sig, coeffs)
