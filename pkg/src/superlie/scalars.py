"""Exact scalar tower: the rationals and their quadratic extensions Q(sqrt(d)).

Plain ``fractions.Fraction`` is the rational scalar; ``QuadExt`` represents
``a + b*sqrt(d)`` with square-free integer radicand ``d``.  Arithmetic never
leaves the declared field and equality is exact.  All constructors normalize:
a ``QuadExt`` with vanishing irrational part collapses back to ``Fraction``,
so rational-only computations stay on the fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from numbers import Rational as _RationalABC
from typing import Union

Scalar = Union[Fraction, "QuadExt"]

ZERO = Fraction(0)
ONE = Fraction(1)


class ScalarDomainError(ValueError):
    """Raised for operations outside the declared scalar field."""


@dataclass(frozen=True)
class FieldDescriptor:
    """The base field of a computation: Q, or Q(sqrt(radicand)).

    ``radicand`` is ``None`` for the rationals and otherwise a square-free
    integer different from 0 and 1.
    """

    radicand: int | None = None

    def __post_init__(self) -> None:
        d = self.radicand
        if d is not None:
            if d in (0, 1) or squarefree_part(Fraction(d)) != d:
                raise ScalarDomainError(f"radicand {d} is not square-free (or is 0/1)")

    @property
    def is_rational(self) -> bool:
        return self.radicand is None

    def __str__(self) -> str:
        return "Q" if self.is_rational else f"Q(sqrt({self.radicand}))"


QQ = FieldDescriptor()


def _factor_squarefree(n: int) -> int:
    """Square-free part of a positive integer, by factorization."""
    if n == 1:
        return 1
    r = isqrt(n)
    if r * r == n:
        return 1
    from sympy import factorint

    out = 1
    for p, e in factorint(n).items():
        if e % 2:
            out *= int(p)
    return out


def squarefree_part(r: Fraction | int) -> int:
    """Signed square-free integer s with r = s * t^2 for some rational t.

    Raises ``ScalarDomainError`` on zero input.
    """
    r = Fraction(r)
    if r == 0:
        raise ScalarDomainError("squarefree_part of zero is undefined")
    n = abs(r.numerator) * r.denominator
    s = _factor_squarefree(n)
    return s if r > 0 else -s


def is_square_in(r: Fraction | int, field: str = "Q") -> bool:
    """Exact square test over Q or R.

    Over R the answer is a sign test; over Q it asks whether the square-free
    part is 1.  Zero input is rejected.
    """
    r = Fraction(r)
    if r == 0:
        raise ScalarDomainError("square-class of zero is undefined")
    if field == "R":
        return r > 0
    if field == "Q":
        return r > 0 and squarefree_part(r) == 1
    raise ScalarDomainError(f"unknown field {field!r} (expected 'Q' or 'R')")


def adjoin_sqrt(d: Fraction | int) -> tuple[FieldDescriptor, Scalar]:
    """Smallest field of the tower containing sqrt(d), plus a witness root.

    Returns ``(field, root)`` with ``root * root == d`` exactly.  When d is a
    rational square the field is Q itself; otherwise Q(sqrt(s)) for the
    square-free part s of d, with the root scaled accordingly
    (e.g. sqrt(8) = 2*sqrt(2)).
    """
    d = Fraction(d)
    if d == 0:
        raise ScalarDomainError("cannot adjoin sqrt(0)")
    s = squarefree_part(d)
    # d = s * t^2  with  t = sqrt(|num*den|/|s|) / den
    n = abs(d.numerator) * d.denominator
    t_int = isqrt(n // abs(s))
    t = Fraction(t_int, d.denominator)
    if s == 1:
        return QQ, t
    field = FieldDescriptor(s)
    return field, QuadExt(ZERO, t, s)


def _as_fraction(x) -> Fraction | None:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    return None


class QuadExt:
    """Element a + b*sqrt(d) of a real or imaginary quadratic extension of Q.

    ``d`` must be the square-free radicand of the ambient field.  Mixed
    arithmetic with rationals is supported; mixing two different radicands
    raises ``ScalarDomainError``.  Results with b == 0 collapse to Fraction.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    # -- helpers -----------------------------------------------------------

    @staticmethod
    def _make(a: Fraction, b: Fraction, d: int) -> Scalar:
        if b == 0:
            return a
        return QuadExt(a, b, d)

    def _coerce(self, other) -> tuple[Fraction, Fraction] | None:
        f = _as_fraction(other)
        if f is not None:
            return f, ZERO
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ScalarDomainError(
                    f"cannot mix sqrt({self.d}) and sqrt({other.d}) scalars"
                )
            return other.a, other.b
        return None

    # -- ring/field operations ---------------------------------------------

    def __add__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        return self._make(self.a + co[0], self.b + co[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        return self._make(self.a - co[0], self.b - co[1], self.d)

    def __rsub__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        return self._make(co[0] - self.a, co[1] - self.b, self.d)

    def __mul__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        oa, ob = co
        return self._make(self.a * oa + self.b * ob * self.d,
                          self.a * ob + self.b * oa, self.d)

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self._make(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        oa, ob = co
        if ob == 0:
            if oa == 0:
                raise ZeroDivisionError("scalar division by zero")
            return self._make(self.a / oa, self.b / oa, self.d)
        return self * QuadExt(oa, ob, self.d).inverse()

    def __rtruediv__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        return self._make(co[0], co[1], self.d) * self.inverse()

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    # -- comparisons / hashing ---------------------------------------------

    def __eq__(self, other):
        f = _as_fraction(other)
        if f is not None:
            return self.b == 0 and self.a == f
        if isinstance(other, QuadExt):
            return self.d == other.d and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        return format_scalar(self)


def scalar_inverse(x: Scalar) -> Scalar:
    if isinstance(x, QuadExt):
        return x.inverse()
    return ONE / x


def scalar_field(x: Scalar) -> FieldDescriptor:
    if isinstance(x, QuadExt):
        return FieldDescriptor(x.d)
    return QQ


def rational_part(x: Scalar) -> Fraction:
    return x.a if isinstance(x, QuadExt) else Fraction(x)


def format_scalar(x: Scalar) -> str:
    """Canonical textual form: ``p/q`` or ``p/q+r/s*sqrt(d)``."""
    if isinstance(x, QuadExt):
        if x.b == 0:
            return format_scalar(x.a)
        irr = f"{x.b}*sqrt({x.d})"
        if x.a == 0:
            return irr
        sign = "+" if x.b > 0 else ""
        return f"{x.a}{sign}{irr}" if x.b > 0 else f"{x.a}{irr}"
    return str(Fraction(x))


def parse_scalar(text: str) -> Scalar:
    """Inverse of :func:`format_scalar`."""
    s = text.strip().replace(" ", "")
    if "sqrt" not in s:
        return Fraction(s)
    # split additive rational head from the sqrt term, minding a leading sign
    idx = s.find("*sqrt(")
    if idx < 0:
        raise ScalarDomainError(f"malformed scalar {text!r}")
    head = s[:idx]
    if not s.endswith(")"):
        raise ScalarDomainError(f"malformed scalar {text!r}")
    d = int(s[idx + len("*sqrt("):-1])
    # head is like 'r/s' or 'p/q+r/s' or 'p/q-r/s'
    cut = max(head.rfind("+", 1), head.rfind("-", 1))
    if cut <= 0:
        a, b = ZERO, Fraction(head)
    else:
        a = Fraction(head[:cut])
        b = Fraction(head[cut:].lstrip("+"))
    out = QuadExt(a, b, d)
    return out if out.b != 0 else out.a
