"""Truncated supercommutative polynomial algebra with exact coefficients.

A :class:`Signature` declares the generators: commuting ("even") generators
with arbitrary exponents, some of which carry formal-power-series truncation,
and anticommuting ("odd") generators squaring to zero.  The same engine
therefore hosts both the coefficient superalgebra in even series variables
and Grassmann variables, and the larger algebra of differential superforms
built on top of it (where the d-symbols of odd variables are extra commuting
generators and the d-symbols of even variables are extra anticommuting ones).

Monomials are stored canonically: even exponent tuple plus an odd bitmask
read in increasing generator order; coefficients absorb all reordering signs
at construction time.  Odd partial derivatives use the left convention
throughout: the generator is moved to the front, collecting a Koszul sign,
then deleted.

Jet truncation: every value carries the order ``jet`` through which its
truncated-generator degree is trusted; products return the minimum of the
operand orders and discard terms beyond it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .scalars import ONE, ZERO, Scalar, format_scalar, parse_scalar

Mono = tuple[tuple[int, ...], int]


class AmbientMismatch(ValueError):
    """Raised when operands live over different signatures."""


class UnknownGenerator(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    """Generator table of a supercommutative algebra."""

    even: tuple[str, ...]
    odd: tuple[str, ...]
    truncated: tuple[bool, ...]

    def __post_init__(self):
        if len(self.truncated) != len(self.even):
            raise AmbientMismatch("truncation flags must match even generators")
        seen = set(self.even) | set(self.odd)
        if len(seen) != len(self.even) + len(self.odd):
            raise AmbientMismatch("duplicate generator names")

    @property
    def n_even(self) -> int:
        return len(self.even)

    @property
    def n_odd(self) -> int:
        return len(self.odd)

    def even_index(self, name: str) -> int:
        try:
            return self.even.index(name)
        except ValueError:
            raise UnknownGenerator(name) from None

    def odd_index(self, name: str) -> int:
        try:
            return self.odd.index(name)
        except ValueError:
            raise UnknownGenerator(name) from None


def lambda_signature(m: int, n: int) -> Signature:
    """The algebra in m truncated even series variables and n odd ones."""
    return Signature(
        even=tuple(f"x{i + 1}" for i in range(m)),
        odd=tuple(f"xi{j + 1}" for j in range(n)),
        truncated=(True,) * m,
    )


@dataclass(frozen=True)
class GradingType:
    """Integer weights per generator; induces the weighted degree."""

    even_weights: tuple[int, ...]
    odd_weights: tuple[int, ...]

    def weight(self, mono: Mono) -> int:
        exps, mask = mono
        w = 0
        for i, e in enumerate(exps):
            if e:
                w += e * self.even_weights[i]
        mm = mask
        while mm:
            j = (mm & -mm).bit_length() - 1
            w += self.odd_weights[j]
            mm &= mm - 1
        return w


def merge_sign(m1: int, m2: int) -> int:
    """Koszul sign for concatenating two increasing odd monomials."""
    if m1 == 0 or m2 == 0:
        return 1
    inv = 0
    mm = m2
    while mm:
        j = (mm & -mm).bit_length() - 1
        inv += (m1 >> (j + 1)).bit_count()
        mm &= mm - 1
    return -1 if inv & 1 else 1


def mono_parity(mono: Mono) -> int:
    return mono[1].bit_count() & 1


class SuperPoly:
    """Immutable element of the algebra over a :class:`Signature`."""

    __slots__ = ("sig", "jet", "terms")

    def __init__(self, sig: Signature, jet: Optional[int],
                 terms: dict[Mono, Scalar], _clean: bool = False):
        self.sig = sig
        self.jet = jet
        if _clean:
            self.terms = terms
        else:
            self.terms = {m: c for m, c in terms.items()
                          if c != 0 and not self._beyond(sig, jet, m)}

    # -- constructors --------------------------------------------------------

    @staticmethod
    def _beyond(sig: Signature, jet: Optional[int], mono: Mono) -> bool:
        if jet is None:
            return False
        d = 0
        for i, e in enumerate(mono[0]):
            if sig.truncated[i]:
                d += e
        return d > jet

    @classmethod
    def zero(cls, sig: Signature, jet: Optional[int] = None) -> "SuperPoly":
        return cls(sig, jet, {}, _clean=True)

    @classmethod
    def const(cls, sig: Signature, c, jet: Optional[int] = None) -> "SuperPoly":
        c = Fraction(c) if isinstance(c, int) else c
        if c == 0:
            return cls.zero(sig, jet)
        return cls(sig, jet, {((0,) * sig.n_even, 0): c}, _clean=True)

    @classmethod
    def gen(cls, sig: Signature, name: str, jet: Optional[int] = None) -> "SuperPoly":
        if name in sig.even:
            i = sig.even_index(name)
            exps = tuple(1 if k == i else 0 for k in range(sig.n_even))
            return cls(sig, jet, {(exps, 0): ONE})
        j = sig.odd_index(name)
        return cls(sig, jet, {((0,) * sig.n_even, 1 << j): ONE})

    @classmethod
    def monomial(cls, sig: Signature, exps: Sequence[int], odd_mask: int,
                 coeff=ONE, jet: Optional[int] = None) -> "SuperPoly":
        c = Fraction(coeff) if isinstance(coeff, int) else coeff
        return cls(sig, jet, {(tuple(exps), odd_mask): c})

    # -- basic structure ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SuperPoly):
            return NotImplemented
        return self.sig == other.sig and self.terms == other.terms

    def __hash__(self):
        return hash((self.sig, frozenset(self.terms.items())))

    def parity(self) -> Optional[int]:
        """0, 1, or None when parity-mixed (or zero: returns 0)."""
        if not self.terms:
            return 0
        ps = {mono_parity(m) for m in self.terms}
        return ps.pop() if len(ps) == 1 else None

    def _check(self, other: "SuperPoly") -> None:
        if self.sig != other.sig:
            raise AmbientMismatch("operands over different signatures")

    @staticmethod
    def _min_jet(a: Optional[int], b: Optional[int]) -> Optional[int]:
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def with_jet(self, jet: Optional[int]) -> "SuperPoly":
        return SuperPoly(self.sig, jet, self.terms)

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "SuperPoly") -> "SuperPoly":
        self._check(other)
        jet = self._min_jet(self.jet, other.jet)
        out = dict(self.terms)
        for m, c in other.terms.items():
            nc = out.get(m, ZERO) + c
            if nc == 0:
                out.pop(m, None)
            else:
                out[m] = nc
        return SuperPoly(self.sig, jet, out)

    def __neg__(self) -> "SuperPoly":
        return SuperPoly(self.sig, self.jet, {m: -c for m, c in self.terms.items()},
                         _clean=True)

    def __sub__(self, other: "SuperPoly") -> "SuperPoly":
        return self + (-other)

    def scale(self, c) -> "SuperPoly":
        c = Fraction(c) if isinstance(c, int) else c
        if c == 0:
            return SuperPoly.zero(self.sig, self.jet)
        return SuperPoly(self.sig, self.jet,
                         {m: c * v for m, v in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if isinstance(other, SuperPoly):
            return self._poly_mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def _poly_mul(self, other: "SuperPoly") -> "SuperPoly":
        self._check(other)
        jet = self._min_jet(self.jet, other.jet)
        sig = self.sig
        out: dict[Mono, Scalar] = {}
        for (e1, m1), c1 in self.terms.items():
            for (e2, m2), c2 in other.terms.items():
                if m1 & m2:
                    continue
                exps = tuple(a + b for a, b in zip(e1, e2))
                mono = (exps, m1 | m2)
                if self._beyond(sig, jet, mono):
                    continue
                c = c1 * c2
                if merge_sign(m1, m2) < 0:
                    c = -c
                nc = out.get(mono, ZERO) + c
                if nc == 0:
                    out.pop(mono, None)
                else:
                    out[mono] = nc
        return SuperPoly(sig, jet, out, _clean=True)

    # -- derivations -----------------------------------------------------------

    def partial_even(self, i: int) -> "SuperPoly":
        """Formal partial derivative in even generator i."""
        sig = self.sig
        out: dict[Mono, Scalar] = {}
        for (exps, mask), c in self.terms.items():
            e = exps[i]
            if e == 0:
                continue
            ne = exps[:i] + (e - 1,) + exps[i + 1:]
            mono = (ne, mask)
            nc = out.get(mono, ZERO) + c * e
            if nc == 0:
                out.pop(mono, None)
            else:
                out[mono] = nc
        jet = self.jet
        if jet is not None and sig.truncated[i]:
            jet -= 1
        return SuperPoly(sig, jet, out, _clean=True)

    def partial_odd(self, j: int) -> "SuperPoly":
        """Left partial derivative in odd generator j."""
        out: dict[Mono, Scalar] = {}
        bit = 1 << j
        below = bit - 1
        for (exps, mask), c in self.terms.items():
            if not mask & bit:
                continue
            sgn = -1 if (mask & below).bit_count() & 1 else 1
            mono = (exps, mask & ~bit)
            nc = out.get(mono, ZERO) + (c if sgn > 0 else -c)
            if nc == 0:
                out.pop(mono, None)
            else:
                out[mono] = nc
        return SuperPoly(self.sig, self.jet, out, _clean=True)

    def partial(self, name: str) -> "SuperPoly":
        if name in self.sig.even:
            return self.partial_even(self.sig.even_index(name))
        return self.partial_odd(self.sig.odd_index(name))

    def derivation(self, parity: int,
                   even_images: Sequence[Optional["SuperPoly"]],
                   odd_images: Sequence[Optional["SuperPoly"]]) -> "SuperPoly":
        """Apply the derivation of the given parity with the given values on
        generators (None meaning zero).  Canonical factor order is all even
        factors first, so only preceding odd factors contribute Koszul signs.
        """
        sig = self.sig
        acc = SuperPoly.zero(sig, self.jet)
        for (exps, mask), c in self.terms.items():
            # even factors
            for i, e in enumerate(exps):
                if e == 0:
                    continue
                g = even_images[i]
                if g is None or g.is_zero():
                    continue
                rest = SuperPoly.monomial(sig, exps[:i] + (e - 1,) + exps[i + 1:],
                                          mask, c * e, self.jet)
                acc = acc + g * rest
            # odd factors, ascending
            mm = mask
            while mm:
                j = (mm & -mm).bit_length() - 1
                mm &= mm - 1
                h = odd_images[j]
                if h is None or h.is_zero():
                    continue
                bit = 1 << j
                lower = mask & (bit - 1)
                upper = mask & ~((bit << 1) - 1)
                sgn = -1 if (parity & 1) and (lower.bit_count() & 1) else 1
                front = SuperPoly.monomial(sig, exps, lower,
                                           c if sgn > 0 else -c, self.jet)
                back = SuperPoly.monomial(sig, (0,) * sig.n_even, upper, ONE, self.jet)
                acc = acc + front * h * back
        return acc

    def morphism(self,
                 even_images: Sequence["SuperPoly"],
                 odd_images: Sequence["SuperPoly"]) -> "SuperPoly":
        """Algebra morphism determined by generator images (same signature)."""
        sig = self.sig
        acc = SuperPoly.zero(sig, self.jet)
        for (exps, mask), c in self.terms.items():
            prod = SuperPoly.const(sig, c, self.jet)
            for i, e in enumerate(exps):
                for _ in range(e):
                    prod = prod * even_images[i]
            mm = mask
            while mm:
                j = (mm & -mm).bit_length() - 1
                mm &= mm - 1
                prod = prod * odd_images[j]
            acc = acc + prod
        return acc

    def substitute_linear(self, g_even, g_odd) -> "SuperPoly":
        """Linear change of generators by the two given square matrices.

        Row convention: generator i is replaced by sum_k M[i][k] * generator_k.
        Both matrices must be invertible (checked).
        """
        from . import linalg

        sig = self.sig
        ge = linalg._rows_of(g_even)
        go = linalg._rows_of(g_odd)
        if len(ge) != sig.n_even or len(go) != sig.n_odd:
            raise AmbientMismatch("substitution matrix size mismatch")
        if (sig.n_even and linalg.rank(ge) < sig.n_even) or \
           (sig.n_odd and linalg.rank(go) < sig.n_odd):
            raise ValueError("singular substitution matrix")
        even_images = []
        for i in range(sig.n_even):
            p = SuperPoly.zero(sig, self.jet)
            for k in range(sig.n_even):
                if ge[i][k] != 0:
                    p = p + SuperPoly.gen(sig, sig.even[k], self.jet).scale(ge[i][k])
            even_images.append(p)
        odd_images = []
        for j in range(sig.n_odd):
            p = SuperPoly.zero(sig, self.jet)
            for k in range(sig.n_odd):
                if go[j][k] != 0:
                    p = p + SuperPoly.gen(sig, sig.odd[k], self.jet).scale(go[j][k])
            odd_images.append(p)
        return self.morphism(even_images, odd_images)

    # -- grading ----------------------------------------------------------------

    def weighted_terms(self, t: GradingType) -> dict[int, "SuperPoly"]:
        """Split into weighted-homogeneous components, keyed by degree."""
        parts: dict[int, dict[Mono, Scalar]] = {}
        for m, c in self.terms.items():
            parts.setdefault(t.weight(m), {})[m] = c
        return {w: SuperPoly(self.sig, self.jet, d, _clean=True)
                for w, d in sorted(parts.items())}

    def weighted_degree(self, t: GradingType) -> Optional[int]:
        """The common weight of all terms, or None if inhomogeneous/zero."""
        ws = {t.weight(m) for m in self.terms}
        if len(ws) == 1:
            return ws.pop()
        return None

    def is_homogeneous(self, t: GradingType) -> bool:
        return len({t.weight(m) for m in self.terms}) <= 1

    # -- presentation -------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Mono, Scalar]]:
        def key(item):
            (exps, mask), _ = item
            return (sum(exps) + mask.bit_count(), exps, mask)
        return sorted(self.terms.items(), key=key)

    def _mono_str(self, mono: Mono) -> str:
        exps, mask = mono
        parts = []
        for i, e in enumerate(exps):
            if e == 1:
                parts.append(self.sig.even[i])
            elif e > 1:
                parts.append(f"{self.sig.even[i]}^{e}")
        mm = mask
        while mm:
            j = (mm & -mm).bit_length() - 1
            mm &= mm - 1
            parts.append(self.sig.odd[j])
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for mono, c in self.sorted_terms():
            neg = isinstance(c, Fraction) and c < 0
            cs = format_scalar(-c if neg else c)
            if "sqrt" in cs:
                cs = f"({cs})"
            ms = self._mono_str(mono)
            body = cs if not ms else f"{cs}*{ms}"
            if not out:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(out)

    def __repr__(self) -> str:
        return f"SuperPoly({self})"


_TOKEN = re.compile(r"\s*(?:(?P<coeff>\((?:[^()]|\([^()]*\))*\)|\d+/\d+|\d+)"
                    r"|(?P<name>[A-Za-z][A-Za-z0-9]*)"
                    r"|(?P<pow>\^)"
                    r"|(?P<mul>\*)"
                    r"|(?P<sign>[+-]))")


def parse_poly(sig: Signature, text: str, jet: Optional[int] = None) -> SuperPoly:
    """Parse the canonical textual form produced by ``str(poly)``.

    Grammar: signed terms joined by + and -, each a '*'-product of an optional
    scalar (rational, or a parenthesized extension scalar) and generator
    powers written ``name`` or ``name^k``.
    """
    pos = 0
    out = SuperPoly.zero(sig, jet)
    sign = ONE
    cur: Optional[SuperPoly] = None

    def flush():
        nonlocal out, cur, sign
        if cur is not None:
            out = out + cur.scale(sign)
        cur = None
        sign = ONE

    last_name: Optional[str] = None
    expecting_power = False
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"cannot parse {text[pos:]!r}")
        pos = m.end()
        if m.group("sign"):
            flush()
            sign = ONE if m.group("sign") == "+" else -ONE
            last_name, expecting_power = None, False
        elif m.group("mul"):
            continue
        elif m.group("pow"):
            expecting_power = True
        elif m.group("coeff"):
            tok = m.group("coeff")
            if expecting_power:
                k = int(tok)
                if last_name is None:
                    raise ValueError("dangling power")
                base = SuperPoly.gen(sig, last_name, jet)
                for _ in range(k - 1):
                    cur = cur * base
                expecting_power, last_name = False, None
            else:
                c = parse_scalar(tok[1:-1]) if tok.startswith("(") else Fraction(tok)
                cur = SuperPoly.const(sig, c, jet) if cur is None else cur.scale(c)
        else:
            name = m.group("name")
            g = SuperPoly.gen(sig, name, jet)
            cur = g if cur is None else cur * g
            last_name = name
    flush()
    return out
