"""Seeded random generators for property checks: same seed, same objects."""

from __future__ import annotations

import random
from fractions import Fraction

from .fields import VectorField
from .superpoly import Signature, SuperPoly


def random_poly(rng: random.Random, sig: Signature, jet: int,
                parity: int | None = None, terms: int = 3,
                max_exp: int = 2, coeff_range: int = 3) -> SuperPoly:
    """Sparse random element; optionally parity-homogeneous."""
    out: dict = {}
    for _ in range(terms):
        exps = tuple(rng.randrange(0, max_exp + 1) for _ in range(sig.n_even))
        mask = rng.randrange(0, 1 << sig.n_odd)
        if parity is not None and (mask.bit_count() & 1) != parity:
            continue
        c = rng.randrange(-coeff_range, coeff_range + 1)
        if c == 0:
            continue
        out[(exps, mask)] = out.get((exps, mask), Fraction(0)) + Fraction(c)
    return SuperPoly(sig, jet, out)


def random_field(rng: random.Random, sig: Signature, jet: int,
                 parity: int, terms: int = 2, max_exp: int = 2) -> VectorField:
    """Random parity-homogeneous vector field."""
    coeffs = []
    for slot in range(sig.n_even + sig.n_odd):
        want = parity if slot < sig.n_even else parity ^ 1
        coeffs.append(random_poly(rng, sig, jet, want, terms, max_exp))
    return VectorField(sig, coeffs)
