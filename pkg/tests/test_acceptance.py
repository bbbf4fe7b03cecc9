"""Acceptance suite: every desk-checkable claim, exact arithmetic throughout.

One criterion per test, one printed pass/fail line each (run with -v -s for
the full transcript).  Expected numbers are frozen literals derived from the
graded-module structure of each family; nothing is read back from the code
under test.
"""

import io
import json
import random
import time
from contextlib import redirect_stdout
from fractions import Fraction

from superlie.cli import main as cli_main
from superlie.conformal import (ConformalContext, annihilation_graded_dims,
                                axioms_check, ck6_generators, fd_rank_check,
                                hodge_star, hodge_star_element, s2_generators,
                                span_closure_check)
from superlie.families import (AlgebraSpec, bracket_closure_check,
                               codimension, e16_components, graded_component)
from superlie.fields import h_bracket
from superlie.forms import contact_form, symplectic_form
from superlie.qforms import real_form_count
from superlie.sampling import random_field, random_poly
from superlie.scalars import QuadExt, adjoin_sqrt
from superlie.superpoly import GradingType, lambda_signature


def report(num: int, desc: str, ok: bool) -> None:
    print(f"ACCEPTANCE {num:2d} [{'PASS' if ok else 'FAIL'}] {desc}")
    assert ok, f"criterion {num} failed: {desc}"


def ident(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


Q6_MINUS = tuple(tuple(Fraction(-1) if i == j == 5 else
                       Fraction(1 if i == j else 0) for j in range(6))
                 for i in range(6))


def test_criterion_01_bracket_axioms_jacobi():
    t0 = time.monotonic()
    jet = 4
    ok = True
    rng = random.Random(0)
    for (m, n) in ((2, 2), (1, 3)):
        sig = lambda_signature(m, n)
        for _ in range(200):
            px, py, pz = (rng.randrange(2) for _ in range(3))
            x = random_field(rng, sig, jet, px)
            y = random_field(rng, sig, jet, py)
            z = random_field(rng, sig, jet, pz)
            s = -1 if px and py else 1
            lhs = x.bracket(y.bracket(z))
            rhs = x.bracket(y).bracket(z) + y.bracket(x.bracket(z)).scale(s)
            ok = ok and (lhs - rhs).is_zero()
    for (k, n) in ((1, 2), (2, 1)):
        sig = lambda_signature(2 * k, n)
        for _ in range(200):
            pf, pg, ph = (rng.randrange(2) for _ in range(3))
            f = random_poly(rng, sig, jet, pf)
            g = random_poly(rng, sig, jet, pg)
            w = random_poly(rng, sig, jet, ph)
            s = -1 if pf and pg else 1
            lhs = h_bracket(f, h_bracket(g, w, k, n), k, n)
            rhs = h_bracket(h_bracket(f, g, k, n), w, k, n) + \
                h_bracket(g, h_bracket(f, w, k, n), k, n).scale(s)
            ok = ok and (lhs - rhs).is_zero()
    elapsed = time.monotonic() - t0
    ok = ok and elapsed < 60
    report(1, f"super Jacobi, 200 triples each for W(2,2), W(1,3) and the "
              f"quotient bracket of H(2,2), H(4,1) at jet 4 ({elapsed:.1f}s)",
           ok)


TABLE1 = [
    (AlgebraSpec("W", 1, 2), "principal", {0: (5, 4), -1: (1, 2)}),
    (AlgebraSpec("W", 2, 1), "principal", {0: (5, 4), -1: (2, 1)}),
    (AlgebraSpec("S", 2, 1), "principal", {0: (4, 4), -1: (2, 1)}),
    (AlgebraSpec("S", 1, 2), GradingType((2,), (1, 1)),
     {0: (4, 0), -1: (0, 4), -2: (1, 0)}),
    (AlgebraSpec("H", 2, 2), "principal", {0: (4, 4), -1: (2, 2)}),
    (AlgebraSpec("H", 4, 1), "principal", {0: (10, 4), -1: (4, 1)}),
    (AlgebraSpec("K", 1, 6), "principal",
     {0: (16, 0), -1: (0, 6), -2: (1, 0)}),
    (AlgebraSpec("K", 3, 2), "principal",
     {0: (5, 4), -1: (2, 2), -2: (1, 0)}),
    (AlgebraSpec("HO", 3, 3), "principal", {0: (9, 9), -1: (3, 3)}),
    (AlgebraSpec("SHO", 3, 3), GradingType((2, 2, 2), (1, 1, 1)),
     {0: (8, 0), -1: (0, 6), -2: (3, 0)}),
    (AlgebraSpec("KO", 2, 3), "principal",
     {0: (5, 4), -1: (2, 2), -2: (0, 1)}),
    (AlgebraSpec("SKO", 2, 3, beta=Fraction(2)), "principal",
     {0: (4, 4), -1: (2, 2), -2: (0, 1)}),
    (AlgebraSpec("SHO~", 4, 4), "principal", {0: (15, 16), -1: (4, 4)}),
    (AlgebraSpec("SKO~", 3, 4), "principal",
     {0: (9, 9), -1: (3, 3), -2: (0, 1)}),
]


def _grading_of(spec, tname):
    return spec.principal_type() if tname == "principal" else tname


def test_criterion_02_table1_dimensions():
    bad = []
    for spec, tname, expect in TABLE1:
        t = _grading_of(spec, tname)
        got = {j: graded_component(spec, t, j).dims for j in expect}
        if got != expect:
            bad.append(f"{spec.family}({spec.m},{spec.n}): {got} != {expect}")
    report(2, f"g_0/g_-1 dimension table, {len(TABLE1)} families"
              + (f"; mismatches: {bad}" if bad else ""), not bad)


def test_criterion_03_codimensions():
    sko = AlgebraSpec("SKO", 2, 3, beta=Fraction(7, 3))
    w12 = AlgebraSpec("W", 1, 2)
    ok = (codimension(sko, sko.principal_type()) == (2, 3)
          and codimension(sko, sko.subprincipal_type()) == (2, 2)
          and codimension(w12, w12.principal_type()) == (1, 2))
    report(3, "codimensions: SKO(2,3;b) principal (2|3), subprincipal (2|2); "
              "W(1,2) principal (1|2)", ok)


def test_criterion_04_bracket_closure_all_families():
    t0 = time.monotonic()
    bad = []
    for spec, tname, _ in TABLE1:
        t = _grading_of(spec, tname)
        rep = bracket_closure_check(spec, t, 2)
        if not rep.ok:
            bad.append(f"{spec.family}({spec.m},{spec.n}): "
                       f"{rep.violations[:2]}")
    e16 = AlgebraSpec("E16", 1, 6, gram=Q6_MINUS)
    rep = bracket_closure_check(e16, e16.principal_type(), 2)
    if not rep.ok:
        bad.append(f"E16: {rep.violations[:2]}")
    corrupted = bracket_closure_check(AlgebraSpec("H", 2, 2),
                                      AlgebraSpec("H", 2, 2).principal_type(),
                                      2, corrupt=True)
    if corrupted.ok:
        bad.append("negative control not flagged")
    report(4, f"bracket closure to degree 2 for all 15 constructed families "
              f"+ corrupted control flagged ({time.monotonic() - t0:.0f}s)",
           not bad)


def test_criterion_05_e16_generation():
    spec = AlgebraSpec("E16", 1, 6, gram=Q6_MINUS)
    comps = e16_components(spec, 1)
    got = {j: c.dims for j, c in comps.items()}
    want = {-2: (1, 0), -1: (0, 6), 0: (16, 0), 1: (0, 16)}
    report(5, f"E(1,6) generated inside the contact family of "
              f"diag(1,1,1,1,1,-1) with alpha = 1: degree dims {got}",
           got == want)


def test_criterion_06_conformal_axioms():
    t0 = time.monotonic()
    ok = True
    for n in (1, 2, 3, 4):
        grams = [ident(n)]
        diag2 = [[2 if i == j == 0 else (1 if i == j else 0)
                  for j in range(n)] for i in range(n)]
        grams.append(diag2)
        for gram in grams:
            ctx = ConformalContext(n, gram)
            for mode in ("sesquilinearity", "skew", "jacobi"):
                rep = axioms_check(ctx, mode, samples=10 ** 9)
                ok = ok and rep.ok and rep.checked == (1 << n) ** (
                    3 if mode == "jacobi" else 2)
    ctx6 = ConformalContext(6, ident(6))
    rep = axioms_check(ctx6, "jacobi", samples=500, seed=0)
    ok = ok and rep.ok and rep.checked == 500
    elapsed = time.monotonic() - t0
    ok = ok and elapsed < 600
    report(6, f"conformal axioms exhaustive for N in 1..4 (two Gram forms), "
              f"500 seeded Jacobi triples at N = 6 ({elapsed:.0f}s)", ok)


def test_criterion_07_hodge_involution():
    ok = True
    for n in (4, 6):
        sign = Fraction(-1 if (n * (n - 1) // 2) % 2 else 1)
        grams = [ident(n),
                 [[2 if i == j == 0 else (1 if i == j else 0)
                   for j in range(n)] for i in range(n)],
                 [[-1 if i == j == n - 1 else (1 if i == j else 0)
                   for j in range(n)] for i in range(n)]]
        for gram in grams:
            ctx = ConformalContext(n, gram)
            for mask in range(1 << n):
                out = hodge_star_element(ctx, hodge_star(ctx, mask))
                ok = ok and out == {mask: sign * ctx.det}
    report(7, "Hodge involution (a*)* = (-1)^(N(N-1)/2) det(q) a, "
              "exhaustive for N in {4,6}, three Gram forms each", ok)


def test_criterion_08_ck6_and_s2_closure():
    t0 = time.monotonic()
    ok = True
    # CK6 over Q with q = diag(1,1,1,1,1,-1), alpha = 1
    ctx = ConformalContext(6, [list(r) for r in Q6_MINUS])
    gens = ck6_generators(ctx, Fraction(1))
    ok = ok and len(gens) == 32 and fd_rank_check(gens, 3)
    ok = ok and span_closure_check(ctx, gens).ok
    # both signs of alpha close (recorded, no isomorphism claim)
    ok = ok and span_closure_check(ctx, ck6_generators(ctx, Fraction(-1))).ok
    # CK6 over Q(i) with q = I6
    ctxI = ConformalContext(6, ident(6))
    ok = ok and span_closure_check(ctxI,
                                   ck6_generators(ctxI, QuadExt(0, 1, -1))).ok
    # S2 over Q with q = I4, beta = 1
    ctx4 = ConformalContext(4, ident(4))
    g2 = s2_generators(ctx4, Fraction(1))
    ok = ok and len(g2) == 11 and span_closure_check(ctx4, g2).ok
    # S2 over Q(sqrt 2) with q = diag(2,1,1,1)
    ctx42 = ConformalContext(4, [[2, 0, 0, 0], [0, 1, 0, 0],
                                 [0, 0, 1, 0], [0, 0, 0, 1]])
    _, root2 = adjoin_sqrt(2)
    ok = ok and span_closure_check(ctx42, s2_generators(ctx42, root2 / 2)).ok
    report(8, f"32-generator and 11-generator span closures over Q, Q(i), "
              f"Q(sqrt 2) ({time.monotonic() - t0:.0f}s)", ok)


def test_criterion_09_annihilation_comparison():
    ok = True
    degrees = range(-2, 4)
    for n in (2, 4):
        mode_dims = annihilation_graded_dims(n, degrees)
        spec = AlgebraSpec("K", 1, n)
        t = spec.principal_type()
        field_dims = {j: graded_component(spec, t, j).dims for j in degrees}
        ok = ok and mode_dims == field_dims
    report(9, "annihilation-algebra mode dimensions equal contact-family "
              "component dimensions, degrees -2..3, N in {2,4}", ok)


def test_criterion_10_real_form_counts():
    ok = all(real_form_count("H", n) == n // 2 + 1 for n in range(1, 11))
    ok = ok and all(real_form_count("K", n) == n // 2 + 1
                    for n in range(1, 11))
    ok = ok and real_form_count("E16") == 2 and real_form_count("S12") == 2
    report(10, "real-form counts: floor(n/2)+1 for H/K (n = 1..10), "
               "2 for the six- and four-variable twisted families", ok)


def test_criterion_11_scaling_isomorphism():
    ok = True
    jet = 4
    for lam in (Fraction(2), Fraction(-3), Fraction(1, 5)):
        for k in (1, 2):
            for n in (1, 2):
                gram = ident(n)
                lgram = [[lam * x for x in row] for row in gram]
                fs, sig_l = symplectic_form(k, n, lgram, jet)
                _, sig_1 = symplectic_form(k, n, gram, jet)
                ge = [[lam if (i == j and i < k) else (1 if i == j else 0)
                       for j in range(2 * k)] for i in range(2 * k)]
                go = ident(n)
                ok = ok and fs.pullback(ge, go, sig_l) == sig_1.scale(lam)
                fs2, con_l = contact_form(k, n, lgram, jet)
                _, con_1 = contact_form(k, n, gram, jet)
                m = 2 * k + 1
                ge2 = [[lam if (i == j and i <= k) else (1 if i == j else 0)
                        for j in range(m)] for i in range(m)]
                ok = ok and fs2.pullback(ge2, go, con_l) == con_1.scale(lam)
    report(11, "pullback of the lam-scaled symplectic/contact form under the "
               "t, p -> lam-scaled variables is exactly lam times the "
               "unscaled form, lam in {2, -3, 1/5}, k, n in {1, 2}", ok)


def test_criterion_12_determinism():
    args = ["conformal-axioms", "--N", "3", "--samples", "60", "--seed", "11",
            "--canonical"]
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        with redirect_stdout(buf):
            code = cli_main(list(args))
        assert code == 0
        outs.append(buf.getvalue())
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    for line in outs[0].strip().splitlines():
        json.loads(line)
    report(12, "identical seeds produce byte-identical canonical JSON "
               "reports", ok)
