"""Batch verification harness.

Every check is a subcommand emitting JSON Lines (one CheckReport per check
plus a final summary object) or a plain-text transcript.  Exit codes:
0 all checks passed, 1 at least one failure, 2 usage or internal error.
Reports are deterministic for a fixed seed; pass ``--canonical`` to zero the
elapsed-time field so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field as dfield
from fractions import Fraction

from . import conformal, families, qforms
from .conformal import (ConformalContext, ck6_generators, s2_generators,
                        span_closure_check, axioms_check, fd_rank_check,
                        annihilation_graded_dims)
from .families import (AlgebraSpec, FamilyError, UnsupportedGradingError,
                       bracket_closure_check, codimension, e16_components,
                       graded_component, required_jet)
from .fields import h_bracket
from .forms import contact_form, symplectic_form
from .qforms import QuadraticForm, parse_form
from .sampling import random_field, random_poly
from .scalars import ONE, adjoin_sqrt, parse_scalar
from .superpoly import GradingType, SuperPoly, lambda_signature


@dataclass
class CheckReport:
    check_id: str
    params: dict
    status: str          # pass | fail | error
    expected: str = ""
    actual: str = ""
    seed: int = 0
    elapsed_ms: int = 0
    witnesses: list = dfield(default_factory=list)

    def as_dict(self, canonical: bool = False) -> dict:
        return {
            "actual": self.actual,
            "check_id": self.check_id,
            "elapsed_ms": 0 if canonical else self.elapsed_ms,
            "expected": self.expected,
            "params": {k: str(v) for k, v in sorted(self.params.items())},
            "seed": self.seed,
            "status": self.status,
            "witnesses": [str(w) for w in self.witnesses],
        }


class Harness:
    def __init__(self, args):
        self.args = args
        self.reports: list[CheckReport] = []

    def run_check(self, check_id: str, params: dict, fn) -> CheckReport:
        t0 = time.monotonic()
        try:
            ok, expected, actual, witnesses = fn()
            status = "pass" if ok else "fail"
        except (FamilyError, UnsupportedGradingError, ValueError) as exc:
            status, expected, actual, witnesses = "error", "", repr(exc), []
        rep = CheckReport(check_id, params, status, str(expected), str(actual),
                          self.args.seed, int(1000 * (time.monotonic() - t0)),
                          witnesses if status != "pass" else [])
        self.reports.append(rep)
        return rep

    def emit(self) -> int:
        canonical = self.args.canonical
        out = sys.stdout
        counts = {"pass": 0, "fail": 0, "error": 0}
        for rep in self.reports:
            counts[rep.status] += 1
            if self.args.out == "json":
                out.write(json.dumps(rep.as_dict(canonical), sort_keys=True)
                          + "\n")
            else:
                mark = {"pass": "PASS", "fail": "FAIL", "error": "ERROR"}[rep.status]
                out.write(f"{mark} {rep.check_id} expected={rep.expected} "
                          f"actual={rep.actual}\n")
                for w in rep.witnesses[:5]:
                    out.write(f"      witness: {w}\n")
        summary = {"checks": len(self.reports), **counts}
        if self.args.out == "json":
            out.write(json.dumps({"summary": summary}, sort_keys=True) + "\n")
        else:
            out.write(f"summary: {summary}\n")
        if counts["error"]:
            return 2
        return 0 if counts["fail"] == 0 else 1


def _grading(spec: AlgebraSpec, name: str) -> GradingType:
    if name == "principal":
        return spec.principal_type()
    if name == "subprincipal":
        return spec.subprincipal_type()
    ew, ow = name.split("|")
    return GradingType(tuple(int(x) for x in ew.split(",")),
                       tuple(int(x) for x in ow.split(",")))


def _spec(args) -> AlgebraSpec:
    gram = None
    if getattr(args, "q", None):
        gram = tuple(tuple(r) for r in parse_form(args.q).gram)
    beta = Fraction(args.beta) if getattr(args, "beta", None) else None
    return AlgebraSpec(args.family, args.m, args.n, beta=beta, gram=gram)


# ---------------------------------------------------------------------------
# table of closed-form dimensions for the conventional gradings
# ---------------------------------------------------------------------------

def expected_dims(spec: AlgebraSpec, t: GradingType) -> dict[int, tuple[int, int]]:
    """Closed-form (even|odd) dimensions of g_0, g_-1 (and g_-2 for depth-2
    gradings) for the registered grading of each family."""
    m, n = spec.m, spec.n
    fam = spec.family
    if fam == "S" and (m, n) == (1, 2) and t == GradingType((2,), (1, 1)):
        return {0: (4, 0), -1: (0, 4), -2: (1, 0)}
    if fam == "SHO" and (m, n) == (3, 3) and t == GradingType((2, 2, 2), (1, 1, 1)):
        return {0: (8, 0), -1: (0, 6), -2: (3, 0)}
    if t != spec.principal_type():
        raise FamilyError("no registered closed form for this grading")
    if fam == "W":
        return {0: (m * m + n * n, 2 * m * n), -1: (m, n)}
    if fam == "S":
        return {0: (m * m + n * n - 1, 2 * m * n), -1: (m, n)}
    if fam == "H":
        k = m // 2
        return {0: (k * (2 * k + 1) + n * (n - 1) // 2, 2 * k * n), -1: (m, n)}
    if fam == "K":
        k = m // 2
        return {0: (k * (2 * k + 1) + n * (n - 1) // 2 + 1, 2 * k * n),
                -1: (m - 1, n), -2: (1, 0)}
    if fam == "HO":
        return {0: (n * n, n * n), -1: (n, n)}
    if fam in ("SHO", "SHO~"):
        return {0: (n * n - 1, n * n), -1: (n, n)}
    if fam == "KO":
        return {0: (m * m + 1, m * m), -1: (m, m), -2: (0, 1)}
    if fam in ("SKO", "SKO~"):
        if fam == "SKO" and spec.beta in (0, 1):
            raise FamilyError("no registered closed form at beta in {0, 1}")
        return {0: (m * m, m * m), -1: (m, m), -2: (0, 1)}
    if fam == "E16":
        return {0: (16, 0), -1: (0, 6), -2: (1, 0)}
    raise FamilyError(f"no registered dims for {fam}")


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def cmd_jacobi(h: Harness, args) -> None:
    rng = random.Random(args.seed)
    jet = args.trunc
    if args.bracket == "vf":
        sig = lambda_signature(args.m, args.n)

        def body():
            bad = []
            for trial in range(args.samples):
                px, py, pz = (rng.randrange(2) for _ in range(3))
                x = random_field(rng, sig, jet, px)
                y = random_field(rng, sig, jet, py)
                z = random_field(rng, sig, jet, pz)
                s = -1 if px and py else 1
                lhs = x.bracket(y.bracket(z))
                rhs = x.bracket(y).bracket(z) + y.bracket(x.bracket(z)).scale(s)
                if args.corrupt:
                    lhs = lhs + x
                if not (lhs - rhs).is_zero():
                    bad.append(f"trial {trial}: residual {(lhs - rhs)}")
                    if len(bad) >= 3:
                        break
            return (not bad, "jacobi residual 0",
                    "all zero" if not bad else f"{len(bad)}+ residuals", bad)

        h.run_check("jacobi-vf", {"family": "W", "m": args.m, "n": args.n,
                                  "samples": args.samples, "trunc": jet}, body)
    else:
        k, n = args.m // 2, args.n
        sig = lambda_signature(2 * k, n)

        def body():
            bad = []
            for trial in range(args.samples):
                pf, pg, ph = (rng.randrange(2) for _ in range(3))
                f = random_poly(rng, sig, jet, pf)
                g = random_poly(rng, sig, jet, pg)
                w = random_poly(rng, sig, jet, ph)
                s = -1 if pf and pg else 1
                lhs = h_bracket(f, h_bracket(g, w, k, n), k, n)
                rhs = h_bracket(h_bracket(f, g, k, n), w, k, n) + \
                    h_bracket(g, h_bracket(f, w, k, n), k, n).scale(s)
                if args.corrupt:
                    lhs = lhs + SuperPoly.gen(sig, "x1", jet)
                if not (lhs - rhs).is_zero():
                    bad.append(f"trial {trial}: residual {(lhs - rhs)}")
                    if len(bad) >= 3:
                        break
            return (not bad, "jacobi residual 0",
                    "all zero" if not bad else f"{len(bad)}+ residuals", bad)

        h.run_check("jacobi-h", {"family": "H", "m": args.m, "n": args.n,
                                 "samples": args.samples, "trunc": jet}, body)


def cmd_table1(h: Harness, args) -> None:
    spec = _spec(args)
    t = _grading(spec, args.type)

    def body():
        expect = expected_dims(spec, t)
        degrees = [args.degree] if args.degree is not None else sorted(expect)
        got, want = {}, {}
        for j in degrees:
            want[j] = expect[j]
            got[j] = graded_component(spec, t, j).dims
        if args.corrupt:
            got[degrees[0]] = (got[degrees[0]][0] + 1, got[degrees[0]][1])
        ok = got == want
        wit = [f"degree {j}: got {got[j]} want {want[j]}"
               for j in degrees if got[j] != want[j]]
        return ok, str(want), str(got), wit

    h.run_check("table1", {"family": args.family, "m": args.m, "n": args.n,
                           "beta": args.beta or "", "type": args.type}, body)


def cmd_subalgebra(h: Harness, args) -> None:
    spec = _spec(args)
    t = _grading(spec, args.type)

    def body():
        rep = bracket_closure_check(spec, t, args.jmax, corrupt=args.corrupt)
        cod = codimension(spec, t)
        actual = f"closure={'ok' if rep.ok else 'violated'} codim={cod} dims={rep.dims}"
        return rep.ok, "closure=ok", actual, rep.violations[:5]

    h.run_check("subalgebra", {"family": args.family, "m": args.m, "n": args.n,
                               "beta": args.beta or "", "type": args.type,
                               "jmax": args.jmax}, body)


def cmd_conformal_axioms(h: Harness, args) -> None:
    ctx = ConformalContext(args.N, parse_form(args.q).gram if args.q
                           else QuadraticForm.identity(args.N).gram)
    modes = (["sesquilinearity", "skew", "jacobi"] if args.mode == "all"
             else [args.mode])
    for mode in modes:
        def body(mode=mode):
            rep = axioms_check(ctx, mode, samples=args.samples,
                               seed=args.seed, corrupt=args.corrupt)
            return (rep.ok, f"{mode} holds",
                    f"checked {rep.checked} triples", rep.witnesses[:5])

        h.run_check(f"conformal-{mode}", {"N": args.N, "q": args.q or "I",
                                          "samples": args.samples}, body)


def cmd_ck6(h: Harness, args) -> None:
    q = parse_form(args.q) if args.q else QuadraticForm.identity(6)
    ctx = ConformalContext(6, q.gram)

    def body():
        if args.alpha:
            alpha = parse_scalar(args.alpha)
        else:
            _, alpha = adjoin_sqrt(-1 / ctx.det)
        gens = ck6_generators(ctx, alpha)
        if args.corrupt:
            gens = list(gens)
            gens[3] = conformal.ConformalVector.mono(3)
        if not fd_rank_check(gens, 3):
            return False, "32 independent generators", "rank deficient", []
        rep = span_closure_check(ctx, gens)
        return (rep.ok, "span closed under bracket",
                f"checked {rep.checked} coefficients, window {rep.window}",
                rep.witnesses[:5])

    h.run_check("ck6-closure", {"q": args.q or "I", "alpha": args.alpha or "auto"},
                body)


def cmd_s2(h: Harness, args) -> None:
    q = parse_form(args.q) if args.q else QuadraticForm.identity(4)
    ctx = ConformalContext(4, q.gram)

    def body():
        if args.beta:
            beta = parse_scalar(args.beta)
        else:
            _, beta = adjoin_sqrt(1 / ctx.det)
        gens = s2_generators(ctx, beta)
        if args.corrupt:
            gens = list(gens)
            gens[2] = conformal.ConformalVector.mono(3)
        rep = span_closure_check(ctx, gens)
        return (rep.ok, "span closed under bracket",
                f"checked {rep.checked} coefficients, window {rep.window}",
                rep.witnesses[:5])

    h.run_check("s2-closure", {"q": args.q or "I", "beta": args.beta or "auto"},
                body)


def cmd_hodge(h: Harness, args) -> None:
    q = parse_form(args.q) if args.q else QuadraticForm.identity(args.N)
    ctx = ConformalContext(args.N, q.gram)

    def body():
        n = ctx.n
        sign = Fraction(-1 if (n * (n - 1) // 2) % 2 else 1)
        bad = []
        for mask in range(1 << n):
            twice = conformal.hodge_star_element(ctx, conformal.hodge_star(ctx, mask))
            want = {mask: sign * ctx.det}
            if args.corrupt:
                want = {mask: -sign * ctx.det}
            if twice != want:
                bad.append(f"mask {mask:b}: {twice} != {want}")
        return (not bad, "(a*)* = (-1)^(N(N-1)/2) det(q) a",
                f"checked {1 << n} wedges", bad[:5])

    h.run_check("hodge", {"N": args.N, "q": args.q or "I"}, body)


def cmd_annihilation(h: Harness, args) -> None:
    q = parse_form(args.q) if args.q else QuadraticForm.identity(args.N)
    spec = AlgebraSpec("K", 1, args.N, gram=tuple(tuple(r) for r in q.gram))
    t = spec.principal_type()
    degrees = list(range(args.dmin, args.dmax + 1))

    def body():
        mode_dims = annihilation_graded_dims(args.N, degrees, trunc=args.modes)
        field_dims = {j: graded_component(spec, t, j).dims for j in degrees}
        if args.corrupt:
            field_dims[degrees[0]] = (field_dims[degrees[0]][0] + 1, 0)
        bad = [f"degree {j}: modes {mode_dims[j]} vs fields {field_dims[j]}"
               for j in degrees if mode_dims[j] != field_dims[j]]
        return (not bad, str(mode_dims), str(field_dims), bad)

    h.run_check("annihilation-compare",
                {"N": args.N, "q": args.q or "I", "degrees": f"{args.dmin}..{args.dmax}"},
                body)


def cmd_forms(h: Harness, args) -> None:
    if args.action == "count":
        def body():
            got = qforms.real_form_count(args.family, args.n)
            if args.family in ("H", "K"):
                want = args.n // 2 + 1
            else:
                want = 2
            return got == want, str(want), str(got), []

        h.run_check("forms-count", {"family": args.family, "n": args.n or ""},
                    body)
    elif args.action == "exists":
        def body():
            q = parse_form(args.q)
            ok, reason = qforms.exists_form(args.family, q, args.field)
            return True, "decided", f"{ok} ({reason})", []

        h.run_check("forms-exists", {"family": args.family, "q": args.q,
                                     "field": args.field}, body)
    elif args.action == "signature":
        def body():
            q = parse_form(args.q)
            s = qforms.signature(q)
            return True, "computed", f"({s.positives},{s.negatives})", []

        h.run_check("forms-signature", {"q": args.q}, body)
    else:
        def body():
            q1, q2 = parse_form(args.q), parse_form(args.q2)
            return True, "decided", str(qforms.scalar_equiv_real(q1, q2)), []

        h.run_check("forms-equiv", {"q": args.q, "q2": args.q2}, body)


def cmd_pullback(h: Harness, args) -> None:
    lams = [Fraction(x) for x in args.lams.split(",")]

    def body():
        bad = []
        for lam in lams:
            for k in (1, 2):
                for n in (1, 2):
                    gram = [[ONE if i == j else Fraction(0) for j in range(n)]
                            for i in range(n)]
                    lgram = [[lam * x for x in row] for row in gram]
                    fs, sig_l = symplectic_form(k, n, lgram, args.trunc)
                    _, sig_1 = symplectic_form(k, n, gram, args.trunc)
                    ge = [[lam if i == j and i < k else (ONE if i == j else Fraction(0))
                           for j in range(2 * k)] for i in range(2 * k)]
                    go = [[ONE if i == j else Fraction(0) for j in range(n)]
                          for i in range(n)]
                    got = fs.pullback(ge, go, sig_l)
                    if not (got - sig_1.scale(lam)).is_zero():
                        bad.append(f"symplectic lam={lam} k={k} n={n}")
                    fs2, con_l = contact_form(k, n, lgram, args.trunc)
                    _, con_1 = contact_form(k, n, gram, args.trunc)
                    m = 2 * k + 1
                    ge2 = [[Fraction(0)] * m for _ in range(m)]
                    for i in range(m):
                        ge2[i][i] = lam if i <= k else ONE
                    got2 = fs2.pullback(ge2, go, con_l)
                    if not (got2 - con_1.scale(lam)).is_zero():
                        bad.append(f"contact lam={lam} k={k} n={n}")
        if args.corrupt:
            bad.append("corrupted")
        return (not bad, "pullback is an exact scalar multiple",
                "all multiples exact" if not bad else "mismatch", bad)

    h.run_check("pullback-check", {"lams": args.lams, "trunc": args.trunc}, body)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trunc", type=int, default=4, help="jet order")
    common.add_argument("--samples", type=int, default=200)
    common.add_argument("--out", choices=("json", "text"), default="json")
    common.add_argument("--modes", type=int, default=4,
                        help="annihilation mode truncation")
    common.add_argument("--canonical", action="store_true",
                        help="zero timing fields for byte-identical reports")
    common.add_argument("--corrupt", action="store_true",
                        help="negative control: force a failing check")
    p = argparse.ArgumentParser(
        prog="superlie",
        description="exact verification harness for the superalgebra families")
    sub = p.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    def family_args(sp, need_type=True):
        sp.add_argument("--family", required=True)
        sp.add_argument("--m", type=int, required=True)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--beta")
        sp.add_argument("--q")
        if need_type:
            sp.add_argument("--type", default="principal",
                            help="principal | subprincipal | a1,..|b1,..")

    sp = add_parser("jacobi", help="super Jacobi identity on samples")
    sp.add_argument("--bracket", choices=("vf", "h"), default="vf")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(fn=cmd_jacobi)

    sp = add_parser("table1", help="graded component dimension table")
    family_args(sp)
    sp.add_argument("--degree", type=int, default=None)
    sp.set_defaults(fn=cmd_table1)

    sp = add_parser("subalgebra", help="closure + codimension of a family")
    family_args(sp)
    sp.add_argument("--jmax", type=int, default=2)
    sp.set_defaults(fn=cmd_subalgebra)

    sp = add_parser("conformal-axioms")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--q")
    sp.add_argument("--mode", default="all",
                    choices=("all", "sesquilinearity", "skew", "jacobi"))
    sp.set_defaults(fn=cmd_conformal_axioms)

    sp = add_parser("ck6-closure")
    sp.add_argument("--q")
    sp.add_argument("--alpha")
    sp.set_defaults(fn=cmd_ck6)

    sp = add_parser("s2-closure")
    sp.add_argument("--q")
    sp.add_argument("--beta")
    sp.set_defaults(fn=cmd_s2)

    sp = add_parser("hodge")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--q")
    sp.set_defaults(fn=cmd_hodge)

    sp = add_parser("annihilation-compare")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--q")
    sp.add_argument("--dmin", type=int, default=-2)
    sp.add_argument("--dmax", type=int, default=3)
    sp.set_defaults(fn=cmd_annihilation)

    sp = add_parser("forms")
    sp.add_argument("action", choices=("count", "exists", "signature", "equiv"))
    sp.add_argument("--family", default="H")
    sp.add_argument("--n", type=int)
    sp.add_argument("--q")
    sp.add_argument("--q2")
    sp.add_argument("--field", default="Q", choices=("Q", "R"))
    sp.set_defaults(fn=cmd_forms)

    sp = add_parser("pullback-check")
    sp.add_argument("--lams", default="2,-3,1/5")
    sp.set_defaults(fn=cmd_pullback)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    h = Harness(args)
    try:
        args.fn(h, args)
    except (FamilyError, UnsupportedGradingError, qforms.FormError,
            ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return h.emit()


if __name__ == "__main__":
    sys.exit(main())
