"""Command-line interface: exact computations and verification sweeps.

Exit codes: 0 success, 1 verification failure, 2 usage error.  Reports are
deterministic: the same command line (and seed) produces byte-identical
output.

Conventions surfaced here: basis colors are 1-based; the torus pairing of
colors k and m is the quantum integer [k*m]; a slope argument P/Q denotes
the (p', q') curve; SL(2,Z) words act so that the row vector (0, 1) lands
on +-(p', q').
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .cyclotomic import get_context
from .nctorus import CycloRing, LaurentRing, kernel_compare, nc_cosine
from .observables import c_matrix, pairing_form, pairing_form_expanded, s_matrix_op
from .tqft import bracket_S, c_bracket, lemma_check, neg_cfrac, sl2_word_check
from . import verify as verify_mod


def _emit_json(payload) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


def _pretty_cyclo(elem) -> str:
    approx = elem.to_complex()
    return f"{elem._pretty()}   (~ {approx.real:+.6f}{approx.imag:+.6f}i)"


def _pretty_scalar(scalar) -> str:
    c = scalar.canonical()
    x = " * X" if c.xpow else ""
    approx = scalar.to_complex()
    return (f"{c.value._pretty()}{x}   "
            f"(~ {approx.real:+.6f}{approx.imag:+.6f}i)")


def _pretty_matrix(mat) -> str:
    cells = [[_pretty_scalar(e).split("   ")[0] for e in row]
             for row in mat.rows]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)


def _level(args, parser) -> int:
    if args.level is None:
        parser.error("this operation needs -r/--level")
    levels = verify_mod.parse_levels(args.level)
    if len(levels) != 1:
        parser.error("this operation takes a single level")
    if levels[0] < 3:
        parser.error("level must be at least 3")
    return levels[0]


def _parse_slope(text, parser):
    try:
        num, den = text.split("/")
        return int(num), int(den)
    except ValueError:
        parser.error(f"slope must look like P/Q, got {text!r}")


# ----------------------------------------------------------------------
# compute

def cmd_compute(args, parser) -> int:
    ctx = None
    if args.operation in {"c-matrix", "s-matrix-op", "pairing-form",
                          "bracket", "lemma", "kernel-compare"}:
        ctx = get_context(_level(args, parser))
    fmt = args.format
    op = args.operation
    if op == "c-matrix":
        mat = c_matrix(ctx, args.p, args.q)
        if fmt == "pretty":
            print(_pretty_matrix(mat))
        else:
            _emit_json(mat.to_json())
    elif op == "s-matrix-op":
        mat = s_matrix_op(ctx, args.p, args.q)
        if fmt == "pretty":
            print(_pretty_matrix(mat))
        else:
            _emit_json(mat.to_json())
    elif op == "pairing-form":
        _require_colors(ctx, parser, args.k, args.m)
        two = pairing_form(ctx, args.p, args.q, args.k, args.m)
        four = pairing_form_expanded(ctx, args.p, args.q, args.k, args.m)
        if fmt == "pretty":
            print(_pretty_cyclo(two))
        else:
            _emit_json({"two_term": two.to_json(),
                        "four_term": four.to_json(),
                        "equal": two == four})
    elif op == "bracket":
        _require_colors(ctx, parser, args.k, args.m)
        got = c_bracket(ctx, args.p, args.q, args.k, args.m)
        want = pairing_form(ctx, args.p, args.q, args.k, args.m)
        if fmt == "pretty":
            print(_pretty_cyclo(got))
            print("matches closed form:", got == want)
        else:
            _emit_json({"bracket": got.to_json(),
                        "closed_form": want.to_json(),
                        "match": got == want})
    elif op == "lemma":
        if len(args.ints) != 5:
            parser.error("lemma takes five integers a b c d e")
        lhs, rhs, equal = lemma_check(ctx, *args.ints)
        if fmt == "pretty":
            print("lhs:", _pretty_cyclo(lhs))
            print("rhs:", _pretty_cyclo(rhs))
            print("equal:", equal)
        else:
            _emit_json({"lhs": lhs.to_json(), "rhs": rhs.to_json(),
                        "equal": equal})
    elif op == "cfrac":
        if len(args.ints) != 2:
            parser.error("cfrac takes two integers p' q'")
        pp, qq = args.ints
        if pp == 0 or qq == 0 or math.gcd(abs(pp), abs(qq)) != 1:
            parser.error("cfrac needs a coprime pair with both entries nonzero")
        cf = neg_cfrac(pp, qq)
        payload = {"pp": pp, "qq": qq, "terms": list(cf.terms),
                   "value": [cf.value().numerator, cf.value().denominator],
                   "sl2_ok": sl2_word_check(cf, pp, qq)}
        if fmt == "pretty":
            print(list(cf.terms))
        else:
            _emit_json(payload)
    elif op == "nc-cosine":
        if args.level is not None:
            ring = CycloRing(get_context(_level(args, parser)))
        else:
            ring = LaurentRing()
        word = nc_cosine(ring, args.p, args.q)
        _emit_json(word.to_json())
    elif op == "kernel-compare":
        if args.N is None or args.N < 0:
            parser.error("kernel-compare needs a nonnegative -N")
        _emit_json(kernel_compare(ctx, args.N))
    return 0


def _require_colors(ctx, parser, *colors):
    for c in colors:
        if not (1 <= c <= ctx.r - 1):
            parser.error(f"color {c} outside the basis range 1..{ctx.r - 1}")


# ----------------------------------------------------------------------
# jones and lemma-scan

def cmd_jones(args, parser) -> int:
    ctx = get_context(_level(args, parser))
    pp, qq = _parse_slope(args.slope, parser)
    if (pp, qq) == (0, 0) or math.gcd(abs(pp), abs(qq)) != 1:
        parser.error("slope must be a coprime pair")
    _require_colors(ctx, parser, args.k, args.m)
    bracket = bracket_S(ctx, pp, qq, args.color, args.k, args.m)
    mat = s_matrix_op(ctx, args.color * pp, args.color * qq)
    closed = ctx.scalar(0)
    for j in range(1, ctx.r):
        entry = mat.rows[j - 1][args.k - 1]
        if not entry.is_zero:
            closed = closed + entry * ctx.qint(j * args.m)
    closed_elem = closed.canonical()
    match = bracket == closed
    if args.format == "pretty":
        print("bracket:    ", _pretty_scalar(bracket))
        print("closed form:", _pretty_scalar(closed_elem))
        print("match:", match)
    else:
        _emit_json({"bracket": bracket.to_json(),
                    "closed_form": closed_elem.value.to_json(),
                    "match": match})
    return 0


def cmd_lemma_scan(args, parser) -> int:
    rows = verify_mod.lemma_scan_rows(args.level, rng=args.range,
                                      jobs=args.jobs)
    if args.format == "json":
        _emit_json({"rows": [list(row) for row in rows]})
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["r", "a", "b", "c", "d", "e", "equal"])
        for row in rows:
            writer.writerow(list(row[:6]) + [int(row[6])])
        sys.stdout.write(buf.getvalue())
    return 0


# ----------------------------------------------------------------------
# verify

def cmd_verify(args, parser) -> int:
    suite = args.suite
    jobs = args.jobs
    reports = []
    if suite == "product-to-sum":
        reports.append(verify_mod.sweep_product_to_sum(
            args.level or "3..8", bound=args.bound or 4, jobs=jobs))
    elif suite == "thm2-consistency":
        reports.append(verify_mod.sweep_action_pairing(
            args.level or "3..8", bound=args.bound or 6))
    elif suite == "pipeline-vs-closed-form":
        reports.append(verify_mod.sweep_pipeline(
            args.level or "3..5", slope_bound=args.slope_bound or 5,
            d_max=args.d_max or 3, jobs=jobs))
    elif suite == "lemma-scan":
        scan = verify_mod.sweep_lemma_scan(
            args.level or "3..6", rng=args.range or 3, jobs=jobs)
        hard_levels = [r for r in verify_mod.parse_levels(args.level or "3..6")
                       if r <= 6]
        hard = verify_mod.sweep_pipeline(
            hard_levels, slope_bound=min(args.slope_bound or 3, 3),
            d_max=args.d_max or 3, jobs=jobs, with_oracle=False)
        hard.suite = "lemma-scan-hard"
        reports.extend([scan, hard])
    elif suite == "nc-torus":
        reports.append(verify_mod.sweep_clock_shift(
            args.level or "3..6", bound=args.bound or 4, jobs=jobs))
        reports.append(verify_mod.sweep_rep_homomorphism(
            args.level or "3..6", bound=args.bound or 4, jobs=jobs))
    elif suite == "associativity":
        reports.append(verify_mod.sweep_star_associativity(
            count=args.count, seed=args.seed, bound=args.bound or 5))
    elif suite == "cfrac":
        reports.append(verify_mod.sweep_cfrac(bound=args.bound or 12))
    elif suite == "reduction-oracle":
        reports.append(verify_mod.sweep_reduction_oracle(
            args.level or "3..8"))
    else:
        parser.error(f"unknown suite {suite!r}")

    ok = all(rep.ok for rep in reports)
    if args.format == "pretty":
        for rep in reports:
            status = "pass" if rep.ok else "FAIL"
            print(f"[{status}] {rep.suite}: {rep.total} checks, "
                  f"{len(rep.failures)} failures ({rep.params})")
            for failure in rep.failures[:20]:
                print("   ", json.dumps(failure, sort_keys=True))
            if rep.info:
                print("    info:", json.dumps(rep.info, sort_keys=True))
    else:
        _emit_json({"ok": ok, "reports": [rep.to_json() for rep in reports]})
    return 0 if ok else 1


# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtorus",
        description="Exact computations in the quantized algebra of "
                    "torus observables at a root of unity.",
        epilog="Colors are 1-based basis indices; the torus pairing of "
               "colors k and m is the quantum integer [k*m].")
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compute", help="compute one exact quantity")
    pc.add_argument("operation", choices=[
        "c-matrix", "s-matrix-op", "pairing-form", "bracket", "lemma",
        "cfrac", "nc-cosine", "kernel-compare"])
    pc.add_argument("ints", nargs="*", type=int,
                    help="positional integers (cfrac: p' q'; lemma: a b c d e)")
    pc.add_argument("-r", "--level", default=None)
    pc.add_argument("-p", type=int, default=0)
    pc.add_argument("-q", type=int, default=0)
    pc.add_argument("-k", type=int, default=1)
    pc.add_argument("-m", type=int, default=1)
    pc.add_argument("-N", type=int, default=None)
    pc.add_argument("--format", choices=["json", "pretty"], default="json")
    pc.set_defaults(func=cmd_compute)

    pj = sub.add_parser("jones",
                        help="colored bracket of a torus curve vs its "
                             "operator closed form")
    pj.add_argument("-r", "--level", required=True)
    pj.add_argument("--slope", required=True, help="slope P/Q")
    pj.add_argument("--color", type=int, required=True,
                    help="color of the curve")
    pj.add_argument("--k", type=int, required=True)
    pj.add_argument("--m", type=int, required=True)
    pj.add_argument("--format", choices=["json", "pretty"], default="json")
    pj.set_defaults(func=cmd_jones)

    ps = sub.add_parser("lemma-scan",
                        help="scan the root-of-unity lemma over a box")
    ps.add_argument("-r", "--level", default="3..6")
    ps.add_argument("--range", type=int, default=3)
    ps.add_argument("--jobs", type=int, default=1)
    ps.add_argument("--format", choices=["csv", "json"], default="csv")
    ps.set_defaults(func=cmd_lemma_scan)

    pv = sub.add_parser("verify", help="run a verification sweep")
    pv.add_argument("suite", choices=[
        "product-to-sum", "thm2-consistency", "pipeline-vs-closed-form",
        "lemma-scan", "nc-torus", "associativity", "cfrac",
        "reduction-oracle"])
    pv.add_argument("-r", "--level", default=None,
                    help="level or range, e.g. 3 or 3..8")
    pv.add_argument("--bound", type=int, default=None)
    pv.add_argument("--slope-bound", dest="slope_bound", type=int,
                    default=None)
    pv.add_argument("--d-max", dest="d_max", type=int, default=None)
    pv.add_argument("--range", type=int, default=None)
    pv.add_argument("--count", type=int, default=500)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--jobs", type=int, default=1)
    pv.add_argument("--format", choices=["json", "pretty"], default="json")
    pv.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    leftover = [tok for tok in extra if tok != "--"]
    if leftover:
        ints = []
        for tok in leftover:
            try:
                ints.append(int(tok))
            except ValueError:
                parser.error(f"unrecognized argument {tok!r}")
        if not hasattr(args, "ints"):
            parser.error("unexpected positional integers")
        args.ints = list(args.ints) + ints
    try:
        return args.func(args, parser)
    except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
