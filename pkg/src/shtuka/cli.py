"""Command-line front end.

Every result is one self-contained JSON object per line; ``--pretty``
switches to an indented rendering for reading.  Exit codes: 2 for parse
errors, 3 for precision loss, 4 for precondition violations, 1 for a
selftest failure.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .adlv import dim_formula, dim_lower_bound_iwahori, enumerate_and_count, rank_jb
from .alcove import (FundamentalAlcoveCertificate, find_fundamental_alcoves,
                     is_p_fundamental, standard_representative,
                     verify_standard_representative)
from .errors import PreconditionError, PrecisionLoss, ShtukaError
from .laurent import FiniteField, LaurentMatrix
from .literals import (format_cycles, format_matrix, format_series,
                       format_weyl, parse_cycles, parse_field_spec,
                       parse_matrix, parse_weyl)
from .loopgln import (ParabolicSpec, SigmaInvariants, hodge_point, kottwitz,
                      mazur_check, newton_point, subgroup_member)
from .rootdata import RootDatum, format_coweight, parse_coweight
from .slopedivide import (LocalShtukaData, csd_check_glr, csd_check_zink,
                          slope_division, trivialize_unipotent)
from .weyl import AffineWeyl

DEFAULT_PRECISION = 32


def _field(args) -> FiniteField:
    return parse_field_spec(args.field)


def _precision(args) -> int:
    if args.precision is not None:
        return args.precision
    env = os.environ.get("SHTUKA_PRECISION")
    return int(env) if env else DEFAULT_PRECISION


def _group_rank(args) -> int:
    name = args.group
    if not name.startswith("gl"):
        raise PreconditionError("only gl<n> groups are supported")
    return int(name[2:])


def _emit(args, payload: dict):
    payload["provenance"] = {
        "version": __version__,
        "seed": getattr(args, "seed", None),
        "precision": _precision(args),
        "field": args.field,
    }
    if args.pretty:
        out = json.dumps(payload, indent=2, sort_keys=True)
    else:
        out = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    args._out.write(out + "\n")


def _parabolic_from_args(n: int, blocks_text: str,
                         conjugator_text: str | None) -> ParabolicSpec:
    sizes = [int(s) for s in blocks_text.split(",") if s.strip()]
    p = ParabolicSpec.standard(n, sizes)
    if conjugator_text:
        w = parse_cycles(conjugator_text, n)
        p = p.conjugated(w)
    return p


def cmd_invariants(args):
    field = _field(args)
    prec = _precision(args)
    texts = []
    if args.matrix:
        texts.append(args.matrix)
    if args.matrix_file:
        with open(args.matrix_file) as fh:
            texts.extend(line.strip() for line in fh if line.strip())
    if not texts:
        raise PreconditionError("supply --matrix or --matrix-file")
    for text in texts:
        g = parse_matrix(field, text, prec=prec)
        hodge = hodge_point(g)
        newt = newton_point(g)
        _emit(args, {
            "input": text,
            "hodge": list(hodge),
            "newton": [str(v) for v in newt],
            "kappa": kottwitz(g),
            "mazur": mazur_check(g),
        })
    return 0


def cmd_weyl(args):
    n = _group_rank(args)
    datum = RootDatum.gl(n)
    ctx = AffineWeyl(datum)
    x = parse_weyl(args.x, n)
    word, tau = ctx.reduced_word(x)
    payload = {
        "x": format_weyl(x),
        "length": ctx.length(x),
        "reduced_word": word,
        "omega_part": format_weyl(tau),
        "newton": [str(v) for v in ctx.newton_point(x)],
        "kappa": ctx.kottwitz(x),
        "is_omega": ctx.is_omega(x),
    }
    if args.leq:
        y = parse_weyl(args.leq, n)
        payload["bruhat_leq"] = ctx.bruhat_leq(y, x)
        payload["y"] = format_weyl(y)
    _emit(args, payload)
    return 0


def cmd_alcove_find(args):
    n = _group_rank(args)
    datum = RootDatum.gl(n)
    ctx = AffineWeyl(datum)
    nu = tuple(Fraction(v) for v in parse_coweight(args.newton))
    inv = SigmaInvariants(nu, args.kappa)
    certs = find_fundamental_alcoves(datum, inv,
                                     up_to_symmetry=not args.all)
    for cert in certs:
        _emit(args, cert.as_dict(ctx))
    return 0


def cmd_alcove_check(args):
    n = _group_rank(args)
    datum = RootDatum.gl(n)
    ctx = AffineWeyl(datum)
    x = parse_weyl(args.x, n)
    p = _parabolic_from_args(n, args.levi_blocks, args.conjugator)
    ok, wit = is_p_fundamental(ctx, x, p, with_certificate=True)
    _emit(args, {
        "x": format_weyl(x),
        "levi_blocks": [list(b) for b in p.blocks],
        "fundamental": ok,
        "witnesses": {k: v if isinstance(v, bool) else [list(map(str, t))
                                                        for t in v]
                      for k, v in wit.items()},
    })
    return 0


def cmd_standard_rep(args):
    n = _group_rank(args)
    datum = RootDatum.gl(n)
    ctx = AffineWeyl(datum)
    nu = tuple(Fraction(v) for v in parse_coweight(args.newton))
    inv = SigmaInvariants(nu, args.kappa)
    if args.verify:
        x = parse_weyl(args.verify, n)
        verify_standard_representative(ctx, x, inv)
        _emit(args, {"verified": True, "x": format_weyl(x)})
    else:
        x = standard_representative(datum, inv)
        _emit(args, {"x": format_weyl(x)})
    return 0


def cmd_slope_divide(args):
    field = _field(args)
    prec = _precision(args)
    n = _group_rank(args)
    x = parse_weyl(args.x, n)
    p = _parabolic_from_args(n, args.levi_blocks, args.conjugator)
    if args.g:
        texts = [args.g]
    else:
        with open(args.g_file) as fh:
            texts = [line.strip() for line in fh if line.strip()]
    for text in texts:
        g = parse_matrix(field, text, prec=prec)
        res = slope_division(g, x, p, args.d)
        _emit(args, {
            "input": text,
            "h": format_matrix(res.conjugator),
            "m": format_matrix(res.levi_part),
            "nbar": format_matrix(res.lower_part),
            "iterations": res.iterations,
            "residual_valuation": res.residual_valuation
            if res.residual_valuation != float("inf") else "inf",
        })
    return 0


def cmd_trivialize(args):
    field = _field(args)
    prec = _precision(args)
    n = _group_rank(args)
    x = parse_weyl(args.x, n)
    p = _parabolic_from_args(n, args.levi_blocks, args.conjugator)
    nbar = parse_matrix(field, args.nbar, prec=prec)
    h, bexp, iters = trivialize_unipotent(nbar, x, p, args.d)
    _emit(args, {
        "h": format_matrix(h),
        "bounding_exponent": bexp.exponent,
        "all_levels": bexp.all_levels,
        "iterations": iters,
    })
    return 0


def cmd_csd_check(args):
    field = _field(args)
    prec = _precision(args)
    a_mat = parse_matrix(field, args.matrix, prec=prec)
    n = a_mat.n
    sizes = tuple(int(s) for s in args.blocks.split(","))
    if args.mode == "glr":
        slopes = tuple(int(t) for t in args.t.split(","))
        data = LocalShtukaData(a_mat, sizes, slopes, args.s)
        passed, report = csd_check_glr(data)
        _emit(args, {"mode": "glr", "passed": passed,
                     "conditions": report["conditions"]})
    else:
        p = ParabolicSpec.standard(n, sizes)
        mu = parse_coweight(args.mu)
        passed = csd_check_zink(a_mat, p, mu, args.s)
        _emit(args, {"mode": "zink", "passed": passed})
    return 0


def cmd_adlv_count(args):
    field = _field(args)
    prec = _precision(args)
    b = parse_matrix(field, args.b, prec=prec)
    n = b.n
    if args.level == "K0":
        if args.mu is None:
            raise PreconditionError("level K0 needs --mu")
        mu = parse_coweight(args.mu)
        criterion = ("leq" if args.leq else "exact", mu)
    else:
        y = parse_weyl(args.y, n)
        criterion = ("cell", y)
    rep = enumerate_and_count(
        b, criterion, level=args.level, max_dim=args.max_length,
        ladder=args.field_ladder, window=args.window,
        force=args.force, prec=None if prec == DEFAULT_PRECISION else prec)
    formula = None
    if args.level == "K0":
        datum = RootDatum.gl(n)
        try:
            nu = newton_point(b)
            formula = dim_formula(datum, mu, nu)
        except ShtukaError:
            formula = None
    rep.formula_dimension = formula
    _emit(args, rep.as_dict())
    return 0


def cmd_adlv_dim(args):
    n = _group_rank(args)
    datum = RootDatum.gl(n)
    mu = parse_coweight(args.mu)
    nu = parse_coweight(args.newton)
    payload = {
        "mu": format_coweight(mu),
        "newton": format_coweight(nu),
        "dimension": str(dim_formula(datum, mu, nu)),
        "rank_jb": rank_jb(datum, nu),
        "chain_length": datum.newton_chain_length(mu, nu),
        "codim_newton_stratum": "unknown",
    }
    if args.y:
        ctx = AffineWeyl(datum)
        y = parse_weyl(args.y, n)
        payload["iwahori_lower_bound"] = dim_lower_bound_iwahori(
            ctx, y, nu, args.chain_len or 0)
    _emit(args, payload)
    return 0


def cmd_selftest(args):
    from .selftest import run_criteria
    failures = run_criteria(args, only=args.only)
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="shtuka",
        description="Exact sigma-conjugacy invariants, fundamental alcoves "
                    "and affine Deligne-Lusztig counts over F_q((z)).")
    ap.add_argument("--field", default="p=2,e=1,m=1",
                    help="field spec, e.g. p=2,e=1,m=2,mod=t^2+t+1")
    ap.add_argument("--precision", type=int, default=None,
                    help="working z-adic precision (env SHTUKA_PRECISION)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--pretty", action="store_true")
    ap.add_argument("--output", default=None, help="write JSON lines here")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("invariants", help="hodge/newton/kappa of matrices")
    p.add_argument("--matrix")
    p.add_argument("--matrix-file")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("weyl", help="length, reduced word, Newton point")
    p.add_argument("--group", default="gl2")
    p.add_argument("--x", required=True)
    p.add_argument("--leq", default=None,
                   help="also test this element below x in Bruhat order")
    p.set_defaults(func=cmd_weyl)

    alc = sub.add_parser("alcove", help="fundamental alcoves")
    alcsub = alc.add_subparsers(dest="alcove_cmd", required=True)
    p = alcsub.add_parser("find")
    p.add_argument("--group", required=True)
    p.add_argument("--newton", required=True)
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--all", action="store_true",
                   help="do not collapse alcove-rotation symmetry orbits")
    p.set_defaults(func=cmd_alcove_find)
    p = alcsub.add_parser("check")
    p.add_argument("--group", default=None)
    p.add_argument("--x", required=True)
    p.add_argument("--levi-blocks", required=True)
    p.add_argument("--conjugator", default=None)
    p.set_defaults(func=cmd_alcove_check)
    p = alcsub.add_parser("standard")
    p.add_argument("--group", required=True)
    p.add_argument("--newton", required=True)
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--verify", default=None,
                   help="verify this element instead of constructing one")
    p.set_defaults(func=cmd_standard_rep)

    p = sub.add_parser("slope-divide", help="divide g in IxI into x*m*nbar")
    p.add_argument("--group", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--levi-blocks", required=True)
    p.add_argument("--conjugator", default=None)
    p.add_argument("--g")
    p.add_argument("--g-file")
    p.add_argument("--d", type=int, default=8)
    p.set_defaults(func=cmd_slope_divide)

    p = sub.add_parser("trivialize", help="remove an Nbar tail of x*nbar")
    p.add_argument("--group", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--levi-blocks", required=True)
    p.add_argument("--conjugator", default=None)
    p.add_argument("--nbar", required=True)
    p.add_argument("--d", type=int, default=8)
    p.set_defaults(func=cmd_trivialize)

    p = sub.add_parser("csd-check", help="complete slope divisibility")
    p.add_argument("--mode", choices=["glr", "zink"], required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--blocks", required=True)
    p.add_argument("--t", default=None, help="slope integers for glr")
    p.add_argument("--mu", default=None, help="central cocharacter for zink")
    p.add_argument("--s", type=int, required=True)
    p.set_defaults(func=cmd_csd_check)

    adlv = sub.add_parser("adlv", help="affine Deligne-Lusztig varieties")
    adlvsub = adlv.add_subparsers(dest="adlv_cmd", required=True)
    p = adlvsub.add_parser("count")
    p.add_argument("--b", required=True)
    p.add_argument("--mu", default=None)
    p.add_argument("--leq", action="store_true")
    p.add_argument("--y", default=None, help="Iwahori cell criterion")
    p.add_argument("--level", choices=["K0", "I"], default="K0")
    p.add_argument("--max-length", type=int, default=4)
    p.add_argument("--field-ladder", type=int, default=3)
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_adlv_count)
    p = adlvsub.add_parser("dim")
    p.add_argument("--group", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--newton", required=True)
    p.add_argument("--y", default=None)
    p.add_argument("--chain-len", type=int, default=None)
    p.set_defaults(func=cmd_adlv_dim)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--only", default=None,
                   help="comma-separated criterion numbers")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    out = sys.stdout
    if args.output:
        out = open(args.output, "w")
    args._out = out
    try:
        return args.func(args)
    except PrecisionLoss as e:
        print(f"precision loss: {e}", file=sys.stderr)
        return 3
    except (PreconditionError, ShtukaError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 4
    finally:
        if args.output:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
