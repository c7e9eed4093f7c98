"""Command-line interface: ``cspoly <command> ...``.

Polynomials are given as comma-separated coefficients from the leading term
down, so ``1,0,0,-1,1`` is x^4 - x + 1.  Exit status: 0 success (for
``verify``: the polynomial is CS), 1 not CS, 2 bad input or refused work.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import dioph6, families, searcher
from .cs_core import verify
from .errors import CsPolyError
from .finite_field import factor, first_primes, format_factorization, reduce_mod_p
from .intpoly import IntPoly, exterior_power_poly, signed_reciprocal

EXIT_OK = 0
EXIT_NOT_CS = 1
EXIT_INPUT = 2


def parse_poly(text: str) -> IntPoly:
    parts = [t.strip() for t in text.replace(" ", "").split(",") if t.strip()]
    if not parts:
        raise CsPolyError("empty coefficient list")
    try:
        coeffs = [int(t) for t in parts]
    except ValueError:
        raise CsPolyError(f"coefficients must be integers: {text!r}") from None
    if coeffs[0] == 0:
        raise CsPolyError("leading coefficient must be nonzero")
    return IntPoly.from_desc(coeffs)


def parse_bounds(text: str, degree: int) -> list:
    """``lo:hi`` for every coefficient, or one ``lo:hi`` per c_1..c_{n-1}."""
    out = []
    for item in text.split(","):
        lo, sep, hi = item.partition(":")
        if not sep:
            raise CsPolyError(f"bad bound {item!r}; expected lo:hi")
        out.append((int(lo), int(hi)))
    if len(out) == 1:
        out = out * (degree - 1)
    if len(out) != degree - 1:
        raise CsPolyError(f"degree {degree} needs 1 or {degree - 1} bounds, got {len(out)}")
    return out


def _desc(f: IntPoly) -> list:
    return [str(c) for c in f.to_desc()]


def _emit_poly(f: IntPoly, fmt: str, extra=None):
    if fmt == "json":
        out = dict(extra or {})
        out["coeffs"] = _desc(f)
        print(json.dumps(out, sort_keys=True))
    elif fmt == "csv":
        print(",".join(_desc(f)))
    else:
        print(f)


# ---------------------------------------------------------------- commands

def cmd_verify(args) -> int:
    f = parse_poly(args.poly)
    rep = verify(f)
    if args.format == "json":
        print(rep.to_json(witnesses=args.witnesses, positivity=args.positivity))
    else:
        print(f"f = {f}")
        for c in rep.conditions:
            print(f"CS_{c.k}: det(I - wedge^{c.k} A) = {c.det_value}  {'holds' if c.holds else 'fails'}")
        print(f"cs: {'yes' if rep.is_cs else 'no'}")
        if args.positivity:
            print(f"positive: {'yes' if rep.is_positive else 'no'}")
        if args.witnesses:
            for w in rep.witnesses:
                print(f"witness k={w.k}: {w.kind}" + (f" {w.value}" if w.value is not None else ""))
    return EXIT_OK if rep.is_cs else EXIT_NOT_CS


def cmd_exterior(args) -> int:
    f = parse_poly(args.poly)
    if not f.is_monic():
        raise CsPolyError(f"{f} is not monic")
    _emit_poly(exterior_power_poly(f, args.k), args.format, {"k": args.k})
    return EXIT_OK


def cmd_reciprocal(args) -> int:
    _emit_poly(signed_reciprocal(parse_poly(args.poly)), args.format)
    return EXIT_OK


def cmd_factor_mod(args) -> int:
    f = parse_poly(args.poly)
    facs = factor(reduce_mod_p(f, args.p))
    if args.format == "json":
        out = {
            "p": args.p,
            "factors": [{"coeffs": [str(c) for c in reversed(g.coeffs)], "multiplicity": e} for g, e in facs],
        }
        print(json.dumps(out, sort_keys=True))
    else:
        print(format_factorization(facs))
    return EXIT_OK


def cmd_families(args) -> int:
    rows = families.catalog(args.degree)
    if args.format == "json":
        out = [
            {"id": r.id, "params": list(r.params), "coeffs": r.entry_strings(), "positivity": r.positivity}
            for r in rows
        ]
        print(json.dumps({"version": "cspoly.families/1", "degree": args.degree, "rows": out}, sort_keys=True))
    elif args.format == "csv":
        sys.stdout.write(families_csv(args.degree))
    else:
        for r in rows:
            print(f"{r.id:10s} ({', '.join(r.entry_strings())})  positive: {r.positivity}")
    return EXIT_OK


def families_csv(degree: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "params"] + [f"c{i}" for i in range(degree)] + ["positivity"])
    for r in families.catalog(degree):
        w.writerow([r.id, " ".join(r.params)] + r.entry_strings() + [r.positivity])
    return buf.getvalue()


def _emit_table(rows, fmt):
    if fmt == "csv":
        sys.stdout.write(dioph6.table_csv(rows))
    elif fmt == "json":
        print(dioph6.table_json(rows))
    else:
        for q, row, pos in rows:
            print(f"q={q:<3d} ({', '.join(row.entries())})  positive: {pos}")


def cmd_solve6(args) -> int:
    sols = dioph6.solve_q(args.q, bound=args.bound)
    _emit_table([(args.q, s, dioph6.positivity_label(s)) for s in sols], args.format)
    return EXIT_OK


def cmd_table(args) -> int:
    fmt = "csv" if args.csv else args.format
    _emit_table(dioph6.emit_table(args.q_lo, args.q_hi, workers=args.workers, bound=args.bound), fmt)
    return EXIT_OK


def cmd_search(args) -> int:
    constraints = tuple(c.strip() for c in args.constraints.split(",") if c.strip()) if args.constraints else ()
    spec = searcher.SearchSpec(
        args.degree,
        parse_bounds(args.bounds, args.degree),
        primes=tuple(first_primes(args.primes)),
        constraints=constraints,
        checkpoint_interval=args.checkpoint_interval,
    )
    rep = searcher.box_search(
        spec, workers=args.workers, checkpoint=args.checkpoint, resume=args.resume, budget=args.budget
    )
    if args.survivors_csv:
        with open(args.survivors_csv, "w", encoding="utf-8") as fh:
            fh.write(rep.survivors_csv())
    if args.format == "csv":
        sys.stdout.write(rep.survivors_csv())
    elif args.format == "text":
        print(f"scanned {rep.scanned}, f(1)=+-1 candidates {rep.candidates}, "
              f"filtered {rep.filtered}, exact checks {rep.filter_passed}, survivors {len(rep.survivors)}")
        for f in rep.survivors:
            print(f)
    else:
        print(rep.to_json(timing=args.timing))
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cspoly", description="Cappell-Shaneson polynomial toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def fmt(p, default, choices=("json", "csv", "text")):
        p.add_argument("--format", choices=choices, default=default)

    p = sub.add_parser("verify", help="decide whether a polynomial is CS")
    p.add_argument("poly")
    p.add_argument("--witnesses", action="store_true", help="include witness primes for failed conditions")
    p.add_argument("--positivity", action="store_true", help="include the positivity verdict")
    fmt(p, "json", ("json", "text"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("exterior", help="characteristic polynomial of the k-th exterior power")
    p.add_argument("poly")
    p.add_argument("k", type=int)
    fmt(p, "text")
    p.set_defaults(func=cmd_exterior)

    p = sub.add_parser("reciprocal", help="signed reciprocal (-1)^n x^n f(1/x)")
    p.add_argument("poly")
    fmt(p, "text")
    p.set_defaults(func=cmd_reciprocal)

    p = sub.add_parser("factor-mod", help="factor f modulo a prime")
    p.add_argument("poly")
    p.add_argument("p", type=int)
    fmt(p, "text", ("json", "text"))
    p.set_defaults(func=cmd_factor_mod)

    p = sub.add_parser("families", help="parametric CS families of a degree (2..7)")
    p.add_argument("degree", type=int)
    fmt(p, "text")
    p.set_defaults(func=cmd_families)

    p = sub.add_parser("solve6", help="degree-6 CS polynomials with c5 - c1 = q")
    p.add_argument("q", type=int)
    p.add_argument("--bound", type=int, default=None, help=f"largest |q| accepted (default {dioph6.DEFAULT_Q_BOUND})")
    fmt(p, "text")
    p.set_defaults(func=cmd_solve6)

    p = sub.add_parser("table", help="degree-6 table for q_lo <= q <= q_hi")
    p.add_argument("q_lo", type=int)
    p.add_argument("q_hi", type=int)
    p.add_argument("--csv", action="store_true", help="same as --format csv")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--bound", type=int, default=None)
    fmt(p, "csv")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("search", help="exhaustive box search")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--bounds", required=True, help="lo:hi or lo:hi,lo:hi,... for c1..c_{n-1}")
    p.add_argument("--constraints", default="", help='e.g. "c1+c6=0,c2+c5=0"')
    p.add_argument("--primes", type=int, default=searcher.DEFAULT_FILTER_PRIMES,
                   help="number of small primes in the filter")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--checkpoint-interval", type=int, default=1)
    p.add_argument("--resume", action="store_true")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--timing", action="store_true", help="include wall-clock fields in the JSON report")
    p.add_argument("--survivors-csv", default=None, help="also write survivors to this CSV file")
    fmt(p, "json")
    p.set_defaults(func=cmd_search)
    return ap


def _glue_negative_values(argv):
    # "--bounds -6:6" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--bounds":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_negative_values(argv))
    try:
        return args.func(args)
    except (CsPolyError, ValueError, OSError) as exc:
        print(f"cspoly {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
