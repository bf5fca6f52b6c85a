"""Command-line surface.

Exit codes: 0 all requested checks pass, 1 validation or check failure,
2 argument/parse errors (argparse), 3 internal inconsistency between two
independent computations of the same quantity.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import InternalInconsistencyError, PresentationError
from .examples_data import (
    DEFAULT_SEED,
    golden_table_text,
    load_example,
    paper_table_text,
    stratum_report,
)
from .hodge import THEORIES
from .scalars import parse_gaussian


def _parse_at(text):
    try:
        name, value = text.split("=", 1)
        return name.strip(), parse_gaussian(value)
    except Exception as exc:  # surfaces as an argparse error (exit 2)
        raise argparse.ArgumentTypeError("bad point assignment %r: %s" % (text, exc))


def _parse_bidegree(text):
    try:
        p, q = text.split(",")
        return int(p), int(q)
    except Exception:
        raise argparse.ArgumentTypeError("bidegree must look like 'p,q'")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ddbar",
        description="Exact Bott-Chern/Aeppli/Dolbeault Hodge theory and canonical "
        "deformations on presented invariant double complexes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, strata=False):
        sp.add_argument("input", help="builtin example name (iwasawa, nakamura) or a presentation JSON path")
        sp.add_argument("--order", type=int, default=10, help="parameter truncation order (default 10)")
        sp.add_argument("--format", choices=("md", "tsv", "json"), default="md")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED, help="stratum sampling seed")
        if strata:
            sp.add_argument("--at", action="append", type=_parse_at, default=[], metavar="NAME=a/b[+c/d*i]")
            sp.add_argument("--stratum", help="named stratum to sample")

    sp = sub.add_parser("validate", help="validate a presentation and its Beltrami family")
    common(sp)

    sp = sub.add_parser("cohom", help="cohomology dimensions at t = 0")
    common(sp)
    sp.add_argument("--theory", choices=THEORIES)
    sp.add_argument("--bidegree", type=_parse_bidegree)

    sp = sub.add_parser("hodge", help="run the Hodge-theory property checks")
    common(sp)
    sp.add_argument("--dump", action="store_true", help="dump sparse operator triplets")

    sp = sub.add_parser("deform", help="canonical deformation series and obstructions")
    common(sp, strata=True)
    sp.add_argument("--theory", choices=THEORIES, required=True)
    sp.add_argument("--bidegree", type=_parse_bidegree, required=True)

    sp = sub.add_parser("jump", help="jump report at a point or stratum")
    common(sp, strata=True)

    sp = sub.add_parser("table", help="reproduce the bundled golden table")
    common(sp)
    sp.add_argument("--paper", action="store_true", help="paper layout (golden-file format)")
    return parser


def _point_from_args(bundle, args):
    if args.at:
        point = {name: value for name, value in args.at}
        missing = [p for p in bundle.fam.ring.params if p not in point]
        if missing:
            raise PresentationError("point is missing parameters: %s" % ", ".join(missing))
        return point, "point"
    return None, None


def _fmt_point(point):
    return ", ".join("%s=%s" % (k, point[k]) for k in sorted(point))


def cmd_validate(args):
    bundle = load_example(args.input, order=args.order)
    for line in bundle.validation.summary_lines():
        print(line)
    print("%-34s %s" % ("Maurer-Cartan", "ok"))
    cartan = bundle.fam.cartan_identity_report()
    for order, ok in sorted(cartan.items()):
        print("%-34s %s" % ("contraction identity, order %d" % order, "ok" if ok else "FAIL"))
        if not ok:
            return 1
    return 0 if bundle.validation.ok else 1


def cmd_cohom(args):
    bundle = load_example(args.input, order=args.order)
    theories = [args.theory] if args.theory else list(THEORIES)
    out = {}
    for theory in theories:
        if args.bidegree:
            p, q = args.bidegree
            out[theory] = {(p, q): bundle.pkg.cohomology(theory, p, q).dimension}
        else:
            out[theory] = bundle.pkg.betti_table(theory)
    if args.format == "json":
        payload = {
            t: {"%d,%d" % k: v for k, v in sorted(tab.items())} for t, tab in out.items()
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
        return 0
    n = bundle.pres.n
    for theory, tab in out.items():
        print("# %s (%s)" % (theory, bundle.name))
        if args.bidegree:
            (p, q), v = next(iter(tab.items()))
            print("h[%d,%d] = %d" % (p, q, v))
            continue
        sep = "\t" if args.format == "tsv" else "  "
        header = sep.join(["q\\p"] + [str(p) for p in range(n + 1)])
        print(header)
        for q in range(n + 1):
            print(sep.join([str(q)] + [str(tab[(p, q)]) for p in range(n + 1)]))
    return 0


def cmd_hodge(args):
    bundle = load_example(args.input, order=args.order)
    pkg = bundle.pkg
    checks = [
        ("star identities", pkg.check_star_identities),
        ("star pairing", pkg.check_star_pairing),
        ("green identities", pkg.check_green_identities),
        ("kernel characterizations", pkg.check_kernel_characterizations),
        ("star duality of harmonic spaces", pkg.check_duality),
        ("aeppli three-way orthogonality", pkg.check_aeppli_three_way_orthogonality),
    ]
    for label, fn in checks:
        fn()
        print("%-34s ok" % label)
    print("%-34s %s" % ("star closure", "ok" if bundle.validation.star_closed else "FAIL"))
    if args.dump:
        _dump_operators(bundle)
    return 0


def _dump_operators(bundle):
    pres, pkg = bundle.pres, bundle.pkg
    for name in ("partial", "dbar"):
        for p, q in pres.bidegrees():
            mat = pkg.mat(name, p, q)
            for i, row in enumerate(mat):
                for j, x in enumerate(row):
                    if x:
                        print("%s\t(%d,%d)\t%d\t%d\t%s" % (name, p, q, i, j, x))
    for p, q in pres.bidegrees():
        mat = pkg.star(p, q)
        for i, row in enumerate(mat):
            for j, x in enumerate(row):
                if x:
                    print("star\t(%d,%d)\t%d\t%d\t%s" % (p, q, i, j, x))


def cmd_deform(args):
    bundle = load_example(args.input, order=args.order)
    p, q = args.bidegree
    space = bundle.deformer.rank_matrix(args.theory, p, q)
    report = bundle.deformer.unobstructedness_report(
        args.theory, p, q, points=[dict(args.at)] if args.at else []
    )
    print(
        "# %s canonical deformations at (%d,%d) on %s"
        % (args.theory, p, q, bundle.name)
    )
    print("harmonic classes: %d" % len(space.series))
    for cls in report["classes"]:
        series = space.series[cls["index"]]
        print(
            "class %d: termination order %d, certified %s, unobstructed on B: %s"
            % (
                cls["index"],
                cls["termination_order"],
                cls["certified"],
                cls["unobstructed_on_B"],
            )
        )
        for k, form in enumerate(series.piece_forms(bundle.pres)):
            if k == 0 or form:
                body = " + ".join(
                    "(%s)·%s" % (c, bundle.pres.monomial_str(m))
                    for m, c in sorted(form.terms.items())
                ) or "0"
                print("   sigma_%d = %s" % (k, body))
    nz = [
        (i, j, str(x))
        for i, row in enumerate(space.rank_matrix)
        for j, x in enumerate(row)
        if x
    ]
    print("rank matrix nonzero entries (%d):" % len(nz))
    for i, j, x in nz:
        print("   [%d,%d] = %s" % (i, j, x))
    print("verdict: %s" % ("canonically unobstructed" if report["canonically_unobstructed"] else "obstructed for generic parameters"))
    if args.at:
        point = dict(args.at)
        rank = space.rank_at(point)
        print("defect at %s: %d" % (_fmt_point(point), rank))
    return 0


def _jump_rows_for_output(report, n):
    rows = []
    for (p, q), r in sorted(report.rows.items()):
        rows.append(
            {
                "p": p,
                "q": q,
                "h_BC": r.h_bc,
                "h_BCt": r.h_bc_def,
                "defectBC": r.v,
                "defectA_shift": report.rows[(p - 1, q - 1)].w if p >= 1 and q >= 1 else 0,
                "residualBC": r.bc_residual,
                "h_A": r.h_a,
                "h_At": r.h_a_def,
                "residualA": r.aeppli_residual,
                "duality": r.duality_ok,
            }
        )
    return rows


def cmd_jump(args):
    bundle = load_example(args.input, order=args.order)
    point, _ = _point_from_args(bundle, args)
    warning = None
    if point is not None:
        report = bundle.cohomology.jump_report(point, "point")
    elif args.stratum:
        report, warning = stratum_report(bundle, args.stratum, seed=args.seed)
    else:
        raise PresentationError("jump needs --at or --stratum")
    if warning:
        print(warning, file=sys.stderr)
    rows = _jump_rows_for_output(report, bundle.pres.n)
    if args.format == "json":
        payload = {
            "example": bundle.name,
            "label": report.label,
            "point": {k: str(v) for k, v in report.point.items()},
            "rows": rows,
            "all_residuals_zero": report.all_residuals_zero,
            "duality_ok": report.duality_ok,
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        cols = [
            "p", "q", "h_BC", "h_BCt", "defectBC", "defectA_shift",
            "residualBC", "h_A", "h_At", "residualA", "duality",
        ]
        if args.format == "md":
            print("| " + " | ".join(cols) + " |")
            print("|" + "|".join("---" for _ in cols) + "|")
            for row in rows:
                print("| " + " | ".join(str(row[c]) for c in cols) + " |")
        else:
            print("\t".join(cols))
            for row in rows:
                print("\t".join(str(row[c]) for c in cols))
        print("# point: %s" % _fmt_point(report.point))
    ok = report.all_residuals_zero and report.duality_ok
    return 0 if ok else 1


def cmd_table(args):
    bundle = load_example(args.input, order=args.order)
    text = paper_table_text(bundle)
    sys.stdout.write(text)
    if bundle.name in ("iwasawa", "nakamura"):
        golden = golden_table_text(bundle.name)
        if text != golden:
            print("computed table differs from the bundled golden file", file=sys.stderr)
            return 1
    return 0


COMMANDS = {
    "validate": cmd_validate,
    "cohom": cmd_cohom,
    "hodge": cmd_hodge,
    "deform": cmd_deform,
    "jump": cmd_jump,
    "table": cmd_table,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = COMMANDS[args.command](args)
    except InternalInconsistencyError as exc:
        print("internal inconsistency: %s" % exc, file=sys.stderr)
        return 3
    except (PresentationError, KeyError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    return code


if __name__ == "__main__":
    sys.exit(main())
