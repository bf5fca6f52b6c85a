"""Bundled example data: loading, validation, parameter strata, golden tables."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from random import Random

from .beltrami import BeltramiFamily
from .deform import Deformer
from .errors import PresentationError
from .hodge import HodgePackage
from .jumping import DeformedCohomology
from .presentation import presentation_from_json
from .scalars import GaussianRational, parse_poly

BUILTIN_NAMES = ("iwasawa", "nakamura")
DEFAULT_SEED = 20240801


@dataclass
class Stratum:
    name: str
    substitution: dict
    nonzero: list = field(default_factory=list)
    not_all_zero: list = field(default_factory=list)
    preferred_points: list = field(default_factory=list)

    def sample(self, ring, rng, max_tries=200):
        """Random Gaussian-rational point of the stratum (constraints enforced)."""
        symbols = set()
        for expr in self.substitution.values():
            for tok in _symbol_names(expr):
                if tok not in ring.params and tok != "i":
                    symbols.add(tok)
        for _ in range(max_tries):
            assignment = {s: _random_rational(rng) for s in sorted(symbols)}
            ok = True
            for group in self.not_all_zero:
                if all(not assignment[s] for s in group):
                    ok = False
                    break
            if not ok:
                continue
            point = {}
            for p in ring.params:
                if p in self.substitution:
                    val = parse_poly(ring, self.substitution[p], extra=assignment)
                    point[p] = val.constant_term()
                else:
                    point[p] = _random_rational(rng)
            for expr in self.nonzero:
                if not parse_poly(ring, expr).eval(point):
                    ok = False
                    break
            if ok:
                return point
        raise PresentationError("could not sample a point of stratum %r" % self.name)


def _symbol_names(expr):
    out, cur = [], []
    for ch in str(expr):
        if ch.isalnum() or ch == "_":
            cur.append(ch)
        else:
            if cur and not cur[0].isdigit():
                out.append("".join(cur))
            cur = []
    if cur and not cur[0].isdigit():
        out.append("".join(cur))
    return out


def _random_rational(rng):
    num = rng.randint(-6, 6)
    den = rng.randint(1, 4)
    return GaussianRational(Fraction(num, den))


class Bundle:
    """A validated presentation with its Hodge package, family, and deformer."""

    def __init__(self, name, data, order=10):
        self.name = name
        self.data = data
        self.pres = presentation_from_json(data)
        report = self.pres.validate()
        if not report.ok:
            raise PresentationError(
                "presentation %r fails validation: %s" % (name, "; ".join(report.failures))
            )
        self.validation = report
        self.pkg = HodgePackage(self.pres)
        self.fam = BeltramiFamily.from_json(self.pres, data.get("beltrami", {"params": [], "terms": []}), order=order)
        self.fam.check_maurer_cartan()
        self.deformer = Deformer(self.pres, self.pkg, self.fam)
        self.cohomology = DeformedCohomology(self.deformer)
        self.strata = {}
        for s in data.get("strata", []):
            self.strata[s["name"]] = Stratum(
                name=s["name"],
                substitution=s.get("substitution", {}),
                nonzero=s.get("nonzero", []),
                not_all_zero=s.get("not_all_zero", []),
                preferred_points=s.get("preferred_points", []),
            )

    def stratum(self, name):
        if name not in self.strata:
            raise KeyError("unknown stratum %r (have %s)" % (name, sorted(self.strata)))
        return self.strata[name]


def _read_builtin(name):
    return json.loads(resources.files("ddbar").joinpath("data/%s.json" % name).read_text())


def load_example(name, order=10):
    """Load a bundled example by name, or any presentation file by path."""
    if name in BUILTIN_NAMES:
        return Bundle(name, _read_builtin(name), order=order)
    path = Path(name)
    if path.exists():
        return Bundle(path.stem, json.loads(path.read_text()), order=order)
    raise KeyError("unknown example %r (builtin: %s)" % (name, ", ".join(BUILTIN_NAMES)))


def golden_table_text(name):
    return resources.files("ddbar").joinpath("data/%s.golden.tsv" % name).read_text()


# ----- paper-layout tables ------------------------------------------------------

IWASAWA_TABLE_ROWS = [
    ("h_A[1,3]", "h_a", (1, 3)),
    ("h_BC[2,0]", "h_bc", (2, 0)),
    ("defectA[1,-1]", "w", (1, -1)),
    ("defectBC[2,0]", "v", (2, 0)),
    ("h_BCt[2,0]", "h_bc_def", (2, 0)),
    ("h_At[1,3]", "h_a_def", (1, 3)),
    ("h_A[1,1]", "h_a", (1, 1)),
    ("h_BC[2,2]", "h_bc", (2, 2)),
    ("defectA[1,1]", "w", (1, 1)),
    ("defectBC[2,2]", "v", (2, 2)),
    ("h_BCt[2,2]", "h_bc_def", (2, 2)),
    ("h_At[1,1]", "h_a_def", (1, 1)),
]

NAKAMURA_TABLE_PAIRS = [
    (0, 1), (1, 0), (0, 2), (1, 1), (2, 0), (0, 3), (1, 2),
    (2, 1), (3, 0), (1, 3), (2, 2), (3, 1), (2, 3), (3, 2),
]


def _report_value(report, kind, pq):
    p, q = pq
    if kind == "v":
        return report.rows[pq].v if p >= 0 and q >= 0 and pq in report.rows else 0
    if kind == "w":
        return report.rows[pq].w if p >= 0 and q >= 0 and pq in report.rows else 0
    return getattr(report.rows[pq], kind)


def nakamura_table_rows():
    rows = []
    n = 3
    for p, q in NAKAMURA_TABLE_PAIRS:
        p2, q2 = n - p, n - q
        rows.append(("h_A[%d,%d]" % (p, q), "h_a", (p, q)))
        rows.append(("h_BC[%d,%d]" % (p2, q2), "h_bc", (p2, q2)))
        rows.append(("defectBC[%d,%d]" % (p2, q2), "v", (p2, q2)))
        rows.append(("defectA[%d,%d]" % (p2 - 1, q2 - 1), "w", (p2 - 1, q2 - 1)))
        rows.append(("h_BCt[%d,%d]" % (p2, q2), "h_bc_def", (p2, q2)))
        rows.append(("h_At[%d,%d]" % (p, q), "h_a_def", (p, q)))
    return rows


def paper_table_text(bundle):
    """Recompute the bundled golden table from stratum evaluations, byte-stable."""
    if bundle.name == "iwasawa":
        strata = ["i", "ii", "iii"]
        reports = {}
        for s in strata:
            pts = bundle.stratum(s).preferred_points
            rep0 = bundle.cohomology.jump_report(pts[0], s)
            rep1 = bundle.cohomology.jump_report(pts[1], s)
            for label, kind, pq in IWASAWA_TABLE_ROWS:
                if _report_value(rep0, kind, pq) != _report_value(rep1, kind, pq):
                    raise PresentationError(
                        "stratum %r evaluations disagree on %s" % (s, label)
                    )
            reports[s] = rep0
        lines = ["quantity\t" + "\t".join(strata)]
        for label, kind, pq in IWASAWA_TABLE_ROWS:
            vals = [str(_report_value(reports[s], kind, pq)) for s in strata]
            lines.append(label + "\t" + "\t".join(vals))
        return "\n".join(lines) + "\n"
    if bundle.name == "nakamura":
        pts = bundle.stratum("nonzero").preferred_points
        rep0 = bundle.cohomology.jump_report(pts[0], "nonzero")
        rep1 = bundle.cohomology.jump_report(pts[1], "nonzero")
        lines = ["quantity\tnonzero"]
        for label, kind, pq in nakamura_table_rows():
            v0 = _report_value(rep0, kind, pq)
            v1 = _report_value(rep1, kind, pq)
            if v0 != v1:
                raise PresentationError("nonzero-stratum evaluations disagree on %s" % label)
            lines.append("%s\t%d" % (label, v0))
        return "\n".join(lines) + "\n"
    raise KeyError("no paper table layout for example %r" % bundle.name)


def stratum_report(bundle, stratum_name, seed=DEFAULT_SEED):
    """Jump report at two random stratum points, with a third-point tiebreak."""
    stratum = bundle.stratum(stratum_name)
    rng = Random(seed)
    pt1 = stratum.sample(bundle.fam.ring, rng)
    pt2 = stratum.sample(bundle.fam.ring, rng)
    rep1 = bundle.cohomology.jump_report(pt1, stratum_name)
    rep2 = bundle.cohomology.jump_report(pt2, stratum_name)
    warning = None
    if not _reports_agree(rep1, rep2):
        pt3 = stratum.sample(bundle.fam.ring, rng)
        rep3 = bundle.cohomology.jump_report(pt3, stratum_name)
        warning = (
            "stratum %r: two sample points disagree; third point evaluated" % stratum_name
        )
        if _reports_agree(rep1, rep3):
            return rep1, warning
        if _reports_agree(rep2, rep3):
            return rep2, warning
        raise PresentationError(
            "stratum %r: three sample points give three different tables" % stratum_name
        )
    return rep1, warning


def _reports_agree(a, b):
    for key in a.rows:
        ra, rb = a.rows[key], b.rows[key]
        if (
            ra.h_bc_def != rb.h_bc_def
            or ra.h_a_def != rb.h_a_def
            or ra.h_dol_def != rb.h_dol_def
            or ra.v != rb.v
            or ra.w != rb.w
        ):
            return False
    return True
