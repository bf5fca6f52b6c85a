"""Acceptance suite: one test per criterion, printing a pass line each.

Run with `pytest tests/test_acceptance.py -v -s` (or -rA) to see the lines.
"""

import random
import time
from fractions import Fraction

import pytest

from ddbar import linalg
from ddbar.examples_data import golden_table_text, load_example, paper_table_text
from ddbar.scalars import GaussianRational

IWASAWA_STRATUM_POINTS = {
    "i": {"t11": "0", "t12": "0", "t21": "0", "t22": "0", "t31": "1/2", "t32": "-1/3"},
    "ii": {"t11": "1/2", "t12": "1/3", "t21": "1", "t22": "2/3", "t31": "1/4", "t32": "0"},
    "iii": {"t11": "1", "t12": "0", "t21": "0", "t22": "1", "t31": "1/4", "t32": "0"},
}
NAKAMURA_POINTS = [{"t": "1/2"}, {"t": "-2/3"}]


def _random_point(rng, params, complex_values=False):
    point = {}
    for p in params:
        re = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        im = Fraction(rng.randint(-5, 5), rng.randint(1, 4)) if complex_values else 0
        point[p] = GaussianRational(re, im)
    return point


def _iwasawa_random_points(count=3, complex_values=True):
    rng = random.Random(424242)
    pts = []
    while len(pts) < count:
        pt = _random_point(rng, ("t11", "t12", "t21", "t22", "t31", "t32"), complex_values and len(pts) == 0)
        d = pt["t11"] * pt["t22"] - pt["t21"] * pt["t12"]
        if d:
            pts.append(pt)
    return pts


def _nakamura_random_points(count=3):
    rng = random.Random(99)
    pts = []
    while len(pts) < count:
        pt = _random_point(rng, ("t",), complex_values=len(pts) == 0)
        if pt["t"]:
            pts.append(pt)
    return pts


def _all_points(bundle):
    if bundle.name == "iwasawa":
        return list(IWASAWA_STRATUM_POINTS.values()) + _iwasawa_random_points(2)
    return NAKAMURA_POINTS + _nakamura_random_points(2)


def test_criterion_1_undeformed_cohomology():
    expected = {
        "iwasawa": {
            "aeppli": {(1, 1): 8, (2, 1): 6, (0, 0): 1, (3, 3): 1, (1, 3): 3, (1, 0): 3},
            "bc": {(2, 0): 3, (2, 1): 6, (2, 2): 8, (0, 0): 1},
        },
        "nakamura": {
            "aeppli": {(1, 1): 11, (2, 1): 9, (1, 2): 9, (1, 0): 5, (0, 1): 5},
            "bc": {(1, 1): 7, (2, 1): 9, (2, 0): 3, (3, 1): 3, (2, 2): 11},
        },
    }
    for name, tables in expected.items():
        start = time.monotonic()
        bundle = load_example(name)
        computed = {theory: bundle.pkg.betti_table(theory) for theory in ("aeppli", "bc", "dolbeault")}
        elapsed = time.monotonic() - start
        for theory, cells in tables.items():
            for pq, dim in cells.items():
                assert computed[theory][pq] == dim, (name, theory, pq)
        # star duality determines the full Bott-Chern grid from the Aeppli one
        n = bundle.pres.n
        for (p, q), v in computed["bc"].items():
            assert v == computed["aeppli"][(n - q, n - p)]
        assert elapsed < 10.0, "runtime %.1fs exceeds the 10s budget" % elapsed
    print("ACCEPTANCE 1 (undeformed cohomology reproduction): PASS")


def test_criterion_2_table_1(iwasawa):
    golden = golden_table_text("iwasawa")
    computed = paper_table_text(iwasawa)
    assert computed == golden
    cells = [line.split("\t") for line in golden.strip().splitlines()[1:]]
    assert sum(len(row) - 1 for row in cells) == 36
    print("ACCEPTANCE 2 (Iwasawa table, 36 cells across three strata): PASS")


def test_criterion_3_table_2(nakamura):
    golden = golden_table_text("nakamura")
    assert paper_table_text(nakamura) == golden  # checks t=1/2 and -2/3 agreement
    inv = {pt["t"]: nakamura.deformer.jump_invariants(pt) for pt in NAKAMURA_POINTS}
    for t, table in inv.items():
        assert table[(2, 0)][0] == 2 and table[(2, 1)][0] == 2
        assert table[(1, 1)] == (2, 2) and table[(2, 2)][0] == 2
        assert table[(3, 1)][0] == 2
        assert table[(1, 0)][1] == 2 and table[(0, 1)][1] == 2
        assert table[(2, 1)][1] == 2 and table[(1, 2)][1] == 2
    assert inv["1/2"] == inv["-2/3"]
    print("ACCEPTANCE 3 (Nakamura table at t=1/2 and a second point): PASS")


def test_criterion_4_jump_residuals(iwasawa, nakamura):
    for bundle in (iwasawa, nakamura):
        for point in _all_points(bundle):
            report = bundle.cohomology.jump_report(point)
            assert report.all_residuals_zero, (bundle.name, point)
    print("ACCEPTANCE 4 (jumping formulas, zero residual at every point): PASS")


def test_criterion_5_duality(iwasawa, nakamura):
    for bundle in (iwasawa, nakamura):
        for point in _all_points(bundle):
            assert bundle.cohomology.jump_report(point).duality_ok
            assert bundle.cohomology.check_point_duality(point)
    print("ACCEPTANCE 5 (deformed Bott-Chern/Aeppli duality at every point): PASS")


def test_criterion_6_property_suites(iwasawa, nakamura):
    for bundle in (iwasawa, nakamura):
        assert bundle.validation.ok  # d²=0, Leibniz consistency, conj-compat
        assert bundle.pkg.check_star_identities()
        assert bundle.pkg.check_green_identities()  # 1 = H + box·G exactly
        assert bundle.fam.check_maurer_cartan()
        assert all(bundle.fam.cartan_identity_report().values())
        points = _all_points(bundle)
        for point in points[:3]:  # adjoint identities at >= 3 points
            po = bundle.fam.at_point(bundle.pkg, point)
            assert po.check_adjoint_star_formulas()
        for point in points:
            assert bundle.deformer.vanishing_intersections_check(point)
            assert bundle.deformer.harmonic_dimension_split_check(point)
            for p in (0, 1):
                assert bundle.cohomology.dolbeault_jump_check(point, p)
        for p, q in bundle.pres.bidegrees():
            for series in bundle.deformer.series_for_basis("aeppli", p, q):
                assert series.fixed_point_certified
                assert bundle.deformer.aeppli_source_d_closed(series)
                for point in points[:2]:
                    lhs, rhs = bundle.deformer.harmonicity_criterion(series, point)
                    assert lhs == rhs
    print("ACCEPTANCE 6 (property suites): PASS")


def test_criterion_7_unobstructedness_verdicts(iwasawa, nakamura):
    dfm = iwasawa.deformer
    for p, q in iwasawa.pres.bidegrees():
        assert dfm.unobstructedness_report("aeppli", p, q)["canonically_unobstructed"]
    assert dfm.unobstructedness_report("bc", 2, 1)["canonically_unobstructed"]
    for pq in ((2, 0), (2, 2)):
        rep = dfm.unobstructedness_report(
            "bc", *pq, points=[IWASAWA_STRATUM_POINTS["ii"], IWASAWA_STRATUM_POINTS["iii"]]
        )
        assert not rep["canonically_unobstructed"]
        assert any(cls["failing_points"] for cls in rep["classes"])
    # the weak ddbar-lemma implication must never contradict a verdict
    for bundle in (iwasawa, nakamura):
        for theory in ("bc", "aeppli"):
            for p, q in bundle.pres.bidegrees():
                bundle.deformer.unobstructedness_report(theory, p, q)
    print("ACCEPTANCE 7 (unobstructedness verdicts and implications): PASS")


def test_criterion_8_oracle_equivalence(iwasawa, nakamura):
    for bundle, random_points in (
        (iwasawa, _iwasawa_random_points(3)),
        (nakamura, _nakamura_random_points(3)),
    ):
        for point in random_points:
            for p, q in bundle.pres.bidegrees():
                for theory in ("bc", "aeppli"):
                    space = bundle.deformer.rank_matrix(theory, p, q)
                    via_rank = space.rank_at(point)
                    h = len(bundle.pkg.harmonic_vectors(theory, p, q))
                    via_kernel = h - bundle.deformer.defect_kernel_dim(theory, point, p, q)
                    assert via_rank == via_kernel, (bundle.name, theory, p, q)
    print("ACCEPTANCE 8 (rank-matrix vs kernel-dimension oracle equivalence): PASS")
