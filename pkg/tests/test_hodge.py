import pytest

from conftest import form, mono
from ddbar import linalg
from ddbar.scalars import QI_I, QI_ONE

# Dimension grids transcribed from the worked examples; rows indexed by q.
IWASAWA_AEPPLI = {
    (0, 0): 1, (1, 0): 3, (2, 0): 2, (3, 0): 1,
    (0, 1): 3, (1, 1): 8, (2, 1): 6, (3, 1): 3,
    (0, 2): 2, (1, 2): 6, (2, 2): 4, (3, 2): 2,
    (0, 3): 1, (1, 3): 3, (2, 3): 2, (3, 3): 1,
}
NAKAMURA_AEPPLI = {
    (0, 0): 1, (1, 0): 5, (2, 0): 3, (3, 0): 1,
    (0, 1): 5, (1, 1): 11, (2, 1): 9, (3, 1): 3,
    (0, 2): 3, (1, 2): 9, (2, 2): 7, (3, 2): 1,
    (0, 3): 1, (1, 3): 3, (2, 3): 1, (3, 3): 1,
}


def _bc_from_aeppli(aeppli, n=3):
    return {(p, q): aeppli[(n - p, n - q)] for (p, q) in aeppli}


def test_inner_product_examples(iwasawa):
    pres, pkg = iwasawa.pres, iwasawa.pkg
    f1 = form(pres, (), ["phi1"], [])
    f2 = form(pres, (), ["phi2"], [])
    assert pkg.inner_product(f1, f1) == QI_ONE
    assert not pkg.inner_product(f1, f2)
    f12 = form(pres, (), ["phi1", "phi2"], [])
    assert pkg.inner_product(f12.scale(QI_I), f12) == QI_I
    with pytest.raises(ValueError):
        pkg.inner_product(f1, f12)


def test_volume_form(iwasawa):
    pres, pkg = iwasawa.pres, iwasawa.pkg
    vol = pkg.volume_form()
    assert list(vol.terms) == [pres.top_monomial]
    assert pkg.inner_product(vol, vol) == QI_ONE


def test_star_identities_and_pairing(iwasawa, nakamura):
    for bundle in (iwasawa, nakamura):
        assert bundle.pkg.check_star_identities()
        assert bundle.pkg.check_star_pairing()


def test_star_square_sign(iwasawa):
    pkg = iwasawa.pkg
    f1 = form(iwasawa.pres, (), ["phi1"], [])
    assert pkg.hodge_star(pkg.hodge_star(f1)) == -f1


def test_aeppli_laplacian_vanishes_at_top(iwasawa):
    box = iwasawa.pkg.laplacian("aeppli", 3, 3)
    assert linalg.mat_is_zero(box)


def test_laplacian_kernel_dimensions(iwasawa):
    pkg = iwasawa.pkg
    assert len(pkg.harmonic_vectors("aeppli", 1, 1)) == 8
    assert len(pkg.harmonic_vectors("bc", 2, 0)) == 3


def test_green_identities(iwasawa, nakamura):
    for bundle in (iwasawa, nakamura):
        assert bundle.pkg.check_green_identities()


def test_green_kills_harmonics(iwasawa):
    pkg = iwasawa.pkg
    for theory in ("bc", "aeppli", "dolbeault"):
        for p, q in iwasawa.pres.bidegrees():
            G = pkg.green(theory, p, q)
            for h in pkg.harmonic_vectors(theory, p, q):
                assert not any(linalg.mat_vec(G, h))


def test_green_inverts_on_image(iwasawa):
    # G_A (∂∂̄)* ∂∂̄ acts as the identity on im (∂∂̄)*
    pkg = iwasawa.pkg
    for p, q in iwasawa.pres.bidegrees():
        dims = iwasawa.pres.dim
        op = linalg.mat_mul_sized(
            pkg.mat("ddbar_star", p + 1, q + 1), pkg.mat("ddbar", p, q),
            dims(p, q), dims(p + 1, q + 1), dims(p, q),
        )
        op = linalg.mat_mul_sized(
            pkg.green("aeppli", p, q), op, dims(p, q), dims(p, q), dims(p, q)
        )
        for col in linalg.columns(pkg.mat("ddbar_star", p + 1, q + 1)):
            assert linalg.mat_vec(op, col) == col


def test_cohomology_tables(iwasawa, nakamura):
    assert iwasawa.pkg.betti_table("aeppli") == IWASAWA_AEPPLI
    assert iwasawa.pkg.betti_table("bc") == _bc_from_aeppli(IWASAWA_AEPPLI)
    assert nakamura.pkg.betti_table("aeppli") == NAKAMURA_AEPPLI
    assert nakamura.pkg.betti_table("bc") == _bc_from_aeppli(NAKAMURA_AEPPLI)


def test_specific_cohomology_values(iwasawa, nakamura):
    assert iwasawa.pkg.cohomology("aeppli", 2, 1).dimension == 6
    assert nakamura.pkg.cohomology("bc", 1, 1).dimension == 7
    assert iwasawa.pkg.cohomology("aeppli", 0, 0).dimension == 1
    assert nakamura.pkg.cohomology("aeppli", 0, 0).dimension == 1
    assert nakamura.pkg.cohomology("aeppli", 2, 1).dimension == 9


def test_star_duality_of_dimensions(iwasawa, nakamura):
    for bundle in (iwasawa, nakamura):
        bc = bundle.pkg.betti_table("bc")
        ae = bundle.pkg.betti_table("aeppli")
        n = bundle.pres.n
        for (p, q), v in bc.items():
            assert v == ae[(n - q, n - p)]
        assert bundle.pkg.check_duality()


def test_aeppli_three_way_orthogonality(iwasawa, nakamura):
    for bundle in (iwasawa, nakamura):
        assert bundle.pkg.check_aeppli_three_way_orthogonality()


def test_kernel_characterizations(iwasawa, nakamura):
    for bundle in (iwasawa, nakamura):
        assert bundle.pkg.check_kernel_characterizations()


IWASAWA_A21_REPS = [
    (["phi1", "phi3"], ["phib1"]), (["phi1", "phi3"], ["phib2"]), (["phi1", "phi3"], ["phib3"]),
    (["phi2", "phi3"], ["phib1"]), (["phi2", "phi3"], ["phib2"]), (["phi2", "phi3"], ["phib3"]),
]
IWASAWA_BC20_REPS = [
    (["phi1", "phi2"], []), (["phi1", "phi3"], []), (["phi2", "phi3"], []),
]
NAKAMURA_BC11_REPS = [
    ((0, 0), ["dz1"], ["dz1b"]),
    ((-1, 0), ["dz1"], ["dz2b"]),
    ((1, 0), ["dz1"], ["dz3b"]),
    ((0, 0), ["dz2"], ["dz3b"]),
    ((0, 0), ["dz3"], ["dz2b"]),
    ((0, -1), ["dz2"], ["dz1b"]),
    ((0, 1), ["dz3"], ["dz1b"]),
]
NAKAMURA_A21_REPS = [
    ((0, 0), ["dz1", "dz2"], ["dz3b"]),
    ((0, 0), ["dz1", "dz3"], ["dz2b"]),
    ((0, 0), ["dz2", "dz3"], ["dz1b"]),
    ((-1, 0), ["dz2", "dz3"], ["dz2b"]),
    ((1, 0), ["dz2", "dz3"], ["dz3b"]),
    ((0, -2), ["dz1", "dz2"], ["dz2b"]),
    ((0, 2), ["dz1", "dz3"], ["dz3b"]),
    ((0, -1), ["dz2", "dz3"], ["dz2b"]),
    ((0, 1), ["dz2", "dz3"], ["dz3b"]),
]


def _assert_harmonic(bundle, theory, p, q, reps):
    pkg = bundle.pkg
    box = pkg.laplacian(theory, p, q)
    assert len(pkg.harmonic_vectors(theory, p, q)) == len(reps)
    for fv in reps:
        coords = bundle.pres.to_coords(fv)
        assert not any(linalg.mat_vec(box, coords))


def test_listed_representatives_are_harmonic(iwasawa, nakamura):
    pres = iwasawa.pres
    _assert_harmonic(
        iwasawa, "aeppli", 2, 1, [form(pres, (), h, a) for h, a in IWASAWA_A21_REPS]
    )
    _assert_harmonic(
        iwasawa, "bc", 2, 0, [form(pres, (), h, a) for h, a in IWASAWA_BC20_REPS]
    )
    presn = nakamura.pres
    _assert_harmonic(
        nakamura, "bc", 1, 1, [form(presn, w, h, a) for w, h, a in NAKAMURA_BC11_REPS]
    )
    _assert_harmonic(
        nakamura, "aeppli", 2, 1, [form(presn, w, h, a) for w, h, a in NAKAMURA_A21_REPS]
    )


def test_harmonic_vs_quotient_consistency(iwasawa, nakamura):
    for bundle in (iwasawa, nakamura):
        for theory in ("bc", "aeppli", "dolbeault"):
            for p, q in bundle.pres.bidegrees():
                group = bundle.pkg.cohomology(theory, p, q)
                assert group.dimension == len(group.harmonic_basis)


# Complete transcription of the listed Aeppli representatives for the nilmanifold
# example: index tuples of coframe letters (holo, anti).
IWASAWA_AEPPLI_LISTS = {
    (0, 0): [((), ())],
    (1, 0): [((1,), ()), ((2,), ()), ((3,), ())],
    (0, 1): [((), (1,)), ((), (2,)), ((), (3,))],
    (2, 0): [((1, 3), ()), ((2, 3), ())],
    (0, 2): [((), (1, 3)), ((), (2, 3))],
    (1, 1): [((j,), (k,)) for j, k in
             [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2)]],
    (3, 0): [((1, 2, 3), ())],
    (0, 3): [((), (1, 2, 3))],
    (2, 1): [((1, 3), (k,)) for k in (1, 2, 3)] + [((2, 3), (k,)) for k in (1, 2, 3)],
    (1, 2): [((j,), (1, 3)) for j in (1, 2, 3)] + [((j,), (2, 3)) for j in (1, 2, 3)],
    (3, 1): [((1, 2, 3), (k,)) for k in (1, 2, 3)],
    (1, 3): [((j,), (1, 2, 3)) for j in (1, 2, 3)],
    (2, 2): [((1, 3), (2, 3)), ((2, 3), (1, 3)), ((2, 3), (2, 3)), ((1, 3), (1, 3))],
    (3, 2): [((1, 2, 3), (1, 3)), ((1, 2, 3), (2, 3))],
    (2, 3): [((1, 3), (1, 2, 3)), ((2, 3), (1, 2, 3))],
    (3, 3): [((1, 2, 3), (1, 2, 3))],
}
IWASAWA_BC_LISTS = {
    (2, 0): [((1, 2), ()), ((1, 3), ()), ((2, 3), ())],
    (2, 1): [((1, 2), (1,)), ((1, 2), (2,)), ((1, 3), (1,)), ((1, 3), (2,)),
             ((2, 3), (1,)), ((2, 3), (2,))],
    (2, 2): [((1, 2), (2, 3)), ((2, 3), (2, 3)), ((1, 3), (2, 3)), ((1, 2), (1, 3)),
             ((2, 3), (1, 3)), ((1, 3), (1, 3)), ((2, 3), (1, 2)), ((1, 3), (1, 2))],
}

# Weighted representatives for the solvmanifold example: (weight, holo, anti).
NAKAMURA_AEPPLI_LISTS = {
    (1, 0): [((0, 0), (1,), ()), ((-1, 0), (2,), ()), ((1, 0), (3,), ()),
             ((0, -1), (2,), ()), ((0, 1), (3,), ())],
    (0, 1): [((0, 0), (), (1,)), ((-1, 0), (), (2,)), ((1, 0), (), (3,)),
             ((0, -1), (), (2,)), ((0, 1), (), (3,))],
    (1, 1): [((0, 0), (1,), (1,)), ((-1, 0), (2,), (1,)), ((-2, 0), (2,), (2,)),
             ((0, 0), (2,), (3,)), ((1, 0), (3,), (1,)), ((0, 0), (3,), (2,)),
             ((2, 0), (3,), (3,)), ((0, -1), (1,), (2,)), ((0, 1), (1,), (3,)),
             ((0, -2), (2,), (2,)), ((0, 2), (3,), (3,))],
    (2, 1): [((0, 0), (1, 2), (3,)), ((0, 0), (1, 3), (2,)), ((0, 0), (2, 3), (1,)),
             ((-1, 0), (2, 3), (2,)), ((1, 0), (2, 3), (3,)), ((0, -2), (1, 2), (2,)),
             ((0, 2), (1, 3), (3,)), ((0, -1), (2, 3), (2,)), ((0, 1), (2, 3), (3,))],
    (1, 2): [((0, 0), (1,), (2, 3)), ((-2, 0), (2,), (1, 2)), ((0, 0), (2,), (1, 3)),
             ((-1, 0), (2,), (2, 3)), ((0, 0), (3,), (1, 2)), ((2, 0), (3,), (1, 3)),
             ((1, 0), (3,), (2, 3)), ((0, -1), (2,), (2, 3)), ((0, 1), (3,), (2, 3))],
}
NAKAMURA_BC_LISTS = {
    (2, 0): [((-1, 0), (1, 2), ()), ((1, 0), (1, 3), ()), ((0, 0), (2, 3), ())],
    (1, 1): [((0, 0), (1,), (1,)), ((-1, 0), (1,), (2,)), ((1, 0), (1,), (3,)),
             ((0, 0), (2,), (3,)), ((0, 0), (3,), (2,)), ((0, -1), (2,), (1,)),
             ((0, 1), (3,), (1,))],
    (2, 1): [((-1, 0), (1, 2), (1,)), ((-2, 0), (1, 2), (2,)), ((0, 0), (1, 2), (3,)),
             ((1, 0), (1, 3), (1,)), ((0, 0), (1, 3), (2,)), ((2, 0), (1, 3), (3,)),
             ((0, 0), (2, 3), (1,)), ((0, -1), (1, 2), (1,)), ((0, 1), (1, 3), (1,))],
    (1, 2): [((-1, 0), (1,), (1, 2)), ((1, 0), (1,), (1, 3)), ((0, 0), (1,), (2, 3)),
             ((0, 0), (2,), (1, 3)), ((0, 0), (3,), (1, 2)), ((0, -1), (1,), (1, 2)),
             ((0, 1), (1,), (1, 3)), ((0, -2), (2,), (1, 2)), ((0, 2), (3,), (1, 3))],
    (3, 1): [((0, 0), (1, 2, 3), (1,)), ((-1, 0), (1, 2, 3), (2,)), ((1, 0), (1, 2, 3), (3,))],
    (2, 2): [((-2, 0), (1, 2), (1, 2)), ((0, 0), (1, 2), (1, 3)), ((-1, 0), (1, 2), (2, 3)),
             ((0, 0), (1, 3), (1, 2)), ((2, 0), (1, 3), (1, 3)), ((1, 0), (1, 3), (2, 3)),
             ((0, 0), (2, 3), (2, 3)), ((0, -2), (1, 2), (1, 2)), ((0, 2), (1, 3), (1, 3)),
             ((0, -1), (2, 3), (1, 2)), ((0, 1), (2, 3), (1, 3))],
    (3, 2): [((-1, 0), (1, 2, 3), (1, 2)), ((1, 0), (1, 2, 3), (1, 3)), ((0, 0), (1, 2, 3), (2, 3)),
             ((0, -1), (1, 2, 3), (1, 2)), ((0, 1), (1, 2, 3), (1, 3))],
    (2, 3): [((-1, 0), (1, 2), (1, 2, 3)), ((1, 0), (1, 3), (1, 2, 3)), ((0, 0), (2, 3), (1, 2, 3)),
             ((0, -1), (1, 2), (1, 2, 3)), ((0, 1), (1, 3), (1, 2, 3))],
}


def test_full_iwasawa_lists_harmonic(iwasawa):
    pres = iwasawa.pres
    for (p, q), reps in IWASAWA_AEPPLI_LISTS.items():
        forms = [
            form(pres, (), ["phi%d" % j for j in holo], ["phib%d" % k for k in anti])
            for holo, anti in reps
        ]
        _assert_harmonic(iwasawa, "aeppli", p, q, forms)
    for (p, q), reps in IWASAWA_BC_LISTS.items():
        forms = [
            form(pres, (), ["phi%d" % j for j in holo], ["phib%d" % k for k in anti])
            for holo, anti in reps
        ]
        _assert_harmonic(iwasawa, "bc", p, q, forms)


def test_full_nakamura_lists_harmonic(nakamura):
    pres = nakamura.pres
    for theory, lists in (("aeppli", NAKAMURA_AEPPLI_LISTS), ("bc", NAKAMURA_BC_LISTS)):
        for (p, q), reps in lists.items():
            forms = [
                form(pres, w, ["dz%d" % j for j in holo], ["dz%db" % k for k in anti])
                for w, holo, anti in reps
            ]
            _assert_harmonic(nakamura, theory, p, q, forms)
