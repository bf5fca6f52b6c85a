import json
import random
from importlib import resources
from math import comb

import pytest

from conftest import form, mono
from ddbar.errors import PresentationError
from ddbar.presentation import FormVector, presentation_from_json
from ddbar.scalars import QI_I, QI_ONE


def test_iwasawa_basis_counts(iwasawa):
    pres = iwasawa.pres
    assert pres.dim(3, 3) == 1
    assert pres.dim(1, 1) == 9
    for p in range(4):
        for q in range(4):
            assert pres.dim(p, q) == comb(3, p) * comb(3, q)


def test_nakamura_basis_counts(nakamura):
    pres = nakamura.pres
    expected = {
        (0, 0): 1, (1, 0): 5, (0, 1): 5, (2, 0): 5, (1, 1): 15, (0, 2): 5,
        (3, 0): 1, (2, 1): 15, (1, 2): 15, (0, 3): 1, (3, 1): 5, (2, 2): 15,
        (1, 3): 5, (3, 2): 5, (2, 3): 5, (3, 3): 1,
    }
    for pq, d in expected.items():
        assert pres.dim(*pq) == d
    assert sum(expected.values()) == 104


def test_iwasawa_structure_equation(iwasawa):
    pres = iwasawa.pres
    phi3 = mono(pres, (), ["phi3"], [])
    d_part = pres.d_monomial(phi3, "partial")
    assert d_part == form(pres, (), ["phi1", "phi2"], [], coeff=-1)
    assert not pres.d_monomial(phi3, "dbar")


def test_nakamura_weighted_leibniz(nakamura):
    pres = nakamura.pres
    m = mono(pres, (-1, 0), ["dz2"], [])
    assert pres.d_monomial(m, "partial") == form(pres, (-1, 0), ["dz1", "dz2"], [], coeff=-1)
    assert not pres.d_monomial(m, "dbar")


def test_top_degree_closed(iwasawa, nakamura):
    for bundle in (iwasawa, nakamura):
        top = bundle.pres.top_monomial
        assert not bundle.pres.d_monomial(top, "partial")
        assert not bundle.pres.d_monomial(top, "dbar")


def test_wedge_basics(iwasawa):
    pres = iwasawa.pres
    f1 = form(pres, (), ["phi1"], [])
    f2 = form(pres, (), ["phi2"], [])
    f12 = form(pres, (), ["phi1", "phi2"], [])
    assert pres.wedge(f1, f2) == f12
    assert not pres.wedge(f1, f1)
    assert pres.wedge(f2, f1) == -f12


def test_wedge_graded_commutative_exhaustive(iwasawa):
    pres = iwasawa.pres
    monos = [m for pq in pres.bidegrees() for m in pres.basis(*pq)]
    for a in monos:
        fa = pres.basis_form(a)
        da = sum(a.bidegree)
        for b in monos:
            fb = pres.basis_form(b)
            ab = pres.wedge(fa, fb)
            ba = pres.wedge(fb, fa)
            if (da * sum(b.bidegree)) % 2:
                assert ab == -ba
            else:
                assert ab == ba


def test_wedge_associative(iwasawa, nakamura):
    pres = iwasawa.pres
    monos = [m for pq in pres.bidegrees() for m in pres.basis(*pq)]
    rng = random.Random(3)
    triples = [tuple(rng.choice(monos) for _ in range(3)) for _ in range(4000)]
    gens = [pres.atom_monomial(g) for g in pres.generators]
    triples += [(a, b, c) for a in gens for b in gens for c in gens]
    for a, b, c in triples:
        fa, fb, fc = (pres.basis_form(x) for x in (a, b, c))
        assert pres.wedge(pres.wedge(fa, fb), fc) == pres.wedge(fa, pres.wedge(fb, fc))
    presn = nakamura.pres
    monos = [m for pq in presn.bidegrees() for m in presn.basis(*pq)]
    triples = [tuple(rng.choice(monos) for _ in range(3)) for _ in range(4000)]
    for a, b, c in triples:
        fa, fb, fc = (presn.basis_form(x) for x in (a, b, c))
        assert presn.wedge(presn.wedge(fa, fb), fc) == presn.wedge(fa, presn.wedge(fb, fc))


def test_wedge_weights_add(nakamura):
    pres = nakamura.pres
    a = mono(pres, (-1, 0), ["dz2"], [])
    b = mono(pres, (0, 1), ["dz3"], [])
    res = pres.wedge_monomials(a, b)
    assert res is not None
    sign, m = res
    assert m.weight == (-1, 1)  # ambient result, outside the declared classes
    assert m not in pres.basis_index(2, 0)


def test_conjugation(iwasawa):
    pres = iwasawa.pres
    f1 = form(pres, (), ["phi1"], [])
    assert pres.conjugate(f1) == form(pres, (), [], ["phib1"])
    # conj(i·φ¹∧φ̄²) = -i·φ̄¹∧φ² = +i·φ²∧φ̄¹ in holo-first ordering
    mixed = form(pres, (), ["phi1"], ["phib2"], coeff=QI_I)
    expect = form(pres, (), ["phi2"], ["phib1"], coeff=QI_I)
    assert pres.conjugate(mixed) == expect
    monos = [m for pq in pres.bidegrees() for m in pres.basis(*pq)]
    for m in monos:
        fv = pres.basis_form(m)
        assert pres.conjugate(pres.conjugate(fv)) == fv


def test_conjugation_involution_weighted(nakamura):
    pres = nakamura.pres
    for pq in pres.bidegrees():
        for m in pres.basis(*pq):
            fv = pres.basis_form(m)
            assert pres.conjugate(pres.conjugate(fv)) == fv


def test_contraction_examples(iwasawa):
    pres = iwasawa.pres
    f12 = form(pres, (), ["phi1", "phi2"], [])
    f13 = form(pres, (), ["phi1", "phi3"], [])
    assert pres.contract("theta1", f12) == form(pres, (), ["phi2"], [])
    assert not pres.contract("theta3", f12)
    assert pres.contract("theta1", f13) == form(pres, (), ["phi3"], [])
    with pytest.raises(KeyError):
        pres.contract("theta9", f12)


def test_validation_passes(iwasawa, nakamura):
    assert iwasawa.validation.ok
    assert nakamura.validation.ok
    assert iwasawa.validation.star_closed
    assert nakamura.validation.star_closed


def test_validation_catches_wrong_bidegree_image():
    data = json.loads(resources.files("ddbar").joinpath("data/iwasawa.json").read_text())
    # corrupt: d(phi3) = phi1 ^ phib1 has bidegree (1,1), not (2,0)
    data["d"][0]["partial"] = [{"coeff": "1", "monomial": ["phi1", "phib1"]}]
    pres = presentation_from_json(data)
    report = pres.validate()
    assert not report.ok
    assert any("phi3" in f for f in report.failures)


def test_validation_catches_broken_d_squared():
    data = json.loads(resources.files("ddbar").joinpath("data/iwasawa.json").read_text())
    # d(phi3) = -phi^{12} but conjugate structure dropped: conj-compat and d² break
    data["d"] = [{"gen": "phi3", "partial": [{"coeff": "-1", "monomial": ["phi1", "phi2"]}], "dbar": []},
                 {"gen": "phib3", "partial": [], "dbar": []}]
    pres = presentation_from_json(data)
    report = pres.validate()
    assert not report.ok


def test_out_of_complex_coordinates_raise(nakamura):
    pres = nakamura.pres
    a = pres.basis_form(mono(pres, (-1, 0), ["dz2"], []))
    b = pres.basis_form(mono(pres, (0, 1), ["dz3"], []))
    outside = pres.wedge(a, b)
    with pytest.raises(PresentationError):
        pres.to_coords(outside)
