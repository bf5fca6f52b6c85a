import pytest

from ddbar.examples_data import load_example


@pytest.fixture(scope="session")
def iwasawa():
    return load_example("iwasawa")


@pytest.fixture(scope="session")
def nakamura():
    return load_example("nakamura")


@pytest.fixture(scope="session")
def iwasawa_points(iwasawa):
    return {
        name: iwasawa.stratum(name).preferred_points[0] for name in ("i", "ii", "iii")
    }


@pytest.fixture(scope="session")
def nakamura_point():
    return {"t": "1/2"}


def mono(pres, weight, holo_letters, anti_letters):
    """Basis monomial from letter names (helper for transcribing representatives)."""
    from ddbar.presentation import Monomial

    return Monomial(
        tuple(weight),
        tuple(sorted(pres.letter_index[x] for x in holo_letters)),
        tuple(sorted(pres.letter_index[x] for x in anti_letters)),
    )


def form(pres, weight, holo_letters, anti_letters, coeff=1):
    from ddbar.presentation import FormVector
    from ddbar.scalars import parse_gaussian

    m = mono(pres, weight, holo_letters, anti_letters)
    return FormVector(m.bidegree, {m: parse_gaussian(coeff)})
