import random

import pytest
from hypothesis import settings

from tng.corpus import corpus_knots, get
from tng.exact.laurent import LaurentPoly

settings.register_profile("tng", deadline=None, max_examples=60)
settings.load_profile("tng")


def upoly(coeffs, low=0, m=None):
    """Univariate polynomial sum coeffs[i] t^(low+i)."""
    return LaurentPoly.from_coeffs(coeffs, low, m)


def mpoly(terms, nvars=2):
    """Multivariable polynomial from {exponent tuple: coefficient}."""
    return LaurentPoly(nvars, terms)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def trefoil():
    return get("trefoil")


@pytest.fixture(scope="session")
def figure_eight():
    return get("figure_eight")


@pytest.fixture(scope="session")
def whitehead():
    return get("whitehead")


@pytest.fixture(scope="session")
def unknot():
    return get("unknot")


@pytest.fixture(scope="session")
def knots():
    return corpus_knots()


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
