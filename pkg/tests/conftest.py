from pathlib import Path

import pytest

from igcert.biorder import extract_biorder
from igcert.corpus import full_transformation_monoid, rectangular_band, right_zero, standard_corpus
from igcert.semigroup import matrix_monoid

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def corpus():
    return standard_corpus()


@pytest.fixture(scope="session")
def rz():
    return extract_biorder(right_zero(2))


@pytest.fixture(scope="session")
def band():
    return extract_biorder(rectangular_band(2, 2))


@pytest.fixture(scope="session")
def t2():
    return extract_biorder(full_transformation_monoid(2))


@pytest.fixture(scope="session")
def t3():
    return extract_biorder(full_transformation_monoid(3))


@pytest.fixture(scope="session")
def m2():
    return extract_biorder(matrix_monoid(2, 2))


@pytest.fixture
def data_dir():
    return DATA
