import pytest

from leakaudit.corpus import render_corpus
from leakaudit.records import generate_identities


@pytest.fixture(scope="session")
def hiring_small():
    return generate_identities("hiring", 12, seed=5)


@pytest.fixture(scope="session")
def medical_small():
    return generate_identities("medical", 12, seed=5)


@pytest.fixture(scope="session")
def hiring_docs(hiring_small):
    return render_corpus(hiring_small, seed=5)


@pytest.fixture(scope="session")
def medical_docs(medical_small):
    return render_corpus(medical_small, seed=5)
