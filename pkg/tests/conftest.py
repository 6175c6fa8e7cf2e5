import pytest

from actionccg import load_axioms, load_corpus, load_lexicon
from actionccg.corpus import data_path


@pytest.fixture(scope="session")
def basic_lexicon():
    return load_lexicon(data_path("basic.lex"))


@pytest.fixture(scope="session")
def quantifier_lexicon():
    return load_lexicon(data_path("quantifier.lex"))


@pytest.fixture(scope="session")
def seed_lexicon():
    return load_lexicon(data_path("seed.lex"))


@pytest.fixture(scope="session")
def table1_samples():
    return load_corpus(data_path("table1.corpus"))


@pytest.fixture(scope="session")
def shipped_axioms():
    return load_axioms(data_path("axioms.rules"))
