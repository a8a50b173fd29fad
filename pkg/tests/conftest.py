import sys
import os
import pytest
from faker import Faker

# Add the project root to sys.path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

CORPUS_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "corpus"))


def corpus_path(name):
    return os.path.join(CORPUS_DIR, f"{name}.cp")


@pytest.fixture
def app():
    from cohpres import create_app
    app = create_app()
    with app.app_context():
        yield app


@pytest.fixture
def runner(app):
    return app.test_cli_runner()


@pytest.fixture
def fake():
    Faker.seed(2024)
    return Faker()


def _load(name):
    from cohpres.dsl import load_presentation
    return load_presentation(corpus_path(name))


@pytest.fixture(scope="session")
def ds2():
    return _load("ds2")


@pytest.fixture(scope="session")
def ds2op():
    return _load("ds2op")


@pytest.fixture(scope="session")
def deltas():
    return _load("deltas")


@pytest.fixture(scope="session")
def huet():
    return _load("huet")


@pytest.fixture(scope="session")
def ds2_table(ds2):
    from cohpres.residuation import derive_residual_table
    return derive_residual_table(ds2)


@pytest.fixture(scope="session")
def ds2op_table(ds2op):
    from cohpres.residuation import derive_residual_table
    return derive_residual_table(ds2op)
