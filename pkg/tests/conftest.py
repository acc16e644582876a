import pytest

import infodesign as idg


@pytest.fixture(scope="session")
def example_model():
    return idg.motivating_example()


@pytest.fixture(scope="session")
def example_problem(example_model):
    return idg.build_treatment_problem(example_model)


@pytest.fixture(scope="session")
def example_marginal_yt(example_model):
    return idg.marginal_structure(example_model, ["Y", "T"])
