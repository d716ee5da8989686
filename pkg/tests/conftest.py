import numpy as np
import pytest

from app.core.config import DEFAULT_TOLERANCES
from app.lib.model import AuctionInstance, BayesianGame
from tests.fixtures import a1_document, g1_document  # noqa: F401
from tests.utils import write_json


@pytest.fixture
def g1():
    a = np.array([[1.0, 0.0], [0.0, 1.0]])
    return BayesianGame(prior=np.array([0.5, 0.5]), payoffs=a[None].copy(), objective=a.copy())


@pytest.fixture
def a1():
    return AuctionInstance(
        prior=np.array([0.5, 0.5]),
        valuations=np.array([[[1.0, 0.0], [0.0, 1.0]]]),
        probabilities=np.array([1.0]),
    )


@pytest.fixture
def tolerances():
    return DEFAULT_TOLERANCES


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def g1_file(tmp_path, g1_document):
    return write_json(tmp_path / "G1.json", g1_document)


@pytest.fixture
def a1_file(tmp_path, a1_document):
    return write_json(tmp_path / "A1.json", a1_document)
