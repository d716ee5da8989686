import pytest


@pytest.fixture
def g1_document():
    # one player, two actions, two states; each state rewards matching it
    return {
        "kind": "game",
        "num_players": 1,
        "num_actions": 2,
        "num_states": 2,
        "prior": [0.5, 0.5],
        "payoffs": [[[1.0, 0.0], [0.0, 1.0]]],
        "objective": [[1.0, 0.0], [0.0, 1.0]],
    }


@pytest.fixture
def a1_document():
    return {
        "kind": "auction",
        "num_bidders": 2,
        "num_states": 2,
        "prior": [0.5, 0.5],
        "valuations": [{"probability": 1.0, "matrix": [[1.0, 0.0], [0.0, 1.0]]}],
    }
