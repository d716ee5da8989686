import json

import numpy as np

from app.lib.model import AuctionInstance, BayesianGame


def create_test_game(rng: np.random.Generator, **kwargs) -> BayesianGame:
    n = kwargs.get("num_players", 2)
    m = kwargs.get("num_actions", 2)
    num_states = kwargs.get("num_states", 2)
    prior = kwargs.get("prior")
    if prior is None:
        prior = rng.dirichlet(np.ones(num_states))
    shape = (num_states,) + (m,) * n
    payoffs = rng.uniform(-1, 1, size=(n,) + shape)
    objective = kwargs.get("objective")
    if objective is None:
        objective = rng.uniform(-1, 1, size=shape)
    return BayesianGame(prior=np.asarray(prior, dtype=float), payoffs=payoffs,
                        objective=np.asarray(objective, dtype=float))


def create_zero_sum_game(rng: np.random.Generator, num_actions: int = 2, num_states: int = 2) -> BayesianGame:
    a = rng.uniform(-1, 1, size=(num_states, num_actions, num_actions))
    return BayesianGame(prior=rng.dirichlet(np.ones(num_states)), payoffs=np.stack([a, -a]),
                        objective=a.copy())


def create_test_auction(rng: np.random.Generator, **kwargs) -> AuctionInstance:
    n = kwargs.get("num_bidders", 2)
    num_states = kwargs.get("num_states", 3)
    r = kwargs.get("support_size", 2)
    return AuctionInstance(
        prior=rng.dirichlet(np.ones(num_states)),
        valuations=rng.random((r, n, num_states)),
        probabilities=rng.dirichlet(np.ones(r)),
        num_signals=kwargs.get("num_signals"),
    )


def write_json(path, document: dict):
    path.write_text(json.dumps(document))
    return path
