import itertools
import math

import numpy as np
import pytest

from app.lib.auctions.greedy import greedy_max
from app.lib.auctions.welfare import welfare_set_function
from app.lib.auctions.winner_net import full_winner_ground
from tests.utils import create_test_auction


def test_a1_picks_both_tuples(a1):
    result = greedy_max(a1, [(0,), (1,)], 2)
    assert result.selected == ((0,), (1,))
    assert result.value == pytest.approx(1.0)
    assert result.gains == pytest.approx((0.5, 0.5))


def test_a1_tie_goes_to_smallest_tuple(a1):
    assert greedy_max(a1, [(1,), (0,)], 1).selected == ((0,),)


def test_budget_beyond_ground_returns_everything(rng):
    auction = create_test_auction(rng)
    ground = full_winner_ground(auction)
    result = greedy_max(auction, ground, len(ground) + 3)
    assert sorted(result.selected) == sorted(tuple(w) for w in ground.tolist())


def test_empty_ground_is_rejected(a1):
    with pytest.raises(ValueError):
        greedy_max(a1, [], 1)


def test_lazy_matches_naive(rng):
    for _ in range(50):
        auction = create_test_auction(rng, num_bidders=3, num_states=5, support_size=2)
        ground = full_winner_ground(auction)
        k = int(rng.integers(1, 5))
        naive = greedy_max(auction, ground, k)
        lazy = greedy_max(auction, ground, k, lazy=True)
        assert lazy.selected == naive.selected
        assert lazy.gains == naive.gains


def test_lazy_matches_naive_with_ties(a1):
    ground = [(0,), (1,)]
    assert greedy_max(a1, ground, 2, lazy=True).selected == greedy_max(a1, ground, 2).selected


def test_greedy_factor_against_exhaustive_search(rng):
    bound = 1 - 1 / math.e
    for _ in range(40):
        auction = create_test_auction(rng, num_bidders=3, num_states=4, support_size=2)
        ground = [tuple(w) for w in full_winner_ground(auction).tolist()]
        k = int(rng.integers(1, 4))
        assert math.comb(len(ground), k) <= 10**4
        best = max(welfare_set_function(auction, list(subset))
                   for subset in itertools.combinations(ground, k))
        assert greedy_max(auction, ground, k).value >= bound * best - 1e-9


def test_gains_sum_to_value(rng):
    auction = create_test_auction(rng, num_bidders=2, num_states=6, support_size=3)
    result = greedy_max(auction, full_winner_ground(auction), 3)
    assert sum(result.gains) == pytest.approx(result.value, abs=1e-12)
    assert list(result.gains) == sorted(result.gains, reverse=True)
    assert np.all(np.array(result.gains) >= 0)
