import itertools
import math

import numpy as np
import pytest

from app.core.errors import EnumerationCapError, InstanceValidationError
from app.lib.auctions.brute_force import brute_force_auction
from app.lib.auctions.signaling import GroundSet, solve_auction_signaling
from app.lib.auctions.welfare import tuple_scores, welfare_of_scheme, welfare_set_function
from app.lib.auctions.winner_net import WinnerNetParams, enumerate_winner_net
from app.lib.model import AuctionInstance
from tests.utils import create_test_auction


def test_a1_two_signals(a1):
    result = solve_auction_signaling(a1, 2, 0.3, WinnerNetParams(multiset_size=2))
    assert result.welfare == pytest.approx(1.0)
    assert result.assignment == (0, 1)
    assert result.multiset_size == 2


def test_a1_one_signal(a1):
    result = solve_auction_signaling(a1, 1, 0.3, WinnerNetParams(multiset_size=2))
    assert result.welfare == pytest.approx(0.5)
    assert len(set(result.assignment)) == 1


def test_a1_default_net(a1):
    result = solve_auction_signaling(a1, 2, 0.3)
    assert result.welfare == pytest.approx(1.0)
    assert result.multiset_size == math.ceil(2 * math.log(8) / 0.09)


def test_full_ground(a1):
    result = solve_auction_signaling(a1, 2, 0.3, ground=GroundSet.FULL)
    assert result.welfare == pytest.approx(1.0)
    assert result.multiset_size is None
    assert result.ground_size == 2


def test_single_state_any_budget():
    auction = AuctionInstance(prior=np.array([1.0]), valuations=np.array([[[0.2], [0.7]], [[0.9], [0.1]]]),
                              probabilities=np.array([0.5, 0.5]))
    for k in (1, 3):
        assert solve_auction_signaling(auction, k, 0.3).welfare == pytest.approx(0.8)


def test_rejects_bad_budget(a1):
    with pytest.raises(InstanceValidationError):
        solve_auction_signaling(a1, 0, 0.3)
    with pytest.raises(InstanceValidationError):
        solve_auction_signaling(a1, 1, 0.0)


def test_brute_force_needs_a_signal(a1):
    with pytest.raises(InstanceValidationError, match="k must be at least 1"):
        brute_force_auction(a1, 0)


def test_brute_force_a1(a1):
    assert brute_force_auction(a1, 2).welfare == pytest.approx(1.0)
    assert brute_force_auction(a1, 1).welfare == pytest.approx(0.5)


def test_brute_force_large_budget_is_full_revelation(rng):
    auction = create_test_auction(rng, num_bidders=3, num_states=4, support_size=2)
    closed_form = np.einsum("m,t,tm->", auction.prior, auction.probabilities, auction.valuations.max(axis=1))
    assert brute_force_auction(auction, 5).welfare == pytest.approx(closed_form, abs=1e-12)


def test_brute_force_cap(rng):
    auction = create_test_auction(rng, num_states=6)
    with pytest.raises(EnumerationCapError):
        brute_force_auction(auction, 3, cap=100)


def test_end_to_end_approximation_guarantee():
    rng = np.random.default_rng(3)
    bound = 1 - 1 / math.e
    ratios = []
    for _ in range(100):
        n, num_states = int(rng.integers(1, 5)), int(rng.integers(1, 7))
        r, k = int(rng.integers(1, 5)), int(rng.integers(1, 4))
        auction = create_test_auction(rng, num_bidders=n, num_states=num_states, support_size=r)
        formula = WinnerNetParams.resolve(None, auction, 0.3)
        params = WinnerNetParams(multiset_size=min(formula.multiset_size, 4))
        result = solve_auction_signaling(auction, k, 0.3, params)
        optimum = brute_force_auction(auction, k).welfare

        assert result.welfare >= bound * (optimum - 0.3) - 1e-9
        assert result.welfare <= optimum + 1e-9
        assert welfare_of_scheme(auction, result.assignment) == pytest.approx(result.welfare, abs=1e-12)
        assert all(0 <= s < k for s in result.assignment)
        if num_states > 1:
            identity = welfare_of_scheme(auction, list(range(num_states)))
            assert identity >= result.welfare - 1e-9
        if optimum > 0:
            ratios.append(result.welfare / optimum)
    assert np.mean(ratios) > bound


def test_net_contains_near_optimal_tuples():
    # formula multiset size at epsilon 0.3; M <= 4 keeps C(M + s - 1, s) under the cap
    rng = np.random.default_rng(41)
    for trial in range(30):
        n, num_states = int(rng.integers(1, 4)), int(rng.integers(1, 5))
        r, k = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        auction = create_test_auction(rng, num_bidders=n, num_states=num_states, support_size=r)
        params = WinnerNetParams.resolve(None, auction, 0.3)
        assert params.from_formula
        net = enumerate_winner_net(auction, params.multiset_size, params.enumeration_cap)

        scores = tuple_scores(auction, net)
        size = min(k, net.shape[0])
        best = max(itertools.combinations(range(net.shape[0]), size),
                   key=lambda subset: scores[:, list(subset)].max(axis=1).sum())
        value = welfare_set_function(auction, [tuple(net[j]) for j in best])

        optimum = brute_force_auction(auction, k).welfare
        assert value >= optimum - 0.3 - 1e-9, f"trial {trial}"
