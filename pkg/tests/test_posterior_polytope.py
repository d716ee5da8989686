import numpy as np

from app.lib.games.equilibrium_net import EquilibriumConcept, check_equilibrium, enumerate_net, enumerate_profiles
from app.lib.games.posterior_polytope import PosteriorPolytope, build_polytope, polytope_nonempty
from app.lib.model import MixedProfile, posterior_game
from tests.utils import create_test_game


def test_g1_pure_action_single_row(g1):
    polytope = build_polytope(g1, MixedProfile.pure([0], 2), 0.0)
    np.testing.assert_array_equal(polytope.a, [[-1.0, 1.0]])
    np.testing.assert_array_equal(polytope.b, [0.0])
    assert polytope.row_count == 2
    assert polytope.contains(np.array([0.5, 0.5]))
    assert not polytope.contains(np.array([0.4, 0.6]))


def test_g1_slack_moves_the_boundary(g1):
    polytope = build_polytope(g1, MixedProfile.pure([0], 2), 0.2)
    np.testing.assert_array_equal(polytope.b, [0.2])
    assert polytope.contains(np.array([0.4, 0.6]))
    assert not polytope.contains(np.array([0.35, 0.65]))


def test_half_simplex_is_nonempty():
    polytope = PosteriorPolytope(a=np.array([[-1.0, 0.0]]), b=np.array([-0.5]),
                                 profile=MixedProfile.pure([0], 2), epsilon=0.0,
                                 concept=EquilibriumConcept.NE, row_count=1)
    assert polytope_nonempty(polytope)


def test_disjoint_constraints_are_empty():
    polytope = PosteriorPolytope(a=np.array([[-1.0, 0.0], [1.0, 0.0]]), b=np.array([-0.6, 0.4]),
                                 profile=MixedProfile.pure([0], 2), epsilon=0.0,
                                 concept=EquilibriumConcept.NE, row_count=2)
    assert not polytope_nonempty(polytope)


def test_large_slack_covers_the_simplex(rng):
    game = create_test_game(rng, num_states=3)
    for profile in enumerate_profiles(enumerate_net(2, 2), 2):
        polytope = build_polytope(game, profile, 2.0)
        assert polytope_nonempty(polytope)
        for mu in rng.dirichlet(np.ones(3), size=5):
            assert polytope.contains(mu)


def test_membership_agrees_with_equilibrium_check(rng):
    for epsilon in (0.0, 0.1, 0.5):
        for concept in EquilibriumConcept:
            n, m = int(rng.integers(1, 3)), int(rng.choice([2, 3]))
            num_states = int(rng.integers(1, 4))
            game = create_test_game(rng, num_players=n, num_actions=m, num_states=num_states)
            for profile in enumerate_profiles(enumerate_net(m, 2), n):
                polytope = build_polytope(game, profile, epsilon, concept)
                for mu in rng.dirichlet(np.ones(num_states), size=5):
                    check = check_equilibrium(posterior_game(game, mu).payoffs, profile, epsilon, concept)
                    # away from the boundary both tests must agree
                    if abs(check.regret - epsilon) > 1e-6:
                        assert polytope.contains(mu) == (check.regret <= epsilon)


def test_homogenized_rows(g1):
    polytope = build_polytope(g1, MixedProfile.pure([0], 2), 0.2)
    rows = polytope.homogenized()
    gamma = np.array([0.3, 0.5])
    assert (rows @ gamma <= 0).all() == polytope.contains(gamma / gamma.sum())
    np.testing.assert_allclose(rows[0], [-1.2, 0.8])


def test_more_slack_gives_a_larger_polytope(rng):
    for concept in EquilibriumConcept:
        game = create_test_game(rng, num_actions=3, num_states=3)
        for profile in enumerate_profiles(enumerate_net(3, 2), 2)[::5]:
            tight = build_polytope(game, profile, 0.1, concept)
            loose = build_polytope(game, profile, 0.4, concept)
            np.testing.assert_array_equal(tight.a, loose.a)
            assert np.all(loose.b >= tight.b)
            for mu in rng.dirichlet(np.ones(3), size=10):
                if tight.contains(mu):
                    assert loose.contains(mu)


def test_mixtures_of_members_stay_inside(rng, tolerances):
    game = create_test_game(rng, num_actions=2, num_states=3)
    for profile in enumerate_profiles(enumerate_net(2, 2), 2):
        polytope = build_polytope(game, profile, 0.5)
        members = [mu for mu in rng.dirichlet(np.ones(3), size=40) if polytope.contains(mu)]
        for mu, nu in zip(members, members[1:]):
            a = rng.random()
            mix = a * mu + (1 - a) * nu
            assert np.all(polytope.a @ mix <= polytope.b + tolerances.feasibility_eps)
