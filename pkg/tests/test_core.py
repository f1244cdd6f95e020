from fractions import Fraction as F

import numpy as np
import pytest

from nashax.core import (Game, GameError, Profile, action_values, affine_transform, contort_profile,
                         convex_combine, expected_payoffs, extend_profile, hadamard_contort,
                         normalize, player_payoff_projection, profile_distance, restrict,
                         restrict_profile)
from nashax.equilibrium import is_nash


def test_actions_are_stored_sorted_and_payoffs_follow():
    g = Game([("b", "a"), (2, 1)], [[[1, 2], [3, 4]], [[5, 6], [7, 8]]])
    assert g.actions == (("a", "b"), (1, 2))
    # ("b", 2) was the first cell supplied
    assert g.payoff(("b", 2)) == (1, 5)
    assert g.payoff(("a", 1)) == (4, 8)
    assert g == Game([("a", "b"), (1, 2)], [[[4, 3], [2, 1]], [[8, 7], [6, 5]]])


def test_payoffs_are_fractions_and_read_only():
    g = Game.bimatrix([[1, "1/2"]], [[0, 0]])
    assert all(isinstance(v, F) for v in g.payoffs.flat)
    with pytest.raises(ValueError):
        g.payoffs[0, 0, 0] = F(9)


@pytest.mark.parametrize("actions, payoffs, message", [
    ([(1, 1), (1,)], np.zeros((2, 2, 1), dtype=int), "duplicate"),
    ([(), (1,)], np.zeros((2, 0, 1), dtype=int), "no actions"),
    ([(1, "a"), (1,)], np.zeros((2, 2, 1), dtype=int), "comparable"),
    ([(1, 2), (1,)], np.zeros((2, 2, 2), dtype=int), "shape"),
])
def test_malformed_games_are_rejected(actions, payoffs, message):
    with pytest.raises(GameError, match=message):
        Game(actions, payoffs)


def test_float_payoffs_are_rejected():
    with pytest.raises(TypeError):
        Game.bimatrix([[0.5]], [[0]])


def test_game_arithmetic(matching_pennies):
    doubled = matching_pennies + matching_pennies
    assert doubled == 2 * matching_pennies
    assert (doubled - matching_pennies) == matching_pennies
    assert hash(doubled) == hash(matching_pennies * 2)


def test_profile_validation():
    acts = [(1, 2), (1, 2)]
    with pytest.raises(GameError, match="sum"):
        Profile(acts, [[F(1, 2), F(1, 3)], [1, 0]])
    with pytest.raises(GameError, match="negative"):
        Profile(acts, [[2, -1], [1, 0]])
    with pytest.raises(GameError, match="unknown"):
        Profile.from_dicts(acts, [{3: 1}, {1: 1}])
    p = Profile.uniform(acts)
    assert p.is_full_support() and not p.is_pure()
    assert Profile.pure(acts, (2, 1)).support(0) == (2,)


def test_expected_payoffs_by_hand(matching_pennies):
    p = Profile(matching_pennies, [[F(3, 4), F(1, 4)], [F(1, 2), F(1, 2)]])
    assert expected_payoffs(matching_pennies, p) == (0, 0)
    q = Profile(matching_pennies, [[1, 0], [F(3, 4), F(1, 4)]])
    # row earns 3/4 - 1/4
    assert expected_payoffs(matching_pennies, q) == (F(1, 2), F(-1, 2))
    assert list(action_values(matching_pennies, q, 0)) == [F(1, 2), F(-1, 2)]


def test_convex_combine_validates_weights(matching_pennies):
    with pytest.raises(GameError):
        convex_combine([matching_pennies], [F(1, 2)])
    with pytest.raises(GameError):
        convex_combine([matching_pennies, matching_pennies], [F(3, 2), F(-1, 2)])
    half = convex_combine([matching_pennies, matching_pennies * 3], [F(1, 2), F(1, 2)])
    assert half == 2 * matching_pennies


def test_affine_transform_requires_positive_scale(matching_pennies):
    with pytest.raises(GameError):
        affine_transform(matching_pennies, [0, 1], [0, 0])
    g = affine_transform(matching_pennies, [2, F(1, 3)], [1, 0])
    assert g.payoff((1, 1)) == (3, F(-1, 3))


def test_hadamard_contortion_moves_the_equilibrium():
    g = Game.bimatrix([[2, 0], [0, 1]], [[1, 0], [0, 2]])
    mixed = Profile(g, [[F(2, 3), F(1, 3)], [F(1, 3), F(2, 3)]])
    assert is_nash(g, mixed)
    weights = {1: F(2), 2: F(1)}
    h = hadamard_contort(g, 0, weights)
    moved = contort_profile(mixed, 0, weights)
    assert moved.probs[0] == (F(1, 2), F(1, 2))
    assert is_nash(h, moved)
    assert not is_nash(h, mixed)


def test_normalize():
    g = Game.bimatrix([[2, 4], [6, 10]], [[5, 5], [5, 5]])
    n = normalize(g)
    assert n.payoff((1, 1)) == (0, 1)
    assert n.payoff((2, 2)) == (1, 1)
    assert n.payoff((1, 2)) == (F(1, 4), 1)


def test_projection_restriction_and_distance(prisoners_dilemma):
    proj = player_payoff_projection(prisoners_dilemma, 1)
    assert proj.payoff((1, 2)) == (0, 4)
    sub = restrict(prisoners_dilemma, [(2,), (1, 2)])
    assert sub.actions == ((2,), (1, 2))
    assert sub.payoff((2, 1)) == (4, 0)
    p = Profile.from_dicts(prisoners_dilemma, [{2: 1}, {1: F(1, 2), 2: F(1, 2)}])
    r = restrict_profile(p, [(2,), (1, 2)])
    assert extend_profile(r, prisoners_dilemma.actions) == p
    with pytest.raises(GameError):
        restrict_profile(p, [(1,), (1, 2)])
    q = Profile.uniform(prisoners_dilemma)
    assert profile_distance(p, q) == 1
