from fractions import Fraction as F
from itertools import product

import numpy as np
import pytest

from nashax.core import Game, GameError, Profile
from nashax.equilibrium import (best_responses, dominant_action, dominates, elimination_trace,
                                grid_falsify, grid_size, is_admissible, is_eps_nash,
                                is_essentially_quasi_strict, is_nash, is_quasi_strict,
                                iterated_dominator, pure_nash_equilibria, rationalizable_actions,
                                regret, solve_nash_2p, supports_common_full_belief,
                                undominated_actions, weakly_dominates)
from nashax.morphism import BlowUpMap, blow_up, preimage_profile


def test_regret_by_hand(matching_pennies):
    p = Profile(matching_pennies, [[1, 0], [1, 0]])
    rep = regret(matching_pennies, p)
    assert rep.best == (1, 1) and rep.realized == (1, -1)
    assert rep.regrets == (0, 2) and rep.max_regret == 2
    assert is_eps_nash(matching_pennies, p, 2) and not is_eps_nash(matching_pennies, p, F(19, 10))
    assert is_nash(matching_pennies, Profile.uniform(matching_pennies))
    assert best_responses(matching_pennies, p, 1) == (2,)


def test_pure_equilibria_brute_force(prisoners_dilemma):
    assert pure_nash_equilibria(prisoners_dilemma) == [(2, 2)]
    rng = np.random.default_rng(1)
    for _ in range(25):
        g = Game([(1, 2, 3), (1, 2), (1, 2)], rng.integers(0, 3, size=(3, 3, 2, 2)).astype(object))
        oracle = [a for a in g.profiles() if is_nash(g, Profile.pure(g, a))]
        assert pure_nash_equilibria(g) == oracle


def test_dominance(prisoners_dilemma):
    assert dominates(prisoners_dilemma, 0, 2, 1)
    assert dominates(prisoners_dilemma, 0, 2, 1, delta=1)
    assert not dominates(prisoners_dilemma, 0, 2, 1, delta=2)
    assert dominant_action(prisoners_dilemma, 1) == 2
    g = Game.bimatrix([[1, 1], [1, 0]], [[0, 0], [0, 0]])
    assert weakly_dominates(g, 0, 1, 2) and not dominates(g, 0, 1, 2)
    assert dominant_action(g, 0) is None
    assert dominant_action(Game.bimatrix([[5]], [[0]]), 0) == 1
    assert undominated_actions(prisoners_dilemma, 0) == (2,)
    assert undominated_actions(prisoners_dilemma, 0, delta=2) == (1, 2)


def test_iterated_elimination():
    # column 3 is dominated by column 1, then row 2 by row 1, then column 2 by column 1
    g = Game.bimatrix([[3, 1, 0], [2, 0, 5]], [[3, 2, 0], [1, 2, 0]])
    trace = elimination_trace(g)
    assert [(e.player, e.action, e.dominator) for e in trace] == [(1, 3, 1), (0, 2, 1), (1, 2, 1)]
    assert rationalizable_actions(g) == ((1,), (1,))
    assert iterated_dominator(g) == [{2: 1}, {3: 1, 2: 1}]
    # the surviving set does not depend on the order of elimination
    assert rationalizable_actions(g, choose=lambda c: c[-1]) == ((1,), (1,))


def test_quasi_strict_and_clones():
    g = Game.bimatrix([[1, 0], [0, 1]], [[1, 0], [0, 1]])
    pure = Profile.pure(g, (1, 1))
    assert is_quasi_strict(g, pure)
    constant = Game.constant([(1, 2), (1, 2)])
    assert not is_quasi_strict(constant, Profile.pure(constant, (1, 1)))
    assert is_quasi_strict(constant, Profile.uniform(constant))
    phi = BlowUpMap.from_counts(g.actions, [{1: 2}, None])
    big = blow_up(g, phi)
    only_first = preimage_profile(pure, phi, [{1: {1: F(1)}, 2: {2: F(1)}}, {1: {1: F(1)}, 2: {2: F(1)}}])
    assert not is_quasi_strict(big, only_first)
    assert is_essentially_quasi_strict(big, only_first)


def test_admissibility():
    # action 2 is weakly dominated by action 1, so no full-support belief supports it
    g = Game.bimatrix([[1, 1], [1, 0]], [[0, 0], [0, 0]])
    assert supports_common_full_belief(g, 0, [1])
    assert not supports_common_full_belief(g, 0, [2])
    assert not is_admissible(g, Profile.uniform(g))
    # mixed weak dominance: 3 is dominated by the average of 1 and 2
    h = Game.bimatrix([[2, 0], [0, 2], [1, 0]], [[0, 0]] * 3)
    assert not supports_common_full_belief(h, 0, [3])
    assert supports_common_full_belief(h, 0, [1, 2])
    assert not supports_common_full_belief(h, 0, [1, 3])


# --- exact oracle -------------------------------------------------------------------

def interior_2x2(g):
    """Closed-form mixed equilibrium of a 2x2 game, when both indifference
    denominators are nonzero."""
    A, B = g.payoffs
    da = A[0, 0] - A[0, 1] - A[1, 0] + A[1, 1]
    db = B[0, 0] - B[0, 1] - B[1, 0] + B[1, 1]
    if da == 0 or db == 0:
        return None
    y = (A[1, 1] - A[0, 1]) / da
    x = (B[1, 1] - B[1, 0]) / db
    if not (0 < x < 1 and 0 < y < 1):
        return None
    return Profile(g, [[x, 1 - x], [y, 1 - y]])


def test_oracle_battle_of_sexes():
    g = Game.bimatrix([[2, 0], [0, 1]], [[1, 0], [0, 2]])
    res = solve_nash_2p(g)
    assert res.verdict == "multiple" and not res.unique
    assert set(res.profiles()) == {Profile.pure(g, (1, 1)), Profile.pure(g, (2, 2)),
                                   Profile(g, [[F(2, 3), F(1, 3)], [F(1, 3), F(2, 3)]])}


def test_oracle_rock_paper_scissors(corpus):
    g = corpus.game("rock-paper-scissors")
    res = solve_nash_2p(g)
    assert res.unique and res.profiles() == [Profile.uniform(g)]


def test_oracle_degenerate_continuum():
    g = Game.bimatrix([[1, 1], [0, 0]], [[0, 0], [0, 0]])
    res = solve_nash_2p(g)
    assert res.verdict == "degenerate-continuum"
    comp = next(c for c in res.components if c.dimension > 0)
    assert comp.supports == ((1,), (1, 2))
    assert set(comp.vertices[1]) == {(1, 0), (0, 1)}
    assert all(is_nash(g, p) for p in comp.vertex_profiles())


def test_oracle_matches_closed_form_and_pure_enumeration():
    rng = np.random.default_rng(21)
    for _ in range(150):
        g = Game([(1, 2), (1, 2)], rng.integers(-3, 4, size=(2, 2, 2)).astype(object))
        res = solve_nash_2p(g)
        if res.verdict == "degenerate-continuum":
            continue
        pures = {Profile.pure(g, a) for a in pure_nash_equilibria(g)}
        mixed = interior_2x2(g)
        expected = pures | ({mixed} if mixed is not None and is_nash(g, mixed) else set())
        assert set(res.profiles()) == expected


def test_oracle_rejects_more_players():
    with pytest.raises(GameError):
        solve_nash_2p(Game.constant([(1,), (1,), (1,)]))


# --- grid falsifier ------------------------------------------------------------------

def test_grid_size():
    assert grid_size((2, 2), 4) == 25
    assert grid_size((3, 2, 2), 8) == 45 * 9 * 9


def test_grid_falsify_brute_force():
    rng = np.random.default_rng(8)
    for _ in range(8):
        g = Game([(1, 2), (1, 2), (1, 2)], rng.integers(-2, 3, size=(3, 2, 2, 2)).astype(object))
        eps = F(1, 4)
        found = set(grid_falsify(g, 4, eps))
        grid = [(F(k, 4), 1 - F(k, 4)) for k in range(5)]
        oracle = {p for p in (Profile(g, list(v)) for v in product(grid, repeat=3))
                  if regret(g, p).max_regret <= eps}
        assert found == oracle


def test_grid_falsify_finds_the_mixed_equilibrium(matching_pennies):
    assert grid_falsify(matching_pennies, 6, 0) == [Profile.uniform(matching_pennies)]
    with pytest.raises(GameError):
        grid_falsify(matching_pennies, 0, 0)
