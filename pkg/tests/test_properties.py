"""Property-based checks of the algebraic invariants."""
from fractions import Fraction as F

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from nashax.core import (Game, PayoffTensor, Profile, affine_transform, contort_profile,
                         convex_combine, expected_payoffs, hadamard_contort, normalize)
from nashax.decompose import bvn_decompose, deterministic_tensor, random_deterministic_assignment
from nashax.equilibrium import is_nash, regret, solve_nash_2p
from nashax.gamefile import parse_game, serialize_game
from nashax.morphism import (BlowUpMap, blow_down, blow_up, collapse_clones, preimage_profile,
                             pushforward)

SETTINGS = settings(max_examples=40, deadline=None)

small_int = st.integers(-4, 4)
positive = st.fractions(min_value=F(1, 5), max_value=5, max_denominator=6)


@st.composite
def games(draw, players=(2, 3), sizes=(1, 3)):
    n = draw(st.sampled_from(players))
    shape = [draw(st.integers(*sizes)) for _ in range(n)]
    flat = draw(st.lists(small_int, min_size=n * int(np.prod(shape)), max_size=n * int(np.prod(shape))))
    return Game([range(1, m + 1) for m in shape], np.array(flat, dtype=object).reshape([n] + shape))


@st.composite
def distributions(draw, size):
    raw = draw(st.lists(st.integers(0, 4), min_size=size, max_size=size).filter(any))
    total = sum(raw)
    return [F(r, total) for r in raw]


@st.composite
def game_and_profile(draw, **kw):
    g = draw(games(**kw))
    return g, Profile(g, [draw(distributions(m)) for m in g.shape])


@SETTINGS
@given(game_and_profile(), st.data())
def test_affine_maps_scale_regret(gp, data):
    g, p = gp
    alpha = [data.draw(positive) for _ in range(g.n)]
    beta = [data.draw(st.fractions(-3, 3, max_denominator=4)) for _ in range(g.n)]
    h = affine_transform(g, alpha, beta)
    assert regret(h, p).regrets == tuple(a * r for a, r in zip(alpha, regret(g, p).regrets))


@SETTINGS
@given(game_and_profile(), st.data())
def test_contortion_transports_best_responses(gp, data):
    g, p = gp
    i = data.draw(st.integers(0, g.n - 1))
    if not all(q > 0 for q in p.probs[i]):
        return
    weights = {a: data.draw(positive) for a in g.actions[i]}
    h = hadamard_contort(g, i, weights)
    q = contort_profile(p, i, weights)
    # opponents' regrets shrink by the normalizer of the reweighted strategy
    z = sum(x / weights[a] for a, x in zip(g.actions[i], p.probs[i]))
    before, after = regret(g, p).regrets, regret(h, q).regrets
    for j in range(g.n):
        if j != i:
            assert after[j] == before[j] / z
    assert (before[i] == 0) == (after[i] == 0)


@SETTINGS
@given(game_and_profile(players=(2, 3)), st.data())
def test_blow_up_round_trips(gp, data):
    g, p = gp
    counts = [{a: data.draw(st.integers(1, 3)) for a in acts} for acts in g.actions]
    phi = BlowUpMap.from_counts(g.actions, counts)
    big = blow_up(g, phi)
    assert blow_down(big, phi) == g
    lifted = preimage_profile(p, phi)
    assert pushforward(lifted, phi) == p
    assert expected_payoffs(big, lifted) == expected_payoffs(g, p)
    assert is_nash(big, lifted) == is_nash(g, p)
    base, psi = collapse_clones(big)
    assert blow_up(base, psi) == big


@SETTINGS
@given(games())
def test_serialization_round_trip(g):
    assert parse_game(serialize_game(g)) == g


@SETTINGS
@given(games())
def test_normalize_is_idempotent(g):
    n = normalize(g)
    assert normalize(n) == n
    for i in range(g.n):
        vals = set(n.payoffs[i].flat)
        assert vals == {1} or (min(vals) == 0 and max(vals) == 1)


@SETTINGS
@given(games(players=(2,)), st.data())
def test_common_equilibria_survive_averaging(g, data):
    flat = data.draw(st.lists(small_int, min_size=g.payoffs.size, max_size=g.payoffs.size))
    h = Game(g.actions, np.array(flat, dtype=object).reshape(g.payoffs.shape))
    mid = convex_combine([g, h], [F(1, 2), F(1, 2)])
    common = set(solve_nash_2p(g).profiles()) & set(solve_nash_2p(h).profiles())
    assert all(is_nash(mid, p) for p in common)


@SETTINGS
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([(2, 2), (3, 2), (2, 3), (3, 3)]),
       st.integers(1, 5))
def test_bvn_reconstructs_random_mixtures(seed, shape, parts):
    m, n = shape
    rng = np.random.default_rng(seed)
    i = int(rng.integers(n))
    raw = [int(rng.integers(1, 8)) for _ in range(parts)]
    values = np.full((m,) * n, F(0), dtype=object)
    for r in raw:
        values = values + F(r, sum(raw)) * deterministic_tensor(
            m, n, i, random_deterministic_assignment(m, n, rng)).values
    t = PayoffTensor([range(m)] * n, values)
    terms = bvn_decompose(t, i)
    assert len(terms) <= sum(1 for v in values.flat if v)
    total = sum((x.weight * x.tensor.values for x in terms), np.full(values.shape, F(0), dtype=object))
    assert np.all(total == values)
