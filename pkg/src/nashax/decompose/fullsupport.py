"""Splitting a game into two whose average is the original, so that a given
equilibrium survives in both halves with a simpler structure, and extending
decompositions of the rationalizable part back to the whole game."""
from fractions import Fraction
from itertools import product

import numpy as np

from .._exact import ONE, ZERO
from ..core import (Game, PayoffTensor, PreconditionError, Profile,
                    action_values, convex_combine, contort_profile, hadamard_contort,
                    restrict)
from ..equilibrium import (best_responses, dominates, is_nash, is_quasi_strict,
                           iterated_dominator, rationalizable_actions)
from ..morphism import BlowUpMap, are_clones, blow_up, preimage_profile


def _pairs(game, i, support):
    """Group ``support`` into clone classes and pair each class up in order."""
    classes = []
    for a in support:
        for cls in classes:
            if are_clones(game, i, cls[0], a):
                cls.append(a)
                break
        else:
            classes.append([a])
    if any(len(c) % 2 for c in classes):
        return None
    return [(c[k], c[k + 1]) for c in classes for k in range(0, len(c), 2)]


def _is_uniform(profile, i):
    probs = [q for q in profile.probs[i] if q]
    return len(set(probs)) == 1


def _rows(values, axis, index):
    sl = [slice(None)] * values.ndim
    sl[axis] = index
    return tuple(sl)


def quasi_strict_split(game: Game, profile: Profile):
    """Split ``game`` into ``G1``, ``G2`` with ``(G1 + G2) / 2 == game`` in which
    every unplayed action is strictly dominated.

    Each player's support must consist of clone pairs ``(a_k, b_k)``, played
    uniformly, with as many unplayed actions ``c_k`` as pairs.  In ``G1`` the
    row ``a_k`` gains ``v_k`` and ``b_k`` loses it (``G2`` swaps the roles),
    where ``v_k`` averages to zero over the opponents' supports and lifts
    ``a_k`` strictly above ``c_k``.  Returns ``(G1, G2, v)`` with ``v`` keyed by
    ``(player, k)``.
    """
    problems = []
    if profile.actions != game.actions:
        raise PreconditionError("profile does not match the game")
    if not is_quasi_strict(game, profile):
        problems.append("profile is not a quasi-strict equilibrium")
    layout = []
    for i in range(game.n):
        supp = profile.support(i)
        off = [a for a in game.actions[i] if a not in supp]
        if not _is_uniform(profile, i):
            problems.append(f"player {i}: strategy is not uniform on its support")
        pairs = _pairs(game, i, supp)
        if pairs is None:
            problems.append(f"player {i}: support is not made of clone pairs")
        elif off and len(pairs) != len(off):
            problems.append(f"player {i}: {len(pairs)} clone pairs but {len(off)} unplayed actions")
        layout.append((pairs, off))
    if problems:
        raise PreconditionError(problems)

    v1 = game.payoffs.copy()
    v2 = game.payoffs.copy()
    shifts = {}
    for i, (pairs, off) in enumerate(layout):
        if not off:
            continue
        pay = game.payoffs[i]
        inside = np.ones(tuple(np.delete(game.shape, i)), dtype=bool)
        for j in range(game.n):
            if j == i:
                continue
            mask = np.array([profile.prob(j, a) > 0 for a in game.actions[j]])
            shape = [1] * (game.n - 1)
            shape[j if j < i else j - 1] = len(mask)
            inside = inside & mask.reshape(shape)
        for k, ((a, b), c) in enumerate(zip(pairs, off)):
            ra = np.take(pay, game.index(i, a), axis=i)
            rc = np.take(pay, game.index(i, c), axis=i)
            gap = ra - rc
            if all(x > 0 for x in gap.flat):
                v = np.full(gap.shape, ZERO, dtype=object)
            else:
                inner = [x for x, keep in zip(gap.flat, inside.flat) if keep]
                mean = sum(inner) / len(inner)
                positive = (gap > 0).astype(bool)
                v = np.where(inside, mean - gap, np.where(positive, ZERO, ONE - gap))
            shifts[(i, k)] = PayoffTensor(game.actions[:i] + game.actions[i + 1:], v)
            ia, ib = game.index(i, a), game.index(i, b)
            v1[(i,) + _rows(pay, i, ia)] = ra + v
            v1[(i,) + _rows(pay, i, ib)] = np.take(pay, ib, axis=i) - v
            v2[(i,) + _rows(pay, i, ia)] = ra - v
            v2[(i,) + _rows(pay, i, ib)] = np.take(pay, ib, axis=i) + v
    g1, g2 = Game(game.actions, v1), Game(game.actions, v2)

    if convex_combine([g1, g2], [Fraction(1, 2)] * 2) != game:
        raise AssertionError("halves do not average to the game")
    for g, lead in ((g1, 0), (g2, 1)):
        if not is_nash(g, profile):
            raise AssertionError("profile is not an equilibrium of a half")
        for i, (pairs, off) in enumerate(layout):
            for pair, c in zip(pairs, off):
                if not dominates(g, i, pair[lead], c):
                    raise AssertionError("unplayed action is not dominated in a half")
    return g1, g2, shifts


def off_support_best_responses(game: Game, profile: Profile, i):
    """Unplayed best responses of ``i`` that are not clones of a played action."""
    supp = profile.support(i)
    return tuple(a for a in best_responses(game, profile, i)
                 if a not in supp and not any(are_clones(game, i, a, s) for s in supp))


def equilibrium_clone_split(game: Game, profile: Profile, i):
    """Split ``game`` into ``G1``, ``G2`` averaging to it, so that in ``G1`` each
    played ``a_k`` becomes a clone of an unplayed best response ``c_k`` (and
    ``b_k`` absorbs the difference); ``G2`` swaps ``a_k`` and ``b_k``.
    """
    problems = []
    if profile.actions != game.actions:
        raise PreconditionError("profile does not match the game")
    if not is_nash(game, profile):
        problems.append("profile is not a Nash equilibrium")
    elif not _is_uniform(profile, i):
        problems.append(f"player {i}: strategy is not uniform on its support")
    if problems:
        raise PreconditionError(problems)
    extra = off_support_best_responses(game, profile, i)
    if not extra:
        return game, game
    pairs = _pairs(game, i, profile.support(i))
    if pairs is None:
        raise PreconditionError(f"player {i}: support is not made of clone pairs")
    if len(pairs) != len(extra):
        raise PreconditionError(f"player {i}: {len(pairs)} clone pairs but {len(extra)} extra best responses")

    axis = i + 1
    pay = game.payoffs

    def row(a):
        return np.take(pay, game.index(i, a), axis=axis)

    v1, v2 = pay.copy(), pay.copy()
    for (a, b), c in zip(pairs, extra):
        mix = row(a) + row(b) - row(c)
        for vals, keep, other in ((v1, a, b), (v2, b, a)):
            vals[_rows(pay, axis, game.index(i, keep))] = row(c)
            vals[_rows(pay, axis, game.index(i, other))] = mix
    g1, g2 = Game(game.actions, v1), Game(game.actions, v2)

    if convex_combine([g1, g2], [Fraction(1, 2)] * 2) != game:
        raise AssertionError("halves do not average to the game")
    for g, lead in ((g1, 0), (g2, 1)):
        if not is_nash(g, profile):
            raise AssertionError("profile is not an equilibrium of a half")
        for pair, c in zip(pairs, extra):
            if not are_clones(g, i, pair[lead], c):
                raise AssertionError("played action did not become a clone")
        for j in range(game.n):
            if j != i and not np.all(action_values(g, profile, j) == action_values(game, profile, j)):
                raise AssertionError("another player's payoffs moved")
    return g1, g2


# --- padding -----------------------------------------------------------------------

def uniformize(game: Game, profile: Profile, players=None):
    """Reweight so that each listed player's equilibrium strategy becomes uniform
    on its support, compensating by scaling the other players' payoffs."""
    players = range(game.n) if players is None else players
    for i in players:
        weights = {a: profile.prob(i, a) or ONE for a in game.actions[i]}
        game = hadamard_contort(game, i, weights)
        profile = contort_profile(profile, i, weights)
    return game, profile


def pad_for_quasi_strict(game: Game, profile: Profile):
    """Clone actions until every player has ``2K`` played actions in clone pairs
    and ``K`` unplayed ones, with uniform play.  Returns ``(game, profile, map)``."""
    game, profile = uniformize(game, profile)
    counts = []
    for i in range(game.n):
        supp = profile.support(i)
        off = [a for a in game.actions[i] if a not in supp]
        if not off:
            counts.append(None)
            continue
        counts.append({**{a: 2 * len(off) for a in supp}, **{a: len(supp) for a in off}})
    phi = BlowUpMap.from_counts(game.actions, counts)
    return blow_up(game, phi), preimage_profile(profile, phi), phi


def pad_for_clone_split(game: Game, profile: Profile, i):
    """Clone actions of player ``i`` to the shape :func:`equilibrium_clone_split` expects."""
    game, profile = uniformize(game, profile, [i])
    supp = profile.support(i)
    extra = off_support_best_responses(game, profile, i)
    counts = [None] * game.n
    if extra:
        counts[i] = {**{a: 2 * len(extra) for a in supp}, **{a: len(supp) for a in extra}}
    phi = BlowUpMap.from_counts(game.actions, counts)
    return blow_up(game, phi), preimage_profile(profile, phi), phi


# --- beyond the rationalizable part ---------------------------------------------------

def extend_beyond_rationalizable(game: Game, profile: Profile, components, weights=None):
    """Extend games on the rationalizable restriction to the full action sets.

    ``components`` are games on the rationalizable actions averaging (with
    ``weights``, uniform by default) to ``game`` restricted there.  Each
    eliminated action is tied to the surviving action reached by following
    first dominators, and its payoffs against surviving opponents move by the
    same amount as that action's.  The outputs average to ``game``.
    """
    kept = rationalizable_actions(game)
    components = list(components)
    if weights is None:
        weights = [Fraction(1, len(components))] * len(components)
    problems = []
    if profile.actions != game.actions or any(
            set(profile.support(i)) != set(kept[i]) for i in range(game.n)):
        problems.append("profile must be supported exactly on the rationalizable actions")
    sub = restrict(game, kept)
    if any(c.actions != sub.actions for c in components):
        problems.append("components must live on the rationalizable actions")
    elif convex_combine(components, weights) != sub:
        problems.append("components do not average to the rationalizable restriction")
    if problems:
        raise PreconditionError(problems)

    lead = iterated_dominator(game)
    kept_sets = [set(k) for k in kept]
    outs = []
    for comp in components:
        values = game.payoffs.copy()
        for a in product(*game.actions):
            idx = game.profile_index(a)
            inside = [a[j] in kept_sets[j] for j in range(game.n)]
            if all(inside):
                for j, v in enumerate(comp.payoff(a)):
                    values[(j,) + idx] = v
                continue
            for i in range(game.n):
                if inside[i] or not all(inside[j] for j in range(game.n) if j != i):
                    continue
                b = a[:i] + (lead[i][a[i]],) + a[i + 1:]
                values[(i,) + idx] = game.payoff(a)[i] + comp.payoff(b)[i] - game.payoff(b)[i]
        outs.append(Game(game.actions, values))

    if convex_combine(outs, weights) != game:
        raise AssertionError("extensions do not average to the game")
    for out, comp in zip(outs, components):
        if restrict(out, kept) != comp:
            raise AssertionError("extension changed the rationalizable part")
    return outs
