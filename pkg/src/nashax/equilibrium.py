"""Regret, dominance, rationalizability and exact equilibrium computation."""
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import combinations, product
from math import comb

import numpy as np

from ._exact import (ONE, ZERO, affine_dimension, barycenter, common_denominator, lp_maximize,
                     polytope_vertices, to_fraction)
from .core import Game, GameError, Profile, action_values, restrict


@dataclass(frozen=True)
class RegretReport:
    """Per-player best deviation value, realized value and their difference."""
    best: tuple
    realized: tuple

    @property
    def regrets(self):
        return tuple(b - r for b, r in zip(self.best, self.realized))

    @property
    def max_regret(self) -> Fraction:
        return max(self.regrets)


def regret(game: Game, profile: Profile) -> RegretReport:
    best, realized = [], []
    for i in range(game.n):
        vals = action_values(game, profile, i)
        best.append(max(vals))
        realized.append(sum((v * q for v, q in zip(vals, profile.probs[i])), ZERO))
    return RegretReport(tuple(best), tuple(realized))


def is_nash(game: Game, profile: Profile) -> bool:
    return regret(game, profile).max_regret == 0


def is_eps_nash(game: Game, profile: Profile, eps) -> bool:
    return regret(game, profile).max_regret <= to_fraction(eps)


def best_responses(game: Game, profile: Profile, i):
    vals = action_values(game, profile, i)
    top = max(vals)
    return tuple(a for a, v in zip(game.actions[i], vals) if v == top)


def pure_nash_equilibria(game: Game):
    """All pure equilibria, as action-label tuples in canonical order."""
    out = []
    for idx in product(*(range(m) for m in game.shape)):
        ok = True
        for i in range(game.n):
            line = game.payoffs[(i,) + idx[:i] + (slice(None),) + idx[i + 1:]]
            if line[idx[i]] != max(line):
                ok = False
                break
        if ok:
            out.append(tuple(game.actions[i][k] for i, k in enumerate(idx)))
    return out


# --- dominance ---------------------------------------------------------------

def _rows(game, i, a, b):
    pay = game.payoffs[i]
    return (np.take(pay, game.index(i, a), axis=i), np.take(pay, game.index(i, b), axis=i))


def dominates(game: Game, i, a, b, delta=0) -> bool:
    """Whether ``a`` dominates ``b`` for player ``i``.

    With ``delta == 0`` this is strict dominance; with ``delta > 0`` the gap
    must be at least ``delta`` against every opponent profile.
    """
    delta = to_fraction(delta)
    ra, rb = _rows(game, i, a, b)
    gap = (ra - rb).flat
    if delta == 0:
        return all(x > 0 for x in gap)
    return all(x >= delta for x in gap)


def weakly_dominates(game: Game, i, a, b) -> bool:
    ra, rb = _rows(game, i, a, b)
    gap = list((ra - rb).flat)
    return all(x >= 0 for x in gap) and any(x > 0 for x in gap)


def dominant_action(game: Game, i):
    """The action dominating every other action of player ``i``, or None.

    A lone action is vacuously dominant.
    """
    acts = game.actions[i]
    for a in acts:
        if all(dominates(game, i, a, b) for b in acts if b != a):
            return a
    return None


def undominated_actions(game: Game, i, delta=0):
    """Actions of player ``i`` not ``delta``-dominated by another pure action."""
    acts = game.actions[i]
    return tuple(b for b in acts
                 if not any(dominates(game, i, a, b, delta) for a in acts if a != b))


@dataclass(frozen=True)
class Elimination:
    player: int
    action: object
    dominator: object


def elimination_trace(game: Game, choose=None):
    """Iterated elimination of strictly dominated actions, one at a time.

    At every step the candidates are all ``(player, action, dominator)``
    triples with ``dominator`` the first surviving action (in canonical order)
    that dominates ``action``.  ``choose`` picks one candidate; by default the
    first in canonical order.  Returns the list of eliminations.
    """
    alive = [list(a) for a in game.actions]
    trace = []
    while True:
        sub = restrict(game, alive)
        cands = []
        for i in range(game.n):
            for b in alive[i]:
                dom = next((a for a in alive[i] if a != b and dominates(sub, i, a, b)), None)
                if dom is not None:
                    cands.append(Elimination(i, b, dom))
        if not cands:
            return trace
        step = cands[0] if choose is None else choose(cands)
        alive[step.player].remove(step.action)
        trace.append(step)


def rationalizable_actions(game: Game, choose=None):
    """Per-player actions surviving iterated pure strict dominance."""
    gone = {(e.player, e.action) for e in elimination_trace(game, choose)}
    return tuple(tuple(a for a in acts if (i, a) not in gone)
                 for i, acts in enumerate(game.actions))


def iterated_dominator(game: Game):
    """Per player, map each eliminated action to the surviving action reached
    by following first dominators until one survives."""
    trace = elimination_trace(game)
    step = {(e.player, e.action): e.dominator for e in trace}
    out = [dict() for _ in range(game.n)]
    for e in trace:
        a = e.action
        while (e.player, a) in step:
            a = step[(e.player, a)]
        out[e.player][e.action] = a
    return out


# --- quasi-strictness ----------------------------------------------------------

def is_quasi_strict(game: Game, profile: Profile) -> bool:
    """Equilibrium in which every played action strictly beats every unplayed one."""
    for i in range(game.n):
        vals = action_values(game, profile, i)
        probs = profile.probs[i]
        inside = [v for v, q in zip(vals, probs) if q]
        outside = [v for v, q in zip(vals, probs) if not q]
        if max(vals) != min(inside):
            return False
        if outside and max(outside) >= min(inside):
            return False
    return True


def is_essentially_quasi_strict(game: Game, profile: Profile) -> bool:
    """Quasi-strict after merging every class of clone actions."""
    from .morphism import collapse_clones, pushforward
    base, phi = collapse_clones(game)
    return is_quasi_strict(base, pushforward(profile, phi))


# --- admissibility -----------------------------------------------------------

def supports_common_full_belief(game: Game, i, actions) -> bool:
    """Whether every action in ``actions`` is a best response of player ``i``
    to one belief over opponent profiles that gives every profile positive weight.

    Equivalently, no mixture over ``actions`` is weakly dominated.
    """
    return _full_belief(game, i, tuple(sorted(actions, key=lambda a: game.index(i, a))))


@lru_cache(maxsize=4096)
def _full_belief(game, i, actions):
    pay = np.moveaxis(game.payoffs[i], i, 0).reshape(game.shape[i], -1)
    k = pay.shape[1]
    rows = [game.index(i, a) for a in actions]
    ref = rows[0]
    A_eq = [[ONE] * k + [ZERO]]
    b_eq = [ONE]
    for r in rows[1:]:
        A_eq.append([pay[r, c] - pay[ref, c] for c in range(k)] + [ZERO])
        b_eq.append(ZERO)
    A_ub, b_ub = [], []
    for r in range(game.shape[i]):
        if r not in rows:
            A_ub.append([pay[r, c] - pay[ref, c] for c in range(k)] + [ZERO])
            b_ub.append(ZERO)
    # variables: belief mu (k entries) and a floor t <= mu_c; maximize t
    for c in range(k):
        A_ub.append([-ONE if d == c else ZERO for d in range(k)] + [ONE])
        b_ub.append(ZERO)
    best = lp_maximize([ZERO] * k + [ONE], A_ub, b_ub, A_eq, b_eq)
    return best is not None and best[0] > 0


def is_admissible(game: Game, profile: Profile) -> bool:
    return all(supports_common_full_belief(game, i, profile.support(i)) for i in range(game.n))


# --- exact two-player oracle ---------------------------------------------------

@dataclass(frozen=True)
class EquilibriumComponent:
    """Equilibria whose supports are exactly ``supports``.

    The set is a product of two relatively open polytopes.  ``vertices`` holds
    the vertices of each factor's closure as probability vectors; ``profile``
    is a representative with exactly the given supports (the unique member when
    ``dimension == 0``).
    """
    supports: tuple
    dimension: int
    profile: Profile
    vertices: tuple

    def key(self):
        return (self.supports, frozenset(self.vertices[0]), frozenset(self.vertices[1]))

    def vertex_profiles(self):
        acts = self.profile.actions
        return [Profile(acts, [x, y]) for x in self.vertices[0] for y in self.vertices[1]]


@dataclass(frozen=True)
class OracleResult:
    components: tuple
    verdict: str

    @property
    def unique(self) -> bool:
        return self.verdict == "unique"

    def profiles(self):
        return [c.profile for c in self.components]

    def keys(self):
        return frozenset(c.key() for c in self.components)


def _side_vertices(opp, own_support, opp_support, n_opp):
    """Vertices of the strategies on ``own_support`` that make every action in
    ``opp_support`` a best response for the opponent with payoff matrix ``opp``."""
    k = len(own_support)
    A_eq = [[ONE] * k + [ZERO]]
    b_eq = [ONE]
    for t in opp_support:
        A_eq.append([opp[s, t] for s in own_support] + [-ONE])
        b_eq.append(ZERO)
    A_ub, b_ub = [], []
    for s in range(k):
        A_ub.append([-ONE if r == s else ZERO for r in range(k)] + [ZERO])
        b_ub.append(ZERO)
    for t in range(n_opp):
        if t not in opp_support:
            A_ub.append([opp[s, t] for s in own_support] + [-ONE])
            b_ub.append(ZERO)
    return [v[:k] for v in polytope_vertices(A_eq, b_eq, A_ub, b_ub, k + 1)]


def _subsets(m):
    for size in range(1, m + 1):
        yield from combinations(range(m), size)


def solve_nash_2p(game: Game) -> OracleResult:
    """All Nash equilibria of a two-player game, exactly, by support enumeration.

    Every pair of nonempty supports is examined; the indifference and
    best-response conditions for that pair define a product of polytopes,
    whose vertices are enumerated exactly.  A pair contributes a component
    when some point of it has exactly the given supports.  The verdict is
    ``"unique"`` when there is a single zero-dimensional component,
    ``"multiple"`` when there are several, all isolated, and
    ``"degenerate-continuum"`` when any component has positive dimension.
    """
    if game.n != 2:
        raise GameError("the exact oracle handles two-player games only")
    A, B = game.payoffs[0], game.payoffs[1]
    m1, m2 = game.shape
    comps = []
    for S1 in _subsets(m1):
        for S2 in _subsets(m2):
            ys = _side_vertices(A.T, S2, S1, m1)
            if not ys:
                continue
            xs = _side_vertices(B, S1, S2, m2)
            if not xs:
                continue
            bx, by = barycenter(xs), barycenter(ys)
            if not (all(q > 0 for q in bx) and all(q > 0 for q in by)):
                continue
            dim = affine_dimension(xs) + affine_dimension(ys)
            xv = sorted(_embed(x, S1, m1) for x in xs)
            yv = sorted(_embed(y, S2, m2) for y in ys)
            rep = Profile(game.actions, [_embed(bx, S1, m1), _embed(by, S2, m2)])
            supports = (tuple(game.actions[0][s] for s in S1),
                        tuple(game.actions[1][t] for t in S2))
            comps.append(EquilibriumComponent(supports, dim, rep, (tuple(xv), tuple(yv))))
    for c in comps:
        for p in [c.profile] + c.vertex_profiles():
            if not is_nash(game, p):
                raise AssertionError(f"oracle produced a non-equilibrium {p}")
    if any(c.dimension > 0 for c in comps):
        verdict = "degenerate-continuum"
    elif len(comps) == 1:
        verdict = "unique"
    else:
        verdict = "multiple"
    return OracleResult(tuple(comps), verdict)


def _embed(vec, support, m):
    out = [ZERO] * m
    for s, q in zip(support, vec):
        out[s] = q
    return tuple(out)


# --- grid falsifier -----------------------------------------------------------

def _compositions(total, parts):
    for bars in combinations(range(total + parts - 1), parts - 1):
        prev, vec = -1, []
        for b in bars + (total + parts - 1,):
            vec.append(b - prev - 1)
            prev = b
        yield vec


def grid_size(shape, resolution) -> int:
    out = 1
    for m in shape:
        out *= comb(resolution + m - 1, m - 1)
    return out


def grid_falsify(game: Game, resolution: int, eps):
    """Every profile on the grid of multiples of ``1/resolution`` whose regret is
    at most ``eps``.

    The search is exhaustive over the grid and exact: payoffs are scaled to
    integers and regrets compared as integers.  An empty result is evidence,
    not proof, that no approximate equilibrium lies off the grid.
    """
    eps = to_fraction(eps)
    r = int(resolution)
    if r < 1:
        raise GameError("grid resolution must be positive")
    n = game.n
    den = common_denominator(game.payoffs.flat)
    ints = [[int(v * den) for v in game.payoffs[i].flat] for i in range(n)]
    bound = max(1, max(abs(v) for row in ints for v in row)) * r ** n * 2
    dtype = np.int64 if bound < 2 ** 62 else object
    pay = [np.array(row, dtype=dtype).reshape(game.shape) for row in ints]
    grids = [np.array(list(_compositions(r, m)), dtype=dtype) for m in game.shape]
    thresh = eps * den * r ** n
    limit = thresh.numerator // thresh.denominator
    ok = np.ones(tuple(len(g) for g in grids), dtype=bool)
    axes_g = [n + j for j in range(n)]
    for i in range(n):
        ops = [pay[i], list(range(n))]
        for j in range(n):
            if j != i:
                ops += [grids[j], [n + j, j]]
        out_u = [n + j for j in range(n) if j != i] + [i]
        U = np.einsum(*ops, out_u)
        best = U.max(axis=-1) * r
        realized = np.einsum(grids[i], [n + i, i], U, out_u, axes_g)
        best_full = np.expand_dims(best, axis=i)
        ok &= (best_full - realized) <= limit
    out = []
    for idx in zip(*np.nonzero(ok)):
        vecs = [[Fraction(int(k), r) for k in grids[j][g]] for j, g in enumerate(idx)]
        out.append(Profile(game.actions, vecs))
    return out
