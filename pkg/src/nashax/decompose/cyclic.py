"""Cyclic, almost-cyclic and permutation games, and decompositions into them.

Actions of an ``m``-action player are represented by their index ``0..m-1``
in canonical order; permutations of ``[m]`` are tuples ``perm`` with
``perm[x]`` the image of ``x``.  ``perms[j]`` links player ``j`` to player
``j + 1`` (cyclically): in a cyclic game player ``j`` earns ``alpha[j]``
exactly when ``a_j == perms[j - 1][a_{j - 1}]``.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from math import factorial

import numpy as np

from .._exact import ONE, ZERO, to_fraction
from ..core import Game, GameError, PreconditionError
from ..morphism import BlowUpMap, block_average, blow_down

ENUMERATION_LIMIT = 10 ** 6


def compose(*perms):
    """``compose(p, q)(x) == p[q[x]]``."""
    out = tuple(range(len(perms[-1])))
    for p in reversed(perms):
        out = tuple(p[x] for x in out)
    return out


def invert(perm):
    out = [0] * len(perm)
    for x, y in enumerate(perm):
        out[y] = x
    return tuple(out)


def shift(m, r):
    return tuple((x + r) % m for x in range(m))


def is_single_cycle(perm) -> bool:
    """True when ``perm`` has no fixed nonempty proper subset, i.e. is one ``m``-cycle."""
    m = len(perm)
    x, steps = 0, 0
    while True:
        x = perm[x]
        steps += 1
        if x == 0:
            return steps == m


def chain_composition(perms, start=0):
    """``perms[start - 1] . ... . perms[start]``, going once round the cycle."""
    n = len(perms)
    order = [perms[(start + k) % n] for k in range(n)]
    return compose(*reversed(order))


def _grid(m, n):
    return np.indices((m,) * n)


@dataclass(frozen=True)
class CyclicSpec:
    m: int
    perms: tuple
    alpha: tuple

    def violations(self):
        bad = []
        n = len(self.perms)
        if n < 2:
            bad.append("cyclic games need at least two players")
        if len(self.alpha) != n:
            bad.append("one alpha per player")
        if any(to_fraction(a) <= 0 for a in self.alpha):
            bad.append("alpha must be positive")
        if any(sorted(p) != list(range(self.m)) for p in self.perms):
            bad.append("entries must be permutations of range(m)")
        elif not is_single_cycle(chain_composition(self.perms)):
            bad.append("composition is not a single cycle")
        return bad

    @property
    def n(self):
        return len(self.perms)

    def matches(self, j):
        """Boolean array over profiles: ``a_j == perms[j-1][a_{j-1}]``."""
        ind = _grid(self.m, self.n)
        prev = ind[(j - 1) % self.n]
        return np.array(self.perms[(j - 1) % self.n])[prev] == ind[j]


@dataclass(frozen=True)
class AlmostCyclicSpec:
    """A cyclic game in which ``player`` earns nothing on the permutation set ``exceptional``."""
    m: int
    perms: tuple
    alpha: tuple
    player: int
    exceptional: frozenset

    def violations(self):
        bad = CyclicSpec(self.m, self.perms, self.alpha).violations()
        n, i = len(self.perms), self.player
        if n < 3:
            bad.append("almost-cyclic games need at least three players")
            return bad
        if not PermutationSet(self.m, n, self.exceptional).is_valid():
            bad.append("exceptional set is not a permutation set")
        for a in sorted(self.exceptional):
            if a[i] != self.perms[(i - 1) % n][a[(i - 1) % n]]:
                bad.append(f"{a}: exceptional player is not matched")
            if not any(a[j] != self.perms[(j - 1) % n][a[(j - 1) % n]]
                       for j in range(n) if j not in (i, (i + 1) % n)):
                bad.append(f"{a}: no mismatch outside the exceptional player and its successor")
        return bad

    @property
    def n(self):
        return len(self.perms)


@dataclass(frozen=True)
class PermutationSet:
    """``m`` profiles in ``[m]^n`` whose projection on every player is a bijection."""
    m: int
    n: int
    profiles: frozenset

    def is_valid(self) -> bool:
        if len(self.profiles) != self.m:
            return False
        return all(sorted(a[j] for a in self.profiles) == list(range(self.m))
                   for j in range(self.n))

    def chain(self, start=0):
        """The permutations ``perms[j]`` (for ``j != start - 1``) that link consecutive
        players along the set, as a dict ``j -> perm``."""
        out = {}
        for k in range(self.n - 1):
            j = (start + k) % self.n
            nxt = (j + 1) % self.n
            perm = [None] * self.m
            for a in self.profiles:
                perm[a[j]] = a[nxt]
            out[j] = tuple(perm)
        return out


def _labels(m, n, actions):
    return [tuple(range(m))] * n if actions is None else [tuple(a) for a in actions]


def _check(spec):
    bad = spec.violations()
    if bad:
        raise PreconditionError(bad)


def make_cyclic_game(spec: CyclicSpec, actions=None) -> Game:
    _check(spec)
    n = spec.n
    values = np.empty((n,) + (spec.m,) * n, dtype=object)
    for j in range(n):
        alpha = to_fraction(spec.alpha[j])
        values[j] = np.where(spec.matches(j), alpha, ZERO)
    return Game(_labels(spec.m, n, actions), values)


def make_almost_cyclic_game(spec: AlmostCyclicSpec, actions=None) -> Game:
    _check(spec)
    base = make_cyclic_game(CyclicSpec(spec.m, spec.perms, spec.alpha))
    values = base.payoffs.copy()
    for a in spec.exceptional:
        values[(spec.player,) + tuple(a)] = ZERO
    return Game(_labels(spec.m, spec.n, actions), values)


def make_permutation_game(pset: PermutationSet, player, actions=None) -> Game:
    """``player`` earns 1 on the permutation set and 0 elsewhere; others always earn 0."""
    if not pset.is_valid():
        raise PreconditionError("not a permutation set")
    values = np.full((pset.n,) + (pset.m,) * pset.n, ZERO, dtype=object)
    for a in pset.profiles:
        values[(player,) + tuple(a)] = ONE
    return Game(_labels(pset.m, pset.n, actions), values)


def permutation_sets(m, n):
    """All permutation sets in ``[m]^n``, each generated by a chain of permutations."""
    out = []
    for chain in product(permutations(range(m)), repeat=n - 1):
        profiles = []
        for k in range(m):
            a = [k]
            for p in chain:
                a.append(p[a[-1]])
            profiles.append(tuple(a))
        out.append(PermutationSet(m, n, frozenset(profiles)))
    return out


def cyclic_tuples(m, n):
    """All tuples of ``n`` permutations of ``[m]`` whose composition is a single cycle."""
    if factorial(m) ** n > ENUMERATION_LIMIT:
        raise GameError(f"(m!)^n = {factorial(m) ** n} exceeds the enumeration limit")
    cycles = [p for p in permutations(range(m)) if is_single_cycle(p)]
    out = []
    for head in product(permutations(range(m)), repeat=n - 1):
        inner = compose(*reversed(head)) if head else tuple(range(m))
        back = invert(inner)
        for c in cycles:
            out.append(head + (compose(c, back),))
    out.sort()
    return out


# --- decompositions -------------------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    """``source_j = scale_j * sum_k weights[k] * component_k_j + offset_j``.

    Components are :class:`CyclicSpec` / :class:`AlmostCyclicSpec` over
    ``actions`` (by index), or explicit games.
    """
    actions: tuple
    components: tuple
    weights: tuple
    scale: tuple
    offset: tuple

    def component_game(self, k) -> Game:
        c = self.components[k]
        if isinstance(c, Game):
            return c
        if isinstance(c, AlmostCyclicSpec):
            return make_almost_cyclic_game(c, self.actions)
        return make_cyclic_game(c, self.actions)

    def combination(self) -> Game:
        """``sum_k weights[k] * component_k``, accumulated without building every game."""
        n = len(self.actions)
        shape = tuple(len(a) for a in self.actions)
        m = shape[0]
        pairs = [np.full((m, m), ZERO, dtype=object) for _ in range(n)]
        dense = np.full((n,) + shape, ZERO, dtype=object)
        for w, c in zip(self.weights, self.components):
            if isinstance(c, Game):
                dense = dense + c.payoffs * w
                continue
            for j in range(n):
                amount = w * to_fraction(c.alpha[j])
                perm = c.perms[(j - 1) % n]
                for x in range(m):
                    pairs[j][x, perm[x]] += amount
            if isinstance(c, AlmostCyclicSpec):
                amount = w * to_fraction(c.alpha[c.player])
                for a in c.exceptional:
                    dense[(c.player,) + tuple(a)] -= amount
        ind = _grid(m, n) if pairs else None
        for j in range(n):
            dense[j] = dense[j] + pairs[j][ind[(j - 1) % n], ind[j]]
        return Game(self.actions, dense)

    def reconstruct(self) -> Game:
        comb = self.combination()
        values = np.stack([comb.payoffs[j] * to_fraction(self.scale[j]) + to_fraction(self.offset[j])
                           for j in range(comb.n)])
        return Game(self.actions, values)

    def violations(self):
        bad = []
        if any(w <= 0 for w in self.weights) or sum(self.weights) != 1:
            bad.append("weights must be positive and sum to 1")
        if any(to_fraction(s) <= 0 for s in self.scale):
            bad.append("scale must be positive")
        for k, c in enumerate(self.components):
            if not isinstance(c, Game):
                bad += [f"component {k}: {v}" for v in c.violations()]
        return bad


def _permutation_game_data(game: Game, player):
    if len(set(game.shape)) != 1:
        raise PreconditionError("permutation games are cubical")
    m, n = game.shape[0], game.n
    if player is None:
        nz = [j for j in range(n) if any(v != 0 for v in game.payoffs[j].flat)]
        if len(nz) != 1:
            raise PreconditionError("exactly one player must have nonzero payoffs")
        player = nz[0]
    for j in range(n):
        vals = set(game.payoffs[j].flat)
        if j != player and vals != {ZERO}:
            raise PreconditionError(f"player {j} must earn 0 everywhere")
        if j == player and not vals <= {ZERO, ONE}:
            raise PreconditionError("payoffs of the permutation player must be 0 or 1")
    support = frozenset(idx for idx, v in np.ndenumerate(game.payoffs[player]) if v == 1)
    pset = PermutationSet(m, n, support)
    if not pset.is_valid():
        raise PreconditionError("the support of the payoff is not a permutation set")
    return m, n, player, pset


def decompose_permutation_game(game: Game, player=None) -> Decomposition:
    """Decompose a permutation game into cyclic and almost-cyclic games.

    Let ``i`` be the paying player and ``f = i + 1``.  The permutation set fixes
    the links from ``f`` round to ``i``; the last link is chosen so the chain
    composes to the shift ``x -> x + 1``.  Profiles where ``i`` is matched but
    which lie outside the set are split into ``m^(n-2) - 1`` permutation sets by
    shifting the middle players; each yields an almost-cyclic game.  Adding
    every single-cycle tuple once, with extra weight on tuples whose link is a
    shift of the chosen one, flattens everything else into a constant.
    """
    m, n, i, pset = _permutation_game_data(game, player)
    if n < 2:
        raise PreconditionError("need at least two players")
    f = (i + 1) % n
    links = pset.chain(f)
    inner = compose(*[links[(f + k) % n] for k in reversed(range(n - 1))])
    links[i] = compose(shift(m, 1), invert(inner))
    perms = tuple(links[j] for j in range(n))
    middle = [(f + k) % n for k in range(1, n - 1)]
    ones = (ONE,) * n

    almost = []
    for s in product(range(m), repeat=len(middle)):
        if not any(s):
            continue
        moved = set()
        for a in pset.profiles:
            b = list(a)
            for j, sj in zip(middle, s):
                b[j] = (a[j] + sj) % m
            b[i] = perms[(i - 1) % n][b[(i - 1) % n]]
            moved.add(tuple(b))
        almost.append(AlmostCyclicSpec(m, perms, ones, i, frozenset(moved)))
    M = len(almost)

    tuples = cyclic_tuples(m, n)
    first = {}
    for t in tuples:
        for pos, p in enumerate(t):
            first.setdefault((pos, p), t)
    extra = {t: [ZERO] * n for t in tuples}
    for j in range(n):
        link = (j - 1) % n
        if j == i:
            rs, amount = ((range(1, m), M - 1) if M >= 1 else ([0], 1))
        else:
            rs, amount = range(1, m), M
        if amount == 0:
            continue
        for r in rs:
            t = first[(link, compose(shift(m, r), perms[link]))]
            extra[t][j] += amount
    cyclic = [CyclicSpec(m, t, tuple(ONE + e for e in extra[t])) for t in tuples]

    comps = tuple(almost) + tuple(cyclic)
    K = len(comps)
    base = Fraction(len(tuples), m)
    offset = tuple(-(base + M) if j != i else -(base + max(M - 1, 0)) for j in range(n))
    dec = Decomposition(game.actions, comps, (Fraction(1, K),) * K, (K,) * n, offset)
    bad = dec.violations()
    if bad:
        raise AssertionError("; ".join(bad))
    if dec.reconstruct() != game:
        raise AssertionError("off-set payoffs did not flatten; decomposition failed")
    return dec


@dataclass(frozen=True)
class SliceGameDecomposition:
    """``game == blow_down(scale * block_average(D) + offset, blowup)`` where
    ``D`` is the convex combination of ``decomposition``'s components."""
    blowup: BlowUpMap
    scale: tuple
    offset: tuple
    decomposition: Decomposition

    def symmetrized(self) -> Game:
        comb = self.decomposition.combination()
        phi = self.blowup
        return block_average(comb, [[phi.fiber(j, b) for b in phi.codomain[j]]
                                    for j in range(phi.n)])

    def reconstruct(self) -> Game:
        sym = self.symmetrized()
        values = np.stack([sym.payoffs[j] * to_fraction(self.scale[j]) + to_fraction(self.offset[j])
                           for j in range(sym.n)])
        return blow_down(Game(sym.actions, values), self.blowup)


def decompose_slice_stochastic_game(game: Game, player) -> SliceGameDecomposition:
    """Decompose a game where only ``player`` is paid, by a deterministic
    slice-stochastic tensor.

    Each action ``a_j`` is split into one copy per opponent profile that meets
    it in the support; the support lifts to a permutation set of the blown-up
    game, whose permutation game is decomposed.  Averaging over permutations
    within fibers recovers the original game up to the factor ``m^(n(n-2))``.
    """
    from .stochastic import is_slice_stochastic
    rep = is_slice_stochastic(game.tensor(player), player)
    problems = list(rep.violations)
    if rep and not rep.deterministic:
        problems.append("payoff tensor is not deterministic")
    for j in range(game.n):
        if j != player and any(v != 0 for v in game.payoffs[j].flat):
            problems.append(f"player {j} must earn 0 everywhere")
    if problems:
        raise PreconditionError(problems)
    m, n = game.shape[0], game.n
    support = [a for a in game.profiles() if game.payoff(a)[player] == 1]

    def lift(a, j):
        return (a[j], a[:j] + a[j + 1:])

    hat_actions = [sorted({lift(a, j) for a in support}) for j in range(n)]
    lifted = frozenset(tuple(hat_actions[j].index(lift(a, j)) for j in range(n)) for a in support)
    hat_m = m ** (n - 1)
    if any(len(h) != hat_m for h in hat_actions):
        raise AssertionError("blown-up action sets have the wrong size")
    hat = make_permutation_game(PermutationSet(hat_m, n, lifted), player, hat_actions)
    dec = decompose_permutation_game(hat, player)
    phi = BlowUpMap([{h: h[0] for h in hat_actions[j]} for j in range(n)])
    factor = m ** (n * (n - 2))
    out = SliceGameDecomposition(phi, tuple(factor * to_fraction(s) for s in dec.scale),
                                 tuple(factor * to_fraction(b) for b in dec.offset), dec)
    if out.reconstruct() != game:
        raise AssertionError("slice-stochastic decomposition does not reconstruct the game")
    return out
