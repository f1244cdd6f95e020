"""Maps between games: blow-ups, clone collapsing, action permutations,
block symmetrization and the linear-combination transform.

A blow-up map sends every action of a larger game onto an action of a base
game; the larger game is the base game precomposed with the map.  Actions in
the same fiber are clones of each other.
"""
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._exact import ONE, ZERO, to_fraction
from .core import Game, GameError, PreconditionError, Profile


def fresh_labels(existing, count, avoid=()):
    """``count`` new labels of the same kind as ``existing``, deterministically.

    Integer action sets continue upward from their maximum; string action sets
    get primed variants of their largest label.
    """
    taken = set(existing) | set(avoid)
    sample = list(existing) + list(avoid)
    out = []
    if all(isinstance(a, int) and not isinstance(a, bool) for a in sample):
        nxt = max(sample, default=0) + 1
        while len(out) < count:
            if nxt not in taken:
                out.append(nxt)
                taken.add(nxt)
            nxt += 1
        return out
    if all(isinstance(a, str) for a in sample):
        stem = max(sample, default="a")
        k = 1
        while len(out) < count:
            cand = stem + "'" * k
            if cand not in taken:
                out.append(cand)
                taken.add(cand)
            k += 1
        return out
    raise GameError("fresh labels need an action set of all ints or all strings")


class BlowUpMap:
    """Per-player surjections from a blown-up action set onto a base action set."""

    __slots__ = ("maps", "domain", "codomain")

    def __init__(self, maps):
        self.maps = tuple(dict(m) for m in maps)
        self.domain = tuple(tuple(sorted(m)) for m in self.maps)
        self.codomain = tuple(tuple(sorted(set(m.values()))) for m in self.maps)

    @classmethod
    def identity(cls, actions):
        return cls([{a: a for a in acts} for acts in actions])

    @classmethod
    def from_counts(cls, base_actions, counts):
        """Give every base action ``counts[i][a]`` copies (default 1).

        The first copy keeps the base label; the others get fresh labels.
        """
        maps = []
        for i, acts in enumerate(base_actions):
            want = counts[i] if counts[i] is not None else {}
            extra = sum(max(0, want.get(a, 1) - 1) for a in acts)
            if any(want.get(a, 1) < 1 for a in acts):
                raise GameError(f"player {i}: every action needs at least one copy")
            new = iter(fresh_labels(acts, extra))
            m = {}
            for a in acts:
                m[a] = a
                for _ in range(want.get(a, 1) - 1):
                    m[next(new)] = a
            maps.append(m)
        return cls(maps)

    @property
    def n(self):
        return len(self.maps)

    def fiber(self, i, base_action):
        return tuple(a for a in self.domain[i] if self.maps[i][a] == base_action)

    def __call__(self, profile):
        return tuple(m[a] for m, a in zip(self.maps, profile))

    def __eq__(self, other):
        return isinstance(other, BlowUpMap) and self.maps == other.maps

    def __repr__(self):
        return f"BlowUpMap(domain sizes={[len(d) for d in self.domain]}, codomain sizes={[len(c) for c in self.codomain]})"


def _check_codomain(game, phi):
    if phi.n != game.n:
        raise GameError("map and game have different numbers of players")
    for i in range(game.n):
        if phi.codomain[i] != game.actions[i]:
            raise GameError(f"player {i}: map image is not the game's action set")


def blow_up(game: Game, phi: BlowUpMap) -> Game:
    """The game ``game . phi`` on the map's domain."""
    _check_codomain(game, phi)
    values = game.payoffs
    for i in range(game.n):
        idx = [game.index(i, phi.maps[i][a]) for a in phi.domain[i]]
        values = np.take(values, idx, axis=i + 1)
    return Game(phi.domain, values)


def blow_down(game: Game, phi: BlowUpMap) -> Game:
    """The unique base game whose blow-up along ``phi`` is ``game``.

    Raises GameError when ``game`` is not constant on the map's fibers.
    """
    if phi.domain != game.actions:
        raise GameError("map domain is not the game's action set")
    values = game.payoffs
    for i in range(game.n):
        idx = [game.index(i, phi.fiber(i, b)[0]) for b in phi.codomain[i]]
        values = np.take(values, idx, axis=i + 1)
    base = Game(phi.codomain, values)
    if blow_up(base, phi) != game:
        raise GameError("game is not constant on the fibers of the map")
    return base


def pushforward(profile: Profile, phi: BlowUpMap) -> Profile:
    """Sum each player's probabilities over the fibers of ``phi``."""
    if profile.actions != phi.domain:
        raise GameError("profile does not live on the map's domain")
    dists = []
    for i in range(profile.n):
        d = {}
        for a, q in profile.dist(i).items():
            b = phi.maps[i][a]
            d[b] = d.get(b, ZERO) + q
        dists.append(d)
    return Profile.from_dicts(phi.codomain, dists)


def uniform_split(phi: BlowUpMap):
    return [{b: {a: Fraction(1, len(phi.fiber(i, b))) for a in phi.fiber(i, b)}
             for b in phi.codomain[i]} for i in range(phi.n)]


def first_split(phi: BlowUpMap):
    return [{b: {phi.fiber(i, b)[0]: ONE} for b in phi.codomain[i]} for i in range(phi.n)]


def preimage_profile(profile: Profile, phi: BlowUpMap, split=None) -> Profile:
    """Lift a base profile along ``phi``.

    ``split[i][b]`` is a distribution over the fiber of ``b``; the lifted
    probability of ``a`` is ``p_i(phi(a)) * split[i][phi(a)][a]``.  Defaults to
    splitting every fiber uniformly.
    """
    if profile.actions != phi.codomain:
        raise GameError("profile does not live on the map's codomain")
    if split is None:
        split = uniform_split(phi)
    dists = []
    for i in range(phi.n):
        d = {}
        for b, q in profile.dist(i).items():
            share = split[i][b]
            if set(share) - set(phi.fiber(i, b)):
                raise GameError(f"player {i}: split for {b!r} leaves its fiber")
            if sum(share.values()) != 1 or any(to_fraction(s) < 0 for s in share.values()):
                raise GameError(f"player {i}: split for {b!r} is not a distribution")
            for a, s in share.items():
                if s:
                    d[a] = q * to_fraction(s)
        dists.append(d)
    return Profile.from_dicts(phi.domain, dists)


# --- clones -------------------------------------------------------------------

def are_clones(game: Game, i, a, b) -> bool:
    """Whether ``a`` and ``b`` give every player the same payoff against every opponent profile."""
    ia, ib = game.index(i, a), game.index(i, b)
    return bool(np.all(np.take(game.payoffs, ia, axis=i + 1) == np.take(game.payoffs, ib, axis=i + 1)))


def clone_classes(game: Game, i):
    """Partition of player ``i``'s actions into clone classes, in canonical order."""
    classes = []
    for a in game.actions[i]:
        for cls in classes:
            if are_clones(game, i, cls[0], a):
                cls.append(a)
                break
        else:
            classes.append([a])
    return [tuple(c) for c in classes]


def collapse_clones(game: Game):
    """Merge every clone class into its first member.

    Returns ``(base, phi)`` with ``blow_up(base, phi) == game``.
    """
    maps = [{a: cls[0] for cls in clone_classes(game, i) for a in cls} for i in range(game.n)]
    phi = BlowUpMap(maps)
    return blow_down(game, phi), phi


# --- permutations -------------------------------------------------------------

class GamePermutation:
    """Per-player bijections of action sets."""

    __slots__ = ("maps",)

    def __init__(self, maps):
        self.maps = tuple(dict(m) for m in maps)
        for i, m in enumerate(self.maps):
            if set(m) != set(m.values()):
                raise GameError(f"player {i}: permutation is not a bijection")

    @classmethod
    def identity(cls, actions):
        return cls([{a: a for a in acts} for acts in actions])

    def inverse(self):
        return GamePermutation([{v: k for k, v in m.items()} for m in self.maps])

    def __call__(self, profile):
        return tuple(m[a] for m, a in zip(self.maps, profile))

    def __repr__(self):
        return f"GamePermutation({self.maps})"


def _check_perm(actions, pi):
    if len(pi.maps) != len(actions):
        raise GameError("permutation has the wrong number of players")
    for i, acts in enumerate(actions):
        if set(pi.maps[i]) != set(acts):
            raise GameError(f"player {i}: permutation is not on the action set")


def permute_game(game: Game, pi: GamePermutation) -> Game:
    """The game ``a -> game(pi(a))``."""
    _check_perm(game.actions, pi)
    values = game.payoffs
    for i, acts in enumerate(game.actions):
        values = np.take(values, [game.index(i, pi.maps[i][a]) for a in acts], axis=i + 1)
    return Game(game.actions, values)


def permute_profile(profile: Profile, pi: GamePermutation) -> Profile:
    """The profile ``a -> profile(pi(a))``, which pairs with :func:`permute_game`."""
    _check_perm(profile.actions, pi)
    return Profile.from_dicts(profile.actions, [
        {a: profile.prob(i, pi.maps[i][a]) for a in acts}
        for i, acts in enumerate(profile.actions)])


def apply_permutation(obj, pi: GamePermutation):
    if isinstance(obj, Game):
        return permute_game(obj, pi)
    if isinstance(obj, Profile):
        return permute_profile(obj, pi)
    raise TypeError(f"cannot permute a {type(obj).__name__}")


# --- symmetrization -------------------------------------------------------------

def block_average(game: Game, blocks) -> Game:
    """Average the game over all permutations that preserve each block.

    ``blocks[i]`` is a list of disjoint action groups of player ``i``.  The
    average over the whole group of block-preserving permutations equals
    replacing each coordinate by its uniform mean over its block, which is
    what is computed here.
    """
    values = game.payoffs.copy()
    for i, groups in enumerate(blocks):
        seen = set()
        for group in groups:
            if seen & set(group):
                raise GameError(f"player {i}: blocks overlap")
            seen |= set(group)
            if len(group) < 2:
                continue
            idx = [game.index(i, a) for a in group]
            sl = [slice(None)] * values.ndim
            sl[i + 1] = idx
            mean = values[tuple(sl)].sum(axis=i + 1, keepdims=True) / len(idx)
            values[tuple(sl)] = mean
    return Game(game.actions, values)


def symmetrize(game: Game, fixed) -> Game:
    """Average over all permutations fixing ``fixed[i]`` pointwise for every player."""
    blocks = []
    for i, acts in enumerate(game.actions):
        keep = set(fixed[i])
        if not keep <= set(acts):
            raise GameError(f"player {i}: fixed set is not a subset of the actions")
        blocks.append([[a for a in acts if a not in keep]])
    return block_average(game, blocks)


# --- linear-combination transform -----------------------------------------------

@dataclass(frozen=True)
class LinCombSpec:
    """Per player: the target action (``None`` asks for a fresh one), integer
    weights over the player's actions and the positive scale ``kappa``.

    A player whose ``weights`` entry is ``None`` is left unchanged.
    """
    targets: tuple
    weights: tuple
    kappa: tuple


def _lincomb_prepare(game, profile, spec):
    if profile.actions != game.actions:
        raise GameError("profile does not match the game")
    if not (len(spec.targets) == len(spec.weights) == len(spec.kappa) == game.n):
        raise GameError("transform spec needs one entry per player")
    problems = []
    plan = []
    for i, acts in enumerate(game.actions):
        k = spec.weights[i]
        if k is None:
            plan.append(None)
            continue
        k = {a: int(v) for a, v in k.items() if v}
        target = spec.targets[i]
        if target is None:
            target = fresh_labels(acts, 1)[0]
        kappa = to_fraction(spec.kappa[i])
        if not k:
            problems.append(f"player {i}: weight vector is zero")
        if any(v < 0 for v in k.values()):
            problems.append(f"player {i}: weights must be nonnegative")
        if set(k) - set(acts):
            problems.append(f"player {i}: weights on unknown actions")
        if kappa <= 0:
            problems.append(f"player {i}: kappa must be positive")
        if target in acts and k.get(target, 0) <= 0:
            problems.append(f"player {i}: existing target {target!r} needs positive weight")
        for a in acts:
            if kappa * k.get(a, 0) > profile.prob(i, a):
                problems.append(f"player {i}: kappa*k exceeds p at {a!r}")
        if target in acts and kappa * k.get(target, 0) != profile.prob(i, target):
            problems.append(f"player {i}: kappa*k must equal p at the target {target!r}")
        plan.append((target, k, kappa))
    if problems:
        raise PreconditionError(problems)
    return plan


def _mix_axes(values, mats):
    """Replace axis ``i + 1`` of ``values`` by ``mats[i] @ (that axis)``."""
    out = values
    for i, mat in enumerate(mats):
        if mat is None:
            continue
        out = np.moveaxis(np.tensordot(mat, out, axes=([1], [i + 1])), 0, i + 1)
    return out


def linear_combination_transform(game: Game, profile: Profile, spec: LinCombSpec):
    """Replace part of each player's mixture by a single action playing a fixed mixture.

    Player ``i``'s new action set is its old one with the target added (if
    fresh) and the target's old payoffs overwritten: the target now plays the
    mixture ``k_i / |k_i|`` over the old actions.  The new profile moves the
    mass ``x_i = kappa_i * k_i`` onto the target.  Returns ``(new_game, new_profile)``.
    """
    plan = _lincomb_prepare(game, profile, spec)
    new_actions, mats, dists = [], [], []
    for i, acts in enumerate(game.actions):
        if plan[i] is None:
            new_actions.append(acts)
            mats.append(None)
            dists.append(profile.dist(i))
            continue
        target, k, kappa = plan[i]
        others = [a for a in acts if a != target]
        new = sorted(others + [target])
        norm = sum(k.values())
        mat = np.empty((len(new), len(acts)), dtype=object)
        for r, b in enumerate(new):
            for c, a in enumerate(acts):
                if b == target:
                    mat[r, c] = Fraction(k.get(a, 0), norm)
                else:
                    mat[r, c] = ONE if a == b else ZERO
        new_actions.append(tuple(new))
        mats.append(mat)
        d = {a: profile.prob(i, a) - kappa * k.get(a, 0) for a in others}
        d[target] = kappa * norm
        dists.append(d)
    values = _mix_axes(game.payoffs, mats)
    return Game(new_actions, values), Profile.from_dicts(new_actions, dists)


def lincomb_proof_pipeline(game: Game, profile: Profile, spec: LinCombSpec):
    """Reference construction of :func:`linear_combination_transform` by
    cloning, symmetrizing the cloned block and blowing it down.

    Slow; meant for cross-checking on small games.
    """
    plan = _lincomb_prepare(game, profile, spec)
    counts = []
    for i, acts in enumerate(game.actions):
        if plan[i] is None:
            counts.append(None)
            continue
        target, k, _ = plan[i]
        counts.append({a: 1 + (k.get(a, 0) - 1 if a == target else k.get(a, 0)) for a in acts})
    # clone labels must also avoid fresh targets
    maps = []
    for i, acts in enumerate(game.actions):
        if plan[i] is None:
            maps.append({a: a for a in acts})
            continue
        target = plan[i][0]
        extra = sum(c - 1 for c in counts[i].values())
        new = iter(fresh_labels(acts, extra, avoid=[target]))
        m = {a: a for a in acts}
        for a in acts:
            for _ in range(counts[i][a] - 1):
                m[next(new)] = a
        maps.append(m)
    phi = BlowUpMap(maps)
    cloned = blow_up(game, phi)

    fixed, down, dists = [], [], []
    for i, acts in enumerate(game.actions):
        if plan[i] is None:
            fixed.append(acts)
            down.append({a: a for a in acts})
            dists.append(profile.dist(i))
            continue
        target, k, kappa = plan[i]
        kept = [a for a in acts if a != target]
        block = [a for a in phi.domain[i] if a not in kept]
        fixed.append(kept)
        down.append({**{a: a for a in kept}, **{a: target for a in block}})
        d = {a: profile.prob(i, a) - kappa * k.get(a, 0) for a in kept}
        for a in block:
            d[a] = d.get(a, ZERO) + kappa
        dists.append(d)
    lifted = Profile.from_dicts(phi.domain, dists)
    sym = symmetrize(cloned, fixed)
    psi = BlowUpMap(down)
    return blow_down(sym, psi), pushforward(lifted, psi)
