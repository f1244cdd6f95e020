"""Normal-form games with exact rational payoffs and mixed profiles over them.

A game has ``n`` players, each with a finite, totally ordered set of action
labels, and a payoff array of shape ``(n, |A_1|, ..., |A_n|)`` whose entries
are :class:`fractions.Fraction`.  Action sets are always stored in sorted
order, so two games built from the same data compare equal regardless of the
order the labels were supplied in.
"""
from fractions import Fraction
from itertools import product

import numpy as np

from ._exact import ONE, ZERO, contract, fraction_array, to_fraction


class GameError(ValueError):
    """Raised for malformed games, profiles or maps."""


class PreconditionError(GameError):
    """Raised when an operation's preconditions fail.

    ``violations`` lists every failed condition, not just the first.
    """

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def _canonical_actions(actions):
    out = []
    for i, acts in enumerate(actions):
        acts = tuple(acts)
        if not acts:
            raise GameError(f"player {i} has no actions")
        if len(set(acts)) != len(acts):
            raise GameError(f"player {i} has duplicate action labels")
        try:
            order = sorted(range(len(acts)), key=lambda k: acts[k])
        except TypeError:
            raise GameError(f"action labels of player {i} are not mutually comparable") from None
        out.append((acts, order))
    return out


def _actions_of(obj):
    return obj.actions if hasattr(obj, "actions") else tuple(tuple(a) for a in obj)


class Game:
    """An ``n``-player normal-form game with rational payoffs.

    Args:
        actions: per-player sequences of hashable, mutually comparable labels.
        payoffs: array-like of shape ``(n, |A_1|, ..., |A_n|)``, indexed in the
            order the labels were given.  Entries may be ints, Fractions or
            ``"num/den"`` strings; floats are rejected.
    """

    __slots__ = ("_actions", "_payoffs", "_index", "_hash")

    def __init__(self, actions, payoffs):
        canon = _canonical_actions(actions)
        values = fraction_array(payoffs)
        n = len(canon)
        shape = (n,) + tuple(len(a) for a, _ in canon)
        if values.shape != shape:
            raise GameError(f"payoff array has shape {values.shape}, expected {shape}")
        for axis, (_, order) in enumerate(canon, start=1):
            if order != sorted(order):
                values = np.take(values, order, axis=axis)
        values.flags.writeable = False
        self._actions = tuple(tuple(a[k] for k in order) for a, order in canon)
        self._payoffs = values
        self._index = tuple({a: k for k, a in enumerate(acts)} for acts in self._actions)
        self._hash = None

    @classmethod
    def from_function(cls, actions, fn):
        """Build a game from ``fn(profile) -> payoff vector``."""
        actions = [tuple(a) for a in actions]
        n = len(actions)
        values = np.empty((n,) + tuple(len(a) for a in actions), dtype=object)
        for idx in product(*(range(len(a)) for a in actions)):
            vec = fn(tuple(actions[i][k] for i, k in enumerate(idx)))
            if len(vec) != n:
                raise GameError(f"payoff vector at {idx} has length {len(vec)}")
            for i, v in enumerate(vec):
                values[(i,) + idx] = v
        return cls(actions, values)

    @classmethod
    def bimatrix(cls, row, col, actions=None):
        """Two-player game from the row and column players' payoff matrices."""
        row = fraction_array(row)
        col = fraction_array(col)
        if row.shape != col.shape or row.ndim != 2:
            raise GameError("bimatrix payoffs must be two matrices of equal shape")
        if actions is None:
            actions = [range(1, row.shape[0] + 1), range(1, row.shape[1] + 1)]
        return cls(actions, np.stack([row, col]))

    @classmethod
    def constant(cls, actions, value=0):
        actions = [tuple(a) for a in actions]
        shape = (len(actions),) + tuple(len(a) for a in actions)
        return cls(actions, np.full(shape, to_fraction(value), dtype=object))

    @property
    def actions(self):
        return self._actions

    @property
    def n(self) -> int:
        return len(self._actions)

    @property
    def shape(self):
        return tuple(len(a) for a in self._actions)

    @property
    def payoffs(self) -> np.ndarray:
        """Read-only object array of shape ``(n, *shape)``."""
        return self._payoffs

    def index(self, i, action) -> int:
        try:
            return self._index[i][action]
        except KeyError:
            raise GameError(f"{action!r} is not an action of player {i}") from None

    def profile_index(self, profile):
        return tuple(self.index(i, a) for i, a in enumerate(profile))

    def payoff(self, profile):
        """Payoff vector at a pure profile given by action labels."""
        idx = self.profile_index(profile)
        return tuple(self._payoffs[(i,) + idx] for i in range(self.n))

    def profiles(self):
        return product(*self._actions)

    def tensor(self, i) -> "PayoffTensor":
        return PayoffTensor(self._actions, self._payoffs[i])

    def with_actions(self, actions):
        """Relabel actions positionally (canonical order of the new labels decides layout)."""
        return Game(actions, self._payoffs)

    def __add__(self, other):
        if not isinstance(other, Game):
            return NotImplemented
        _same_actions(self, other)
        return Game(self._actions, self._payoffs + other._payoffs)

    def __sub__(self, other):
        if not isinstance(other, Game):
            return NotImplemented
        _same_actions(self, other)
        return Game(self._actions, self._payoffs - other._payoffs)

    def __mul__(self, scalar):
        return Game(self._actions, self._payoffs * to_fraction(scalar))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Game):
            return NotImplemented
        return self._actions == other._actions and bool(np.all(self._payoffs == other._payoffs))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._actions, tuple(self._payoffs.flat)))
        return self._hash

    def __repr__(self):
        return f"Game(n={self.n}, shape={self.shape})"


def _same_actions(g, h):
    if g.actions != h.actions:
        raise GameError("games have different action sets")


class PayoffTensor:
    """A rational array over a product of action sets, e.g. one player's payoffs."""

    __slots__ = ("actions", "values")

    def __init__(self, actions, values):
        self.actions = tuple(tuple(a) for a in actions)
        values = fraction_array(values)
        if values.shape != tuple(len(a) for a in self.actions):
            raise GameError("tensor shape does not match its action sets")
        self.values = values

    def __getitem__(self, profile):
        return self.values[tuple(acts.index(a) for acts, a in zip(self.actions, profile))]

    def __eq__(self, other):
        if not isinstance(other, PayoffTensor):
            return NotImplemented
        return self.actions == other.actions and bool(np.all(self.values == other.values))

    def __repr__(self):
        return f"PayoffTensor(shape={self.values.shape})"


class Profile:
    """A mixed strategy profile: per player, a distribution over an action set.

    Stored as probability vectors aligned with the (sorted) action sets, so
    profiles over the same game compare and hash by value.
    """

    __slots__ = ("_actions", "_probs")

    def __init__(self, actions, probs):
        actions = _actions_of(actions)
        if len(probs) != len(actions):
            raise GameError("profile has the wrong number of players")
        out = []
        for i, (acts, vec) in enumerate(zip(actions, probs)):
            vec = tuple(to_fraction(x) for x in vec)
            if len(vec) != len(acts):
                raise GameError(f"player {i}: {len(vec)} probabilities for {len(acts)} actions")
            if any(x < 0 for x in vec):
                raise GameError(f"player {i}: negative probability")
            if sum(vec) != 1:
                raise GameError(f"player {i}: probabilities sum to {sum(vec)}")
            out.append(vec)
        self._actions = tuple(tuple(a) for a in actions)
        self._probs = tuple(out)

    @classmethod
    def from_dicts(cls, actions, dists):
        """Build from per-player ``{action: probability}`` maps; missing actions get 0."""
        actions = _actions_of(actions)
        vecs = []
        for i, (acts, dist) in enumerate(zip(actions, dists)):
            unknown = set(dist) - set(acts)
            if unknown:
                raise GameError(f"player {i}: unknown actions {sorted(unknown, key=repr)}")
            vecs.append([dist.get(a, ZERO) for a in acts])
        return cls(actions, vecs)

    @classmethod
    def uniform(cls, actions, supports=None):
        """Uniform over each player's action set, or over the given supports."""
        actions = _actions_of(actions)
        if supports is None:
            supports = actions
        return cls.from_dicts(actions, [{a: Fraction(1, len(s)) for a in s} for s in supports])

    @classmethod
    def pure(cls, actions, choice):
        actions = _actions_of(actions)
        return cls.from_dicts(actions, [{a: ONE} for a in choice])

    @property
    def actions(self):
        return self._actions

    @property
    def n(self) -> int:
        return len(self._actions)

    @property
    def probs(self):
        return self._probs

    def vector(self, i) -> np.ndarray:
        return np.array(self._probs[i], dtype=object)

    def prob(self, i, action) -> Fraction:
        try:
            return self._probs[i][self._actions[i].index(action)]
        except ValueError:
            return ZERO

    def dist(self, i):
        return {a: q for a, q in zip(self._actions[i], self._probs[i]) if q}

    def support(self, i):
        return tuple(a for a, q in zip(self._actions[i], self._probs[i]) if q)

    def is_full_support(self) -> bool:
        return all(all(q > 0 for q in vec) for vec in self._probs)

    def is_pure(self) -> bool:
        return all(sum(1 for q in vec if q) == 1 for vec in self._probs)

    def replace(self, i, vec):
        probs = list(self._probs)
        probs[i] = vec
        return Profile(self._actions, probs)

    def __eq__(self, other):
        if not isinstance(other, Profile):
            return NotImplemented
        return self._actions == other._actions and self._probs == other._probs

    def __hash__(self):
        return hash((self._actions, self._probs))

    def __repr__(self):
        parts = ["{" + ", ".join(f"{a!r}: {q}" for a, q in self.dist(i).items()) + "}"
                 for i in range(self.n)]
        return "Profile(" + ", ".join(parts) + ")"


def convex_combine(games, weights) -> Game:
    """Weighted average of games on a common action set (weights nonnegative, summing to 1)."""
    games = list(games)
    weights = [to_fraction(w) for w in weights]
    if not games or len(games) != len(weights):
        raise GameError("need one weight per game")
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise GameError("weights must be nonnegative and sum to 1")
    for g in games[1:]:
        _same_actions(games[0], g)
    total = sum((g.payoffs * w for g, w in zip(games, weights)), np.zeros_like(games[0].payoffs))
    return Game(games[0].actions, total)


def affine_transform(game: Game, alpha, beta) -> Game:
    """Per-player map ``G_i -> alpha_i * G_i + beta_i`` with every ``alpha_i > 0``."""
    alpha = [to_fraction(a) for a in alpha]
    beta = [to_fraction(b) for b in beta]
    if len(alpha) != game.n or len(beta) != game.n:
        raise GameError("alpha and beta need one entry per player")
    if any(a <= 0 for a in alpha):
        raise GameError("affine scale factors must be positive")
    values = np.stack([game.payoffs[i] * alpha[i] + beta[i] for i in range(game.n)])
    return Game(game.actions, values)


def hadamard_contort(game: Game, player, weights) -> Game:
    """Multiply every other player's payoffs by ``weights(a_player)``.

    ``weights`` maps each action of ``player`` to a positive rational.  The
    player's own payoffs are untouched.  If ``p`` is an equilibrium of the
    original game, then the profile with ``p_player`` reweighted proportional to
    ``p_player / weights`` is an equilibrium of the result.
    """
    acts = game.actions[player]
    w = [to_fraction(weights[a]) for a in acts]
    if any(x <= 0 for x in w):
        raise GameError("contortion weights must be positive")
    shape = [1] * game.n
    shape[player] = len(acts)
    scale = np.array(w, dtype=object).reshape(shape)
    values = np.stack([game.payoffs[j] if j == player else game.payoffs[j] * scale
                       for j in range(game.n)])
    return Game(game.actions, values)


def contort_profile(profile: Profile, player, weights) -> Profile:
    """Reweight ``profile[player]`` proportional to ``p / weights``, matching :func:`hadamard_contort`."""
    acts = profile.actions[player]
    raw = [q / to_fraction(weights[a]) for a, q in zip(acts, profile.probs[player])]
    total = sum(raw)
    return profile.replace(player, [x / total for x in raw])


def normalize(game: Game) -> Game:
    """Rescale each player's payoffs affinely onto [0, 1]; constant players map to 1."""
    out = []
    for i in range(game.n):
        vals = game.payoffs[i]
        lo, hi = min(vals.flat), max(vals.flat)
        if lo == hi:
            out.append(np.full(vals.shape, ONE, dtype=object))
        else:
            out.append((vals - lo) / (hi - lo))
    return Game(game.actions, np.stack(out))


def player_payoff_projection(game: Game, i) -> Game:
    """The game that keeps player ``i``'s payoffs and zeroes everyone else's."""
    values = np.empty_like(game.payoffs)
    for j in range(game.n):
        values[j] = game.payoffs[j] if j == i else np.full(game.shape, ZERO, dtype=object)
    return Game(game.actions, values)


def profile_distance(p: Profile, q: Profile) -> Fraction:
    """Maximum over players of the l1 distance between their strategies."""
    if p.actions != q.actions:
        raise GameError("profiles live on different action sets")
    return max(sum(abs(x - y) for x, y in zip(u, v)) for u, v in zip(p.probs, q.probs))


def restrict(game: Game, subsets) -> Game:
    """Restrict each player's action set to a nonempty subset."""
    idx = []
    for i, sub in enumerate(subsets):
        sub = tuple(sub)
        if not sub:
            raise GameError(f"empty restriction for player {i}")
        idx.append(sorted(game.index(i, a) for a in sub))
    values = game.payoffs[np.ix_(range(game.n), *idx)]
    return Game([[game.actions[i][k] for k in ks] for i, ks in enumerate(idx)], values)


def restrict_profile(profile: Profile, subsets) -> Profile:
    """Restrict a profile whose supports lie inside ``subsets``."""
    dists = []
    for i, sub in enumerate(subsets):
        d = profile.dist(i)
        if not set(d) <= set(sub):
            raise GameError(f"player {i}: support leaves the restriction")
        dists.append(d)
    return Profile.from_dicts([sorted(s) for s in subsets], dists)


def extend_profile(profile: Profile, actions) -> Profile:
    """View a profile on a larger action set, padding with zeros."""
    return Profile.from_dicts(actions, [profile.dist(i) for i in range(profile.n)])


def expected_payoffs(game: Game, profile: Profile):
    """Expected payoff vector of every player under ``profile``."""
    if profile.actions != game.actions:
        raise GameError("profile does not match the game's action sets")
    vecs = [profile.vector(i) for i in range(game.n)]
    return tuple(contract(game.payoffs[i], vecs)[()] for i in range(game.n))


def action_values(game: Game, profile: Profile, i) -> np.ndarray:
    """Expected payoff of each pure action of player ``i`` against ``profile_{-i}``."""
    if profile.actions != game.actions:
        raise GameError("profile does not match the game's action sets")
    vecs = [None if j == i else profile.vector(j) for j in range(game.n)]
    return contract(game.payoffs[i], vecs)
