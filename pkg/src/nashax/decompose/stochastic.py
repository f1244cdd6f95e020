"""Slice-stochastic tensors, their Birkhoff-von Neumann style decomposition,
and the transform that turns a full-support equilibrium into one.

For a cubical tensor ``T`` over ``[m]^n`` and a player ``i``, write
``a = (a_i, a_-i)``.  ``T`` is slice-stochastic for ``i`` when

* every slice ``T(., a_-i)`` sums to 1,
* every hyperplane ``T(a_i, .)`` sums to ``m^(n-2)``,
* every entry lies in ``[0, 1]``.

It is deterministic when all entries are 0 or 1.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .._exact import ONE, ZERO
from ..core import Game, GameError, PayoffTensor, PreconditionError, Profile
from ..equilibrium import is_nash


def _cube(tensor: PayoffTensor):
    shape = tensor.values.shape
    if not shape or len(set(shape)) != 1:
        raise GameError("slice-stochastic tensors must be cubical")
    return shape[0], len(shape)


def _slices(m, n, i):
    """Opponent index tuples ``a_-i`` in canonical order."""
    return list(product(range(m), repeat=n - 1))


def _full(i, ai, rest):
    return rest[:i] + (ai,) + rest[i:]


@dataclass
class SliceReport:
    ok: bool
    deterministic: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def is_slice_stochastic(tensor: PayoffTensor, i) -> SliceReport:
    """Check the three slice-stochastic conditions; report every violation."""
    m, n = _cube(tensor)
    vals = tensor.values
    hyper = Fraction(m) ** (n - 2)
    bad = []
    for rest in _slices(m, n, i):
        total = sum(vals[_full(i, a, rest)] for a in range(m))
        if total != 1:
            bad.append(f"slice {rest} sums to {total}")
    for a in range(m):
        total = sum(np.take(vals, a, axis=i).flat)
        if total != hyper:
            bad.append(f"hyperplane {a} sums to {total}, expected {hyper}")
    for idx, v in np.ndenumerate(vals):
        if not 0 <= v <= 1:
            bad.append(f"entry {idx} = {v} outside [0, 1]")
    det = all(v in (0, 1) for v in vals.flat)
    return SliceReport(not bad, det and not bad, bad)


class SliceStochasticTensor(PayoffTensor):
    """A payoff tensor validated as slice-stochastic for ``player``."""

    __slots__ = ("player",)

    def __init__(self, actions, values, player):
        super().__init__(actions, values)
        self.player = player
        rep = is_slice_stochastic(self, player)
        if not rep:
            raise PreconditionError(rep.violations)

    @property
    def deterministic(self) -> bool:
        return all(v in (0, 1) for v in self.values.flat)


def deterministic_tensor(m, n, i, assignment, actions=None) -> PayoffTensor:
    """Deterministic tensor from ``assignment[a_-i] = a_i`` (opponent tuples in canonical order)."""
    vals = np.full((m,) * n, ZERO, dtype=object)
    for rest, ai in zip(_slices(m, n, i), assignment):
        vals[_full(i, ai, rest)] = ONE
    if actions is None:
        actions = [range(m)] * n
    return PayoffTensor(actions, vals)


def random_deterministic_assignment(m, n, rng):
    """Uniformly random slice-to-action assignment with balanced hyperplanes."""
    per = m ** (n - 2) if n >= 2 else 0
    labels = [a for a in range(m) for _ in range(per)]
    rng.shuffle(labels)
    return labels


# --- exact degree-constrained assignment -----------------------------------------

def _complete_assignment(allowed, m, cap):
    """Assign every slice an allowed action so that every action gets ``cap``
    slices; lexicographically smallest over slices in order.  None if impossible."""
    S = len(allowed)
    match = [None] * S
    load = [[] for _ in range(m)]

    def assign(s, a):
        if match[s] is not None:
            load[match[s]].remove(s)
        match[s] = a
        load[a].append(s)

    def place(s, seen):
        for a in allowed[s]:
            if a in seen:
                continue
            seen.add(a)
            if len(load[a]) < cap:
                assign(s, a)
                return True
            for t in list(load[a]):
                if place(t, seen):
                    assign(s, a)
                    return True
        return False

    for s in range(S):
        if not place(s, set()):
            return None

    # lexicographic improvement: reroute along alternating paths through later slices
    for s in range(S):
        cur = match[s]
        for target in allowed[s]:
            if target >= cur:
                break
            path = _reroute_path(target, cur, s, match, load, allowed)
            if path is None:
                continue
            for t, dest in path:
                assign(t, dest)
            assign(s, target)
            break
    return match


def _reroute_path(start, goal, s, match, load, allowed):
    """Moves ``[(slice, new_action), ...]`` freeing one place at ``start`` and
    consuming one at ``goal``, using only slices after ``s``."""
    prev = {start: None}
    queue = [start]
    while queue:
        node = queue.pop(0)
        for t in sorted(load[node]):
            if t <= s:
                continue
            for nxt in allowed[t]:
                if nxt in prev:
                    continue
                prev[nxt] = (node, t)
                if nxt == goal:
                    moves = []
                    cur = goal
                    while prev[cur] is not None:
                        node_from, slice_t = prev[cur]
                        moves.append((slice_t, cur))
                        cur = node_from
                    return list(reversed(moves))
                queue.append(nxt)
    return None


@dataclass(frozen=True)
class BvNTerm:
    weight: Fraction
    tensor: PayoffTensor


def bvn_decompose(tensor: PayoffTensor, i):
    """Write a slice-stochastic tensor as a convex combination of deterministic ones.

    Each step extracts a deterministic tensor supported inside the residual's
    support, found as an exact integral degree-constrained assignment, with
    weight equal to the smallest residual entry it covers.  Every step zeroes
    at least one entry, so there are at most ``|supp|`` terms.
    """
    rep = is_slice_stochastic(tensor, i)
    if not rep:
        raise PreconditionError(rep.violations)
    m, n = _cube(tensor)
    if n < 2:
        raise GameError("decomposition needs at least two players")
    cap = m ** (n - 2)
    slices = _slices(m, n, i)
    resid = tensor.values.copy()
    terms = []
    while any(v != 0 for v in resid.flat):
        allowed = [[a for a in range(m) if resid[_full(i, a, rest)] > 0] for rest in slices]
        match = _complete_assignment(allowed, m, cap)
        if match is None:
            raise AssertionError("no integral assignment inside the residual support")
        cells = [_full(i, a, rest) for rest, a in zip(slices, match)]
        weight = min(resid[c] for c in cells)
        for c in cells:
            resid[c] -= weight
        terms.append(BvNTerm(weight, deterministic_tensor(m, n, i, match, tensor.actions)))
    total = sum((t.weight * t.tensor.values for t in terms), np.full(resid.shape, ZERO, dtype=object))
    if not np.all(total == tensor.values):
        raise AssertionError("decomposition does not reconstruct the tensor")
    return terms


def slice_constraint_matrix(m, n, i):
    """Rows of the slice and hyperplane equations over cells in canonical order.

    Returns ``(matrix, kinds)`` with ``kinds[r]`` either ``"slice"`` or ``"hyperplane"``.
    """
    cells = list(product(range(m), repeat=n))
    col = {c: k for k, c in enumerate(cells)}
    rows, kinds = [], []
    for rest in _slices(m, n, i):
        r = [0] * len(cells)
        for a in range(m):
            r[col[_full(i, a, rest)]] = 1
        rows.append(r)
        kinds.append("slice")
    for a in range(m):
        rows.append([1 if c[i] == a else 0 for c in cells])
        kinds.append("hyperplane")
    return np.array(rows, dtype=np.int64), kinds


# --- the slice-stochastic transform --------------------------------------------

@dataclass(frozen=True)
class SliceTransform:
    """Result of :func:`slice_stochastic_transform`.

    ``scales[j]`` is the tensor ``eps * p_j(a_j)``, ``others`` their product over
    ``j != i``, ``contorted`` the player's payoffs times ``others``,
    ``correction`` the slice-constant term and ``result`` their sum.
    """
    eps: Fraction
    scales: tuple
    others: PayoffTensor
    contorted: PayoffTensor
    correction: PayoffTensor
    result: SliceStochasticTensor


def slice_stochastic_transform(game: Game, profile: Profile, i) -> SliceTransform:
    """Turn player ``i``'s payoffs into a slice-stochastic tensor using a
    full-support equilibrium ``profile``.

    ``eps`` starts at ``1 / (2 m^n (1 + max|G_i|))`` and is halved until every
    entry lies in ``[0, 1]``.
    """
    problems = []
    if len(set(game.shape)) != 1:
        problems.append("all players need the same number of actions")
    if profile.actions != game.actions or not profile.is_full_support():
        problems.append("profile must have full support")
    elif not is_nash(game, profile):
        problems.append("profile must be a Nash equilibrium")
    if problems:
        raise PreconditionError(problems)
    m, n = game.shape[0], game.n
    pay = game.payoffs[i]
    big = max(abs(v) for v in pay.flat)
    eps = Fraction(1, 2 * m ** n) / (1 + big)
    for _ in range(200):
        scales = []
        for j in range(n):
            shape = [1] * n
            shape[j] = m
            vec = np.array([eps * q for q in profile.probs[j]], dtype=object).reshape(shape)
            scales.append(np.broadcast_to(vec, (m,) * n).copy())
        others = np.full((m,) * n, ONE, dtype=object)
        for j in range(n):
            if j != i:
                others = others * scales[j]
        contorted = pay * others
        slice_sum = contorted.sum(axis=i, keepdims=True)
        correction = np.broadcast_to((1 - slice_sum) / m, (m,) * n).copy()
        result = contorted + correction
        if all(0 <= v <= 1 for v in result.flat):
            acts = game.actions
            return SliceTransform(
                eps, tuple(PayoffTensor(acts, s) for s in scales), PayoffTensor(acts, others),
                PayoffTensor(acts, contorted), PayoffTensor(acts, correction),
                SliceStochasticTensor(acts, result, i))
        eps /= 2
    raise AssertionError("no admissible eps found")
