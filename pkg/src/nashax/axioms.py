"""Solution concepts and witness-based axiom checkers.

A solution concept is a membership predicate plus a generator of finitely
many member profiles ("witnesses").  Checkers look for a violation among
witnesses and caller-supplied probe profiles.  A ``fail`` verdict always
carries a concrete, replayable counterexample; ``pass`` means no violation
was found among the profiles examined; ``inconclusive`` means a membership
question could not be settled.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice, product
from typing import Callable, Optional

import numpy as np

from ._exact import ZERO, to_fraction
from .core import Game, GameError, Profile, convex_combine, expected_payoffs, profile_distance
from .equilibrium import (best_responses, dominant_action, is_admissible, is_eps_nash, is_nash,
                          is_quasi_strict, pure_nash_equilibria, rationalizable_actions,
                          solve_nash_2p, supports_common_full_belief, undominated_actions)
from .morphism import (BlowUpMap, GamePermutation, blow_up, collapse_clones, first_split,
                       permute_game, permute_profile, preimage_profile, pushforward,
                       uniform_split)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
PURE_LIMIT = 256


@dataclass(frozen=True)
class SolutionConcept:
    """``contains(G, p)`` returns True, False or None (undecidable).

    ``exhaustive(G)`` tells whether an empty witness list proves ``f(G)`` empty.
    """
    name: str
    contains: Callable
    witnesses: Callable
    exhaustive: Callable = lambda game: False


@dataclass
class AxiomVerdict:
    axiom: str
    status: str
    delta: Fraction = ZERO
    detail: str = ""
    witness: Optional[dict] = None
    examined: int = 0

    @property
    def failed(self):
        return self.status == FAIL


# --- witness helpers ---------------------------------------------------------------

def _dedupe(profiles):
    seen, out = set(), []
    for p in profiles:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _product_profiles(game, sets):
    """Uniform mixture over the sets plus pure profiles inside them (capped)."""
    out = [Profile.uniform(game, sets)]
    out += [Profile.pure(game, a) for a in islice(product(*sets), PURE_LIMIT)]
    return out


def nash_witnesses(game: Game):
    if game.n == 2:
        out = []
        for c in solve_nash_2p(game).components:
            out.append(c.profile)
            out += c.vertex_profiles()
        return _dedupe(out)
    out = [Profile.pure(game, a) for a in pure_nash_equilibria(game)]
    uni = Profile.uniform(game)
    if is_nash(game, uni):
        out.append(uni)
    return _dedupe(out)


def _uniform_opponents_br(game, i):
    return best_responses(game, Profile.uniform(game), i)


def _maxmax_actions(game, i):
    import numpy as np
    pay = np.moveaxis(game.payoffs[i], i, 0)
    tops = [max(pay[k].flat) for k in range(game.shape[i])]
    best = max(tops)
    return tuple(a for a, t in zip(game.actions[i], tops) if t == best)


def _welfare(game):
    return {a: sum(game.payoff(a)) for a in game.profiles()}


def _pure_blowdown_contains(game, profile):
    base, phi = collapse_clones(game)
    q = pushforward(profile, phi)
    return q.is_pure() and is_nash(base, q)


def _pure_blowdown_witnesses(game):
    base, phi = collapse_clones(game)
    out = []
    for a in pure_nash_equilibria(base):
        q = Profile.pure(base, a)
        out += [preimage_profile(q, phi, uniform_split(phi)), preimage_profile(q, phi, first_split(phi))]
    return _dedupe(out)


def _supported_in(profile, sets):
    return all(set(profile.support(i)) <= set(s) for i, s in enumerate(sets))


def _trembling_contains(game, profile):
    if game.n != 2:
        return None
    return is_nash(game, profile) and is_admissible(game, profile)


def builtin_concepts(eps=Fraction(1, 20)):
    """The named concepts, keyed by name."""
    eps = to_fraction(eps)
    concepts = [
        SolutionConcept("nash", is_nash, nash_witnesses, lambda g: g.n == 2),
        SolutionConcept("nash-eps", lambda g, p: is_eps_nash(g, p, eps), nash_witnesses,
                        lambda g: g.n == 2),
        SolutionConcept(
            "uniform-best-response",
            lambda g, p: _supported_in(p, [_uniform_opponents_br(g, i) for i in range(g.n)]),
            lambda g: _product_profiles(g, [_uniform_opponents_br(g, i) for i in range(g.n)]),
            lambda g: True),
        SolutionConcept(
            "maxmax",
            lambda g, p: _supported_in(p, [_maxmax_actions(g, i) for i in range(g.n)]),
            lambda g: _product_profiles(g, [_maxmax_actions(g, i) for i in range(g.n)]),
            lambda g: True),
        SolutionConcept(
            "welfare-max",
            lambda g, p: sum(expected_payoffs(g, p)) == max(_welfare(g).values()),
            lambda g: [Profile.pure(g, a) for a, w in _welfare(g).items()
                       if w == max(_welfare(g).values())],
            lambda g: True),
        SolutionConcept("pure-blowdown", _pure_blowdown_contains, _pure_blowdown_witnesses,
                        lambda g: True),
        SolutionConcept(
            "rationalizable",
            lambda g, p: _supported_in(p, rationalizable_actions(g)),
            lambda g: _product_profiles(g, rationalizable_actions(g)),
            lambda g: True),
        SolutionConcept(
            "admissible",
            lambda g, p: is_admissible(g, p),
            lambda g: _admissible_witnesses(g),
            lambda g: True),
        SolutionConcept(
            "trembling-hand-2p", _trembling_contains,
            lambda g: [p for p in nash_witnesses(g) if _trembling_contains(g, p)] if g.n == 2 else []),
        SolutionConcept(
            "quasi-strict", is_quasi_strict,
            lambda g: [p for p in nash_witnesses(g) if is_quasi_strict(g, p)]),
    ]
    return {c.name: c for c in concepts}


def _admissible_witnesses(game):
    sets = [tuple(a for a in game.actions[i] if supports_common_full_belief(game, i, [a]))
            for i in range(game.n)]
    out = [Profile.pure(game, a) for a in islice(product(*sets), PURE_LIMIT)]
    uni = Profile.uniform(game, sets)
    if is_admissible(game, uni):
        out.append(uni)
    return out


def concept(name, eps=Fraction(1, 20)) -> SolutionConcept:
    try:
        return builtin_concepts(eps)[name]
    except KeyError:
        raise GameError(f"unknown solution concept {name!r}") from None


# --- membership and search -------------------------------------------------------

def member(f: SolutionConcept, game: Game, profile: Profile):
    if profile.actions != game.actions:
        return False
    return f.contains(game, profile)


def local_probes(profile: Profile, delta):
    """Profiles reached by moving ``t`` mass between two actions of one player,
    for ``t`` in ``delta/8, delta/4, 3 delta/8`` (all strictly within ``delta``)."""
    delta = to_fraction(delta)
    out = []
    for i in range(profile.n):
        probs = profile.probs[i]
        for a, b in product(range(len(probs)), repeat=2):
            if a == b:
                continue
            for t in (delta / 8, delta / 4, 3 * delta / 8):
                if probs[a] >= t:
                    vec = list(probs)
                    vec[a] -= t
                    vec[b] += t
                    out.append(profile.replace(i, vec))
    return out


def _near_member(f, game, profile, delta, extra=()):
    """Search for a member of ``f(game)`` strictly within ``delta`` of ``profile``.

    Returns True when found, None when the search was inconclusive.
    """
    cands = [profile] + list(extra) + f.witnesses(game) + local_probes(profile, delta)
    for q in cands:
        if q.actions != profile.actions or profile_distance(profile, q) >= delta:
            continue
        if member(f, game, q):
            return True
    return None


def _finish(axiom, delta, examined, undecided, detail=""):
    status = INCONCLUSIVE if undecided else PASS
    return AxiomVerdict(axiom, status, to_fraction(delta), detail, None, examined)


# --- checkers ------------------------------------------------------------------------

def check_consistency(f: SolutionConcept, games, weights, delta=0, probes=()) -> AxiomVerdict:
    """Profiles returned in every game must be returned (or, for ``delta > 0``,
    approximated within ``delta``) in the weighted combination."""
    delta = to_fraction(delta)
    games = list(games)
    weights = [to_fraction(w) for w in weights]
    comb = convex_combine(games, weights)
    cands = _dedupe([p for g in games for p in f.witnesses(g)] + list(probes))
    undecided, examined = False, 0
    for p in cands:
        ins = [member(f, g, p) for g in games]
        if any(r is None for r in ins):
            undecided = True
            continue
        if not all(ins):
            continue
        examined += 1
        if delta == 0:
            r = member(f, comb, p)
            if r is None:
                undecided = True
            elif not r:
                return AxiomVerdict("consistency", FAIL, delta,
                                    "profile returned in every game but not in the combination",
                                    {"games": games, "weights": weights, "profile": p}, examined)
        elif not _near_member(f, comb, p, delta):
            undecided = True
    return _finish("consistency", delta, examined, undecided)


def check_consequentialism(f: SolutionConcept, base: Game, phi: BlowUpMap, splits=None,
                           delta=0, probes=()) -> AxiomVerdict:
    """Membership must be invariant under cloning.

    Lifts every base witness along each split and pushes every blown-up
    witness down; for ``delta > 0`` the lifts and pushes only need a member
    within ``delta``, and each blown-up witness is also re-split exactly.
    """
    delta = to_fraction(delta)
    blown = blow_up(base, phi)
    splits = [uniform_split(phi), first_split(phi)] if splits is None else list(splits)
    undecided, examined = False, 0

    def fail(detail, **w):
        return AxiomVerdict("consequentialism", FAIL, delta, detail,
                            {"game": base, "map": phi, **w}, examined)

    base_cands = _dedupe(f.witnesses(base) + [p for p in probes if p.actions == base.actions])
    for p in base_cands:
        r = member(f, base, p)
        if r is None:
            undecided = True
        if not r:
            continue
        examined += 1
        for k, split in enumerate(splits):
            q = preimage_profile(p, phi, split)
            rq = member(f, blown, q)
            if rq is None:
                undecided = True
            elif not rq:
                if delta == 0:
                    return fail("a lift of a returned profile is not returned",
                                direction="lift", profile=p, split=split)
                if not _near_member(f, blown, q, delta):
                    undecided = True

    blown_cands = _dedupe(f.witnesses(blown) + [p for p in probes if p.actions == blown.actions])
    for p in blown_cands:
        r = member(f, blown, p)
        if r is None:
            undecided = True
        if not r:
            continue
        examined += 1
        down = pushforward(p, phi)
        rd = member(f, base, down)
        if rd is None:
            undecided = True
        elif not rd:
            if delta == 0:
                return fail("a returned profile pushes forward to one that is not returned",
                            direction="push", profile=p)
            lifts = [preimage_profile(q, phi, s) for q in f.witnesses(base) for s in splits]
            if not any(profile_distance(p, q) < delta for q in lifts):
                undecided = True
        if delta > 0:
            for split in splits:
                q = preimage_profile(down, phi, split)
                rq = member(f, blown, q)
                if rq is None:
                    undecided = True
                elif not rq:
                    return fail("re-splitting a returned profile among clones leaves the set",
                                direction="split", profile=p, split=split)
    return _finish("consequentialism", delta, examined, undecided)


def check_rationality(f: SolutionConcept, game: Game, probes=()) -> AxiomVerdict:
    """Every dominant action must get positive probability."""
    dominant = [dominant_action(game, i) for i in range(game.n)]
    undecided, examined = False, 0
    for p in _dedupe(f.witnesses(game) + list(probes)):
        r = member(f, game, p)
        if r is None:
            undecided = True
        if not r:
            continue
        examined += 1
        for i, d in enumerate(dominant):
            if d is not None and p.prob(i, d) == 0:
                return AxiomVerdict("rationality", FAIL, ZERO,
                                    f"player {i + 1} never plays its dominant action {d!r}",
                                    {"game": game, "profile": p, "player": i, "action": d}, examined)
    return _finish("rationality", 0, examined, undecided)


def outside_mass(profile: Profile, i, allowed) -> Fraction:
    return sum((q for a, q in zip(profile.actions[i], profile.probs[i]) if a not in allowed), ZERO)


def check_delta_rationality(f: SolutionConcept, game: Game, delta, probes=()) -> AxiomVerdict:
    """Each strategy must be within l1 distance 1/2 of the strategies avoiding
    ``delta``-dominated actions, i.e. put less than 1/4 on such actions."""
    delta = to_fraction(delta)
    allowed = [set(undominated_actions(game, i, delta)) for i in range(game.n)]
    undecided, examined = False, 0
    for p in _dedupe(f.witnesses(game) + list(probes)):
        r = member(f, game, p)
        if r is None:
            undecided = True
        if not r:
            continue
        examined += 1
        for i in range(game.n):
            if 2 * outside_mass(p, i, allowed[i]) >= Fraction(1, 2):
                return AxiomVerdict("rationality", FAIL, delta,
                                    f"player {i + 1} puts at least 1/4 on delta-dominated actions",
                                    {"game": game, "profile": p, "player": i}, examined)
    return _finish("rationality", delta, examined, undecided)


def check_equivariance(f: SolutionConcept, game: Game, pi: GamePermutation, probes=()) -> AxiomVerdict:
    """Renaming actions must rename the returned profiles accordingly."""
    moved = permute_game(game, pi)
    inv = pi.inverse()
    undecided, examined = False, 0
    pairs = [(game, moved, pi, p) for p in _dedupe(f.witnesses(game) + list(probes))]
    pairs += [(moved, game, inv, p) for p in f.witnesses(moved)]
    for src, dst, perm, p in pairs:
        r = member(f, src, p)
        if r is None:
            undecided = True
        if not r:
            continue
        examined += 1
        q = permute_profile(p, perm)
        rq = member(f, dst, q)
        if rq is None:
            undecided = True
        elif not rq:
            return AxiomVerdict("equivariance", FAIL, ZERO,
                                "a returned profile is not returned after renaming",
                                {"game": src, "permutation": perm, "profile": p}, examined)
    return _finish("equivariance", 0, examined, undecided)


def check_totality(f: SolutionConcept, game: Game) -> AxiomVerdict:
    wit = [p for p in f.witnesses(game) if member(f, game, p)]
    if wit:
        return AxiomVerdict("totality", PASS, ZERO, "", None, len(wit))
    if f.exhaustive(game):
        return AxiomVerdict("totality", FAIL, ZERO, "witness set is empty: no profile is returned",
                            {"game": game}, 0)
    return AxiomVerdict("totality", INCONCLUSIVE, ZERO, "no witness found", None, 0)


def replay(f: SolutionConcept, verdict: AxiomVerdict) -> bool:
    """Re-verify a failing verdict from its witness alone."""
    w = verdict.witness
    if verdict.status != FAIL or not w:
        return False
    ax = verdict.axiom
    if ax == "consistency":
        comb = convex_combine(w["games"], w["weights"])
        return all(member(f, g, w["profile"]) for g in w["games"]) and member(f, comb, w["profile"]) is False
    if ax == "consequentialism":
        base, phi, p = w["game"], w["map"], w["profile"]
        blown = blow_up(base, phi)
        if w["direction"] == "lift":
            return bool(member(f, base, p)) and member(f, blown, preimage_profile(p, phi, w["split"])) is False
        if w["direction"] == "push":
            return bool(member(f, blown, p)) and member(f, base, pushforward(p, phi)) is False
        q = preimage_profile(pushforward(p, phi), phi, w["split"])
        return bool(member(f, blown, p)) and member(f, blown, q) is False
    if ax == "rationality":
        g, p, i = w["game"], w["profile"], w["player"]
        if not member(f, g, p):
            return False
        if verdict.delta == 0:
            return dominant_action(g, i) == w["action"] and p.prob(i, w["action"]) == 0
        allowed = set(undominated_actions(g, i, verdict.delta))
        return 2 * outside_mass(p, i, allowed) >= Fraction(1, 2)
    if ax == "equivariance":
        g, pi, p = w["game"], w["permutation"], w["profile"]
        return bool(member(f, g, p)) and member(f, permute_game(g, pi), permute_profile(p, pi)) is False
    if ax == "totality":
        g = w["game"]
        return f.exhaustive(g) and not any(member(f, g, p) for p in f.witnesses(g))
    raise GameError(f"unknown axiom {ax!r}")


# --- suites --------------------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    """One axiom instance.  ``games`` holds the games to combine (consistency),
    the base game (consequentialism) or the single game."""
    axiom: str
    games: tuple
    weights: tuple = ()
    blowup: Optional[BlowUpMap] = None
    permutation: Optional[GamePermutation] = None
    probes: tuple = ()


def run_check(f: SolutionConcept, check: Check, delta=0) -> AxiomVerdict:
    delta = to_fraction(delta)
    if check.axiom == "consistency":
        return check_consistency(f, check.games, check.weights, delta, check.probes)
    if check.axiom == "consequentialism":
        return check_consequentialism(f, check.games[0], check.blowup, None, delta, check.probes)
    if check.axiom == "rationality":
        if delta > 0:
            return check_delta_rationality(f, check.games[0], delta, check.probes)
        return check_rationality(f, check.games[0], check.probes)
    if check.axiom == "equivariance":
        return check_equivariance(f, check.games[0], check.permutation, check.probes)
    if check.axiom == "totality":
        return check_totality(f, check.games[0])
    raise GameError(f"unknown axiom {check.axiom!r}")


@dataclass
class SuiteRow:
    entry: str
    axiom: str
    verdict: AxiomVerdict
    expected: Optional[str]

    @property
    def matched(self) -> bool:
        return self.expected is None or self.verdict.status == self.expected


@dataclass
class SuiteReport:
    concept: str
    delta: Fraction
    rows: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.matched for r in self.rows)

    @property
    def mismatches(self):
        return [r for r in self.rows if not r.matched]


def run_axiom_suite(f: SolutionConcept, entries, delta=0) -> SuiteReport:
    """Run every check of every corpus entry and compare with its expected verdicts."""
    delta = to_fraction(delta)
    report = SuiteReport(f.name, delta)
    for entry in entries:
        for check in entry.checks:
            verdict = run_check(f, check, delta)
            report.rows.append(SuiteRow(entry.name, check.axiom, verdict,
                                        entry.expected(f.name, check.axiom, delta)))
    return report


def search_consequentialism_counterexample(f: SolutionConcept, values=range(5)):
    """Smallest 2x2 game (row payoffs drawn from ``values``, column payoffs 0)
    where cloning one action breaks consequentialism for ``f``.

    Games are tried in lexicographic order of the row payoffs, and for each the
    single-clone maps in player/action order.  Returns ``(game, map, verdict)``
    or ``None``.
    """
    for row in product(values, repeat=4):
        payoffs = np.array([np.array(row, dtype=object).reshape(2, 2),
                            np.zeros((2, 2), dtype=object)])
        game = Game([(1, 2)] * 2, payoffs)
        for i in range(2):
            for a in game.actions[i]:
                counts = [None] * 2
                counts[i] = {a: 2}
                phi = BlowUpMap.from_counts(game.actions, counts)
                verdict = check_consequentialism(f, game, phi)
                if verdict.failed:
                    return game, phi, verdict
    return None
