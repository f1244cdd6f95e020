"""End-to-end reproduction scenarios, each with a time budget.

Every scenario returns a :class:`ScenarioResult`; ``run_all`` runs them in a
fixed order.  Random instances come from fixed seeds, so reports are
deterministic apart from the optional timings.
"""
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._exact import ZERO
from .axioms import FAIL, PASS, concept, replay, run_axiom_suite, search_consequentialism_counterexample
from .core import (Game, PayoffTensor, Profile, affine_transform, convex_combine,
                   hadamard_contort, profile_distance)
from .corpus import Corpus, normalized_entry
from .decompose import (AlmostCyclicSpec, CyclicSpec, bvn_decompose, cyclic_tuples,
                        decompose_permutation_game, decompose_slice_stochastic_game,
                        deterministic_tensor, equilibrium_clone_split, is_slice_stochastic,
                        make_almost_cyclic_game, make_cyclic_game, make_permutation_game,
                        pad_for_clone_split, pad_for_quasi_strict, permutation_sets,
                        quasi_strict_split, random_deterministic_assignment)
from .equilibrium import (dominates, grid_falsify, is_quasi_strict, regret,
                          solve_nash_2p)
from .morphism import (LinCombSpec, are_clones, lincomb_proof_pipeline, linear_combination_transform,
                       pushforward)

# The transformed game as printed next to the linear-combination example.  The
# first player's payoff at (4, 3) is printed as 1/4; the transform gives 1/2.
PRINTED_LINCOMB_RESULT = [
    [(1, 0), (1, 1), (1, 0)],
    [(0, 1), (2, 0), (0, 1)],
    [(1, 1), (1, 0), (0, 0)],
    [("3/4", "1/2"), ("3/4", 0), ("1/4", "3/4")],
]
LINCOMB_FLAGGED_CELL = ((4, 3), 0)
LINCOMB_SPEC = LinCombSpec((4, 1), ({1: 0, 2: 1, 3: 1, 4: 2}, {1: 1, 2: 0, 3: 0}),
                           (Fraction(1, 6), Fraction(1, 3)))


@dataclass
class ScenarioResult:
    key: str
    title: str
    passed: bool
    limit: float
    seconds: float = 0.0
    lines: list = field(default_factory=list)

    @property
    def within_limit(self):
        return self.seconds < self.limit

    @property
    def ok(self):
        return self.passed and self.within_limit


class _Log:
    def __init__(self):
        self.lines = []
        self.passed = True

    def check(self, cond, text):
        self.lines.append(("ok    " if cond else "FAIL  ") + text)
        self.passed &= bool(cond)
        return cond

    def note(self, text):
        self.lines.append("      " + text)


def _q(x):
    return Fraction(x)


# --- 1, 2: linear-combination transform ----------------------------------------------

def scenario_lincomb(log, corpus):
    base = corpus.game("lincomb-base")
    before = Profile(base, [[0, Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)], [Fraction(1, 3)] * 3])
    game, profile = linear_combination_transform(base, before, LINCOMB_SPEC)
    mismatched = []
    for r, row in enumerate(PRINTED_LINCOMB_RESULT, start=1):
        for c, cell in enumerate(row, start=1):
            got = game.payoff((r, c))
            for j, printed in enumerate(cell):
                if got[j] != _q(printed):
                    mismatched.append(((r, c), j, _q(printed), got[j]))
    log.check([m[:2] for m in mismatched] == [LINCOMB_FLAGGED_CELL],
              "transformed game matches the printed matrix except at one flagged cell")
    for cell, j, printed, got in mismatched:
        log.note(f"cell {cell}, player {j + 1}: printed {printed}, transform gives {got} "
                 "(the value the target row must take as the mixture of its source rows)")
    expected = [[0, Fraction(1, 6), Fraction(1, 6), Fraction(2, 3)], [Fraction(1, 3)] * 3]
    log.check(profile.probs == Profile(game, expected).probs,
              "new profile is ((0, 1/6, 1/6, 2/3), (1/3, 1/3, 1/3))")
    log.check(game == corpus.game("lincomb-result"), "corpus file lincomb-result holds the transform")


def random_lincomb_instance(rng):
    """Two-player game with at most 3 actions each, a profile and a transform
    spec whose weight vectors have total at most 4."""
    sizes = [int(rng.integers(1, 4)) for _ in range(2)]
    labels = [tuple(range(1, m + 1)) for m in sizes]
    values = rng.integers(-3, 4, size=[2] + sizes).astype(object)
    game = Game(labels, values)
    targets, weights, kappas, dists = [], [], [], []
    for acts in labels:
        fresh = rng.random() < 0.3
        target = None if fresh else acts[int(rng.integers(len(acts)))]
        total = int(rng.integers(1, 5))
        k = dict.fromkeys(acts, 0)
        if target is not None:
            k[target] = 1
            total -= 1
        for _ in range(total):
            k[acts[int(rng.integers(len(acts)))]] += 1
        norm = sum(k.values())
        kappa = Fraction(1, norm + int(rng.integers(0, 4)))
        rest = [a for a in acts if a != target]
        if not rest:
            kappa = Fraction(1, norm)
        residual = 1 - kappa * norm
        raw = {a: int(rng.integers(1, 4)) for a in rest}
        dist = {a: kappa * k[a] for a in acts}
        for a in rest:
            dist[a] += residual * Fraction(raw[a], sum(raw.values()))
        targets.append(target)
        weights.append(k)
        kappas.append(kappa)
        dists.append(dist)
    return game, Profile.from_dicts(labels, dists), LinCombSpec(tuple(targets), tuple(weights),
                                                                  tuple(kappas))


def scenario_lincomb_pipeline(log, corpus, count=50, seed=2024):
    rng = np.random.default_rng(seed)
    agree = 0
    for _ in range(count):
        game, profile, spec = random_lincomb_instance(rng)
        direct = linear_combination_transform(game, profile, spec)
        literal = lincomb_proof_pipeline(game, profile, spec)
        agree += direct[0] == literal[0] and direct[1] == literal[1]
    log.check(agree == count, f"direct construction equals clone/symmetrize/blow-down on {agree}/{count}")


# --- 3: slice-stochastic Birkhoff-von Neumann ----------------------------------------

def random_slice_stochastic(rng):
    n, m = int(rng.choice([2, 3])), int(rng.choice([2, 3]))
    parts = int(rng.integers(1, 7))
    raw = [int(rng.integers(1, 10)) for _ in range(parts)]
    weights = [Fraction(r, sum(raw)) for r in raw]
    i = int(rng.integers(n))
    values = np.full((m,) * n, ZERO, dtype=object)
    for w in weights:
        values = values + w * deterministic_tensor(m, n, i, random_deterministic_assignment(m, n, rng)).values
    return PayoffTensor([range(m)] * n, values), i


def scenario_bvn(log, corpus, count=100, seed=7):
    rng = np.random.default_rng(seed)
    good = 0
    most = (0, 0)
    for _ in range(count):
        tensor, i = random_slice_stochastic(rng)
        terms = bvn_decompose(tensor, i)
        support = sum(1 for v in tensor.values.flat if v != 0)
        total = sum((t.weight * t.tensor.values for t in terms), np.full(tensor.values.shape, ZERO, dtype=object))
        ok = (len(terms) <= support and all(t.weight > 0 for t in terms)
              and sum(t.weight for t in terms) == 1
              and all(is_slice_stochastic(t.tensor, i).deterministic for t in terms)
              and np.all(total == tensor.values))
        good += bool(ok)
        most = max(most, (len(terms), support))
    log.check(good == count, f"{good}/{count} tensors decompose exactly into deterministic terms")
    log.note(f"most terms used: {most[0]}, on a tensor with {most[1]} nonzero entries")


# --- 4, 5: (almost) cyclic games -------------------------------------------------------

def scenario_cyclic(log, corpus):
    for m in (2, 3, 4):
        tuples = cyclic_tuples(m, 2)
        good = 0
        for perms in tuples:
            game = make_cyclic_game(CyclicSpec(m, perms, (1, 1)))
            res = solve_nash_2p(game)
            good += res.unique and res.profiles()[0] == Profile.uniform(game)
        log.check(good == len(tuples), f"m = {m}: uniform is the unique equilibrium in {good}/{len(tuples)} games")


def almost_cyclic_specs(m, n=3):
    """Every almost-cyclic spec with unit rewards on ``m`` actions and ``n`` players."""
    out = []
    psets = permutation_sets(m, n)
    for perms in cyclic_tuples(m, n):
        for i in range(n):
            for ps in psets:
                spec = AlmostCyclicSpec(m, perms, (1,) * n, i, ps.profiles)
                if not spec.violations():
                    out.append(spec)
    return out


def scenario_almost_cyclic(log, corpus, resolution=8, eps=Fraction(1, 10000)):
    games = [("almost-cyclic-3p", corpus.game("almost-cyclic-3p"))]
    specs = almost_cyclic_specs(2)
    games += [(f"m=2 #{k}", make_almost_cyclic_game(s)) for k, s in enumerate(specs)]
    log.note(f"{len(specs)} almost-cyclic games with m = 2, n = 3")
    zero, far, alone = 0, 0, 0
    for name, g in games:
        uniform = Profile.uniform(g)
        zero += regret(g, uniform).max_regret == 0
        survivors = grid_falsify(g, resolution, eps)
        far += sum(1 for p in survivors if profile_distance(p, uniform) > Fraction(1, 4))
        # a grid that contains uniform: it must be the only exact equilibrium there
        alone += grid_falsify(g, 6, 0) == [uniform]
    log.check(zero == len(games), f"uniform has regret 0 in {zero}/{len(games)} games")
    log.check(far == 0, f"grid at resolution {resolution}: {far} profiles with regret <= {eps} "
                        "farther than 1/4 from uniform")
    log.check(alone == len(games), f"grid at resolution 6: uniform is the only exact equilibrium "
                                   f"in {alone}/{len(games)} games")


# --- 6, 7: decompositions --------------------------------------------------------------

def scenario_permutation_games(log, corpus):
    for n, m in ((2, 3), (3, 2)):
        psets = permutation_sets(m, n)
        exact, clean, certified, comps = 0, 0, 0, 0
        for ps in psets:
            for player in range(n):
                g = make_permutation_game(ps, player)
                dec = decompose_permutation_game(g, player)
                exact += dec.reconstruct() == g
                clean += not dec.violations()
                if n == 2:
                    for k in range(len(dec.components)):
                        res = solve_nash_2p(dec.component_game(k))
                        certified += res.unique and res.profiles()[0] == Profile.uniform(g.actions)
                        comps += 1
        total = len(psets) * n
        log.check(exact == total and clean == total,
                  f"n = {n}, m = {m}: {len(psets)} permutation sets x {n} players, "
                  f"{exact}/{total} exact, {clean}/{total} with valid components")
        if n == 2:
            log.check(certified == comps, f"n = 2: {certified}/{comps} cyclic components have a unique uniform equilibrium")


def scenario_slice_stochastic(log, corpus):
    game = corpus.game("slice-stochastic-3p")
    dec = decompose_slice_stochastic_game(game, 0)
    log.check(dec.reconstruct() == game, "game equals blow_down(scale * symmetrized + offset)")
    blown = dec.blowup.domain
    uniform = Profile.uniform(blown)
    log.check(pushforward(uniform, dec.blowup) == Profile.uniform(game),
              "uniform on the blow-up pushes forward to uniform")
    log.note(f"{len(dec.decomposition.components)} components on {len(blown[0])} actions per player; "
             f"scale {[str(s) for s in dec.scale]}, offset {[str(b) for b in dec.offset]}")


# --- 8: full-support reductions ---------------------------------------------------------

def swap_players(game: Game) -> Game:
    return Game(game.actions[::-1], np.stack([game.payoffs[1].T, game.payoffs[0].T]))


def quasi_strict_instances(count=20, seed=11):
    """Random 3x3 games with an isolated quasi-strict equilibrium leaving some action unplayed."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        g = Game([(1, 2, 3)] * 2, rng.integers(-3, 4, size=(2, 3, 3)).astype(object))
        for comp in solve_nash_2p(g).components:
            p = comp.profile
            if comp.dimension == 0 and is_quasi_strict(g, p) and not p.is_full_support():
                out.append((g, p))
                break
    return out


def clone_split_instances(count=20, seed=13):
    """2x2 games with an interior equilibrium plus an unplayed best response that is no clone."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        g = Game([(1, 2)] * 2, rng.integers(-3, 4, size=(2, 2, 2)).astype(object))
        res = solve_nash_2p(g)
        if not res.unique or not res.profiles()[0].is_full_support():
            continue
        p = res.profiles()[0]
        y = p.probs[1]
        lift = int(rng.integers(-2, 3))
        row = [(g.payoffs[0][0, c] + g.payoffs[0][1, c]) / 2 + lift * (y[1] if c == 0 else -y[0])
               for c in range(2)]
        col = [int(rng.integers(-3, 4)) for _ in range(2)]
        values = np.concatenate([g.payoffs, np.array([[row], [col]], dtype=object)], axis=1)
        big = Game([(1, 2, 3), (1, 2)], values)
        q = Profile(big, [list(p.probs[0]) + [ZERO], list(y)])
        if any(are_clones(big, 0, 3, a) for a in (1, 2)):
            continue
        if len(out) % 2:
            big, q = swap_players(big), Profile(swap_players(big), [q.probs[1], q.probs[0]])
            out.append((big, q, 1))
        else:
            out.append((big, q, 0))
    return out


def scenario_full_support(log, corpus):
    good = 0
    qs = quasi_strict_instances()
    for g, p in qs:
        G, P, _ = pad_for_quasi_strict(g, p)
        g1, g2, _ = quasi_strict_split(G, P)
        ok = convex_combine([g1, g2], [Fraction(1, 2)] * 2) == G
        ok &= regret(g1, P).max_regret == 0 and regret(g2, P).max_regret == 0
        for half in (g1, g2):
            for i in range(G.n):
                played = P.support(i)
                for c in G.actions[i]:
                    if c not in played:
                        ok &= any(dominates(half, i, a, c) for a in played)
        good += bool(ok)
    log.check(good == len(qs), f"quasi-strict split: {good}/{len(qs)} instances meet every postcondition")
    good = 0
    cs = clone_split_instances()
    for g, p, i in cs:
        G, P, _ = pad_for_clone_split(g, p, i)
        g1, g2 = equilibrium_clone_split(G, P, i)
        ok = convex_combine([g1, g2], [Fraction(1, 2)] * 2) == G
        ok &= regret(g1, P).max_regret == 0 and regret(g2, P).max_regret == 0
        unplayed_br = [c for c in G.actions[i] if c not in P.support(i)]
        for half in (g1, g2):
            ok &= all(any(are_clones(half, i, a, c) for a in P.support(i)) for c in unplayed_br)
        ok &= g1 != G
        good += bool(ok)
    log.check(good == len(cs), f"equilibrium clone split: {good}/{len(cs)} instances meet every postcondition")


# --- 9, 10: axioms ----------------------------------------------------------------------

COUNTEREXAMPLES = [
    ("rationalizable", "consistency-rationalizability", "consistency"),
    ("admissible", "consistency-rationalizability", "consistency"),
    ("trembling-hand-2p", "consistency-trembling-hand", "consistency"),
    ("quasi-strict", "consequentialism-constant", "consequentialism"),
    ("welfare-max", "rationality-prisoners-dilemma", "rationality"),
    ("uniform-best-response", "consequentialism-uniform-best-response", "consequentialism"),
    ("pure-blowdown", "totality-matching-pennies", "totality"),
    ("maxmax", "consistency-maxmax", "consistency"),
]


def scenario_counterexamples(log, corpus):
    for name, entry_name, axiom in COUNTEREXAMPLES:
        f = concept(name)
        entry = corpus.entries(entry_name)[0]
        report = run_axiom_suite(f, [entry])
        target = [r for r in report.rows if r.axiom == axiom]
        failed = bool(target) and all(r.verdict.status == FAIL for r in target)
        replayed = failed and all(replay(f, r.verdict) for r in target)
        log.check(failed and replayed and report.ok,
                  f"{name} fails {axiom} on {entry_name} with a replayable witness; "
                  f"other axioms as expected")
        for r in target:
            log.note(r.verdict.detail)
    found = search_consequentialism_counterexample(concept("uniform-best-response"))
    log.check(found is not None and found[0] == corpus.game("uniform-best-response-base"),
              "the search reproduces the bundled uniform-best-response instance")


def _reweighted_key(key, player, weights, actions):
    supports, xs, ys = key
    verts = [xs, ys]

    def move(v):
        raw = [q / weights[a] for a, q in zip(actions[player], v)]
        s = sum(raw)
        return tuple(x / s for x in raw)

    verts[player] = frozenset(move(v) for v in verts[player])
    return (supports, verts[0], verts[1])


def oracle_equivalence_games(count=200, seed=17):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        sizes = [int(rng.integers(1, 4)) for _ in range(2)]
        g = Game([range(1, m + 1) for m in sizes], rng.integers(-2, 3, size=[2] + sizes).astype(object))
        alpha = [Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 4))) for _ in range(2)]
        beta = [Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 3))) for _ in range(2)]
        i = int(rng.integers(2))
        weights = {a: Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 4))) for a in g.actions[i]}
        out.append((g, alpha, beta, i, weights))
    return out


def scenario_positive_suite(log, corpus):
    entries = corpus.entries()
    report = run_axiom_suite(concept("nash"), entries)
    games = len(corpus.game_names())
    log.check(report.ok and all(r.verdict.status == PASS for r in report.rows),
              f"nash passes all {len(report.rows)} exact checks over {len(entries)} entries ({games} games)")
    normalized = [normalized_entry(e) for e in entries]
    report = run_axiom_suite(concept("nash-eps", Fraction(1, 20)), normalized, Fraction(1, 100))
    log.check(report.ok and all(r.verdict.status == PASS for r in report.rows),
              f"nash-eps(1/20) passes all {len(report.rows)} checks at delta = 1/100 on the normalized corpus")
    affine, contorted = 0, 0
    instances = oracle_equivalence_games()
    for g, alpha, beta, i, weights in instances:
        base = solve_nash_2p(g).keys()
        affine += solve_nash_2p(affine_transform(g, alpha, beta)).keys() == base
        moved = frozenset(_reweighted_key(k, i, weights, g.actions) for k in base)
        contorted += solve_nash_2p(hadamard_contort(g, i, weights)).keys() == moved
    log.check(affine == len(instances),
              f"affine transforms keep the oracle equilibrium set: {affine}/{len(instances)}")
    log.check(contorted == len(instances),
              f"contortion reweights the oracle equilibrium set: {contorted}/{len(instances)}")


SCENARIOS = [
    ("lincomb", "linear-combination transform on the printed 4x3 game", 1, scenario_lincomb),
    ("lincomb-pipeline", "direct transform equals clone/symmetrize/blow-down", 30, scenario_lincomb_pipeline),
    ("bvn", "Birkhoff-von Neumann for slice-stochastic tensors", 20, scenario_bvn),
    ("cyclic", "cyclic two-player games have a unique uniform equilibrium", 60, scenario_cyclic),
    ("almost-cyclic", "three-player almost-cyclic games: uniform is the only near-equilibrium", 300,
     scenario_almost_cyclic),
    ("permutation-games", "permutation games decompose into (almost) cyclic games", 120,
     scenario_permutation_games),
    ("slice-stochastic", "slice-stochastic game round trip through a blow-up", 60, scenario_slice_stochastic),
    ("full-support", "quasi-strict and clone splits", 30, scenario_full_support),
    ("counterexamples", "axiom counterexamples for other solution concepts", 10, scenario_counterexamples),
    ("positive-suite", "Nash passes the corpus; oracle invariances", 180, scenario_positive_suite),
]
SCENARIO_KEYS = [s[0] for s in SCENARIOS]


def run_scenario(key, corpus=None) -> ScenarioResult:
    corpus = corpus or Corpus()
    for k, title, limit, fn in SCENARIOS:
        if k == key:
            log = _Log()
            start = time.perf_counter()
            try:
                fn(log, corpus)
            except Exception as exc:  # reported as a failed scenario
                log.check(False, f"{type(exc).__name__}: {exc}")
            seconds = time.perf_counter() - start
            return ScenarioResult(k, title, log.passed, limit, seconds, log.lines)
    raise KeyError(key)


def run_all(keys=None, corpus=None):
    corpus = corpus or Corpus()
    return [run_scenario(k, corpus) for k in (keys or SCENARIO_KEYS)]
