"""Regenerate the bundled corpus under src/nashax/data/corpus/.

Run from the repository root:  python3 tools/build_corpus.py
Output is deterministic; re-running on an unchanged tree is a no-op.
"""
import json
from fractions import Fraction as F
from pathlib import Path

import numpy as np

from nashax.axioms import concept, search_consequentialism_counterexample
from nashax.core import Game, Profile
from nashax.decompose import AlmostCyclicSpec, CyclicSpec, make_almost_cyclic_game, make_cyclic_game
from nashax.gamefile import encode_label, profile_to_doc, serialize_game
from nashax.morphism import LinCombSpec, linear_combination_transform

ROOT = Path(__file__).resolve().parent.parent / "src" / "nashax" / "data" / "corpus"
PRINTED = "published example"
CONSTRUCTED = "constructed"

games = {}
meta = {}


def add(name, game, source, note=None):
    games[name] = game
    meta[name] = {"name": name, "source": source}
    if note:
        meta[name]["note"] = note


def zeros(rows, cols):
    return [[0] * cols for _ in range(rows)]


# --- printed games ------------------------------------------------------------

add("rationalizability-first", Game.bimatrix([[0, 4], [2, 0]], zeros(2, 2)),
    f"{PRINTED}: rationalizability and admissibility, first game of the pair")
add("rationalizability-second", Game.bimatrix([[4, 0], [0, 2]], zeros(2, 2)),
    f"{PRINTED}: rationalizability and admissibility, second game of the pair")
add("rationalizability-average", Game.bimatrix([[2, 2], [1, 1]], zeros(2, 2)),
    f"{PRINTED}: rationalizability and admissibility, uniform average of the pair")

add("trembling-first", Game.bimatrix([[0, 4, 2], [2, 0, 2]], zeros(2, 3)),
    f"{PRINTED}: trembling-hand perfection, first game of the pair")
add("trembling-second", Game.bimatrix([[4, 0, 2], [0, 2, 2]], zeros(2, 3)),
    f"{PRINTED}: trembling-hand perfection, second game of the pair")
add("trembling-average", Game.bimatrix([[2, 2, 2], [1, 1, 2]], zeros(2, 3)),
    f"{PRINTED}: trembling-hand perfection, uniform average of the pair")

add("strong-first", Game.bimatrix([[4, 0], [0, 1]], [[0, 0], [0, 1]]),
    f"{PRINTED}: strong and coalition-proof equilibrium, first game of the pair")
add("strong-second", Game.bimatrix([[0, 0], [0, 1]], [[4, 0], [0, 1]]),
    f"{PRINTED}: strong and coalition-proof equilibrium, second game of the pair")
add("strong-average", Game.bimatrix([[2, 0], [0, 1]], [[2, 0], [0, 1]]),
    f"{PRINTED}: strong and coalition-proof equilibrium, uniform average of the pair")

add("symmetric-3x3", Game.bimatrix([[3, 2, 2], [2, 3, 0], [2, 0, 3]],
                                   [[3, 2, 2], [2, 3, 0], [2, 0, 3]]),
    f"{PRINTED}: symmetric two-player game that blow-ups leave the symmetric class")

shift3, ident3 = (1, 2, 0), (0, 1, 2)
cyclic = make_cyclic_game(CyclicSpec(3, (shift3, ident3), (1, 1)), [(1, 2, 3)] * 2)
add("cyclic-3x3", cyclic, f"{PRINTED}: two-player cyclic game with three actions each")
almost = make_almost_cyclic_game(
    AlmostCyclicSpec(3, (shift3, ident3, ident3), (1, 1, 1), 0,
                     frozenset({(0, 1, 0), (1, 2, 1), (2, 0, 2)})), [(1, 2, 3)] * 3)
printed_first_player = [[[1, 0, 0], [0, 0, 0], [1, 0, 0]],
                        [[0, 1, 0], [0, 1, 0], [0, 0, 0]],
                        [[0, 0, 0], [0, 0, 1], [0, 0, 1]]]
assert almost.payoffs[0].tolist() == printed_first_player
add("almost-cyclic-3p", almost,
    f"{PRINTED}: three-player almost-cyclic game; only the first player's payoffs are printed, "
    "the others follow the cyclic rule")

lincomb_base = Game.bimatrix([[1, 1, 1], [0, 2, 0], [1, 1, 0], [1, 0, 1]],
                             [[0, 1, 0], [1, 0, 1], [1, 0, 0], [0, 0, 1]])
add("lincomb-base", lincomb_base, f"{PRINTED}: game before the linear-combination transform")
before = Profile(lincomb_base, [[0, F(1, 3), F(1, 3), F(1, 3)], [F(1, 3)] * 3])
spec = LinCombSpec((4, 1), ({1: 0, 2: 1, 3: 1, 4: 2}, {1: 1, 2: 0, 3: 0}), (F(1, 6), F(1, 3)))
transformed, _ = linear_combination_transform(lincomb_base, before, spec)
assert transformed.payoff((4, 3)) == (F(1, 2), F(3, 4))
add("lincomb-result", transformed,
    f"{PRINTED}: game after the linear-combination transform",
    "computed by the transform; the printed first-player payoff at (4, 3) reads 1/4, "
    "the transform gives 1/2")

add("scaled-threat", Game([(1,), (1, 2)], np.array([[[0, 0]], [[0, -100]]], dtype=object)),
    f"{PRINTED}: one-action row player against a column action costing c, here c = 100")

slice_support = {(1, 1, 1), (1, 2, 2), (2, 1, 2), (2, 2, 1)}
add("slice-stochastic-3p",
    Game.from_function([(1, 2)] * 3, lambda a: (1 if a in slice_support else 0, 0, 0)),
    f"{PRINTED}: deterministic slice-stochastic tensor for the first player that is not "
    "a permutation tensor; the other players earn 0")

add("constant-2x2", Game.constant([(1, 2), (1, 2)], 0),
    f"{PRINTED}: game with constant payoffs, two actions each")
add("constant-1x1", Game.constant([(1,), (1,)], 0),
    f"{PRINTED}: game with constant payoffs, blow-down of constant-2x2")

# --- constructed games --------------------------------------------------------

add("matching-pennies", Game.bimatrix([[1, -1], [-1, 1]], [[-1, 1], [1, -1]], [("H", "T")] * 2),
    CONSTRUCTED)
add("prisoners-dilemma", Game.bimatrix([[3, 0], [4, 1]], [[3, 4], [0, 1]], [("C", "D")] * 2),
    CONSTRUCTED)
add("battle-of-sexes", Game.bimatrix([[2, 0], [0, 1]], [[1, 0], [0, 2]]), CONSTRUCTED)
add("coordination", Game.bimatrix([[1, 0], [0, 1]], [[1, 0], [0, 1]]), CONSTRUCTED)
add("rock-paper-scissors",
    Game.bimatrix([[0, -1, 1], [1, 0, -1], [-1, 1, 0]], [[0, 1, -1], [-1, 0, 1], [1, -1, 0]],
                  [("P", "R", "S")] * 2),
    CONSTRUCTED)
add("maxmax-first", Game.bimatrix([[3, 0], [2, 2]], zeros(2, 2)),
    f"{CONSTRUCTED}: first action has the highest payoff in both games of the pair, "
    "but not in their average")
add("maxmax-second", Game.bimatrix([[0, 3], [2, 2]], zeros(2, 2)), f"{CONSTRUCTED}: see maxmax-first")
found = search_consequentialism_counterexample(concept("uniform-best-response"))
ubr_game, ubr_map, _ = found
add("uniform-best-response-base", ubr_game,
    f"{CONSTRUCTED}: first 2x2 game in lexicographic search where cloning one action "
    "flips a best response against uniform opponents")

# --- instances ----------------------------------------------------------------

instances = {}


def copies_of(game, counts):
    return [[[encode_label(a), c] for a, c in sorted(player.items())] for player in counts]


def reversal(game):
    return [[[encode_label(a), encode_label(b)] for a, b in zip(acts, reversed(acts))]
            for acts in game.actions]


def affine_partner(name):
    g = games[name]
    return {"of": name, "alpha": [2 + i for i in range(g.n)], "beta": [1 - i for i in range(g.n)]}


def probe(name, profile):
    return {"game": name, "profile": profile_to_doc(profile)}


def standard_checks(name, probes=()):
    g = games[name]
    first_clone = [{acts[0]: 2} for acts in g.actions]
    return [
        {"axiom": "rationality", "games": [name], "probes": list(probes)},
        {"axiom": "totality", "games": [name]},
        {"axiom": "equivariance", "games": [name], "permutation": reversal(g), "probes": list(probes)},
        {"axiom": "consequentialism", "games": [name], "copies": copies_of(g, first_clone)},
        {"axiom": "consistency", "games": [name, affine_partner(name)], "weights": ["1/2", "1/2"]},
    ]


def add_instance(name, source, checks, expect=None):
    instances[name] = {"name": name, "source": source, "checks": checks, "expect": expect or {}}


def designated(concept_name, fails, others=("rationality", "totality", "equivariance",
                                             "consequentialism", "consistency")):
    table = {ax: "pass" for ax in others}
    table[fails] = "fail"
    return {concept_name: table}


for name in sorted(games):
    add_instance(f"game-{name}", meta[name]["source"], standard_checks(name))

bold_trembling = Profile.pure(games["trembling-first"], (2, 3))
rationalizable_corner = Profile.pure(games["rationalizability-first"], (2, 1))
add_instance(
    "consistency-rationalizability",
    f"{PRINTED}: rationalizable and admissible profiles violate consistency",
    [{"axiom": "consistency", "games": ["rationalizability-first", "rationalizability-second"],
      "weights": ["1/2", "1/2"], "probes": [probe("rationalizability-first", rationalizable_corner)]}]
    + standard_checks("rationalizability-first")[:4],
    {**designated("rationalizable", "consistency"), **designated("admissible", "consistency")})
add_instance(
    "consistency-trembling-hand",
    f"{PRINTED}: trembling-hand perfect equilibrium violates consistency",
    [{"axiom": "consistency", "games": ["trembling-first", "trembling-second"],
      "weights": ["1/2", "1/2"], "probes": [probe("trembling-first", bold_trembling)]}]
    + standard_checks("trembling-first", [probe("trembling-first", bold_trembling)])[:4],
    designated("trembling-hand-2p", "consistency"))
add_instance(
    "consistency-strong",
    f"{PRINTED}: pair whose average loses the bottom-right strong equilibrium; "
    "strong equilibrium itself is not implemented",
    [{"axiom": "consistency", "games": ["strong-first", "strong-second"], "weights": ["1/2", "1/2"]}])
add_instance(
    "consistency-maxmax",
    f"{CONSTRUCTED}: maxmax violates consistency",
    [{"axiom": "consistency", "games": ["maxmax-first", "maxmax-second"], "weights": ["1/2", "1/2"]}]
    + standard_checks("maxmax-first")[:4],
    designated("maxmax", "consistency"))
add_instance(
    "consequentialism-constant",
    f"{PRINTED}: quasi-strict equilibrium violates consequentialism on a constant game",
    [{"axiom": "consequentialism", "games": ["constant-1x1"], "copies": [[[1, 2]], [[1, 2]]]},
     {"axiom": "rationality", "games": ["constant-2x2"]},
     {"axiom": "totality", "games": ["constant-2x2"]},
     {"axiom": "equivariance", "games": ["constant-2x2"], "permutation": reversal(games["constant-2x2"])},
     {"axiom": "consistency", "games": ["constant-2x2", affine_partner("constant-2x2")],
      "weights": ["1/2", "1/2"]}],
    designated("quasi-strict", "consequentialism"))
ubr_counts = [{a: len(ubr_map.fiber(i, a)) for a in ubr_game.actions[i] if len(ubr_map.fiber(i, a)) > 1}
              for i in range(ubr_game.n)]
add_instance(
    "consequentialism-uniform-best-response",
    f"{CONSTRUCTED}: best responses to uniform opponents violate consequentialism",
    [{"axiom": "consequentialism", "games": ["uniform-best-response-base"],
      "copies": copies_of(ubr_game, ubr_counts)}]
    + [c for c in standard_checks("uniform-best-response-base") if c["axiom"] != "consequentialism"],
    designated("uniform-best-response", "consequentialism"))
add_instance(
    "rationality-prisoners-dilemma",
    f"{CONSTRUCTED}: welfare maximization violates rationality",
    standard_checks("prisoners-dilemma"),
    designated("welfare-max", "rationality"))
add_instance(
    "totality-matching-pennies",
    f"{PRINTED}: pure equilibria of blow-downs violate totality",
    standard_checks("matching-pennies"),
    designated("pure-blowdown", "totality"))

threat = games["scaled-threat"]
near_threat = Profile(threat, [[1], [F(99, 100), F(1, 100)]])
add_instance(
    "scaled-threat-probe",
    f"{PRINTED}: profile (1, (1 - delta, delta)) near the equilibrium of the scaled-threat game",
    standard_checks("scaled-threat", [probe("scaled-threat", near_threat)])[:3])


def write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def main():
    for sub in ("games", "instances"):
        for old in (ROOT / sub).glob("*.json"):
            old.unlink()
    for name, game in sorted(games.items()):
        write(ROOT / "games" / f"{name}.json", serialize_game(game, **meta[name]))
    for name, doc in sorted(instances.items()):
        write(ROOT / "instances" / f"{name}.json", json.dumps(doc, indent=1) + "\n")
    print(f"{len(games)} games, {len(instances)} instances written to {ROOT}")


if __name__ == "__main__":
    main()
