"""Acceptance criteria, one test each.

Every test runs a reproduction scenario, checks its outcome and its time
budget, and records a one-line verdict that is printed at the end of the
session (see ``conftest.py``).  Run ``python3 tests/test_acceptance.py`` to
print the table without pytest.
"""
import pytest

from nashax.corpus import Corpus
from nashax.reproduce import run_scenario

# (criterion, scenario key, budget in seconds)
CRITERIA = [
    (1, "lincomb", 1),
    (2, "lincomb-pipeline", 30),
    (3, "bvn", 20),
    (4, "cyclic", 60),
    (5, "almost-cyclic", 300),
    (6, "permutation-games", 120),
    (7, "slice-stochastic", 60),
    (8, "full-support", 30),
    (9, "counterexamples", 10),
    (10, "positive-suite", 180),
]

# criterion -> fragments that must appear in the scenario report
REQUIRED_LINES = {
    1: ["cell (4, 3), player 1: printed 1/4, transform gives 1/2",
        "new profile is ((0, 1/6, 1/6, 2/3), (1/3, 1/3, 1/3))"],
    2: ["50/50"],
    3: ["100/100"],
    4: ["m = 2: uniform is the unique equilibrium in 2/2", "m = 3: uniform is the unique equilibrium in 12/12",
        "m = 4: uniform is the unique equilibrium in 144/144"],
    5: ["12 almost-cyclic games with m = 2, n = 3", "regret 0 in 13/13",
        "resolution 8: 0 profiles with regret <= 1/10000 farther than 1/4"],
    6: ["n = 2, m = 3: 6 permutation sets x 2 players, 12/12 exact, 12/12",
        "n = 3, m = 2: 4 permutation sets x 3 players, 12/12 exact, 12/12"],
    7: ["game equals blow_down(scale * symmetrized + offset)", "uniform on the blow-up pushes forward to uniform"],
    8: ["quasi-strict split: 20/20", "equilibrium clone split: 20/20"],
    9: ["rationalizable fails consistency", "trembling-hand-2p fails consistency",
        "quasi-strict fails consequentialism on consequentialism-constant",
        "welfare-max fails rationality on rationality-prisoners-dilemma",
        "uniform-best-response fails consequentialism",
        "pure-blowdown fails totality on totality-matching-pennies", "witness set is empty"],
    10: ["nash passes all", "nash-eps(1/20) passes all", "200/200", "contortion reweights the oracle equilibrium set: 200/200"],
}

VERDICTS = {}


@pytest.fixture(scope="module")
def corpus():
    return Corpus()


def evaluate(number, key, budget, corpus):
    result = run_scenario(key, corpus)
    text = "\n".join(result.lines)
    missing = [frag for frag in REQUIRED_LINES[number] if frag not in text]
    ok = result.passed and result.seconds < budget and not missing
    VERDICTS[number] = (f"{'PASS' if ok else 'FAIL'}  criterion {number:2d}  {key:18s} "
                        f"{result.seconds:7.2f}s / {budget}s")
    return result, missing, ok


@pytest.mark.parametrize("number, key, budget", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_criterion(number, key, budget, corpus):
    result, missing, ok = evaluate(number, key, budget, corpus)
    print(VERDICTS[number])
    assert result.passed, "\n".join(result.lines)
    assert result.seconds < budget, f"took {result.seconds:.1f}s, budget {budget}s"
    assert not missing, f"report lacks {missing}:\n" + "\n".join(result.lines)
    assert ok


if __name__ == "__main__":
    shared = Corpus()
    for number, key, budget in CRITERIA:
        evaluate(number, key, budget, shared)
        print(VERDICTS[number])
