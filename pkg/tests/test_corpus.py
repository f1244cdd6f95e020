import json
import shutil
from fractions import Fraction as F

import pytest

from nashax.axioms import FAIL, PASS, concept, run_axiom_suite
from nashax.corpus import ENV_VAR, Corpus, corpus_root, normalized_entry
from nashax.gamefile import GameFileError


def test_corpus_size_and_sources(corpus):
    names = corpus.game_names()
    assert len(names) >= 20
    for name in names:
        meta = corpus.game_meta(name)
        assert meta["name"] == name
        assert meta["source"].startswith(("published example", "constructed"))


def test_printed_games_have_expected_shapes(corpus):
    assert corpus.game("lincomb-base").shape == (4, 3)
    assert corpus.game("almost-cyclic-3p").shape == (3, 3, 3)
    assert corpus.game("slice-stochastic-3p").shape == (2, 2, 2)
    # the average game of each published pair really is the midpoint
    for stem in ("rationalizability", "trembling", "strong"):
        first, second, avg = (corpus.game(f"{stem}-{k}") for k in ("first", "second", "average"))
        assert first * F(1, 2) + second * F(1, 2) == avg


def test_entries_resolve(corpus):
    entries = corpus.entries()
    names = {e.name for e in entries}
    assert {"consistency-rationalizability", "consistency-trembling-hand", "consequentialism-constant",
            "rationality-prisoners-dilemma", "totality-matching-pennies"} <= names
    assert all(e.checks for e in entries)
    assert corpus.entries("totality-matching-pennies")[0].name == "totality-matching-pennies"
    with pytest.raises(GameFileError):
        corpus.entries("no-such-entry")


def test_expected_verdict_defaults(corpus):
    entry = corpus.entries("consistency-rationalizability")[0]
    assert entry.expected("rationalizable", "consistency") == FAIL
    assert entry.expected("nash", "consistency") == PASS
    assert entry.expected("nash-eps", "totality", F(1, 100)) == PASS
    assert entry.expected("maxmax", "totality") is None


@pytest.mark.parametrize("name", ["rationalizable", "admissible", "welfare-max", "pure-blowdown",
                                  "quasi-strict", "uniform-best-response", "maxmax"])
def test_every_concept_matches_its_expectations(name, corpus):
    report = run_axiom_suite(concept(name), corpus.entries())
    assert report.ok, [(r.entry, r.axiom, r.verdict.status) for r in report.mismatches]


def test_normalized_entries_keep_checks(corpus):
    entry = corpus.entries("scaled-threat-probe")[0]
    norm = normalized_entry(entry)
    assert len(norm.checks) == len(entry.checks)
    for c in norm.checks:
        for g in c.games:
            vals = set(g.payoffs.flat)
            assert min(vals) >= 0 and max(vals) <= 1


def test_environment_override(tmp_path, monkeypatch):
    shutil.copytree(corpus_root(), tmp_path / "c")
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "c"))
    assert Corpus().root == tmp_path / "c"


def test_corrupted_game_names_the_file(tmp_path):
    root = tmp_path / "c"
    shutil.copytree(corpus_root(), root)
    path = root / "games" / "matching-pennies.json"
    doc = json.loads(path.read_text())
    doc["payoffs"][0][0] = [1]
    path.write_text(json.dumps(doc))
    with pytest.raises(GameFileError, match="matching-pennies.json"):
        Corpus(root).entries("totality-matching-pennies")
