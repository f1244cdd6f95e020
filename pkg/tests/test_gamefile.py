import json
from fractions import Fraction as F

import pytest

from nashax.axioms import check_consequentialism, check_consistency, check_rationality, check_totality, concept, replay
from nashax.core import Game
from nashax.gamefile import (GameFileError, game_to_doc, parse_game, read_game, serialize_game,
                             verdict_from_doc, verdict_to_doc)
from nashax.morphism import BlowUpMap

GOOD = """{
  "name": "demo",
  "players": 2,
  "actions": [["b", "a"], [1, 2]],
  "payoffs": [
    [[1, "1/2"], [0, "-3/4"]],
    [[2, 2], [5, "7/3"]]
  ]
}"""


def test_parse_sorts_actions():
    g = parse_game(GOOD)
    assert g.actions == (("a", "b"), (1, 2))
    assert g.payoff(("b", 1)) == (1, F(1, 2))
    assert g.payoff(("a", 2)) == (5, F(7, 3))


def test_round_trip_is_identity(corpus, tmp_path):
    for name in corpus.game_names():
        g = corpus.game(name)
        text = serialize_game(g, name=name)
        assert parse_game(text) == g
        assert serialize_game(parse_game(text), name=name) == text
        path = tmp_path / f"{name}.json"
        path.write_text(text)
        assert read_game(path) == g


def test_tuple_labels_survive():
    g = Game([[(1, "x"), (0, "y")], [1]], [[[1], [2]], [[3], [4]]])
    assert parse_game(serialize_game(g)) == g


@pytest.mark.parametrize("edit, message", [
    (lambda d: d["payoffs"][0][0].__setitem__(1, 0.5), "line 1 column .*decimal number 0.5"),
    (lambda d: d["payoffs"][1].pop(), "must have 2 entries"),
    (lambda d: d["payoffs"][0][1].append(3), "payoff vector at profile \\('b', 2\\) must have 2 entries"),
    (lambda d: d.__setitem__("players", 3), "players = 3"),
    (lambda d: d["payoffs"][0][0].__setitem__(0, "1/0"), "zero denominator"),
    (lambda d: d["actions"][0].__setitem__(0, None), "invalid action label"),
    (lambda d: d.pop("payoffs"), "missing field 'payoffs'"),
    (lambda d: d["payoffs"][0][0].__setitem__(0, True), "expected a rational"),
])
def test_malformed_files_are_rejected_with_positions(edit, message):
    doc = json.loads(GOOD)
    edit(doc)
    with pytest.raises(GameFileError, match=message):
        parse_game(json.dumps(doc))


def test_errors_point_at_the_offending_line():
    text = GOOD.replace('"-3/4"', '"3//4"')
    with pytest.raises(GameFileError, match="line 6 column"):
        parse_game(text)
    with pytest.raises(GameFileError, match="line 1 column 2"):
        parse_game("{,}")


def test_duplicate_labels_are_rejected():
    doc = json.loads(GOOD)
    doc["actions"][0] = ["a", "a"]
    with pytest.raises(Exception, match="duplicate"):
        parse_game(json.dumps(doc))


def test_game_to_doc_uses_integers_where_possible():
    doc = game_to_doc(Game.bimatrix([[1, "1/2"]], [[0, 2]]))
    assert doc["payoffs"] == [[[1, 0], ["1/2", 2]]]


def _round_trip(verdict, name):
    doc = json.loads(json.dumps(verdict_to_doc(verdict, name)))
    got_name, got = verdict_from_doc(doc)
    assert got_name == name
    assert got.axiom == verdict.axiom and got.status == verdict.status
    return got


def test_verdict_round_trip_replays(corpus, prisoners_dilemma, matching_pennies):
    f = concept("rationalizable")
    g1, g2 = corpus.game("rationalizability-first"), corpus.game("rationalizability-second")
    assert replay(f, _round_trip(check_consistency(f, [g1, g2], [F(1, 2)] * 2), f.name))

    f = concept("welfare-max")
    assert replay(f, _round_trip(check_rationality(f, prisoners_dilemma), f.name))

    f = concept("pure-blowdown")
    assert replay(f, _round_trip(check_totality(f, matching_pennies), f.name))

    f = concept("quasi-strict")
    g = corpus.game("constant-2x2")
    v = check_consequentialism(f, g, BlowUpMap.from_counts(g.actions, [{1: 2}, None]))
    assert replay(f, _round_trip(v, f.name))

    f = concept("uniform-best-response")
    g = corpus.game("uniform-best-response-base")
    v = check_consequentialism(f, g, BlowUpMap.from_counts(g.actions, [None, {1: 2}]))
    assert v.witness["direction"] in ("push", "split", "lift")
    assert replay(f, _round_trip(v, f.name))
