import json
import shutil
import subprocess
import sys

import pytest

from nashax.cli import INAPPLICABLE, MISMATCH, OK, main
from nashax.core import Game
from nashax.corpus import corpus_root
from nashax.decompose import PermutationSet, make_permutation_game
from nashax.gamefile import serialize_game


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


@pytest.fixture
def game_file(tmp_path):
    def write(game, name="g"):
        path = tmp_path / f"{name}.json"
        path.write_text(serialize_game(game))
        return str(path)
    return write


def test_solve_oracle(capsys, game_file):
    path = game_file(Game.bimatrix([[2, 0], [0, 1]], [[1, 0], [0, 2]]))
    code, out, _ = run(capsys, "solve", path, "--oracle")
    assert code == OK
    assert "multiple" in out and "2/3" in out
    code, out, _ = run(capsys, "solve", path, "--oracle", "--json")
    doc = json.loads(out)
    assert doc["verdict"] == "multiple" and len(doc["components"]) == 3


def test_solve_oracle_needs_two_players(capsys, game_file):
    path = game_file(Game.constant([(1, 2)] * 3))
    code, _, err = run(capsys, "solve", path, "--oracle")
    assert code == INAPPLICABLE and "--grid" in err


def test_solve_grid(capsys, game_file):
    path = game_file(Game.bimatrix([[1, -1], [-1, 1]], [[-1, 1], [1, -1]]))
    code, out, _ = run(capsys, "solve", path, "--grid", "4", "--eps", "0")
    assert code == OK and "1/2" in out


def test_bad_game_file_is_inapplicable(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"actions": [[1]], "payoffs": [[0.5]]}')
    code, _, err = run(capsys, "solve", str(path), "--oracle")
    assert code == INAPPLICABLE and "line 1" in err and "0.5" in err


def test_decompose_commands(capsys, game_file):
    ps = PermutationSet(3, 2, frozenset({(0, 1), (1, 2), (2, 0)}))
    path = game_file(make_permutation_game(ps, 0))
    code, out, _ = run(capsys, "decompose", path, "--permutation-game")
    assert code == OK and "verified" in out
    code, out, _ = run(capsys, "decompose", path, "--bvn", "1")
    assert code == OK
    code, _, err = run(capsys, "decompose", path, "--bvn", "2")
    assert code == INAPPLICABLE and "sums to" in err
    slice_game = str(corpus_root() / "games" / "slice-stochastic-3p.json")
    code, out, _ = run(capsys, "decompose", slice_game, "--slice-stochastic", "1", "--json")
    assert code == OK and json.loads(out)["verified"] is True


def test_check_over_the_corpus(capsys):
    code, out, _ = run(capsys, "check", "nash")
    assert code == OK
    assert "0 mismatch(es)" in out.splitlines()[-1]


def test_check_expected_failure_with_witness_and_replay(capsys, tmp_path):
    wdir = tmp_path / "w"
    code, out, _ = run(capsys, "check", "rationalizable", "consistency-rationalizability",
                       "--witness-dir", str(wdir))
    assert code == OK and "fail (expected fail)" in out
    files = sorted(wdir.glob("*.json"))
    assert len(files) == 1
    code, out, _ = run(capsys, "check", "rationalizable", "--replay", str(files[0]))
    assert code == OK and "reproduced" in out
    code, _, err = run(capsys, "check", "nash", "--replay", str(files[0]))
    assert code == INAPPLICABLE and "recorded for" in err


def test_check_normalized_delta(capsys):
    code, out, _ = run(capsys, "check", "nash-eps", "game-prisoners-dilemma", "consistency-rationalizability",
                       "--normalized", "--delta", "1/100", "--json")
    doc = json.loads(out)
    assert code == OK and doc["ok"] and doc["delta"] == "1/100"
    assert all(r["status"] == "pass" for r in doc["rows"])


def test_check_reports_mismatch(capsys, tmp_path):
    root = tmp_path / "c"
    shutil.copytree(corpus_root(), root)
    path = root / "instances" / "rationality-prisoners-dilemma.json"
    doc = json.loads(path.read_text())
    doc["expect"]["welfare-max"]["rationality"] = "pass"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "check", "welfare-max", "rationality-prisoners-dilemma", "--corpus", str(root))
    assert code == MISMATCH and "MISMATCH" in out


def test_check_corrupted_corpus(capsys, tmp_path):
    root = tmp_path / "c"
    shutil.copytree(corpus_root(), root)
    path = root / "games" / "prisoners-dilemma.json"
    path.write_text(path.read_text().replace("[3, 3]", "[0.5, 3]"))
    code, _, err = run(capsys, "check", "nash", "--corpus", str(root))
    assert code == INAPPLICABLE and "prisoners-dilemma.json" in err and "0.5" in err


def test_reproduce_subset_is_deterministic(capsys):
    first = run(capsys, "reproduce", "--only", "lincomb", "bvn")
    second = run(capsys, "reproduce", "--only", "lincomb", "bvn")
    assert first == second
    code, out, _ = first
    assert code == OK and "PASS  lincomb" in out and "printed 1/4" in out
    assert out.splitlines()[-1] == "2/2 scenarios pass"


def test_reproduce_json_with_timings(capsys):
    code, out, _ = run(capsys, "reproduce", "--only", "lincomb", "--timings", "--json")
    doc = json.loads(out)
    assert code == OK and doc["ok"]
    assert doc["scenarios"][0]["within_limit"] and doc["scenarios"][0]["limit"] == 1


def test_module_entry_point_and_unknown_concept():
    proc = subprocess.run([sys.executable, "-m", "nashax", "check", "bogus"],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and "invalid choice" in proc.stderr
    proc = subprocess.run([sys.executable, "-m", "nashax", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "reproduce" in proc.stdout
