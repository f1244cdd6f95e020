"""Command-line interface.

Exit codes: 0 success, 1 internal error, 2 inapplicable input or failed
precondition, 3 verdict mismatch.
"""
import argparse
import json
import sys
from pathlib import Path

from ._exact import format_fraction, to_fraction
from .axioms import PASS, builtin_concepts, concept, replay, run_axiom_suite
from .core import GameError, PreconditionError, Profile
from .corpus import Corpus, normalized_entry
from .decompose import (AlmostCyclicSpec, bvn_decompose, decompose_permutation_game,
                        decompose_slice_stochastic_game)
from .equilibrium import grid_falsify, regret, solve_nash_2p
from .gamefile import (encode_label, encode_rational, map_to_doc, profile_to_doc, read_game,
                       read_doc, verdict_from_doc, verdict_to_doc)
from .reproduce import SCENARIO_KEYS, run_all

OK, INTERNAL, INAPPLICABLE, MISMATCH = 0, 1, 2, 3


class _Out:
    """Collects the human-readable report or the structured document."""

    def __init__(self, as_json):
        self.as_json = as_json
        self.doc = {}
        self.lines = []

    def line(self, text=""):
        self.lines.append(text)

    def emit(self):
        text = json.dumps(self.doc, indent=1) if self.as_json else "\n".join(self.lines)
        try:
            sys.stdout.write(text + "\n")
            sys.stdout.flush()
        except BrokenPipeError:
            sys.stderr.close()


def _fmt_profile(p: Profile):
    parts = []
    for i in range(p.n):
        parts.append("{" + ", ".join(f"{a}: {format_fraction(q)}" for a, q in p.dist(i).items()) + "}")
    return "(" + ", ".join(parts) + ")"


def _player(game, text):
    i = int(text)
    if not 1 <= i <= game.n:
        raise PreconditionError(f"player must be between 1 and {game.n}, got {i}")
    return i - 1


# --- solve -------------------------------------------------------------------------

def cmd_solve(args, out):
    game = read_game(args.file)
    out.doc["file"] = str(args.file)
    if args.oracle:
        if game.n != 2:
            raise PreconditionError(f"the exact oracle needs two players, this game has {game.n}; "
                                    "use --grid N --eps Q instead")
        res = solve_nash_2p(game)
        out.doc["verdict"] = res.verdict
        out.doc["components"] = []
        out.line(f"verdict: {res.verdict} ({len(res.components)} component(s))")
        for c in res.components:
            reg = regret(game, c.profile)
            out.doc["components"].append({
                "supports": [[encode_label(a) for a in s] for s in c.supports],
                "dimension": c.dimension,
                "profile": profile_to_doc(c.profile),
                "regrets": [encode_rational(r) for r in reg.regrets],
                "vertices": [[[encode_rational(q) for q in v] for v in side] for side in c.vertices],
            })
            out.line(f"  supports {c.supports}  dimension {c.dimension}")
            out.line(f"    profile {_fmt_profile(c.profile)}  regrets "
                     + ", ".join(format_fraction(r) for r in reg.regrets))
        return OK
    eps = to_fraction(args.eps)
    survivors = grid_falsify(game, args.grid, eps)
    out.doc.update({"resolution": args.grid, "eps": encode_rational(eps), "survivors": []})
    out.line(f"grid resolution {args.grid}, eps {format_fraction(eps)}: {len(survivors)} profile(s) "
             "with regret <= eps")
    for p in survivors:
        reg = regret(game, p)
        out.doc["survivors"].append({"profile": profile_to_doc(p),
                                     "regrets": [encode_rational(r) for r in reg.regrets]})
        out.line(f"  {_fmt_profile(p)}  max regret {format_fraction(reg.max_regret)}")
    return OK


# --- decompose --------------------------------------------------------------------

def _component_doc(c):
    doc = {"perms": [list(p) for p in c.perms], "alpha": [encode_rational(a) for a in c.alpha]}
    if isinstance(c, AlmostCyclicSpec):
        doc["kind"] = "almost-cyclic"
        doc["player"] = c.player + 1
        doc["exceptional"] = [list(a) for a in sorted(c.exceptional)]
    else:
        doc["kind"] = "cyclic"
    return doc


def _decomposition_doc(dec, out, oracle):
    out.doc["scale"] = [encode_rational(s) for s in dec.scale]
    out.doc["offset"] = [encode_rational(b) for b in dec.offset]
    out.doc["components"] = []
    out.line(f"scale {[format_fraction(to_fraction(s)) for s in dec.scale]}  "
             f"offset {[format_fraction(to_fraction(b)) for b in dec.offset]}")
    out.line(f"{len(dec.components)} component(s):")
    certified = True
    for k, (w, c) in enumerate(zip(dec.weights, dec.components)):
        doc = {"weight": encode_rational(w), **_component_doc(c)}
        text = f"  weight {format_fraction(w)}  {doc['kind']}  perms {doc['perms']}"
        if "exceptional" in doc:
            text += f"  player {doc['player']} loses {doc['exceptional']}"
        if oracle:
            res = solve_nash_2p(dec.component_game(k))
            unique = res.unique and res.profiles()[0] == Profile.uniform(dec.component_game(k))
            certified &= unique
            doc["oracle"] = res.verdict
            text += f"  oracle: {'unique uniform' if unique else res.verdict}"
        out.doc["components"].append(doc)
        out.line(text)
    bad = dec.violations()
    if bad:
        out.line("component invariants violated: " + "; ".join(bad))
    return certified and not bad


def cmd_decompose(args, out):
    game = read_game(args.file)
    out.doc["file"] = str(args.file)
    if args.bvn is not None:
        i = _player(game, args.bvn)
        tensor = game.tensor(i)
        terms = bvn_decompose(tensor, i)
        out.doc["route"] = "bvn"
        out.doc["terms"] = [{"weight": encode_rational(t.weight),
                             "support": [[encode_label(a) for a in cell]
                                         for cell in _support(t.tensor)]} for t in terms]
        out.line(f"{len(terms)} deterministic term(s) for player {i + 1}:")
        for t in terms:
            out.line(f"  {format_fraction(t.weight)}  support {_support(t.tensor)}")
        total = sum(t.weight * t.tensor.values for t in terms)
        verified = bool((total == tensor.values).all())
    elif args.permutation_game:
        dec = decompose_permutation_game(game)
        out.doc["route"] = "permutation-game"
        verified = _decomposition_doc(dec, out, oracle=game.n == 2)
        verified &= dec.reconstruct() == game
    else:
        i = _player(game, args.slice_stochastic)
        dec = decompose_slice_stochastic_game(game, i)
        out.doc["route"] = "slice-stochastic"
        out.doc["map"] = map_to_doc(dec.blowup)
        out.line(f"blow-up to {[len(d) for d in dec.blowup.domain]} actions; "
                 f"factor applied to the permutation-game decomposition")
        out.doc["scale"] = [encode_rational(s) for s in dec.scale]
        out.doc["offset"] = [encode_rational(b) for b in dec.offset]
        out.line(f"scale {[format_fraction(s) for s in dec.scale]}  "
                 f"offset {[format_fraction(b) for b in dec.offset]}")
        inner = _Out(False)
        verified = _decomposition_doc(dec.decomposition, inner, oracle=False)
        out.doc["decomposition"] = inner.doc
        out.lines += ["  " + ln for ln in inner.lines]
        verified &= dec.reconstruct() == game
    out.doc["verified"] = bool(verified)
    out.line(f"reconstruction {'verified exactly' if verified else 'FAILED'}")
    return OK if verified else MISMATCH


def _support(tensor):
    return [tuple(tensor.actions[j][k] for j, k in enumerate(idx))
            for idx, v in _nonzero(tensor.values)]


def _nonzero(values):
    import numpy as np
    return [(idx, v) for idx, v in np.ndenumerate(values) if v != 0]


# --- check ------------------------------------------------------------------------

def _write_witness(directory, index, doc):
    directory.mkdir(parents=True, exist_ok=True)
    name = f"{index:03d}-{doc['concept']}-{doc['axiom']}.json"
    path = directory / name
    path.write_text(json.dumps(doc, indent=1) + "\n")
    return path


def cmd_check(args, out):
    f = concept(args.concept, args.eps)
    delta = to_fraction(args.delta)
    if delta < 0:
        raise PreconditionError("delta must be nonnegative")
    if args.replay:
        doc, _ = read_doc(args.replay)
        name, verdict = verdict_from_doc(doc)
        if name != f.name:
            raise PreconditionError(f"witness was recorded for {name!r}, not {f.name!r}")
        ok = replay(f, verdict)
        out.doc = {"replay": str(args.replay), "reproduced": bool(ok)}
        out.line(f"{args.replay}: {verdict.axiom} violation "
                 f"{'reproduced' if ok else 'NOT reproduced'}")
        return OK if ok else MISMATCH

    corpus = Corpus(args.corpus) if args.corpus else Corpus()
    targets = args.targets or [None]
    entries = [e for t in targets for e in corpus.entries(t)]
    if args.normalized:
        entries = [normalized_entry(e) for e in entries]
    report = run_axiom_suite(f, entries, delta)
    out.doc = {"concept": f.name, "delta": encode_rational(delta), "rows": [], "ok": report.ok}
    witness_dir = Path(args.witness_dir) if args.witness_dir else None
    width = max((len(r.entry) for r in report.rows), default=10)
    for k, row in enumerate(report.rows):
        doc = verdict_to_doc(row.verdict, f.name)
        rec = {"entry": row.entry, "axiom": row.axiom, "status": row.verdict.status,
               "expected": row.expected, "matched": row.matched}
        if row.verdict.failed:
            rec["witness"] = doc
            if witness_dir:
                rec["witness_file"] = str(_write_witness(witness_dir, k, doc))
        out.doc["rows"].append(rec)
        mark = "ok " if row.matched else "MISMATCH"
        exp = f" (expected {row.expected})" if row.expected else ""
        out.line(f"{mark:8s} {row.entry:{width}s}  {row.axiom:16s} {row.verdict.status}{exp}"
                 + (f"  {row.verdict.detail}" if row.verdict.detail else ""))
    passed = sum(1 for r in report.rows if r.verdict.status == PASS)
    out.line(f"{f.name} at delta {format_fraction(delta)}: {len(report.rows)} checks, {passed} pass, "
             f"{len(report.mismatches)} mismatch(es)")
    return OK if report.ok else MISMATCH


# --- reproduce --------------------------------------------------------------------

def cmd_reproduce(args, out):
    corpus = Corpus(args.corpus) if args.corpus else Corpus()
    results = run_all(args.only, corpus)
    out.doc = {"scenarios": []}
    for r in results:
        rec = {"key": r.key, "title": r.title, "ok": r.passed, "lines": r.lines}
        status = "PASS" if r.passed else "FAIL"
        head = f"{status}  {r.key:18s} {r.title}"
        if args.timings:
            rec["seconds"] = round(r.seconds, 2)
            rec["limit"] = r.limit
            rec["within_limit"] = r.within_limit
            head += f"  [{r.seconds:.1f}s / {r.limit}s{'' if r.within_limit else ' OVER'}]"
        out.doc["scenarios"].append(rec)
        out.line(head)
        for ln in r.lines:
            out.line("      " + ln)
    good = all(r.passed and (r.within_limit or not args.timings) for r in results)
    out.doc["ok"] = good
    out.line(f"{sum(r.passed for r in results)}/{len(results)} scenarios pass")
    return OK if good else MISMATCH


# --- entry point ------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="nashax", description="Exact tools for normal-form games.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="find equilibria of a game file")
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--oracle", action="store_true", help="exact support enumeration (two players)")
    mode.add_argument("--grid", type=int, metavar="N", help="scan the grid of resolution N")
    p.add_argument("--eps", default="0", metavar="Q", help="regret threshold for --grid")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("decompose", help="decompose a game or payoff tensor")
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--bvn", metavar="I", help="slice-stochastic tensor of player I (1-based)")
    mode.add_argument("--permutation-game", action="store_true")
    mode.add_argument("--slice-stochastic", metavar="I", help="game paying only player I (1-based)")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("check", help="run axiom checks over corpus entries")
    p.add_argument("concept", choices=sorted(builtin_concepts()))
    p.add_argument("targets", nargs="*", help="corpus directories, instance files or entry names")
    p.add_argument("--delta", default="0", metavar="Q")
    p.add_argument("--eps", default="1/20", metavar="Q", help="epsilon of nash-eps")
    p.add_argument("--normalized", action="store_true", help="normalize every game first")
    p.add_argument("--replay", metavar="FILE", help="re-verify a serialized fail witness")
    p.add_argument("--witness-dir", metavar="DIR", help="write fail witnesses here")
    p.add_argument("--corpus", metavar="DIR", help="corpus root (default: bundled)")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("reproduce", help="run the reproduction scenarios")
    p.add_argument("--only", nargs="+", choices=SCENARIO_KEYS, metavar="KEY",
                   help="subset of: " + ", ".join(SCENARIO_KEYS))
    p.add_argument("--timings", action="store_true", help="report and enforce time budgets")
    p.add_argument("--corpus", metavar="DIR")
    p.add_argument("--json", action="store_true")
    return parser


COMMANDS = {"solve": cmd_solve, "decompose": cmd_decompose, "check": cmd_check,
            "reproduce": cmd_reproduce}


def main(argv=None):
    args = build_parser().parse_args(argv)
    out = _Out(getattr(args, "json", False))
    try:
        if args.command == "solve" and args.grid is not None and args.grid < 1:
            raise PreconditionError("--grid needs a positive resolution")
        if args.command == "solve" and args.oracle and args.eps != "0":
            raise PreconditionError("--eps only applies to --grid")
        code = COMMANDS[args.command](args, out)
    except (GameError, ValueError, OSError) as exc:
        print(f"nashax {args.command}: {exc}", file=sys.stderr)
        return INAPPLICABLE
    except Exception as exc:  # last resort: report, do not hide
        print(f"nashax {args.command}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INTERNAL
    out.emit()
    return code


if __name__ == "__main__":
    sys.exit(main())
