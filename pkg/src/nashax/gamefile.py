"""JSON game files and the encodings of profiles, maps and permutations.

A game file is a JSON object::

    {"name": "matching-pennies", "source": "...", "players": 2,
     "actions": [["H", "T"], ["H", "T"]],
     "payoffs": [[[1, -1], [-1, 1]], [[-1, 1], [1, -1]]]}

``payoffs`` nests one array level per player, indexed by the position of the
action in ``actions``; the innermost arrays are payoff vectors.  Payoffs are
integers or ``"num/den"`` strings.  Action labels are strings, integers or
arrays of labels.  Parse errors report line and column.
"""
import json
import json.decoder
import json.scanner
from fractions import Fraction
from itertools import product

from ._exact import format_fraction, to_fraction
from .core import Game, GameError, Profile
from .morphism import BlowUpMap, GamePermutation


class GameFileError(GameError):
    pass


class _PList(list):
    pos = None


class _PStr(str):
    pos = None


class _Float:
    def __init__(self, text):
        self.text = text


class _PositionDecoder(json.JSONDecoder):
    """Decoder that remembers where arrays and strings start."""

    def __init__(self):
        super().__init__(parse_float=_Float)
        plain_array = json.decoder.JSONArray
        plain_string = self.parse_string

        def parse_array(s_and_end, scan_once, *args):
            values, end = plain_array(s_and_end, scan_once, *args)
            out = _PList(values)
            out.pos = s_and_end[1] - 1
            return out, end

        def parse_string(s, end, strict):
            value, new_end = plain_string(s, end, strict)
            out = _PStr(value)
            out.pos = end - 1
            return out, new_end

        self.parse_array = parse_array
        self.parse_string = parse_string
        self.scan_once = json.scanner.py_make_scanner(self)


def _where(text, pos):
    if pos is None:
        return ""
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return f"line {line} column {col}: "


def load_json(text):
    try:
        return _PositionDecoder().decode(text)
    except json.JSONDecodeError as exc:
        raise GameFileError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _label(obj, text, ctx):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (_Float, dict)):
        raise GameFileError(f"{_where(text, getattr(ctx, 'pos', None))}invalid action label {obj!r}")
    if isinstance(obj, list):
        return tuple(_label(x, text, obj) for x in obj)
    return str(obj) if isinstance(obj, str) else int(obj)


def _rational(obj, text, ctx):
    where = _where(text, getattr(obj, "pos", None) or getattr(ctx, "pos", None))
    if isinstance(obj, _Float):
        raise GameFileError(f"{where}decimal number {obj.text} is not an exact rational; use \"num/den\"")
    if isinstance(obj, bool) or not isinstance(obj, (int, str)):
        raise GameFileError(f"{where}expected a rational, got {obj!r}")
    try:
        return to_fraction(str(obj) if isinstance(obj, _PStr) else obj)
    except (ValueError, TypeError) as exc:
        raise GameFileError(f"{where}{exc}") from None


def game_from_doc(doc, text=""):
    if not isinstance(doc, dict):
        raise GameFileError("a game file must hold a JSON object")
    for key in ("actions", "payoffs"):
        if key not in doc:
            raise GameFileError(f"missing field {key!r}")
    acts_doc = doc["actions"]
    if not isinstance(acts_doc, list) or not all(isinstance(a, list) for a in acts_doc):
        raise GameFileError(f"{_where(text, getattr(acts_doc, 'pos', None))}actions must be a list of lists")
    actions = [[_label(a, text, acts) for a in acts] for acts in acts_doc]
    n = len(actions)
    if "players" in doc and doc["players"] != n:
        raise GameFileError(f"players = {doc['players']} but {n} action lists given")
    shape = [len(a) for a in actions]
    values = [[None] * _size(shape) for _ in range(n)]
    for flat, idx in enumerate(product(*(range(m) for m in shape))):
        node, parent = doc["payoffs"], doc
        for depth, k in enumerate(idx):
            if not isinstance(node, list) or len(node) != shape[depth]:
                raise GameFileError(
                    f"{_where(text, getattr(node, 'pos', getattr(parent, 'pos', None)))}payoff array at "
                    f"profile prefix {_profile_name(actions, idx[:depth])} must have {shape[depth]} entries")
            parent, node = node, node[k]
        if not isinstance(node, list) or len(node) != n:
            raise GameFileError(
                f"{_where(text, getattr(node, 'pos', getattr(parent, 'pos', None)))}payoff vector at profile "
                f"{_profile_name(actions, idx)} must have {n} entries")
        for i, v in enumerate(node):
            values[i][flat] = _rational(v, text, node)
    import numpy as np
    arr = np.empty((n,) + tuple(shape), dtype=object)
    for i in range(n):
        arr[i] = np.array(values[i], dtype=object).reshape(shape)
    return Game(actions, arr)


def _size(shape):
    out = 1
    for m in shape:
        out *= m
    return out


def _profile_name(actions, idx):
    return "(" + ", ".join(repr(actions[i][k]) for i, k in enumerate(idx)) + ")"


def parse_game(text: str) -> Game:
    return game_from_doc(load_json(text), text)


def read_game(path) -> Game:
    with open(path) as fh:
        text = fh.read()
    try:
        return parse_game(text)
    except GameFileError as exc:
        raise GameFileError(f"{path}: {exc}") from None


def read_doc(path):
    with open(path) as fh:
        text = fh.read()
    try:
        return load_json(text), text
    except GameFileError as exc:
        raise GameFileError(f"{path}: {exc}") from None


# --- encoding -------------------------------------------------------------------------

def encode_label(a):
    if isinstance(a, tuple):
        return [encode_label(x) for x in a]
    return a


def decode_label(obj):
    if isinstance(obj, list):
        return tuple(decode_label(x) for x in obj)
    return str(obj) if isinstance(obj, str) else obj


def encode_rational(q: Fraction):
    q = to_fraction(q)
    return q.numerator if q.denominator == 1 else format_fraction(q)


def game_to_doc(game: Game, **meta):
    def nest(prefix):
        if len(prefix) == game.n:
            return [encode_rational(v) for v in game.payoffs[(slice(None),) + prefix]]
        return [nest(prefix + (k,)) for k in range(game.shape[len(prefix)])]

    doc = dict(meta)
    doc["players"] = game.n
    doc["actions"] = [[encode_label(a) for a in acts] for acts in game.actions]
    doc["payoffs"] = nest(())
    return doc


def serialize_game(game: Game, **meta) -> str:
    """Canonical text: sorted actions, one payoff vector per line."""
    doc = game_to_doc(game, **meta)
    payoffs = doc.pop("payoffs")

    def render(node, depth):
        if node and not isinstance(node[0], list):
            return json.dumps(node)
        pad = "  " * (depth + 2)
        inner = ",\n".join(pad + render(x, depth + 1) for x in node)
        return "[\n" + inner + "\n" + "  " * (depth + 1) + "]"

    lines = [f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in doc.items()]
    lines.append('  "payoffs": ' + render(payoffs, 0))
    return "{\n" + ",\n".join(lines) + "\n}\n"


def profile_to_doc(profile: Profile):
    return [[[encode_label(a), encode_rational(q)] for a, q in profile.dist(i).items()]
            for i in range(profile.n)]


def profile_from_doc(actions, doc):
    return Profile.from_dicts(actions, [{decode_label(a): to_fraction(q) for a, q in player}
                                        for player in doc])


def map_to_doc(phi: BlowUpMap):
    return [[[encode_label(a), encode_label(b)] for a, b in sorted(m.items())] for m in phi.maps]


def map_from_doc(doc):
    return BlowUpMap([{decode_label(a): decode_label(b) for a, b in player} for player in doc])


def permutation_to_doc(pi: GamePermutation):
    return [[[encode_label(a), encode_label(b)] for a, b in sorted(m.items())] for m in pi.maps]


def permutation_from_doc(doc):
    return GamePermutation([{decode_label(a): decode_label(b) for a, b in player} for player in doc])


def split_to_doc(split):
    return [[[encode_label(b), [[encode_label(a), encode_rational(s)] for a, s in share.items()]]
             for b, share in player.items()] for player in split]


def split_from_doc(doc):
    return [{decode_label(b): {decode_label(a): to_fraction(s) for a, s in share} for b, share in player}
            for player in doc]


# --- axiom verdicts ---------------------------------------------------------------

def verdict_to_doc(verdict, concept_name):
    """Serialize a verdict, including its witness, for later replay."""
    doc = {"concept": concept_name, "axiom": verdict.axiom, "status": verdict.status,
           "delta": encode_rational(verdict.delta), "detail": verdict.detail,
           "examined": verdict.examined}
    w = verdict.witness
    if not w:
        return doc
    out = {}
    for key, value in w.items():
        if key == "games":
            out[key] = [game_to_doc(g) for g in value]
        elif key == "game":
            out[key] = game_to_doc(value)
        elif key == "weights":
            out[key] = [encode_rational(x) for x in value]
        elif key == "profile":
            out[key] = profile_to_doc(value)
        elif key == "map":
            out[key] = map_to_doc(value)
        elif key == "permutation":
            out[key] = permutation_to_doc(value)
        elif key == "split":
            out[key] = split_to_doc(value)
        elif key == "action":
            out[key] = encode_label(value)
        else:
            out[key] = value
    doc["witness"] = out
    return doc


def verdict_from_doc(doc):
    """Inverse of :func:`verdict_to_doc`; returns ``(concept_name, verdict)``."""
    from .axioms import AxiomVerdict
    w = doc.get("witness")
    witness = None
    if w:
        witness = {}
        if "games" in w:
            witness["games"] = [game_from_doc(g) for g in w["games"]]
        if "game" in w:
            witness["game"] = game_from_doc(w["game"])
        if "map" in w:
            witness["map"] = map_from_doc(w["map"])
        if "permutation" in w:
            witness["permutation"] = permutation_from_doc(w["permutation"])
        for key, value in w.items():
            if key in witness:
                continue
            if key == "weights":
                witness[key] = [to_fraction(x) for x in value]
            elif key == "split":
                witness[key] = split_from_doc(value)
            elif key == "action":
                witness[key] = decode_label(value)
            elif key != "profile":
                witness[key] = value
        if "profile" in w:
            host = _profile_host(witness)
            witness["profile"] = profile_from_doc(host.actions, w["profile"])
    verdict = AxiomVerdict(doc["axiom"], doc["status"], to_fraction(doc.get("delta", 0)),
                           doc.get("detail", ""), witness, doc.get("examined", 0))
    return doc["concept"], verdict


def _profile_host(witness):
    """The game whose action sets the witness profile lives on."""
    from .morphism import blow_up
    if "games" in witness:
        return witness["games"][0]
    if witness.get("direction") in ("push", "split"):
        return blow_up(witness["game"], witness["map"])
    return witness["game"]
