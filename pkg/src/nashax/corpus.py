"""The bundled corpus of games and axiom-check instances.

Layout of a corpus directory::

    games/<name>.json       game files
    instances/<name>.json   axiom checks over those games, with expected verdicts

Set ``NASHAX_CORPUS`` to point at a different corpus directory.
"""
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ._exact import to_fraction
from .axioms import PASS, Check
from .core import affine_transform, normalize
from .gamefile import (GameFileError, decode_label, game_from_doc, permutation_from_doc,
                       profile_from_doc, read_doc)
from .morphism import BlowUpMap

ENV_VAR = "NASHAX_CORPUS"
POSITIVE_CONCEPTS = ("nash", "nash-eps")


def corpus_root() -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override)
    return Path(str(resources.files("nashax") / "data" / "corpus"))


@dataclass
class CorpusEntry:
    name: str
    checks: list
    expect: dict = field(default_factory=dict)
    source: str = ""
    path: str = ""

    def expected(self, concept, axiom, delta=0):
        """Expected status of ``axiom`` for ``concept``; Nash-type concepts default to pass."""
        table = self.expect.get(concept, {})
        if to_fraction(delta) > 0:
            table = self.expect.get(concept + "@delta", {})
        if axiom in table:
            return table[axiom]
        if concept in POSITIVE_CONCEPTS:
            return PASS
        return None


class Corpus:
    def __init__(self, root=None):
        self.root = Path(root) if root is not None else corpus_root()
        self._games = {}

    def game_path(self, name):
        return self.root / "games" / f"{name}.json"

    def game(self, name):
        if name not in self._games:
            path = self.game_path(name)
            if not path.exists():
                raise GameFileError(f"corpus has no game named {name!r}")
            doc, text = read_doc(path)
            try:
                self._games[name] = game_from_doc(doc, text)
            except GameFileError as exc:
                raise GameFileError(f"{path}: {exc}") from None
        return self._games[name]

    def game_names(self):
        return sorted(p.stem for p in (self.root / "games").glob("*.json"))

    def game_meta(self, name):
        doc, _ = read_doc(self.game_path(name))
        return {k: v for k, v in doc.items() if k not in ("actions", "payoffs", "players")}

    def _ref(self, ref):
        if isinstance(ref, str):
            return self.game(ref)
        g = self.game(ref["of"])
        return affine_transform(g, ref.get("alpha", [1] * g.n), ref.get("beta", [0] * g.n))

    def _check(self, doc):
        games = tuple(self._ref(r) for r in doc["games"])
        weights = tuple(to_fraction(w) for w in doc.get("weights", ()))
        phi = perm = None
        if "copies" in doc:
            counts = [{decode_label(a): int(c) for a, c in player} for player in doc["copies"]]
            phi = BlowUpMap.from_counts(games[0].actions, counts)
        if "permutation" in doc:
            perm = permutation_from_doc(doc["permutation"])
        probes = []
        for p in doc.get("probes", ()):
            g = self._ref(p["game"])
            probes.append(profile_from_doc(g.actions, p["profile"]))
        return Check(doc["axiom"], games, weights, phi, perm, tuple(probes))

    def entry(self, path):
        doc, _ = read_doc(path)
        checks = [self._check(c) for c in doc["checks"]]
        return CorpusEntry(doc.get("name", Path(path).stem), checks, doc.get("expect", {}),
                           doc.get("source", ""), str(path))

    def entries(self, target=None):
        """Entries under ``target``: a file, a directory, an entry name, or the whole corpus."""
        if target is None:
            paths = sorted((self.root / "instances").glob("*.json"))
        else:
            t = Path(target)
            if t.is_dir():
                paths = sorted(t.glob("*.json")) or sorted((t / "instances").glob("*.json"))
            elif t.exists():
                paths = [t]
            else:
                named = self.root / "instances" / f"{target}.json"
                if not named.exists():
                    raise GameFileError(f"no corpus entry or file {target!r}")
                paths = [named]
        return [self.entry(p) for p in paths]


def normalized_entry(entry: CorpusEntry) -> CorpusEntry:
    """The same checks with every game normalized onto [0, 1] per player."""
    checks = []
    for c in entry.checks:
        probes = tuple(c.probes)
        checks.append(Check(c.axiom, tuple(normalize(g) for g in c.games), c.weights,
                            c.blowup, c.permutation, probes))
    return CorpusEntry(entry.name + "/normalized", checks, entry.expect, entry.source, entry.path)
