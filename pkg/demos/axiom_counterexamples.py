"""Which solution concepts break which axiom, with the witness that shows it."""
from nashax.axioms import FAIL, concept, replay, run_axiom_suite, search_consequentialism_counterexample
from nashax.corpus import Corpus
from nashax.reproduce import COUNTEREXAMPLES

corpus = Corpus()

for name, entry_name, axiom in COUNTEREXAMPLES:
    f = concept(name)
    report = run_axiom_suite(f, corpus.entries(entry_name))
    for row in report.rows:
        if row.axiom != axiom or row.verdict.status != FAIL:
            continue
        w = row.verdict.witness
        print(f"{name} breaks {axiom} on {entry_name}")
        print(f"  {row.verdict.detail}")
        if "profile" in w:
            print(f"  profile: {w['profile']}")
        print(f"  replays from the witness alone: {replay(f, row.verdict)}")

print()
print("searching 2x2 games for a cloning counterexample to uniform-best-response ...")
game, phi, verdict = search_consequentialism_counterexample(concept("uniform-best-response"))
print("row payoffs:", game.payoffs[0].tolist(), " column payoffs are all 0")
print("cloned:", [d for d in phi.domain], "->", verdict.detail)

print()
nash = run_axiom_suite(concept("nash"), corpus.entries())
print(f"nash, for contrast: {len(nash.rows)} checks, "
      f"{sum(r.verdict.status == FAIL for r in nash.rows)} failures")
