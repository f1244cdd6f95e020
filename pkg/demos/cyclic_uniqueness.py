"""Cyclic games: everyone wants to match a permutation of the previous player.

With two players the exact oracle proves that uniform play is the only
equilibrium.  With three players we sweep a grid instead.
"""
from fractions import Fraction

import numpy as np

from nashax.core import Game, Profile
from nashax.corpus import Corpus
from nashax.decompose import CyclicSpec, cyclic_tuples, make_almost_cyclic_game, make_cyclic_game
from nashax.equilibrium import grid_falsify, regret, solve_nash_2p
from nashax.reproduce import almost_cyclic_specs

for m in (2, 3, 4):
    tuples = cyclic_tuples(m, 2)
    unique = sum(solve_nash_2p(make_cyclic_game(CyclicSpec(m, t, (1, 1)))).unique for t in tuples)
    print(f"m = {m}: {len(tuples)} cyclic pairs, {unique} with a unique equilibrium")

g = make_cyclic_game(CyclicSpec(3, ((1, 2, 0), (0, 1, 2)), (1, 1)))
res = solve_nash_2p(g)
print("shift then identity:", res.verdict, res.profiles()[0])

# when the composition is the identity, every diagonal cell is an equilibrium
ident = np.eye(3, dtype=int)
coordination = Game([range(3)] * 2, np.stack([ident, ident]))
print("plain coordination:", solve_nash_2p(coordination).verdict,
      len(solve_nash_2p(coordination).components), "components")

print()
g3 = Corpus().game("almost-cyclic-3p")
print("three-player almost-cyclic game: regret of uniform =", regret(g3, Profile.uniform(g3)).max_regret)
for resolution in (3, 6):
    print(f"  exact equilibria on the 1/{resolution} grid:", grid_falsify(g3, resolution, 0))
print("  profiles with regret <= 1/10000 on the 1/8 grid:", len(grid_falsify(g3, 8, Fraction(1, 10000))))

specs = almost_cyclic_specs(2)
alone = 0
for spec in specs:
    h = make_almost_cyclic_game(spec)
    alone += grid_falsify(h, 6, 0) == [Profile.uniform(h)]
print(f"m = 2: uniform is the only equilibrium on the 1/6 grid in {alone} of {len(specs)} games")
