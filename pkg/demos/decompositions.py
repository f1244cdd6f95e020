"""From slice-stochastic tensors down to cyclic games.

1. A slice-stochastic tensor is a mixture of deterministic ones.
2. A permutation game is an average of cyclic and almost-cyclic games, up to
   scale and offset.
3. A deterministic slice-stochastic game blows up into a permutation game.
"""
from fractions import Fraction

import numpy as np

from nashax.core import PayoffTensor, Profile
from nashax.corpus import Corpus
from nashax.decompose import (AlmostCyclicSpec, PermutationSet, bvn_decompose,
                              decompose_permutation_game, decompose_slice_stochastic_game,
                              deterministic_tensor, make_permutation_game)
from nashax.morphism import pushforward

# 1
half = Fraction(1, 2)
mix = half * deterministic_tensor(2, 3, 0, [0, 1, 1, 0]).values \
    + half * deterministic_tensor(2, 3, 0, [1, 0, 0, 1]).values
tensor = PayoffTensor([range(2)] * 3, mix)
terms = bvn_decompose(tensor, 0)
print("uniform 2x2x2 slice-stochastic tensor splits into", len(terms), "deterministic terms:")
for t in terms:
    print(f"  weight {t.weight}: support {[idx for idx, v in np.ndenumerate(t.tensor.values) if v]}")

# 2
pset = PermutationSet(3, 2, frozenset({(0, 1), (1, 2), (2, 0)}))
game = make_permutation_game(pset, 0)
dec = decompose_permutation_game(game)
almost = sum(isinstance(c, AlmostCyclicSpec) for c in dec.components)
print()
print(f"permutation game on {sorted(pset.profiles)}: {len(dec.components)} components "
      f"({almost} almost-cyclic), scale {dec.scale}, offset {[str(b) for b in dec.offset]}")
print("reconstructs exactly:", dec.reconstruct() == game)

# 3
g = Corpus().game("slice-stochastic-3p")
sdec = decompose_slice_stochastic_game(g, 0)
print()
print("three-player slice-stochastic game, player 1 paid on",
      sorted(a for a in g.profiles() if g.payoff(a)[0] == 1))
print(f"blown up to {len(sdec.blowup.domain[0])} actions per player, "
      f"{len(sdec.decomposition.components)} components")
print("round trip exact:", sdec.reconstruct() == g)
print("uniform pushes forward to uniform:",
      pushforward(Profile.uniform(sdec.blowup.domain), sdec.blowup) == Profile.uniform(g))
