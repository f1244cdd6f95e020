"""Walk through the linear-combination transform on the bundled 4x3 game.

Part of the row player's mixture is handed to a single action that plays a
fixed mixture of the old rows.  The equilibrium survives the move.
"""
from fractions import Fraction

from nashax.core import Profile
from nashax.corpus import Corpus
from nashax.equilibrium import is_nash, regret
from nashax.morphism import lincomb_proof_pipeline, linear_combination_transform
from nashax.reproduce import LINCOMB_SPEC


def show(game, title):
    print(title)
    for r in game.actions[0]:
        cells = ["({}, {})".format(*game.payoff((r, c))) for c in game.actions[1]]
        print(f"  {r}: " + "  ".join(f"{cell:>12s}" for cell in cells))


corpus = Corpus()
base = corpus.game("lincomb-base")
third = Fraction(1, 3)
before = Profile(base, [[0, third, third, third], [third] * 3])
show(base, "original game")
print("profile:", before, " regret:", regret(base, before).max_regret)

print()
print("row player: weights (0, 1, 1, 2) with kappa 1/6 move onto action 4")
print("column player: weight on action 1 with kappa 1/3, so nothing moves")
game, after = linear_combination_transform(base, before, LINCOMB_SPEC)
show(game, "transformed game")
print("profile:", after)
print("still an equilibrium:", is_nash(game, after))

slow = lincomb_proof_pipeline(base, before, LINCOMB_SPEC)
print("clone, symmetrize and blow down gives the same game:", slow == (game, after))

print()
print("row 4, column 3 gives the row player", game.payoff((4, 3))[0])
print("= 1/4 * G(2, 3) + 1/4 * G(3, 3) + 1/2 * G(4, 3) =",
      Fraction(1, 4) * base.payoff((2, 3))[0] + Fraction(1, 4) * base.payoff((3, 3))[0]
      + Fraction(1, 2) * base.payoff((4, 3))[0])
