"""Exact rational toolkit for normal-form games: game algebra, blow-ups and
clones, equilibrium verification, decompositions into cyclic games, and
witness-based checks of solution-concept axioms."""
from .core import (Game, GameError, PayoffTensor, PreconditionError, Profile, affine_transform,
                   contort_profile, convex_combine, hadamard_contort, normalize)
from .equilibrium import is_eps_nash, is_nash, regret, solve_nash_2p
from .gamefile import parse_game, read_game, serialize_game

__version__ = "0.1.0"

__all__ = [
    "Game", "GameError", "PayoffTensor", "PreconditionError", "Profile", "affine_transform",
    "contort_profile", "convex_combine", "hadamard_contort", "normalize", "is_eps_nash",
    "is_nash", "regret", "solve_nash_2p", "parse_game", "read_game", "serialize_game",
]
