"""Memory reduction for request-response and Streett games."""
from .arena import (Arena, Buchi, Game, GameError, Lasso, Parity, Player, Polarity,
                    RequestResponse, Streett, load_game, play_satisfies, validate)
from .automaton import GameAutomaton, MemoryPartition, det_omega_equiv, quotient
from .generators import gen_random, gen_rr, gen_streett
from .pipeline import PipelineOptions, PipelineReport, run_pipeline
from .reductions import rr_to_buchi, streett_to_parity
from .solvers import SolveResult, solve_buchi, solve_parity
from .strategy import MealyStrategy, extract_strategy, minimize_mealy, verify_strategy

__all__ = [
    "Arena", "Buchi", "Game", "GameError", "Lasso", "Parity", "Player", "Polarity",
    "RequestResponse", "Streett", "load_game", "play_satisfies", "validate",
    "GameAutomaton", "MemoryPartition", "det_omega_equiv", "quotient",
    "gen_random", "gen_rr", "gen_streett",
    "PipelineOptions", "PipelineReport", "run_pipeline",
    "rr_to_buchi", "streett_to_parity",
    "SolveResult", "solve_buchi", "solve_parity",
    "MealyStrategy", "extract_strategy", "minimize_mealy", "verify_strategy",
]
