"""End-to-end memory reduction with a baseline for comparison.

baseline: expand -> solve -> controller -> minimize
reduced:  expand -> automaton -> state equivalence -> memory classes ->
          quotient -> solve -> controller -> minimize
"""
from __future__ import annotations

import math
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field

from .arena import Game, Player, RequestResponse, Streett, WrongConditionType, validate
from .automaton import (GameAutomaton, closure, det_omega_equiv, game_to_automaton,
                        memory_partition, quotient, simulation_from_automaton,
                        to_min_parity)
from .bisim import direct_bisim
from .reductions import SimulatedGame, simulate
from .rhdelay import build_sim_game, normalize_colors, rhde_partition, rhde_relation
from .solvers import solve
from .strategy import (MealyStrategy, NotWinning, extract_strategy, minimize_mealy,
                       verify_strategy)


@dataclass
class PipelineOptions:
    full_memory: bool = False
    normalize: bool = True
    initial: int = 0
    check_language: bool = True


@dataclass
class PipelineReport:
    name: str
    condition: str
    vertices: int
    edges: int
    pairs: int
    initial: int
    full_memory: bool
    normalize: bool
    expanded_memory: int
    full_memory_size: int
    reduced_memory: int
    expanded_states: int
    reduced_states: int
    baseline_controller: int | None = None
    baseline_minimized: int | None = None
    reduced_controller: int | None = None
    reduced_minimized: int | None = None
    sim_game_vertices: int | None = None
    sim_game_bound: int | None = None
    winning: bool = True
    baseline_verified: bool | None = None
    reduced_verified: bool | None = None
    language_preserved: bool | None = None
    lower_bound: int | None = None
    bound_status: str = "not applicable"
    times_ms: dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (self.baseline_verified is not False and self.reduced_verified is not False
                and self.language_preserved is not False)

    def to_dict(self, timings: bool = True) -> dict:
        out = asdict(self)
        if not timings:
            out.pop("times_ms")
        return out


class _Clock:
    def __init__(self):
        self.times: dict[str, float] = {}

    @contextmanager
    def __call__(self, stage: str):
        t0 = time.perf_counter()
        yield
        self.times[stage] = round(self.times.get(stage, 0.0)
                                  + (time.perf_counter() - t0) * 1000.0, 3)


def full_memory_size(game: Game) -> int:
    cond = game.condition
    if isinstance(cond, RequestResponse):
        k = len(cond.pairs)
        return 2 ** k * k * 2
    k = len(cond.pairs)
    everything = frozenset(range(len(game.arena)))
    if cond.pairs[-1] != (everything, everything):
        k += 1
    return math.factorial(k) * k * k


@dataclass
class Reduction:
    sim: SimulatedGame
    automaton: GameAutomaton
    working: GameAutomaton
    quotient: GameAutomaton
    reduced: SimulatedGame
    n_classes: int
    sim_game_vertices: int | None = None
    sim_game_bound: int | None = None


def reduce_game(game: Game, options: PipelineOptions | None = None,
                sim: SimulatedGame | None = None, clock=None) -> Reduction:
    """Expand *game* and quotient its game automaton by the memory
    equivalence (delayed simulation for request-response, right-hand delayed
    simulation for Streett)."""
    options = options or PipelineOptions()
    clock = clock or _Clock()
    cond = game.condition
    if not isinstance(cond, (RequestResponse, Streett)):
        raise WrongConditionType("memory reduction needs a request-response or Streett game")
    if sim is None:
        with clock("expand"):
            sim = simulate(game, options.full_memory)
    with clock("automaton"):
        aut = game_to_automaton(sim)
    sg_size = sg_bound = None
    if isinstance(cond, RequestResponse):
        with clock("equivalence"):
            working = closure(aut)
            states = direct_bisim(working)
    else:
        with clock("equivalence"):
            # min-parity via c := 2K - c, 2K being the largest IAR color
            top = 2 * len(sim.memories[sim.initial_memory].perm)
            working = to_min_parity(aut, top)
            if options.normalize:
                working = normalize_colors(working)
            sgame = build_sim_game(working)
            relation = rhde_relation(working, sgame)
            states = rhde_partition(working, relation)
        sg_size = len(sgame)
        per_vertex: dict[int, int] = {}
        for q in working.game_states:
            v = working.memory_of[q][1]
            per_vertex[v] = per_vertex.get(v, 0) + 1
        n_colors = len({working.colors[q] for q in working.game_states})
        sg_bound = sum(c * c for c in per_vertex.values()) * (n_colors + 1)
    with clock("quotient"):
        part = memory_partition(working, states.block_of)
        quo = quotient(working, part, states.block_of)
        reduced = simulation_from_automaton(quo, game)
    return Reduction(sim, aut, working, quo, reduced, len(part), sg_size, sg_bound)


def _controller(sim: SimulatedGame, start: int, clock, tag: str):
    with clock(f"{tag}_solve"):
        result = solve(sim.product)
    with clock(f"{tag}_controller"):
        raw = extract_strategy(sim, result, start)
        small = minimize_mealy(raw)
    return result, raw, small


def even_strategy_edges(sim: SimulatedGame, result, start: int) -> bool:
    """Do all strategy moves reachable from *start* enter even colors?"""
    arena = sim.product.arena
    colors = sim.product.condition.colors
    x0 = sim.initial_states[start]
    seen, stack = {x0}, [x0]
    while stack:
        x = stack.pop()
        if arena.owners[x] == Player.P0:
            targets = [result.strategy0[x]]
            if colors[targets[0]] % 2:
                return False
        else:
            targets = arena.succ[x]
        for y in targets:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return True


def family_parameter(game: Game) -> int:
    """Number of binary choices in the diamond families (pairs are
    (P0,R0) plus two per choice, or two per choice plus (V,V))."""
    return (len(game.condition.pairs) - 1) // 2


def run_pipeline(game: Game, options: PipelineOptions | None = None) -> PipelineReport:
    options = options or PipelineOptions()
    validate(game)
    clock = _Clock()
    cond = game.condition
    if not isinstance(cond, (RequestResponse, Streett)):
        raise WrongConditionType("the pipeline needs a request-response or Streett game")
    with clock("expand"):
        sim = simulate(game, options.full_memory)
    red = reduce_game(game, options, sim, clock)
    report = PipelineReport(
        name=game.name, condition="rr" if isinstance(cond, RequestResponse) else "streett",
        vertices=len(game.arena), edges=game.arena.n_edges, pairs=len(cond.pairs),
        initial=options.initial, full_memory=options.full_memory, normalize=options.normalize,
        expanded_memory=len(sim.memories), full_memory_size=full_memory_size(game),
        reduced_memory=red.n_classes, expanded_states=len(sim.product.arena),
        reduced_states=len(red.reduced.product.arena),
        sim_game_vertices=red.sim_game_vertices, sim_game_bound=red.sim_game_bound)
    if options.check_language:
        with clock("language_check"):
            report.language_preserved = det_omega_equiv(red.automaton, red.quotient).equal

    start = options.initial
    try:
        base_result, base_raw, base_min = _controller(sim, start, clock, "baseline")
        red_result, red_raw, red_min = _controller(red.reduced, start, clock, "reduced")
    except NotWinning:
        report.winning = False
        report.times_ms = clock.times
        return report
    report.baseline_controller = len(base_raw)
    report.baseline_minimized = len(base_min)
    report.reduced_controller = len(red_raw)
    report.reduced_minimized = len(red_min)
    with clock("verify"):
        report.baseline_verified = (verify_strategy(game, base_raw, start).ok
                                    and verify_strategy(game, base_min, start).ok)
        report.reduced_verified = (verify_strategy(game, red_raw, start).ok
                                   and verify_strategy(game, red_min, start).ok)

    k = family_parameter(game)
    report.lower_bound = 2 ** k
    if isinstance(cond, Streett) and not even_strategy_edges(sim, base_result, start):
        report.bound_status = "bound check skipped"
    else:
        met = report.baseline_minimized >= report.lower_bound
        report.bound_status = "bound met" if met else "bound not met"
    report.times_ms = clock.times
    return report


def controllers(game: Game, options: PipelineOptions | None = None
                ) -> tuple[MealyStrategy, MealyStrategy]:
    """Minimized (baseline, reduced) controllers from ``options.initial``."""
    options = options or PipelineOptions()
    red = reduce_game(game, options)
    clock = _Clock()
    _, _, base = _controller(red.sim, options.initial, clock, "baseline")
    _, _, small = _controller(red.reduced, options.initial, clock, "reduced")
    return base, small
