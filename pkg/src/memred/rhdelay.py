"""Right-hand delayed simulation for min-parity game automata.

The simulation game pairs two states over the same vertex and threads a
priority memory through the joint run: it holds the best color the
simulating run still owes (or CHECK when nothing is owed).  Duplicator wins
iff CHECK recurs, so the game is a one-player Buchi game for Spoiler.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Union

from .arena import Arena, Buchi, Game, Player, Polarity
from .automaton import GameAutomaton, MemoryPartition, _copy, memory_partition
from .bisim import StatePartition, _canonical
from .graphs import all_sccs
from .solvers import solve_buchi

CHECK = "✓"
PriorityMemory = Union[int, str]


class VComponentMismatch(ValueError):
    pass


class PolarityError(ValueError):
    pass


def reward_leq(m: int, n: int) -> bool:
    """``m`` is at least as good as ``n``: 0, 2, 4, ... then ..., 5, 3, 1."""
    if m % 2 == 0 and n % 2 == 1:
        return True
    if m % 2 == 0 and n % 2 == 0:
        return m <= n
    if m % 2 == 1 and n % 2 == 1:
        return n <= m
    return False


def reward_lt(m: int, n: int) -> bool:
    return m != n and reward_leq(m, n)


def reward_key(c: int) -> tuple[int, int]:
    """Sort key realising the reward order (best first)."""
    return (0, c) if c % 2 == 0 else (1, -c)


def pm_case(i: int, j: int, k: PriorityMemory) -> tuple[int, PriorityMemory]:
    """Which of the seven update cases applies, and its value.

    ``i`` is the new color on the simulated side, ``j`` on the simulating
    side, ``k`` the current memory.  Case 4 keeps ``k`` (the variant whose
    quotient preserves the language).
    """
    if k == CHECK:
        if reward_lt(i, j):
            return 1, min(i, j)
        return 2, CHECK
    if reward_lt(i, j):
        return 3, min(i, j, k)
    if i % 2 == 1 and i <= k and (j % 2 == 1 or k < j):
        return 4, k
    if j % 2 == 0 and j <= k and (i % 2 == 0 or k < i):
        return 5, CHECK
    if i % 2 == 1 and j % 2 == 0 and i <= k and j <= k:
        return 6, CHECK
    return 7, k


def pm_update(i: int, j: int, k: PriorityMemory) -> PriorityMemory:
    return pm_case(i, j, k)[1]


def _require_min_parity(aut: GameAutomaton):
    if aut.is_buchi or aut.polarity is not Polarity.MIN_EVEN:
        raise PolarityError("right-hand delayed simulation needs a min-parity automaton")


def initial_position(aut: GameAutomaton, p: int, q: int) -> tuple[int, int, PriorityMemory]:
    if aut.memory_of[p][1] != aut.memory_of[q][1]:
        raise VComponentMismatch(f"states {p} and {q} sit on different vertices")
    i, j = aut.colors[p], aut.colors[q]
    return (p, q, min(i, j) if reward_lt(i, j) else CHECK)


@dataclass(eq=False)
class SimulationGame:
    game: Game
    positions: list[tuple]
    index: dict[tuple, int]
    initial: dict[tuple[int, int], int]

    def __len__(self) -> int:
        return len(self.positions)


_LOSE = ("lose",)
_WIN = ("win",)


def build_sim_game(aut: GameAutomaton) -> SimulationGame:
    """Simulation game over all same-vertex state pairs, reachable part only.

    Every position belongs to Spoiler.  Spoiler picks a letter the left
    state can read; Duplicator's answer is forced.  If the right state
    cannot read that letter Duplicator is stuck and loses.
    """
    _require_min_parity(aut)
    by_vertex: dict[int, list[int]] = {}
    for q in aut.game_states:
        by_vertex.setdefault(aut.memory_of[q][1], []).append(q)
    colors = aut.colors
    positions: list[tuple] = []
    index: dict[tuple, int] = {}
    succ: list[list[int]] = []
    queue: deque[int] = deque()

    def pid(pos):
        x = index.get(pos)
        if x is None:
            x = index[pos] = len(positions)
            positions.append(pos)
            succ.append([])
            queue.append(x)
        return x

    initial = {}
    for v in sorted(by_vertex):
        for p in by_vertex[v]:
            for q in by_vertex[v]:
                initial[(p, q)] = pid(initial_position(aut, p, q))
    while queue:
        x = queue.popleft()
        pos = positions[x]
        if pos in (_LOSE, _WIN):
            succ[x] = [x]
            continue
        p, q, pm = pos
        out = []
        for a, p2 in sorted(aut.trans[p].items()):
            q2 = aut.trans[q].get(a)
            if q2 is None or q2 == aut.sink:
                out.append(pid(_LOSE))
                continue
            out.append(pid((p2, q2, pm_update(colors[p2], colors[q2], pm))))
        if not out:
            out.append(pid(_WIN))
        succ[x] = sorted(set(out))
    final = frozenset(x for x, pos in enumerate(positions)
                      if pos == _WIN or (len(pos) == 3 and pos[2] == CHECK))
    arena = Arena(tuple(Player.P1 for _ in positions), tuple(tuple(s) for s in succ))
    return SimulationGame(Game(arena, Buchi(final), "rh-delayed"), positions, index, initial)


def rhde_relation(aut: GameAutomaton, sim: SimulationGame | None = None) -> frozenset[tuple[int, int]]:
    """Pairs ``(p, q)`` such that ``q`` right-hand delayed simulates ``p``."""
    if sim is None:
        sim = build_sim_game(aut)
    won = solve_buchi(sim.game).winning0
    return frozenset(pair for pair, x in sim.initial.items() if x in won)


def rhde_partition(aut: GameAutomaton, relation=None) -> StatePartition:
    """Classes of mutual simulation; q0 and the sink stay alone."""
    if relation is None:
        relation = rhde_relation(aut)
    block_of = list(range(len(aut)))
    reps: dict[int, list[int]] = {}
    for q in aut.game_states:
        v = aut.memory_of[q][1]
        for r in reps.setdefault(v, []):
            if (q, r) in relation and (r, q) in relation:
                block_of[q] = block_of[r]
                break
        else:
            reps[v].append(q)
    return _canonical(block_of)


def memory_equivalence_parity(aut: GameAutomaton,
                              states: StatePartition | None = None) -> MemoryPartition:
    if states is None:
        states = rhde_partition(aut)
    return memory_partition(aut, states.block_of)


def normalize_colors(aut: GameAutomaton) -> GameAutomaton:
    """Lower colors inside each SCC by 2 while the color just below is
    absent from the SCC; parities and the accepted language are kept."""
    _require_min_parity(aut)
    states = set(aut.game_states)
    colors = list(aut.colors)
    for comp in all_sccs(len(aut), lambda q: aut.successors(q) if q in states else ()):
        comp = [q for q in comp if q in states]
        changed = True
        while changed:
            changed = False
            present = {colors[q] for q in comp}
            for q in comp:
                c = colors[q]
                if c >= 2 and c - 1 not in present:
                    colors[q] = c - 2
                    changed = True
                    break
    out = _copy(aut)
    out.colors = colors
    return out
