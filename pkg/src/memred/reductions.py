"""Game simulations: memory-expanded games with simpler winning conditions.

Request-response games are expanded into Buchi games by remembering the set
of open requests plus a cyclic marker; Streett games are expanded into parity
games with an index appearance record (IAR).
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, NamedTuple, Sequence

from .arena import (Arena, Buchi, Game, Parity, Polarity, RequestResponse, Streett,
                    WrongConditionType)


class RrMemory(NamedTuple):
    open: frozenset[int]
    marker: int
    flag: int

    def __str__(self) -> str:
        opened = ",".join(map(str, sorted(self.open)))
        return f"({{{opened}}},{self.marker},{self.flag})"


class IarRecord(NamedTuple):
    perm: tuple[int, ...]
    e: int
    f: int

    def __str__(self) -> str:
        return f"({' '.join(map(str, self.perm))},{self.e},{self.f})"


def rr_memory_update(mem: RrMemory, k: int, requested, responded) -> RrMemory:
    """Memory successor after leaving a vertex.

    *requested* / *responded* are the pair indices (1-based) whose request /
    response set contains the vertex being left.
    """
    if k < 1:
        raise ValueError("need at least one pair")
    open_ = (mem.open | frozenset(requested)) - frozenset(responded)
    i = mem.marker
    advanced = i not in open_
    marker = i % k + 1 if advanced else i
    # the flag marks a wrap-around k -> 1; with k = 1 a marker that stays on
    # an open request must not count as one
    flag = 1 if i == k and advanced else 0
    return RrMemory(frozenset(open_), marker, flag)


def iar_update(rec: IarRecord, in_e, in_f) -> IarRecord:
    """IAR successor after leaving a vertex contained in E_i for i in *in_e*
    and in F_i for i in *in_f*.

    Matching indices move to the front keeping their relative order.
    Positions are 1-based as in the record's pointers.
    """
    in_e = set(in_e)
    in_f = set(in_f)
    moved = [i for i in rec.perm if i in in_e]
    if not moved:
        raise ValueError("vertex matches no E-set; the (V,V) pair is missing")
    perm = tuple(moved + [i for i in rec.perm if i not in in_e])
    e = max(pos for pos, i in enumerate(rec.perm, 1) if i in in_e)
    f = max((pos for pos, i in enumerate(perm, 1) if i in in_f), default=0)
    if f == 0:
        raise ValueError("vertex matches no F-set; the (V,V) pair is missing")
    return IarRecord(perm, e, f)


def iar_color(rec: IarRecord) -> int:
    return 2 * rec.e if rec.e >= rec.f else 2 * rec.f - 1


@dataclass(eq=False)
class SimulatedGame:
    """A memory-expanded game.

    ``memories`` lists the materialised memory contents in creation order,
    which is the fixed total order used for quotienting.  ``memory_of[x]`` is
    ``(memory id, original vertex)`` for each expanded vertex ``x``.
    """

    source: Game
    product: Game
    memories: list[Hashable]
    memory_of: list[tuple[int, int]]
    initial_memory: int = 0
    full_memory: bool = False

    def __post_init__(self):
        self.state_of = {mv: x for x, mv in enumerate(self.memory_of)}

    @property
    def initial_states(self) -> dict[int, int]:
        s0 = self.initial_memory
        return {v: self.state_of[(s0, v)] for v in range(len(self.source.arena))
                if (s0, v) in self.state_of}

    def memory_successor(self, m: int, v: int) -> int:
        x = self.state_of[(m, v)]
        y = self.product.arena.succ[x][0]
        return self.memory_of[y][0]

    def memory_label(self, m: int) -> str:
        return str(self.memories[m])

    def project(self, vertices) -> set[int]:
        """Original vertices whose initial expanded vertex lies in *vertices*."""
        vertices = set(vertices)
        return {v for v, x in self.initial_states.items() if x in vertices}


def expand(game: Game, s0, update: Callable, accept: Callable, all_memory=None,
           full_memory: bool = False):
    """Build the expanded arena.

    ``update(mem, v)`` is the memory successor when leaving ``v``;
    ``accept(mem)`` gives the acceptance data per expanded vertex.  Without
    *full_memory* only vertices reachable from ``{(s0, v)}`` are built,
    breadth-first in ascending ``v`` and then edge order.
    """
    arena = game.arena
    memories: list = [s0]
    mem_id = {s0: 0}

    def mid(m):
        i = mem_id.get(m)
        if i is None:
            i = mem_id[m] = len(memories)
            memories.append(m)
        return i

    memory_of: list[tuple[int, int]] = []
    state_of: dict[tuple[int, int], int] = {}
    succ: list[list[int]] = []

    def sid(pair):
        x = state_of.get(pair)
        if x is None:
            x = state_of[pair] = len(memory_of)
            memory_of.append(pair)
            succ.append([])
            queue.append(x)
        return x

    queue: deque[int] = deque()
    if full_memory:
        for m in all_memory:
            mid(m)
        for m in range(len(memories)):
            for v in range(len(arena)):
                sid((m, v))
    else:
        for v in range(len(arena)):
            sid((0, v))
    cache: dict[tuple[int, int], int] = {}
    while queue:
        x = queue.popleft()
        m, v = memory_of[x]
        nxt = cache.get((m, v))
        if nxt is None:
            nxt = cache[(m, v)] = mid(update(memories[m], v))
        succ[x] = [sid((nxt, w)) for w in arena.succ[v]]

    owners = tuple(arena.owners[v] for _, v in memory_of)
    product = Arena(owners, tuple(tuple(s) for s in succ))
    accept_data = [accept(memories[m]) for m, _ in memory_of]
    return memories, memory_of, product, accept_data


def _memberships(pairs, n):
    first = [[i for i, (a, _) in enumerate(pairs, 1) if v in a] for v in range(n)]
    second = [[i for i, (_, b) in enumerate(pairs, 1) if v in b] for v in range(n)]
    return first, second


def rr_to_buchi(game: Game, full_memory: bool = False) -> SimulatedGame:
    cond = game.condition
    if not isinstance(cond, RequestResponse):
        raise WrongConditionType("rr_to_buchi needs a request-response condition")
    k = len(cond.pairs)
    req, resp = _memberships(cond.pairs, len(game.arena))
    s0 = RrMemory(frozenset(), 1, 0)

    def update(mem, v):
        return rr_memory_update(mem, k, req[v], resp[v])

    all_memory = None
    if full_memory:
        subsets = [frozenset(c) for r in range(k + 1)
                   for c in itertools.combinations(range(1, k + 1), r)]
        all_memory = [RrMemory(p, i, b) for p in subsets for i in range(1, k + 1) for b in (0, 1)]
    memories, memory_of, product, flags = expand(
        game, s0, update, lambda mem: mem.flag, all_memory, full_memory)
    final = frozenset(x for x, b in enumerate(flags) if b == 1)
    prod = Game(product, Buchi(final), f"{game.name}.buchi")
    return SimulatedGame(game, prod, memories, memory_of, 0, full_memory)


def with_universal_pair(cond: Streett, n: int) -> Streett:
    everything = frozenset(range(n))
    if cond.pairs and cond.pairs[-1] == (everything, everything):
        return cond
    return Streett(cond.pairs + ((everything, everything),))


def streett_to_parity(game: Game, full_memory: bool = False) -> SimulatedGame:
    cond = game.condition
    if not isinstance(cond, Streett):
        raise WrongConditionType("streett_to_parity needs a Streett condition")
    n = len(game.arena)
    cond = with_universal_pair(cond, n)
    k = len(cond.pairs)
    in_e, in_f = _memberships(cond.pairs, n)
    s0 = IarRecord(tuple(range(1, k + 1)), 1, 1)

    def update(rec, v):
        return iar_update(rec, in_e[v], in_f[v])

    all_memory = None
    if full_memory:
        all_memory = [IarRecord(p, e, f) for p in itertools.permutations(range(1, k + 1))
                      for e in range(1, k + 1) for f in range(1, k + 1)]
    memories, memory_of, product, colors = expand(
        game, s0, update, iar_color, all_memory, full_memory)
    prod = Game(product, Parity(tuple(colors), Polarity.MAX_EVEN), f"{game.name}.parity")
    return SimulatedGame(game, prod, memories, memory_of, 0, full_memory)


def trivial_simulation(game: Game) -> SimulatedGame:
    """Wrap a game that needs no memory (Buchi or parity) as its own expansion."""
    n = len(game.arena)
    return SimulatedGame(game, game, [()], [(0, v) for v in range(n)], 0, True)


def simulate(game: Game, full_memory: bool = False) -> SimulatedGame:
    if isinstance(game.condition, RequestResponse):
        return rr_to_buchi(game, full_memory)
    if isinstance(game.condition, Streett):
        return streett_to_parity(game, full_memory)
    return trivial_simulation(game)


def transform_play(sim: SimulatedGame, play: Sequence[int]) -> list[int]:
    """Map a finite play of the source game to the expanded game."""
    states = sim.initial_states
    x = states[play[0]]
    out = [x]
    succ = sim.product.arena.succ
    for w in play[1:]:
        nxt = [y for y in succ[x] if sim.memory_of[y][1] == w]
        if len(nxt) != 1:
            raise ValueError(f"no unique expanded move to {w}")
        x = nxt[0]
        out.append(x)
    return out


def transform_lasso(sim: SimulatedGame, prefix: Sequence[int], cycle: Sequence[int]):
    """Expanded lasso of ``prefix . cycle^omega``.

    Memory updates are deterministic and finite, so unrolling the cycle until
    the expanded state at the cycle start repeats yields a lasso again.
    """
    word = list(prefix) + list(cycle)
    path = transform_play(sim, word)
    succ = sim.product.arena.succ
    seen = {path[len(prefix)]: len(prefix)}
    x = path[-1]
    while True:
        for w in cycle:
            x = next(y for y in succ[x] if sim.memory_of[y][1] == w)
            path.append(x)
        start = path[-len(cycle)]
        # the state reached when re-entering the cycle start
        pos = len(path) - len(cycle)
        if start in seen:
            first = seen[start]
            return tuple(path[:first]), tuple(path[first:pos])
        seen[start] = pos
