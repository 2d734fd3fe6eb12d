"""Attractors, Buchi games (Recur / attractor iteration) and parity games
(Zielonka's recursion), with positional strategies for both players."""
from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass, field

from .arena import Arena, Buchi, Game, Parity, Player, Polarity


@dataclass(frozen=True)
class SolveResult:
    winning0: frozenset[int]
    winning1: frozenset[int]
    strategy0: dict[int, int] = field(default_factory=dict)
    strategy1: dict[int, int] = field(default_factory=dict)

    def winner(self, v: int) -> Player:
        return Player.P0 if v in self.winning0 else Player.P1


def _attract(arena: Arena, player: Player, target, within=None):
    """Attractor with ranks; returns (set, strategy, rank).

    Vertices are settled breadth-first, so the rank of a vertex is its
    distance to *target* under optimal play.  A vertex of *player* moves to
    the smallest-id successor one rank closer.
    """
    inside = (lambda v: True) if within is None else within.__contains__
    rank: dict[int, int] = {}
    queue: deque[int] = deque()
    for v in sorted(target):
        if inside(v):
            rank[v] = 0
            queue.append(v)
    count: dict[int, int] = {}
    pred = arena.pred
    while queue:
        w = queue.popleft()
        for v in pred[w]:
            if v in rank or not inside(v):
                continue
            if arena.owners[v] == player:
                rank[v] = rank[w] + 1
                queue.append(v)
            else:
                left = count.get(v)
                if left is None:
                    left = sum(1 for u in arena.succ[v] if inside(u))
                left -= 1
                count[v] = left
                if left == 0:
                    rank[v] = rank[w] + 1
                    queue.append(v)
    strategy = {}
    for v, r in rank.items():
        if r > 0 and arena.owners[v] == player:
            strategy[v] = min(u for u in arena.succ[v] if rank.get(u) == r - 1)
    return set(rank), strategy, rank


def attractor(game: Game | Arena, player: Player, target, within=None):
    """``(A, strategy)``: the *player*-attractor of *target*, optionally inside
    the subgame *within*."""
    arena = game.arena if isinstance(game, Game) else game
    attr, strategy, _ = _attract(arena, Player(player), set(target), within)
    return attr, strategy


def _stay(arena: Arena, v: int, region) -> int:
    return min(u for u in arena.succ[v] if u in region)


def solve_buchi(game: Game) -> SolveResult:
    """Player 0 wins from the 0-attractor of Recur(F).

    Each round removes the 1-attractor of the vertices from which Player 0
    cannot even reach F; what remains when no such vertex is left is Player
    0's region.
    """
    arena = game.arena
    if not isinstance(game.condition, Buchi):
        raise TypeError("solve_buchi needs a Buchi condition")
    final = game.condition.final
    region = set(range(len(arena)))
    win1: set[int] = set()
    strategy1: dict[int, int] = {}
    while True:
        reach, _, _ = _attract(arena, Player.P0, final & region, region)
        trap = region - reach
        if not trap:
            break
        lost, s1, _ = _attract(arena, Player.P1, trap, region)
        for v in trap:
            if arena.owners[v] == Player.P1:
                strategy1[v] = _stay(arena, v, trap)
        strategy1.update({v: u for v, u in s1.items() if v not in trap})
        win1 |= lost
        region -= lost
    recur = final & region
    _, strategy0, rank = _attract(arena, Player.P0, recur, region)
    for v in recur:
        if arena.owners[v] == Player.P0:
            strategy0[v] = min((u for u in arena.succ[v] if u in region),
                               key=lambda u: (rank[u], u))
    return SolveResult(frozenset(region), frozenset(win1), strategy0, strategy1)


def _zielonka(arena: Arena, colors, region: frozenset[int]):
    if not region:
        return set(), set(), {}, {}
    top = max(colors[v] for v in region)
    p = Player(top % 2)
    opp = p.opponent
    heads = {v for v in region if colors[v] == top}
    attr, s_attr, _ = _attract(arena, p, heads, region)
    sub = _zielonka(arena, colors, region - attr)
    won = [sub[0], sub[1]]
    strat = [sub[2], sub[3]]
    if not won[opp]:
        strategy = dict(strat[p])
        strategy.update(s_attr)
        for v in heads:
            if arena.owners[v] == p:
                strategy[v] = _stay(arena, v, region)
        out_w = [None, None]
        out_s = [None, None]
        out_w[p], out_w[opp] = set(region), set()
        out_s[p], out_s[opp] = strategy, {}
        return out_w[0], out_w[1], out_s[0], out_s[1]
    battr, s_battr, _ = _attract(arena, opp, won[opp], region)
    rest = _zielonka(arena, colors, region - battr)
    won2 = [rest[0], rest[1]]
    strat2 = [rest[2], rest[3]]
    opp_strategy = dict(strat2[opp])
    opp_strategy.update(strat[opp])
    opp_strategy.update({v: u for v, u in s_battr.items() if v not in won[opp]})
    out_w = [None, None]
    out_s = [None, None]
    out_w[p], out_w[opp] = won2[p], won2[opp] | battr
    out_s[p], out_s[opp] = strat2[p], opp_strategy
    return out_w[0], out_w[1], out_s[0], out_s[1]


def solve_parity(game: Game) -> SolveResult:
    """Zielonka's algorithm; min-even colorings are flipped with an even
    constant so that parity is kept and the order reversed."""
    cond = game.condition
    if not isinstance(cond, Parity):
        raise TypeError("solve_parity needs a parity condition")
    colors = list(cond.colors)
    if cond.polarity is Polarity.MIN_EVEN:
        top = max(colors, default=0)
        top += top % 2
        colors = [top - c for c in colors]
    arena = game.arena
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * len(arena) + 1000))
    try:
        w0, w1, s0, s1 = _zielonka(arena, colors, frozenset(range(len(arena))))
    finally:
        sys.setrecursionlimit(limit)
    s0 = {v: u for v, u in s0.items() if v in w0 and arena.owners[v] == Player.P0}
    s1 = {v: u for v, u in s1.items() if v in w1 and arena.owners[v] == Player.P1}
    return SolveResult(frozenset(w0), frozenset(w1), s0, s1)


def solve(game: Game) -> SolveResult:
    if isinstance(game.condition, Buchi):
        return solve_buchi(game)
    return solve_parity(game)
