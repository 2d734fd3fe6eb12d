"""Brute-force reference implementations used only by the tests.

They follow the textbook definitions directly and share no code with the
package beyond the data types.
"""
from __future__ import annotations

import itertools
import random

from memred.arena import Arena, Buchi, Game, Player, Polarity
from memred.automaton import GameAutomaton


# --- random objects --------------------------------------------------------

def random_buchi_automaton(rng: random.Random, n: int, letters: int, p_final=0.4,
                           p_edge=0.6) -> GameAutomaton:
    """Deterministic partial Buchi automaton on states 0..n-1 plus a sink n.

    Every real state reads at least one letter, so every state has an
    infinite run.
    """
    trans = []
    for _ in range(n):
        row = {a: rng.randrange(n) for a in range(letters) if rng.random() < p_edge}
        if not row:
            row[rng.randrange(letters)] = rng.randrange(n)
        trans.append(row)
    trans.append({})
    final = frozenset(q for q in range(n) if rng.random() < p_final)
    return GameAutomaton(n_letters=letters, trans=trans, initial=0, sink=n, final=final)


def random_parity_automaton(rng: random.Random, n: int, letters: int, max_color=4,
                            polarity=Polarity.MAX_EVEN) -> GameAutomaton:
    aut = random_buchi_automaton(rng, n, letters)
    aut.final = None
    aut.polarity = polarity
    worst = 1 if polarity is Polarity.MIN_EVEN else max_color + 1 - max_color % 2
    aut.colors = [rng.randint(0, max_color) for _ in range(n)] + [worst]
    return aut


def random_lasso(rng: random.Random, letters: int, max_prefix=4, max_cycle=4):
    prefix = tuple(rng.randrange(letters) for _ in range(rng.randint(0, max_prefix)))
    cycle = tuple(rng.randrange(letters) for _ in range(rng.randint(1, max_cycle)))
    return prefix, cycle


# --- acceptance from arbitrary states --------------------------------------

def run_states(aut: GameAutomaton, q: int, prefix, cycle):
    """States visited infinitely often on ``prefix . cycle^omega`` from q."""
    for a in prefix:
        q = aut.delta(q, a)
    seen = {}
    blocks = []
    while q not in seen:
        seen[q] = len(blocks)
        block = []
        for a in cycle:
            q = aut.delta(q, a)
            block.append(q)
        blocks.append(block)
    return {s for b in blocks[seen[q]:] for s in b}


def accepts_from(aut: GameAutomaton, q: int, prefix, cycle) -> bool:
    inf = run_states(aut, q, prefix, cycle)
    if aut.final is not None:
        return bool(inf & aut.final)
    colors = [aut.colors[s] for s in inf]
    best = max(colors) if aut.polarity is Polarity.MAX_EVEN else min(colors)
    return best % 2 == 0


# --- games -----------------------------------------------------------------

def naive_attractor(arena: Arena, player: Player, target: set, region: set) -> set:
    attr = set(target) & region
    while True:
        new = set(attr)
        for v in region - attr:
            succ = [w for w in arena.succ[v] if w in region]
            if arena.owners[v] == player:
                if any(w in attr for w in succ):
                    new.add(v)
            elif succ and all(w in attr for w in succ):
                new.add(v)
        if new == attr:
            return attr
        attr = new


def naive_buchi(game: Game) -> set:
    """Player 0's region: nu X. mu Y. (F & CPre0(X)) | CPre0(Y)."""
    arena = game.arena
    n = len(arena)
    final = game.condition.final

    def cpre(target):
        out = set()
        for v in range(n):
            if arena.owners[v] == Player.P0:
                if any(w in target for w in arena.succ[v]):
                    out.add(v)
            elif all(w in target for w in arena.succ[v]):
                out.add(v)
        return out

    x = set(range(n))
    while True:
        good = final & cpre(x)
        y = set()
        while True:
            y2 = good | cpre(y)
            if y2 == y:
                break
            y = y2
        if y == x:
            return x
        x = y


def lasso_from(succ_choice, start: int):
    """Follow a deterministic successor map; return (prefix, cycle)."""
    path, pos = [], {}
    v = start
    while v not in pos:
        pos[v] = len(path)
        path.append(v)
        v = succ_choice[v]
    return path[:pos[v]], path[pos[v]:]


def positional_parity_winners(game: Game) -> set:
    """Player 0 wins from v iff some positional strategy of hers beats every
    positional counter-strategy; plays are then lassos."""
    arena = game.arena
    colors = game.condition.colors
    n = len(arena)
    mine = [v for v in range(n) if arena.owners[v] == Player.P0]
    theirs = [v for v in range(n) if arena.owners[v] == Player.P1]
    won = set()
    s1_all = list(itertools.product(*[arena.succ[v] for v in theirs]))
    for s0 in itertools.product(*[arena.succ[v] for v in mine]):
        choice = dict(zip(mine, s0))
        for v in range(n):
            if v in won:
                continue
            ok = True
            for s1 in s1_all:
                choice.update(zip(theirs, s1))
                _, cycle = lasso_from(choice, v)
                cs = [colors[u] for u in cycle]
                best = max(cs) if game.condition.polarity is Polarity.MAX_EVEN else min(cs)
                if best % 2:
                    ok = False
                    break
            if ok:
                won.add(v)
    return won


# --- simulation relations ---------------------------------------------------

def direct_bisim_relation(aut: GameAutomaton) -> set:
    """Greatest relation on real states: same finality, same letters, and
    related successors."""
    states = [q for q in range(len(aut)) if q != aut.sink]
    rel = {(p, q) for p in states for q in states
           if (p in aut.final) == (q in aut.final) and set(aut.trans[p]) == set(aut.trans[q])}
    while True:
        keep = {(p, q) for p, q in rel
                if all((aut.trans[p][a], aut.trans[q][a]) in rel for a in aut.trans[p])}
        if keep == rel:
            return rel
        rel = keep


def delayed_sim_game(aut: GameAutomaton):
    """Explicit delayed-simulation game.

    Position (q, q', b): b records an unanswered visit to F on the left.
    Spoiler (Player 1) owns everything: he picks a letter readable from q;
    if q' cannot read it Duplicator is stuck and lands in a losing trap.
    Duplicator wins iff b is false infinitely often.
    """
    states = [q for q in range(len(aut)) if q != aut.sink]
    final = aut.final
    index = {}
    succ = []
    positions = []

    def pid(pos):
        if pos not in index:
            index[pos] = len(positions)
            positions.append(pos)
            succ.append(None)
        return index[pos]

    lose = pid("lose")
    initial = {}
    for p in states:
        for q in states:
            initial[(p, q)] = pid((p, q, p in final and q not in final))
    i = 0
    while i < len(positions):
        pos = positions[i]
        if pos == "lose":
            succ[i] = (lose,)
        else:
            p, q, b = pos
            out = set()
            for a, p1 in aut.trans[p].items():
                q1 = aut.trans[q].get(a)
                if q1 is None:
                    out.add(lose)
                else:
                    out.add(pid((p1, q1, (b or p1 in final) and q1 not in final)))
            succ[i] = tuple(sorted(out))
        i += 1
    good = frozenset(x for x, pos in enumerate(positions) if pos != "lose" and not pos[2])
    arena = Arena(tuple(Player.P1 for _ in positions), tuple(succ))
    return Game(arena, Buchi(good)), initial
