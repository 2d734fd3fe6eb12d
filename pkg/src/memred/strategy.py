"""Mealy controllers: extraction from a positional strategy on an expanded
game, minimization, verification against the original condition, export.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .arena import (Buchi, Game, Lasso, Parity, Player, Polarity, RequestResponse,
                    Streett, WrongConditionType)
from .graphs import cycle_through, path_to, sccs
from .reductions import RrMemory, SimulatedGame, _memberships, rr_memory_update
from .solvers import SolveResult


class NotWinning(ValueError):
    pass


class PartialStrategy(ValueError):
    pass


@dataclass(eq=False)
class MealyStrategy:
    """Finite-state controller.

    In state ``s`` at vertex ``v`` the controller moves to ``output[s, v]``
    when ``v`` is a Player-0 vertex, and its next state is
    ``transition[s, v]`` whoever moves.  Inputs are the vertices the token
    visits.
    """

    n_states: int
    initial: int
    transition: dict[tuple[int, int], int]
    output: dict[tuple[int, int], int]
    start: int = 0
    state_labels: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return self.n_states

    def run(self, player1_moves, steps: int) -> list[int]:
        """Play *steps* moves from ``start``; Player 1's choices are taken
        from the callable ``player1_moves(v) -> w``."""
        s, v = self.initial, self.start
        play = [v]
        for _ in range(steps):
            w = self.output.get((s, v))
            if w is None:
                w = player1_moves(v)
            s = self.transition[(s, v)]
            v = w
            play.append(v)
        return play


def extract_strategy(sim: SimulatedGame, solve: SolveResult, start: int = 0) -> MealyStrategy:
    """Controller for Player 0 from *start*, built from the positional
    strategy ``solve.strategy0`` on ``sim.product``.

    Only memory contents met by strategy-consistent plays from *start* become
    states; they are numbered in breadth-first order.
    """
    x0 = sim.initial_states.get(start)
    if x0 is None or x0 not in solve.winning0:
        raise NotWinning(f"vertex {start} is not won by Player 0")
    arena = sim.product.arena
    mem_of = sim.memory_of
    state: dict[int, int] = {}
    labels: list[str] = []

    def sid(m):
        if m not in state:
            state[m] = len(state)
            labels.append(sim.memory_label(m))
        return state[m]

    sid(mem_of[x0][0])
    transition: dict[tuple[int, int], int] = {}
    output: dict[tuple[int, int], int] = {}
    seen = {x0}
    queue = deque([x0])
    while queue:
        x = queue.popleft()
        m, v = mem_of[x]
        if arena.owners[x] == Player.P0:
            y = solve.strategy0.get(x)
            if y is None:
                raise NotWinning(f"no strategy move at expanded vertex {x}")
            targets = [y]
            output[(state[m], v)] = mem_of[y][1]
        else:
            targets = list(arena.succ[x])
        transition[(state[m], v)] = sid(mem_of[targets[0]][0])
        for y in targets:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return MealyStrategy(len(state), 0, transition, output, start, labels)


def minimize_mealy(m: MealyStrategy) -> MealyStrategy:
    """Merge states that behave identically on every input.

    Two states are distinguished when they differ in output, in which
    inputs they are defined on, or in the class of some successor.  Entries
    absent from one state and present in the other count as a difference,
    so the result is minimal among machines with the same domain.
    """
    inputs: list[dict[int, tuple[int | None, int]]] = [dict() for _ in range(m.n_states)]
    for (s, v), t in m.transition.items():
        inputs[s][v] = (m.output.get((s, v)), t)
    block = [0] * m.n_states
    n_blocks = 1
    while True:
        keys: dict[tuple, int] = {}
        new = []
        for s in range(m.n_states):
            sig = (block[s], tuple(sorted((v, o, block[t]) for v, (o, t) in inputs[s].items())))
            new.append(keys.setdefault(sig, len(keys)))
        block = new
        if len(keys) == n_blocks:
            break
        n_blocks = len(keys)
    # renumber breadth-first from the initial state
    order: dict[int, int] = {block[m.initial]: 0}
    rep: dict[int, int] = {block[m.initial]: m.initial}
    queue = deque([m.initial])
    while queue:
        s = queue.popleft()
        for v in sorted(inputs[s]):
            t = inputs[s][v][1]
            if block[t] not in order:
                order[block[t]] = len(order)
                rep[block[t]] = t
                queue.append(t)
    transition, output = {}, {}
    for b, s in rep.items():
        for v, (o, t) in inputs[s].items():
            transition[(order[b], v)] = order[block[t]]
            if o is not None:
                output[(order[b], v)] = o
    labels = [""] * len(order)
    for b, s in rep.items():
        labels[order[b]] = m.state_labels[s] if m.state_labels else str(s)
    return MealyStrategy(len(order), 0, transition, output, m.start, labels)


class Verdict(NamedTuple):
    ok: bool
    counterexample: Lasso | None = None


def _product(game: Game, m: MealyStrategy, start: int, extra=None):
    """Reachable graph of (controller state, vertex[, extra memory]) with
    Player 0's moves fixed by *m*."""
    arena = game.arena
    node0 = (m.initial, start) if extra is None else (m.initial, start, extra[0])
    index = {node0: 0}
    nodes = [node0]
    succ: list[list[int]] = []
    i = 0
    while i < len(nodes):
        node = nodes[i]
        s, v = node[0], node[1]
        t = m.transition.get((s, v))
        if t is None:
            raise PartialStrategy(f"no transition for state {s} at vertex {v}")
        if arena.owners[v] == Player.P0:
            w = m.output.get((s, v))
            if w is None:
                raise PartialStrategy(f"no move for state {s} at vertex {v}")
            if w not in arena.succ[v]:
                raise PartialStrategy(f"move {v}->{w} is not an edge")
            targets = [w]
        else:
            targets = list(arena.succ[v])
        out = []
        for w in targets:
            nxt = (t, w) if extra is None else (t, w, extra[1](node[2], v))
            j = index.get(nxt)
            if j is None:
                j = index[nxt] = len(nodes)
                nodes.append(nxt)
            out.append(j)
        succ.append(out)
        i += 1
    return nodes, succ


def _lasso(nodes, succ, comp, node, must_visit=None) -> Lasso:
    stem = path_to(0, node, succ.__getitem__)
    loop = cycle_through(node, succ.__getitem__, set(comp), must_visit)
    return Lasso(tuple(nodes[x][1] for x in stem[:-1]), tuple(nodes[x][1] for x in loop))


def _bad_cycle(nodes, succ, allowed, witness) -> Lasso | None:
    """A reachable cycle inside *allowed* through a node satisfying *witness*."""
    for comp in sccs(len(nodes), succ.__getitem__, allowed):
        hit = next((x for x in comp if witness(x)), None)
        if hit is not None:
            return _lasso(nodes, succ, comp, hit)
    return None


def verify_strategy(game: Game, m: MealyStrategy, start: int | None = None) -> Verdict:
    """Check that every play from *start* consistent with *m* is won by
    Player 0; otherwise return a losing play as a lasso of vertices."""
    if start is None:
        start = m.start
    cond = game.condition
    if isinstance(cond, RequestResponse):
        k = len(cond.pairs)
        req, resp = _memberships(cond.pairs, len(game.arena))
        s0 = RrMemory(frozenset(), 1, 0)
        nodes, succ = _product(game, m, start,
                               (s0, lambda mem, v: rr_memory_update(mem, k, req[v], resp[v])))
        # the flag marks a completed sweep over all pairs
        allowed = [x for x, node in enumerate(nodes) if node[2].flag == 0]
        bad = _bad_cycle(nodes, succ, allowed, lambda x: True)
        return Verdict(bad is None, bad)
    nodes, succ = _product(game, m, start)
    vert = [node[1] for node in nodes]
    everything = range(len(nodes))
    if isinstance(cond, Buchi):
        allowed = [x for x in everything if vert[x] not in cond.final]
        bad = _bad_cycle(nodes, succ, allowed, lambda x: True)
    elif isinstance(cond, Parity):
        colors = [cond.colors[v] for v in vert]
        bad = None
        for d in sorted({c for c in colors if c % 2}):
            if cond.polarity is Polarity.MAX_EVEN:
                allowed = [x for x in everything if colors[x] <= d]
            else:
                allowed = [x for x in everything if colors[x] >= d]
            bad = _bad_cycle(nodes, succ, allowed, lambda x: colors[x] == d)
            if bad:
                break
    elif isinstance(cond, Streett):
        bad = None
        for e, f in cond.pairs:
            allowed = [x for x in everything if vert[x] not in e]
            bad = _bad_cycle(nodes, succ, allowed, lambda x: vert[x] in f)
            if bad:
                break
    else:
        raise WrongConditionType(f"unknown condition {cond!r}")
    return Verdict(bad is None, bad)


def mealy_to_dict(m: MealyStrategy, game: Game | None = None) -> dict:
    name = (lambda v: game.arena.name(v)) if game is not None else str
    rows = []
    for (s, v), t in sorted(m.transition.items()):
        row = {"state": s, "input": v, "next": t}
        if (s, v) in m.output:
            row["output"] = m.output[(s, v)]
        if game is not None:
            row["input_label"] = name(v)
        rows.append(row)
    return {"states": [{"id": i, "memory": lab} for i, lab in enumerate(m.state_labels)]
            or [{"id": i} for i in range(m.n_states)],
            "initial": m.initial, "start": m.start, "transitions": rows}


def mealy_from_dict(data: dict) -> MealyStrategy:
    transition, output = {}, {}
    for row in data["transitions"]:
        transition[(row["state"], row["input"])] = row["next"]
        if "output" in row:
            output[(row["state"], row["input"])] = row["output"]
    states = data["states"]
    labels = [s.get("memory", str(s["id"])) for s in states]
    return MealyStrategy(len(states), data["initial"], transition, output,
                         data.get("start", 0), labels)


def dump_mealy(m: MealyStrategy, game: Game | None = None) -> str:
    return json.dumps(mealy_to_dict(m, game), indent=1)


def mealy_to_dot(m: MealyStrategy, game: Game | None = None) -> str:
    name = (lambda v: game.arena.name(v)) if game is not None else str
    lines = ["digraph controller {", "  rankdir=LR;", '  start [shape=point, label=""];']
    for s in range(m.n_states):
        label = m.state_labels[s] if m.state_labels else str(s)
        lines.append(f'  {s} [label="{s}: {label}", shape=circle];')
    lines.append(f"  start -> {m.initial};")
    edges: dict[tuple[int, int], list[str]] = {}
    for (s, v), t in sorted(m.transition.items()):
        text = name(v)
        if (s, v) in m.output:
            text += f"/{name(m.output[(s, v)])}"
        edges.setdefault((s, t), []).append(text)
    for (s, t), texts in sorted(edges.items()):
        lines.append(f'  {s} -> {t} [label="{", ".join(texts)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
