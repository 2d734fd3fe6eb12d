"""Game automata: the expanded game read as a deterministic omega-automaton
over the original vertices, plus quotienting, Buchi closure and a language
equivalence checker for deterministic Buchi/parity automata.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, NamedTuple, Sequence

from .arena import (Arena, Buchi, Game, Lasso, Parity, Player, Polarity,
                    parity_accepts)
from .graphs import cycle_through, path_to, sccs
from .reductions import SimulatedGame


class IncompatiblePartition(ValueError):
    pass


class AlphabetMismatch(ValueError):
    pass


def worst_color(colors, polarity: Polarity) -> int:
    if polarity is Polarity.MIN_EVEN:
        return 1
    top = max(colors, default=1)
    return top if top % 2 else top + 1


@dataclass(eq=False)
class GameAutomaton:
    """Deterministic automaton over letters ``0..n_letters-1``.

    ``trans[q]`` holds the explicit transitions; a missing letter leads to
    ``sink``, which loops on everything.  Game automata keep the
    memory/vertex states first and put ``initial`` and ``sink`` last.
    """

    n_letters: int
    trans: list[dict[int, int]]
    initial: int
    sink: int
    final: frozenset[int] | None = None
    colors: list[int] | None = None
    polarity: Polarity = Polarity.MAX_EVEN
    owner: list[Player | None] | None = None
    memory_of: list[tuple[int, int] | None] | None = None
    memories: list[Hashable] = field(default_factory=list)
    letter_names: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.trans)

    @property
    def is_buchi(self) -> bool:
        return self.final is not None

    def delta(self, q: int, a: int) -> int:
        if q == self.sink:
            return q
        return self.trans[q].get(a, self.sink)

    def successors(self, q: int) -> list[int]:
        """Explicit (non-sink) successors."""
        return [t for t in self.trans[q].values() if t != self.sink]

    @property
    def game_states(self) -> list[int]:
        return [q for q in range(len(self)) if q not in (self.initial, self.sink)]

    def max_even_colors(self) -> list[int]:
        """Colors under which acceptance is 'maximal recurring color is even'."""
        if self.final is not None:
            return [2 if q in self.final else 1 for q in range(len(self))]
        if self.polarity is Polarity.MAX_EVEN:
            return list(self.colors)
        top = max(self.colors)
        top += top % 2
        return [top - c for c in self.colors]

    def state_name(self, q: int) -> str:
        if q == self.initial:
            return "q0"
        if q == self.sink:
            return "qsink"
        if self.memory_of is None or self.memory_of[q] is None:
            return str(q)
        m, v = self.memory_of[q]
        letter = self.letter_names[v] if self.letter_names else str(v)
        return f"({m}, {letter})"


def game_to_automaton(sim: SimulatedGame) -> GameAutomaton:
    product = sim.product
    arena = product.arena
    n = len(arena)
    initial, sink = n, n + 1
    trans: list[dict[int, int]] = []
    for x in range(n):
        trans.append({sim.memory_of[y][1]: y for y in arena.succ[x]})
    trans.append(dict(sim.initial_states))
    trans.append({})
    src = sim.source.arena
    names = tuple(src.name(v) for v in range(len(src)))
    aut = GameAutomaton(
        n_letters=len(src), trans=trans, initial=initial, sink=sink,
        owner=list(arena.owners) + [None, None],
        memory_of=list(sim.memory_of) + [None, None],
        memories=list(sim.memories), letter_names=names)
    cond = product.condition
    if isinstance(cond, Buchi):
        aut.final = frozenset(cond.final)
    elif isinstance(cond, Parity):
        aut.polarity = cond.polarity
        aut.colors = list(cond.colors) + [0, worst_color(cond.colors, cond.polarity)]
    else:
        raise TypeError("expanded game must carry a Buchi or parity condition")
    return aut


def automaton_to_game(aut: GameAutomaton, name: str = "") -> Game:
    """The automaton game: states of S x V, q0 and qsink dropped."""
    states = aut.game_states
    index = {q: i for i, q in enumerate(states)}
    succ = []
    for q in states:
        succ.append(tuple(index[t] for a, t in sorted(aut.trans[q].items())
                          if t in index))
    labels = tuple(aut.state_name(q) for q in states)
    arena = Arena(tuple(aut.owner[q] for q in states), tuple(succ), labels)
    if aut.is_buchi:
        cond = Buchi(frozenset(index[q] for q in aut.final if q in index))
    else:
        cond = Parity(tuple(aut.colors[q] for q in states), aut.polarity)
    return Game(arena, cond, name)


def simulation_from_automaton(aut: GameAutomaton, source: Game) -> SimulatedGame:
    """Package an automaton game as an expansion of *source* (memory = classes)."""
    game = automaton_to_game(aut, f"{source.name}.reduced")
    states = aut.game_states
    memory_of = [aut.memory_of[q] for q in states]
    s0 = aut.memory_of[next(iter(aut.trans[aut.initial].values()))][0]
    return SimulatedGame(source, game, list(aut.memories), memory_of, s0)


# --- quotienting -----------------------------------------------------------

@dataclass
class MemoryPartition:
    """Equivalence on memory ids; id order is the fixed total order on memory."""

    classes: list[list[int]]
    class_of: list[int]

    @property
    def representative(self) -> list[int]:
        return [members[0] for members in self.classes]

    def __len__(self) -> int:
        return len(self.classes)

    @classmethod
    def identity(cls, n: int) -> "MemoryPartition":
        return cls([[m] for m in range(n)], list(range(n)))


def memory_partition(aut: GameAutomaton, block_of: Sequence[int]) -> MemoryPartition:
    """Merge memory contents whose states agree, vertex by vertex, on the
    state equivalence given by *block_of*.

    A memory content ``s`` is compared at every vertex ``v`` for which
    ``(s, v)`` is materialised.  Contents are scanned in creation order and
    joined to the first class whose members are in the same blocks wherever
    both are materialised, so every class maps each vertex to one block.
    When all of ``S x V`` is materialised this is exactly
    ``s1 ~ s2  iff  (s1, v) ~ (s2, v) for all v``.
    """
    n_mem = len(aut.memories)
    sig: list[dict[int, int]] = [{} for _ in range(n_mem)]
    for q in aut.game_states:
        m, v = aut.memory_of[q]
        sig[m][v] = block_of[q]
    classes: list[list[int]] = []
    class_sig: list[dict[int, int]] = []
    index: dict[tuple, int] = {}
    class_of = [0] * n_mem
    for m in range(n_mem):
        key = tuple(sorted(sig[m].items()))
        c = index.get(key)
        if c is None:
            for i, csig in enumerate(class_sig):
                if all(csig.get(v, b) == b for v, b in sig[m].items()):
                    c = i
                    break
        if c is None:
            c = len(classes)
            classes.append([])
            class_sig.append({})
        classes[c].append(m)
        class_sig[c].update(sig[m])
        index[key] = c
        class_of[m] = c
    return MemoryPartition(classes, class_of)


def quotient(aut: GameAutomaton, part: MemoryPartition,
             state_blocks: Sequence[int] | None = None) -> GameAutomaton:
    """Quotient automaton over memory classes.

    The successor of ``([s], v)`` on ``v'`` is ``([s_min], v')`` where
    ``s_min`` is the least memory (creation order) reached from any member.
    With *state_blocks* (the state equivalence ``part`` came from) the
    construction asserts compatibility, and parity colors are the minimum
    over the representative's block.
    """
    members: dict[tuple[int, int], list[int]] = {}
    order: list[tuple[int, int]] = []
    for q in aut.game_states:
        m, v = aut.memory_of[q]
        key = (part.class_of[m], v)
        if key not in members:
            members[key] = []
            order.append(key)
        members[key].append(q)
    new_id = {key: i for i, key in enumerate(order)}
    n = len(order)
    initial, sink = n, n + 1
    mem_of = aut.memory_of

    def target(key_states, a):
        targets = [aut.trans[q][a] for q in key_states]
        if state_blocks is not None and len({state_blocks[t] for t in targets}) > 1:
            raise IncompatiblePartition(f"successors on letter {a} disagree")
        best = min(targets, key=lambda t: mem_of[t][0])
        m, v = mem_of[best]
        return new_id[(part.class_of[m], v)]

    trans: list[dict[int, int]] = []
    reps: list[int] = []
    for key in order:
        states = sorted(members[key], key=lambda q: mem_of[q][0])
        letters = set(aut.trans[states[0]])
        if any(set(aut.trans[q]) != letters for q in states[1:]):
            raise IncompatiblePartition(f"class members at vertex {key[1]} disagree on moves")
        if state_blocks is not None and len({state_blocks[q] for q in states}) > 1:
            raise IncompatiblePartition(f"class {key[0]} spans several blocks at vertex {key[1]}")
        trans.append({a: target(states, a) for a in sorted(letters)})
        reps.append(states[0])
    s0_class = part.class_of[mem_of[next(iter(aut.trans[aut.initial].values()))][0]]
    trans.append({a: new_id[(s0_class, mem_of[t][1])]
                  for a, t in aut.trans[aut.initial].items()})
    trans.append({})

    out = GameAutomaton(
        n_letters=aut.n_letters, trans=trans, initial=initial, sink=sink,
        polarity=aut.polarity,
        owner=[aut.owner[q] for q in reps] + [None, None],
        memory_of=[key for key in order] + [None, None],
        memories=[aut.memories[m] for m in part.representative],
        letter_names=aut.letter_names)
    if aut.is_buchi:
        final = set()
        for i, key in enumerate(order):
            flags = {q in aut.final for q in members[key]}
            if len(flags) > 1:
                raise IncompatiblePartition(f"class {key[0]} mixes final and non-final states")
            if flags.pop():
                final.add(i)
        out.final = frozenset(final)
    else:
        colors = []
        if state_blocks is not None:
            block_min: dict[int, int] = {}
            for q in aut.game_states:
                b = state_blocks[q]
                block_min[b] = min(block_min.get(b, aut.colors[q]), aut.colors[q])
            colors = [block_min[state_blocks[reps[i]]] for i in range(n)]
        else:
            colors = [min(aut.colors[q] for q in members[key]) for key in order]
        out.colors = colors + [aut.colors[aut.initial], aut.colors[aut.sink]]
    return out


def closure(aut: GameAutomaton) -> GameAutomaton:
    """Grow the Buchi final set: a state all of whose successors are final
    becomes final, until nothing changes.  Transitions into the sink are not
    moves of a play and are ignored."""
    if not aut.is_buchi:
        raise TypeError("closure needs a Buchi automaton")
    n = len(aut)
    pending = [0] * n
    pred: list[list[int]] = [[] for _ in range(n)]
    for q in range(n):
        if q == aut.sink:
            continue
        for t in aut.successors(q):
            pending[q] += 1
            pred[t].append(q)
    final = set(aut.final)
    queue = deque(final)
    while queue:
        t = queue.popleft()
        for q in pred[t]:
            pending[q] -= 1
            if pending[q] == 0 and q not in final:
                final.add(q)
                queue.append(q)
    out = _copy(aut)
    out.final = frozenset(final)
    return out


def to_min_parity(aut: GameAutomaton, top: int | None = None) -> GameAutomaton:
    """Recolor a max-parity automaton as ``c := top - c`` (min-parity).

    *top* must be even and at least the largest color of a game state; an
    even shift keeps every color's parity and reverses their order.
    """
    if aut.is_buchi or aut.polarity is not Polarity.MAX_EVEN:
        raise TypeError("expected a max-parity automaton")
    states = aut.game_states
    if top is None:
        top = max(aut.colors[q] for q in states)
        top += top % 2
    if top % 2:
        raise ValueError("the flip constant must be even")
    colors = list(aut.colors)
    for q in states:
        colors[q] = top - colors[q]
    colors[aut.initial] = 0
    colors[aut.sink] = 1
    out = _copy(aut)
    out.colors = colors
    out.polarity = Polarity.MIN_EVEN
    return out


def _copy(aut: GameAutomaton) -> GameAutomaton:
    return GameAutomaton(
        n_letters=aut.n_letters, trans=aut.trans, initial=aut.initial, sink=aut.sink,
        final=aut.final, colors=None if aut.colors is None else list(aut.colors),
        polarity=aut.polarity, owner=aut.owner, memory_of=aut.memory_of,
        memories=aut.memories, letter_names=aut.letter_names)


# --- runs and language equivalence -----------------------------------------

def run_lasso(aut: GameAutomaton, prefix: Sequence[int], cycle: Sequence[int]):
    """States of the run on ``prefix . cycle^omega`` as (stem, loop)."""
    q = aut.initial
    stem = [q]
    for a in prefix:
        q = aut.delta(q, a)
        stem.append(q)
    seen: dict[int, int] = {}
    starts: list[int] = []
    blocks: list[list[int]] = []
    while q not in seen:
        seen[q] = len(starts)
        starts.append(q)
        block = []
        for a in cycle:
            q = aut.delta(q, a)
            block.append(q)
        blocks.append(block)
    first = seen[q]
    loop = [s for b in blocks[first:] for s in b]
    stem += [s for b in blocks[:first] for s in b]
    return stem, loop


def accepts(aut: GameAutomaton, prefix: Sequence[int], cycle: Sequence[int]) -> bool:
    if not cycle:
        raise ValueError("empty cycle")
    _, loop = run_lasso(aut, prefix, cycle)
    if aut.is_buchi:
        return any(q in aut.final for q in loop)
    return parity_accepts((aut.colors[q] for q in loop), aut.polarity)


class Equivalence(NamedTuple):
    equal: bool
    counterexample: Lasso | None = None


def det_omega_equiv(a: GameAutomaton, b: GameAutomaton) -> Equivalence:
    """Decide ``L(a) == L(b)`` via the product automaton.

    Both acceptance conditions are brought to max-even colors; a
    disagreement is a reachable cycle of the product on which one maximal
    color is even and the other odd.  For each pair of candidate maxima
    ``(alpha, beta)`` the product is cut down to states whose colors do not
    exceed them and searched for an SCC containing both.
    """
    if a.n_letters != b.n_letters:
        raise AlphabetMismatch(f"{a.n_letters} letters vs {b.n_letters}")
    ca, cb = a.max_even_colors(), b.max_even_colors()
    start = (a.initial, b.initial)
    index = {start: 0}
    nodes = [start]
    succ: list[list[tuple[int, int]]] = []
    i = 0
    while i < len(nodes):
        p, q = nodes[i]
        out = []
        for letter in range(a.n_letters):
            nxt = (a.delta(p, letter), b.delta(q, letter))
            j = index.get(nxt)
            if j is None:
                j = index[nxt] = len(nodes)
                nodes.append(nxt)
            out.append((letter, j))
        succ.append(out)
        i += 1
    col_a = [ca[p] for p, _ in nodes]
    col_b = [cb[q] for _, q in nodes]
    targets = [sorted({j for _, j in out}) for out in succ]

    def find(cx, cy):
        for alpha in sorted(set(cx)):
            if alpha % 2:
                continue
            for beta in sorted(set(cy)):
                if beta % 2 == 0:
                    continue
                allowed = [x for x in range(len(nodes)) if cx[x] <= alpha and cy[x] <= beta]
                for comp in sccs(len(nodes), targets.__getitem__, allowed):
                    xa = next((x for x in comp if cx[x] == alpha), None)
                    xb = next((x for x in comp if cy[x] == beta), None)
                    if xa is not None and xb is not None:
                        return xa, xb, set(comp)
        return None

    hit = find(col_a, col_b) or find(col_b, col_a)
    if hit is None:
        return Equivalence(True, None)
    xa, xb, comp = hit
    stem = path_to(0, xa, targets.__getitem__)
    loop = cycle_through(xa, targets.__getitem__, comp, xb) + [xa]

    def letters(path):
        word = []
        for u, w in zip(path, path[1:]):
            word.append(next(l for l, j in succ[u] if j == w))
        return tuple(word)

    lasso = Lasso(letters(stem), letters(loop))
    return Equivalence(False, shrink_counterexample(a, b, lasso))


def shrink_counterexample(a: GameAutomaton, b: GameAutomaton, lasso: Lasso) -> Lasso:
    def bad(prefix, cycle):
        return accepts(a, prefix, cycle) != accepts(b, prefix, cycle)

    prefix, cycle = list(lasso.prefix), list(lasso.cycle)
    assert bad(prefix, cycle), "counterexample does not separate the automata"
    i = 0
    while i < len(prefix):
        trial = prefix[:i] + prefix[i + 1:]
        if bad(trial, cycle):
            prefix = trial
        else:
            i += 1
    i = 0
    while i < len(cycle) and len(cycle) > 1:
        trial = cycle[:i] + cycle[i + 1:]
        if bad(prefix, trial):
            cycle = trial
        else:
            i += 1
    return Lasso(tuple(prefix), tuple(cycle))


def automaton_to_dot(aut: GameAutomaton) -> str:
    lines = ["digraph automaton {", "  rankdir=LR;", '  start [shape=point, label=""];']
    for q in range(len(aut)):
        label = aut.state_name(q)
        if aut.colors is not None and q not in (aut.initial, aut.sink):
            label += f" c={aut.colors[q]}"
        shape = "doublecircle" if aut.is_buchi and q in aut.final else "circle"
        lines.append(f'  {q} [label="{label}", shape={shape}];')
    lines.append(f"  start -> {aut.initial};")
    for q in range(len(aut)):
        for letter, t in sorted(aut.trans[q].items()):
            name = aut.letter_names[letter] if aut.letter_names else str(letter)
            lines.append(f'  {q} -> {t} [label="{name}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
