"""Delayed simulation on deterministic Buchi game automata.

On deterministic automata delayed simulation equivalence coincides with
direct bisimulation of the closed automaton, which is plain partition
refinement.
"""
from __future__ import annotations

from dataclasses import dataclass

from .automaton import GameAutomaton, MemoryPartition, closure, memory_partition


@dataclass
class StatePartition:
    blocks: list[list[int]]
    block_of: list[int]

    def __len__(self) -> int:
        return len(self.blocks)

    def same(self, p: int, q: int) -> bool:
        return self.block_of[p] == self.block_of[q]


def _canonical(block_of: list[int]) -> StatePartition:
    """Renumber blocks by the smallest state they contain."""
    renum: dict[int, int] = {}
    out = []
    for b in block_of:
        if b not in renum:
            renum[b] = len(renum)
        out.append(renum[b])
    blocks: list[list[int]] = [[] for _ in renum]
    for q, b in enumerate(out):
        blocks[b].append(q)
    return StatePartition(blocks, out)


def refine(aut: GameAutomaton, initial_block: list) -> StatePartition:
    """Coarsest congruence refining *initial_block* (Hopcroft's worklist).

    Missing letters go to the sink, so the transition function is total.
    """
    n = len(aut)
    letters = range(aut.n_letters)
    # inverse transition lists, one per letter
    pred: list[dict[int, list[int]]] = [dict() for _ in letters]
    for q in range(n):
        row = aut.trans[q] if q != aut.sink else {}
        for a in letters:
            t = row.get(a, aut.sink)
            pred[a].setdefault(t, []).append(q)

    keys: dict = {}
    block_of = [0] * n
    for q in range(n):
        block_of[q] = keys.setdefault(initial_block[q], len(keys))
    blocks: list[set[int]] = [set() for _ in keys]
    for q in range(n):
        blocks[block_of[q]].add(q)

    work = [(b, a) for b in range(len(blocks)) for a in letters]
    pending = set(work)
    while work:
        item = work.pop()
        pending.discard(item)
        b, a = item
        touched: dict[int, list[int]] = {}
        for t in list(blocks[b]):
            for q in pred[a].get(t, ()):
                touched.setdefault(block_of[q], []).append(q)
        for c, hit in touched.items():
            if len(hit) == len(blocks[c]):
                continue
            hit_set = set(hit)
            rest = blocks[c] - hit_set
            small, large = (hit_set, rest) if len(hit_set) <= len(rest) else (rest, hit_set)
            new = len(blocks)
            blocks[c] = large
            blocks.append(small)
            for q in small:
                block_of[q] = new
            for letter in letters:
                if (new, letter) not in pending:
                    pending.add((new, letter))
                    work.append((new, letter))
    return _canonical(block_of)


def direct_bisim(aut: GameAutomaton) -> StatePartition:
    """Direct bisimulation: same finality now and after every letter.

    The sink is kept apart from everything else: a state that lacks a letter
    cannot answer a move that the other state can make.
    """
    if not aut.is_buchi:
        raise TypeError("direct_bisim needs a Buchi automaton")
    key = [("sink",) if q == aut.sink else (q in aut.final,) for q in range(len(aut))]
    return refine(aut, key)


def delayed_sim_partition(aut: GameAutomaton) -> StatePartition:
    return direct_bisim(closure(aut))


def memory_equivalence_buchi(aut: GameAutomaton,
                             states: StatePartition | None = None) -> MemoryPartition:
    if states is None:
        states = delayed_sim_partition(aut)
    return memory_partition(aut, states.block_of)
