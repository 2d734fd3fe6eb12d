"""Example game families and random instances.

``gen_rr(k)`` and ``gen_streett(k)`` build the diamond-chain games on which
Player 0 has to copy Player 1's k binary choices.  Both have ``6k + 2``
vertices: Player 1's chain (``k`` diamonds joined by ``k - 1`` connectors,
starting at the first vertex), Player 0's mirrored chain, then ``x`` and
``y``.
"""
from __future__ import annotations

import random

from .arena import (Arena, Buchi, Game, Parity, Player, Polarity, RequestResponse,
                    Streett, make_pairs, validate)


def _diamond_chains(k: int, first: str, branch, second: str, joint: str):
    """Shared skeleton; returns owners, edges, labels and vertex handles."""
    if k < 1:
        raise ValueError("k must be at least 1")
    owners: list[Player] = []
    labels: list[str] = []
    edges: list[tuple[int, int]] = []

    def add(label, owner):
        owners.append(owner)
        labels.append(label)
        return len(owners) - 1

    def chain(side, head_label, head_owner, link, prev=None):
        head = add(head_label, head_owner)
        if prev is not None:
            for p in prev:
                edges.append((p, head))
        ups, downs = [], []
        node = head
        for i in range(1, k + 1):
            up = add(branch(side, i, True), Player.P1)
            down = add(branch(side, i, False), Player.P1)
            edges.extend([(node, up), (node, down)])
            ups.append(up)
            downs.append(down)
            if i < k:
                node = add(f"{link}{i + 1}", head_owner)
                edges.extend([(up, node), (down, node)])
        return head, ups, downs

    v, p_up, p_down = chain(0, first, Player.P1, joint[0])
    w, r_up, r_down = chain(1, second, Player.P0, joint[1], prev=[p_up[-1], p_down[-1]])
    x = add("x", Player.P1)
    y = add("y", Player.P1)
    edges += [(r_up[-1], x), (r_down[-1], x), (x, y)]
    return owners, edges, labels, dict(v=v, w=w, x=x, y=y, p_up=p_up, p_down=p_down,
                                       r_up=r_up, r_down=r_down)


def gen_rr(k: int) -> Game:
    """Request-response family: pair 1 is (P0, R0) = ({v}, {w, y}), then for
    each i the pairs (P_i, R_i) and (P'_i, R'_i).  ``y`` loops and answers
    every request."""

    def branch(side, i, up):
        if side == 0:
            return f"P{i}" if up else f"P'{i}"
        return f"R{i}" if up else f"R'{i}"

    owners, edges, labels, h = _diamond_chains(k, "v", branch, "w", ("c", "d"))
    y = h["y"]
    edges.append((y, y))
    pairs = [({h["v"]}, {h["w"], y})]
    for i in range(k):
        pairs.append(({h["p_up"][i]}, {h["r_up"][i], y}))
        pairs.append(({h["p_down"][i]}, {h["r_down"][i], y}))
    arena = Arena.from_edges(owners, edges, labels)
    game = Game(arena, RequestResponse(make_pairs(pairs)), f"rr{k}")
    validate(game)
    return game


def streett_index(i: int) -> int:
    """Internal 1-based pair index of the signed index +i / -i."""
    return 2 * i - 1 if i > 0 else -2 * i


def gen_streett(k: int) -> Game:
    """Streett family with pairs (E_1,F_1), (E_-1,F_-1), ..., (V,V).

    On Player 1's side the upper vertex of diamond i lies in E_-i and F_i,
    the lower one in E_i and F_-i; Player 0's side is mirrored.  ``y`` lies
    in every E-set and leads back to the first vertex.
    """

    def branch(side, i, up):
        if side == 0:
            return f"F{i}" if up else f"F-{i}"
        return f"E{i}" if up else f"E-{i}"

    owners, edges, labels, h = _diamond_chains(k, "v1", branch, "w1", ("v", "w"))
    n = len(owners)
    edges.append((h["y"], h["v"]))
    e_sets: list[set[int]] = [set() for _ in range(2 * k)]
    f_sets: list[set[int]] = [set() for _ in range(2 * k)]

    def put(vertex, e_idx, f_idx):
        e_sets[streett_index(e_idx) - 1].add(vertex)
        f_sets[streett_index(f_idx) - 1].add(vertex)

    for i in range(1, k + 1):
        put(h["p_up"][i - 1], -i, i)
        put(h["p_down"][i - 1], i, -i)
        put(h["r_up"][i - 1], i, -i)
        put(h["r_down"][i - 1], -i, i)
    for e in e_sets:
        e.add(h["y"])
    pairs = list(zip(e_sets, f_sets)) + [(set(range(n)), set(range(n)))]
    arena = Arena.from_edges(owners, edges, labels)
    game = Game(arena, Streett(make_pairs(pairs)), f"streett{k}")
    validate(game)
    return game


def random_arena(rng: random.Random, n: int, max_out: int = 3) -> Arena:
    owners = [rng.choice((Player.P0, Player.P1)) for _ in range(n)]
    edges = []
    for v in range(n):
        for w in rng.sample(range(n), rng.randint(1, min(max_out, n))):
            edges.append((v, w))
    return Arena.from_edges(owners, edges)


def _random_subset(rng: random.Random, n: int, p: float) -> set[int]:
    return {v for v in range(n) if rng.random() < p}


def gen_random(kind: str, n: int, k: int = 1, seed: int | None = None,
               max_color: int = 3) -> Game:
    """Random game of the given condition type ("rr", "streett", "buchi",
    "parity"); *k* is the pair count for rr/streett."""
    rng = random.Random(seed)
    arena = random_arena(rng, n)
    if kind in ("rr", "streett"):
        pairs = [(_random_subset(rng, n, 0.3), _random_subset(rng, n, 0.3)) for _ in range(k)]
        cls = RequestResponse if kind == "rr" else Streett
        cond = cls(make_pairs(pairs))
    elif kind == "buchi":
        cond = Buchi(frozenset(_random_subset(rng, n, 0.4)))
    elif kind == "parity":
        cond = Parity(tuple(rng.randint(0, max_color) for _ in range(n)), Polarity.MAX_EVEN)
    else:
        raise ValueError(f"unknown game kind {kind!r}")
    game = Game(arena, cond, f"random-{kind}-{seed}")
    validate(game)
    return game
