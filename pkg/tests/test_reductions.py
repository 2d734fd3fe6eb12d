import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memred.arena import (Arena, Buchi, Game, Player, RequestResponse, Streett,
                          WrongConditionType, make_pairs, play_satisfies)
from memred.generators import gen_random, gen_rr, gen_streett
from memred.reductions import (IarRecord, RrMemory, iar_color, iar_update, rr_memory_update,
                               rr_to_buchi, simulate, streett_to_parity, transform_lasso,
                               transform_play)
from memred.solvers import solve_buchi, solve_parity


def rr_oracle(open_, i, k, req, resp):
    """The three update formulas, written out independently."""
    new_open = set(open_)
    new_open |= set(req)
    new_open -= set(resp)
    new_i = i if i in new_open else (i % k) + 1
    wrapped = i == k and new_i == 1 and i not in new_open
    return new_open, new_i, int(wrapped)


def test_rr_update_examples():
    assert rr_memory_update(RrMemory(frozenset({1}), 1, 0), 2, [], [1]) == RrMemory(frozenset(), 2, 0)
    assert rr_memory_update(RrMemory(frozenset(), 2, 0), 2, [], []) == RrMemory(frozenset(), 1, 1)
    assert rr_memory_update(RrMemory(frozenset({1}), 1, 0), 1, [1], []) == RrMemory(frozenset({1}), 1, 0)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 5).flatmap(lambda k: st.tuples(
    st.just(k), st.sets(st.integers(1, k)), st.integers(1, k), st.integers(0, 1),
    st.sets(st.integers(1, k)), st.sets(st.integers(1, k)))))
def test_rr_update_matches_formulas(data):
    k, open_, i, b, req, resp = data
    got = rr_memory_update(RrMemory(frozenset(open_), i, b), k, req, resp)
    new_open, new_i, new_b = rr_oracle(open_, i, k, req, resp)
    assert (set(got.open), got.marker, got.flag) == (new_open, new_i, new_b)
    assert 1 <= got.marker <= k


def test_rr_single_vertex_trace():
    game = Game(Arena.from_edges([0], [(0, 0)]), RequestResponse(make_pairs([((), ())])))
    sim = rr_to_buchi(game)
    assert sim.memories == [RrMemory(frozenset(), 1, 0), RrMemory(frozenset(), 1, 1)]
    assert sim.memory_of == [(0, 0), (1, 0)]
    assert sim.product.arena.succ == ((1,), (1,))
    assert sim.product.condition.final == frozenset({1})


def test_rr_gk_player0_wins():
    sim = rr_to_buchi(gen_rr(3))
    assert sim.initial_states[0] in solve_buchi(sim.product).winning0


def test_rr_wrong_condition():
    with pytest.raises(WrongConditionType):
        rr_to_buchi(gen_streett(1))
    with pytest.raises(WrongConditionType):
        streett_to_parity(gen_rr(1))


def test_rr_full_memory():
    game = gen_rr(1)
    sim = rr_to_buchi(game, full_memory=True)
    k = len(game.condition.pairs)
    assert len(sim.memories) == 2 ** k * k * 2
    assert len(sim.product.arena) == len(sim.memories) * len(game.arena)


def test_iar_update_examples():
    # two indices, index 2 is the universal pair
    rec = IarRecord((1, 2), 1, 1)
    assert iar_update(rec, in_e={1, 2}, in_f={2}) == IarRecord((1, 2), 2, 2)
    assert iar_update(rec, in_e={2}, in_f={2}) == IarRecord((2, 1), 2, 1)


def test_iar_stable_shift():
    rec = IarRecord((3, 1, 4, 2, 5), 1, 1)
    out = iar_update(rec, in_e={4, 5}, in_f={5})
    assert out.perm == (4, 5, 3, 1, 2)
    assert out.e == 5 and out.f == 2


def test_iar_colors():
    assert iar_color(IarRecord((1, 2), 2, 1)) == 4
    assert iar_color(IarRecord((1, 2), 1, 2)) == 3


@settings(max_examples=300, deadline=None)
@given(st.permutations(list(range(1, 7))), st.sets(st.integers(1, 5)), st.sets(st.integers(1, 5)))
def test_iar_update_valid(perm, in_e, in_f):
    rec = IarRecord(tuple(perm), 1, 1)
    out = iar_update(rec, in_e | {6}, in_f | {6})
    assert sorted(out.perm) == list(range(1, 7))
    assert 1 <= out.e <= 6 and 1 <= out.f <= 6
    untouched = [i for i in perm if i not in in_e | {6}]
    assert [i for i in out.perm if i in untouched] == untouched


def test_streett_universal_pair_appended_once():
    game = gen_streett(1)
    sim = streett_to_parity(game)
    assert len(sim.memories[0].perm) == len(game.condition.pairs) == 3
    sim2 = streett_to_parity(Game(game.arena, Streett(game.condition.pairs[:-1])))
    assert len(sim2.memories[0].perm) == 3


@pytest.mark.parametrize("k", [1, 2, 3])
def test_streett_gk_every_play_wins(k):
    game = gen_streett(k)
    sim = streett_to_parity(game)
    prod = sim.product
    # hand every vertex to Player 1: she still cannot win anywhere
    hostile = Game(Arena(tuple(Player.P1 for _ in prod.arena.owners), prod.arena.succ),
                   prod.condition)
    assert solve_parity(hostile).winning0 == frozenset(range(len(prod.arena)))
    top = 4 * k + 2
    for x, (m, v) in enumerate(sim.memory_of):
        if v == 0 and m != 0:
            assert prod.condition.colors[x] == top


def random_play(rng, arena, start, length):
    play = [start]
    for _ in range(length):
        play.append(rng.choice(arena.succ[play[-1]]))
    return play


def random_lasso(rng, arena, start):
    play, seen = [start], {start: 0}
    while True:
        w = rng.choice(arena.succ[play[-1]])
        # close on a revisit; past the length cap, close on the first one
        if w in seen and (len(play) > 12 or rng.random() < 0.5):
            i = seen[w]
            return play[:i], play[i:]
        seen[w] = len(play)
        play.append(w)


GAMES = [gen_rr(1), gen_rr(2), gen_streett(1), gen_streett(2)] + [
    gen_random(kind, rng_n, k, seed)
    for kind in ("rr", "streett") for seed in range(12)
    for rng_n, k in [(3 + seed % 5, 1 + seed % 2)]]


@pytest.mark.parametrize("game", GAMES, ids=lambda g: g.name)
def test_play_transformation_bijection(game):
    rng = random.Random(0)
    sim = simulate(game)
    arena = game.arena
    for _ in range(30):
        play = random_play(rng, arena, rng.randrange(len(arena)), 10)
        path = transform_play(sim, play)
        assert [sim.memory_of[x][1] for x in path] == play
        for x, y in zip(path, path[1:]):
            assert y in sim.product.arena.succ[x]
    # every expanded path from an initial state comes from exactly one play
    for _ in range(30):
        v = rng.randrange(len(arena))
        walk = random_play(rng, sim.product.arena, sim.initial_states[v], 10)
        play = [sim.memory_of[x][1] for x in walk]
        for a, b in zip(play, play[1:]):
            assert arena.has_edge(a, b)
        assert transform_play(sim, play) == walk


@pytest.mark.parametrize("game", GAMES, ids=lambda g: g.name)
def test_winning_equivalence_on_lassos(game):
    rng = random.Random(1)
    sim = simulate(game)
    for _ in range(60):
        prefix, cycle = random_lasso(rng, game.arena, rng.randrange(len(game.arena)))
        xp, xc = transform_lasso(sim, prefix, cycle)
        assert play_satisfies(game.condition, prefix, cycle) == \
            play_satisfies(sim.product.condition, xp, xc)


@pytest.mark.parametrize("game", [gen_rr(2), gen_rr(3)] + [
    gen_random("rr", 6, 3, s) for s in range(5)], ids=lambda g: g.name)
def test_rr_cyclic_sweep(game):
    rng = random.Random(2)
    sim = rr_to_buchi(game)
    k = len(game.condition.pairs)
    for _ in range(20):
        walk = random_play(rng, sim.product.arena, sim.initial_states[0], 200)
        mems = [sim.memories[sim.memory_of[x][0]] for x in walk]
        flags = [t for t, m in enumerate(mems) if m.flag == 1]
        for a, b in zip(flags, flags[1:]):
            assert {m.marker for m in mems[a:b]} == set(range(1, k + 1))


def test_expansion_numbering_is_breadth_first():
    game = gen_rr(2)
    sim = rr_to_buchi(game)
    n = len(game.arena)
    assert sim.memory_of[:n] == [(0, v) for v in range(n)]
    again = rr_to_buchi(game)
    assert again.memory_of == sim.memory_of and again.memories == sim.memories


def test_memory_successor_unique():
    for game in (gen_rr(2), gen_streett(2)):
        sim = simulate(game)
        for x, targets in enumerate(sim.product.arena.succ):
            assert len({sim.memory_of[y][0] for y in targets}) == 1
            v = sim.memory_of[x][1]
            assert sorted(sim.memory_of[y][1] for y in targets) == sorted(game.arena.succ[v])
            assert sim.product.arena.owners[x] == game.arena.owners[v]


def test_trivial_simulation_for_buchi():
    game = gen_random("buchi", 5, seed=4)
    sim = simulate(game)
    assert sim.product is game
    assert len(sim.memories) == 1
    assert isinstance(sim.product.condition, Buchi)
    assert list(itertools.islice(sim.initial_states.items(), 2)) == [(0, 0), (1, 1)]
