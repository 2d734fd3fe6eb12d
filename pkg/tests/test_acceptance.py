"""Acceptance criteria 1-8, one pass/fail line each.

Every criterion runs at its stated tolerance; the lines are printed as the
tests run and repeated in the terminal summary.
"""
import itertools
import json
import random
import time

from memred.arena import Buchi, Game, Parity, Polarity
from memred.automaton import closure, det_omega_equiv, game_to_automaton, to_min_parity
from memred.bisim import delayed_sim_partition
from memred.cli import main
from memred.generators import gen_random, gen_streett, random_arena
from memred.pipeline import PipelineOptions, reduce_game
from memred.reductions import simulate, trivial_simulation
from memred.rhdelay import CHECK, normalize_colors, pm_case, reward_key, reward_leq
from memred.solvers import solve_buchi, solve_parity
from memred.strategy import extract_strategy, verify_strategy

from acceptance_log import record
from oracles import delayed_sim_game, positional_parity_winners, random_buchi_automaton

NO_CHECK = PipelineOptions(check_language=False)


def compare_json(tmp_path, family, k, capsys):
    """Generate a family member through the CLI and run `compare` on it."""
    path = tmp_path / f"{family}{k}.json"
    assert main(["gen", family, str(k), "-o", str(path)]) == 0
    capsys.readouterr()
    t0 = time.perf_counter()
    code = main(["compare", str(path), "--json-report"])
    elapsed = time.perf_counter() - t0
    (report,) = json.loads(capsys.readouterr().out)["reports"]
    return code, report, elapsed


def random_rr_games():
    for seed in range(200):
        rng = random.Random(1000 + seed)
        yield gen_random("rr", rng.randint(2, 8), rng.randint(1, 2), 1000 + seed)


def random_streett_games():
    for seed in range(100):
        rng = random.Random(2000 + seed)
        yield gen_random("streett", rng.randint(2, 6), rng.randint(1, 2), 2000 + seed)


def test_criterion_1_rr_gap(tmp_path, capsys):
    details, ok = [], True
    for k in (2, 3, 4):
        code, r, secs = compare_json(tmp_path, "rr", k, capsys)
        good = (code == 0 and r["reduced_memory"] == 1 and r["baseline_minimized"] >= 2 ** k
                and r["baseline_verified"] and r["reduced_verified"])
        ok &= good
        details.append(f"k={k}: reduced {r['reduced_memory']}, baseline "
                       f"{r['baseline_minimized']} >= {2 ** k}, {secs:.2f}s")
    with capsys.disabled():
        record("1", ok, "; ".join(details))
    assert ok


def test_criterion_2_streett_reduction(tmp_path, capsys):
    details, ok = [], True
    for k in (1, 2, 3):
        code, r, secs = compare_json(tmp_path, "streett", k, capsys)
        good = code == 0 and r["reduced_memory"] == 1 and r["reduced_verified"]
        if r["bound_status"] != "bound check skipped":
            good &= r["bound_status"] == "bound met"
        ok &= good
        details.append(f"k={k}: reduced {r['reduced_memory']}, {r['bound_status']}, {secs:.2f}s")
    with capsys.disabled():
        record("2", ok, "; ".join(details))
    assert ok


def test_criterion_3_language_preservation(capsys):
    failures, counts = [], {"rr": 0, "streett": 0}
    for game in itertools.chain(random_rr_games(), random_streett_games()):
        red = reduce_game(game, NO_CHECK)
        counts["rr" if game.name.startswith("random-rr") else "streett"] += 1
        if not det_omega_equiv(red.automaton, red.quotient).equal:
            failures.append(game.name)
    ok = not failures and counts == {"rr": 200, "streett": 100}
    with capsys.disabled():
        record("3", ok, f"{counts['rr']} rr + {counts['streett']} streett quotients "
               f"equivalent; failures: {failures or 'none'}")
    assert ok


def oracle_delayed(aut):
    game, initial = delayed_sim_game(aut)
    won = solve_buchi(game).winning0
    rel = {pair for pair, x in initial.items() if x in won}
    return {(p, q) for p, q in rel if (q, p) in rel}


def test_criterion_4_delayed_simulation_oracle(capsys):
    mismatches = 0
    for seed in range(200):
        rng = random.Random(3000 + seed)
        aut = random_buchi_automaton(rng, rng.randint(1, 8), rng.randint(1, 4))
        part = delayed_sim_partition(aut)
        states = [q for q in range(len(aut)) if q != aut.sink]
        mine = {(p, q) for p in states for q in states if part.same(p, q)}
        mismatches += mine != oracle_delayed(aut)
    with capsys.disabled():
        record("4", mismatches == 0, f"200 automata, {mismatches} partition mismatches")
    assert mismatches == 0


def test_criterion_5_reward_and_pm(capsys):
    colors = range(13)
    problems = []
    chain = sorted(colors, key=reward_key)
    if chain != [0, 2, 4, 6, 8, 10, 12, 11, 9, 7, 5, 3, 1]:
        problems.append("chain")
    for m, n in itertools.product(colors, repeat=2):
        expected = chain.index(m) <= chain.index(n)
        if reward_leq(m, n) != expected:
            problems.append(f"leq({m},{n})")
    for a, b, c in itertools.product(colors, repeat=3):
        if reward_leq(a, b) and reward_leq(b, c) and not reward_leq(a, c):
            problems.append(f"transitivity {a},{b},{c}")

    def prec(a, b):
        return a != b and reward_leq(a, b)

    for i, j in itertools.product(colors, repeat=2):
        for k in list(colors) + [CHECK]:
            if k == CHECK:
                fired = [prec(i, j), not prec(i, j)]
            else:
                fired = [
                    prec(i, j),
                    not prec(i, j) and i % 2 == 1 and i <= k and (j % 2 == 1 or k < j),
                    not prec(i, j) and j % 2 == 0 and j <= k and (i % 2 == 0 or k < i),
                    i % 2 == 1 and j % 2 == 0 and i <= k and j <= k,
                ]
                fired.append(not any(fired))
            if sum(fired) != 1:
                problems.append(f"guards ({i},{j},{k})")
            case, _ = pm_case(i, j, k)
            want = fired.index(True) + (1 if k == CHECK else 3)
            if case != want:
                problems.append(f"case ({i},{j},{k}) {case} != {want}")
            if k != CHECK and (case == 7) != (reward_leq(j, i) and k < i and k < j):
                problems.append(f"case vii ({i},{j},{k})")
    ok = not problems
    with capsys.disabled():
        record("5", ok, f"colors 0..12 exhaustive; problems: {problems[:5] or 'none'}")
    assert ok


def verify_all(game, result):
    sim = trivial_simulation(game)
    for v in sorted(result.winning0):
        m = extract_strategy(sim, result, v)
        if not verify_strategy(game, m, v).ok:
            return False
    return True


def test_criterion_6_solver_cross_checks(capsys):
    bad_buchi = bad_parity = bad_verify = 0
    for seed in range(300):
        rng = random.Random(4000 + seed)
        n = rng.randint(1, 8)
        arena = random_arena(rng, n)
        buchi = Game(arena, Buchi(frozenset(v for v in range(n) if rng.random() < 0.4)))
        polarity = Polarity.MAX_EVEN if rng.random() < 0.5 else Polarity.MIN_EVEN
        parity = Game(arena, Parity(tuple(rng.randint(0, 4) for _ in range(n)), polarity))
        rb = solve_buchi(buchi)
        two = Parity(tuple(2 if v in buchi.condition.final else 1 for v in range(n)))
        bad_buchi += rb.winning0 != solve_parity(Game(arena, two)).winning0
        rp = solve_parity(parity)
        bad_parity += rp.winning0 != positional_parity_winners(parity)
        bad_verify += not verify_all(buchi, rb)
        bad_verify += not verify_all(parity, rp)
    ok = bad_buchi == bad_parity == bad_verify == 0
    with capsys.disabled():
        record("6", ok, f"300 games: buchi/2-color mismatches {bad_buchi}, parity/oracle "
               f"mismatches {bad_parity}, failed strategy checks {bad_verify}")
    assert ok


def test_criterion_7_closure_and_normalization(capsys):
    bad_closure = bad_norm = 0
    for game in random_rr_games():
        aut = game_to_automaton(simulate(game))
        bad_closure += not det_omega_equiv(aut, closure(aut)).equal
    for game in random_streett_games():
        sim = simulate(game)
        aut = to_min_parity(game_to_automaton(sim), 2 * len(sim.memories[0].perm))
        bad_norm += not det_omega_equiv(aut, normalize_colors(aut)).equal
    ok = bad_closure == bad_norm == 0
    with capsys.disabled():
        record("7", ok, f"closure failures {bad_closure}/200, normalization failures "
               f"{bad_norm}/100")
    assert ok


def test_criterion_8_sim_game_vertex_bound(capsys):
    games = [gen_streett(k) for k in (1, 2, 3)] + list(random_streett_games())
    worst, over, sizes = 0.0, [], []
    for game in games:
        t0 = time.perf_counter()
        red = reduce_game(game, NO_CHECK)
        ms = (time.perf_counter() - t0) * 1000
        ratio = red.sim_game_vertices / red.sim_game_bound
        worst = max(worst, ratio)
        if red.sim_game_vertices > red.sim_game_bound:
            over.append(game.name)
        if game.name.startswith("streett"):
            sizes.append(f"{game.name} {red.sim_game_vertices}/{red.sim_game_bound} "
                         f"({ms:.0f} ms)")
    ok = not over
    with capsys.disabled():
        record("8", ok, f"{len(games)} sim games within sum|S_v|^2*(C+1); worst ratio "
               f"{worst:.3f}; " + ", ".join(sizes))
    assert ok
