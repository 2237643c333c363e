import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dqcpart.hypergraph import Hypergraph, brute_force_optimal, cut_cost, make_spec
from dqcpart.partitioners import (EaConfig, ExternalSolverConfig, PartitionRequest,
                                  StrategyRegistry, balanced_random, list_strategies,
                                  partition_ea, partition_fm, partition_greedy,
                                  partition_random, partition_stoch_greedy, round_robin)
from dqcpart.partitioners.ea import batch_cut, batch_fitness, fitness, repair
from dqcpart.partitioners.state import GainState

from helpers import hypergraphs, random_hypergraph
from oracles import cut_by_definition, move_gain

FAST_EA = EaConfig(population_size=12, generations=15)


def req(h, k, seed=0, eps=0.05, budget_ms=None):
    return PartitionRequest(h, make_spec(h.num_vertices, k, eps), seed, budget_ms)


# --- random baseline --------------------------------------------------------

def test_random_k1_is_all_zero():
    h = Hypergraph(5, (((0, 1), 1), ((2, 3, 4), 2)))
    out = partition_random(req(h, 1))
    assert out.assignment == (0,) * 5 and out.cut == 0


def test_random_is_deterministic_per_seed():
    h = Hypergraph(20)
    assert partition_random(req(h, 3, seed=9)).assignment == partition_random(req(h, 3, seed=9)).assignment
    assert partition_random(req(h, 3, seed=9)).assignment != partition_random(req(h, 3, seed=10)).assignment


def test_random_is_not_balance_repaired():
    h = Hypergraph(12)
    flags = {partition_random(req(h, 4, seed=s)).report.balanced for s in range(200)}
    assert flags == {True, False}


def test_random_pair_edges_cut_half_the_time():
    # uncut probability of a size-2 edge at k=2 is k^(1-s) = 1/2
    m = 20
    h = Hypergraph(2 * m, tuple(((2 * i, 2 * i + 1), 1) for i in range(m)))
    fracs = [partition_random(req(h, 2, seed=s)).cut / m for s in range(2000)]
    assert abs(np.mean(fracs) - 0.5) < 0.02


# --- greedy -----------------------------------------------------------------

def test_greedy_capacity_spill():
    h = Hypergraph(4, (((0, 1, 2), 1), ((2, 3), 1)))
    out = partition_greedy(req(h, 2))
    assert out.assignment == (0, 0, 0, 1) and out.cut == 1


def test_greedy_no_edges_round_robins_by_load():
    out = partition_greedy(req(Hypergraph(6), 3))
    assert out.report.block_sizes == (2, 2, 2) and out.cut == 0
    assert out.assignment == (0, 1, 2, 0, 1, 2)


def test_greedy_single_big_edge():
    h = Hypergraph(6, (((0, 1, 2, 3, 4, 5), 1),))
    spec = make_spec(6, 2)
    assert spec.max_block == 4
    out = partition_greedy(req(h, 2))
    assert out.assignment == (0, 0, 0, 0, 1, 1) and out.cut == 1


def test_greedy_plurality_tie_goes_to_least_loaded():
    # edge {0,1}: both to block 0; edge {2,3}: block 1 is lighter, so 2 lands there
    h = Hypergraph(6, (((0, 1), 1), ((2, 3), 1), ((1, 2, 4), 1)))
    out = partition_greedy(req(h, 2, eps=0.5))
    assert out.assignment[:4] == (0, 0, 1, 1)
    # vertex 4 sees one pin in each block: tie -> least loaded (both size 2) -> lowest id
    assert out.assignment[4] == 0


# --- incremental gains ------------------------------------------------------

@given(hypergraphs(max_n=10, max_edges=15), st.integers(2, 4), st.data())
@settings(max_examples=60)
def test_incremental_gains_match_recomputation(h, k, data):
    n = h.num_vertices
    a = data.draw(st.lists(st.integers(0, k - 1), min_size=n, max_size=n))
    state = GainState(h, k, a)
    edges = list(h.edges)
    for _ in range(data.draw(st.integers(0, 12))):
        v = data.draw(st.integers(0, n - 1))
        t = data.draw(st.integers(0, k - 1))
        state.move(v, t)
        assert state.cut == cut_by_definition(edges, state.part)
        for u in range(n):
            for b in range(k):
                expected = 0 if b == state.part[u] else move_gain(edges, state.part, u, b)
                assert state.gains[u][b] == expected


# --- FM ---------------------------------------------------------------------

def test_fm_reaches_separable_optimum():
    h = Hypergraph(4, (((0, 1), 1), ((2, 3), 1)))
    assert cut_cost(h, round_robin(4, 2)) == 2
    assert brute_force_optimal(h, make_spec(4, 2))[1] == 0
    out = partition_fm(req(h, 2))
    assert out.cut == 0 and out.report.balanced


def test_fm_no_edges_keeps_round_robin():
    out = partition_fm(req(Hypergraph(7), 3))
    assert out.assignment == tuple(round_robin(7, 3)) and out.cut == 0


@given(hypergraphs(max_n=30, max_edges=40), st.integers(1, 5))
@settings(max_examples=80)
def test_fm_never_worse_than_start(h, k):
    out = partition_fm(req(h, k))
    assert out.cut <= cut_cost(h, round_robin(h.num_vertices, k))
    assert out.report.balanced
    assert list(out.history) == sorted(out.history, reverse=True)


# --- StochG -----------------------------------------------------------------

def test_stochg_matches_greedy_when_greedy_is_optimal():
    h = Hypergraph(6, (((0, 1, 2), 1), ((3, 4, 5), 1)))
    g = partition_greedy(req(h, 2))
    assert g.cut == 0
    assert partition_stoch_greedy(req(h, 2), iterations=5).cut == g.cut


def test_stochg_zero_budget_runs_once():
    h = random_hypergraph(np.random.default_rng(3), 20, 30)
    out = partition_stoch_greedy(req(h, 3, budget_ms=0))
    assert len(out.history) == 1 and out.report.balanced


def test_stochg_history_non_increasing_and_deterministic():
    h = random_hypergraph(np.random.default_rng(4), 25, 40)
    a = partition_stoch_greedy(req(h, 3, seed=5), iterations=30)
    b = partition_stoch_greedy(req(h, 3, seed=5), iterations=30)
    assert a.assignment == b.assignment and a.history == b.history
    assert list(a.history) == sorted(a.history, reverse=True)
    assert a.history[-1] == a.cut


def test_stochg_budget_mode_stops():
    h = random_hypergraph(np.random.default_rng(4), 25, 40)
    out = partition_stoch_greedy(req(h, 3, budget_ms=50))
    assert out.elapsed_ms < 2000 and len(out.history) >= 1


def test_stochg_near_optimal_on_small_instances():
    rng = np.random.default_rng(21)
    hits = 0
    for i in range(20):
        n = int(rng.integers(5, 11))
        h = random_hypergraph(rng, n, int(rng.integers(3, 14)))
        opt = brute_force_optimal(h, make_spec(n, 2))[1]
        got = partition_stoch_greedy(req(h, 2, seed=i), iterations=200).cut
        assert got >= opt
        hits += got == opt
    assert hits >= 18


# --- EA ---------------------------------------------------------------------

def test_fitness_formula_example():
    assert fitness(3, [7, 3], n=10, max_block=6) == 13


def test_batch_fitness_penalises_overflow():
    h = Hypergraph(4, (((0, 1), 1), ((2, 3), 1)))
    spec = make_spec(4, 2, 0.0)  # max_block 3
    pop = np.array([[0, 0, 1, 1], [0, 0, 0, 0], [0, 1, 0, 1]])
    assert batch_cut(h, pop).tolist() == [0, 0, 2]
    assert batch_fitness(h, spec, pop).tolist() == [0, 4, 2]


def test_repair_drains_most_overfull_lowest_ids_first():
    child = np.array([0, 0, 0, 0, 1, 1, 1, 2])
    repair(child, 3, 3)
    # block 0 holds 4 > 3: vertex 0 moves to the least-loaded block (2)
    assert child.tolist() == [2, 0, 0, 0, 1, 1, 1, 2]


def test_balanced_random_is_balanced():
    rng = np.random.default_rng(0)
    a = balanced_random(11, 3, rng)
    assert sorted(np.bincount(a).tolist()) == [3, 4, 4]


def test_ea_history_non_increasing():
    h = random_hypergraph(np.random.default_rng(8), 30, 50)
    out = partition_ea(req(h, 3, seed=1), EaConfig(population_size=16, generations=40))
    assert list(out.history) == sorted(out.history, reverse=True)
    assert out.history[-1] == out.cut  # penalty is zero for the returned individual
    assert out.report.balanced


@given(hypergraphs(max_n=20, max_edges=25), st.integers(1, 4), st.integers(0, 2**32))
@settings(max_examples=30, deadline=None)
def test_ea_fitness_equals_cut_for_balanced(h, k, seed):
    spec = make_spec(h.num_vertices, k)
    pop = np.array([balanced_random(h.num_vertices, k, np.random.default_rng(seed))])
    assert batch_fitness(h, spec, pop)[0] == cut_cost(h, pop[0].tolist())


def test_ea_config_validation():
    with pytest.raises(ValueError):
        EaConfig(population_size=4, elite_count=4)
    with pytest.raises(ValueError):
        EaConfig(tournament_size=1)
    with pytest.raises(ValueError):
        EaConfig(mutation_rate=1.5)


# --- shared contracts -------------------------------------------------------

STRATEGIES = {
    "greedy": lambda r: partition_greedy(r),
    "stochg": lambda r: partition_stoch_greedy(r, iterations=3),
    "fm": lambda r: partition_fm(r),
    "ea": lambda r: partition_ea(r, FAST_EA),
}


@pytest.mark.parametrize("name", sorted(STRATEGIES))
@given(h=hypergraphs(max_n=40, max_edges=40), k=st.integers(1, 6), seed=st.integers(0, 2**64 - 1))
@settings(max_examples=25, deadline=None)
def test_balance_and_determinism(name, h, k, seed):
    r = req(h, k, seed=seed)
    a = STRATEGIES[name](r)
    assert a.report.balanced
    assert max(a.report.block_sizes) <= r.spec.max_block
    assert a.report.cut_cost == cut_cost(h, a.assignment)
    assert STRATEGIES[name](r).assignment == a.assignment
    assert a.seed == seed and a.strategy == name


@pytest.mark.parametrize("name", sorted(STRATEGIES) + ["random"])
def test_k1_gives_zero_cut(name):
    h = random_hypergraph(np.random.default_rng(2), 12, 20)
    run = STRATEGIES.get(name, partition_random)
    assert run(req(h, 1)).cut == 0


def test_isolated_vertices_are_handled():
    h = Hypergraph(10, (((0, 1), 2),))
    for run in STRATEGIES.values():
        out = run(req(h, 3))
        assert out.report.balanced and sum(out.report.block_sizes) == 10


def test_registry_names_and_externals():
    assert list_strategies() == ["random", "greedy", "stochg", "fm", "ea"]
    reg = StrategyRegistry()
    reg.register_external(ExternalSolverConfig("kahypar", "kahypar {input}"))
    assert reg.names() == ["random", "greedy", "stochg", "fm", "ea", "kahypar"]
    assert list_strategies(reg) == reg.names()
    with pytest.raises(ValueError):
        reg.register_external(ExternalSolverConfig("kahypar", "other {input}"))
    with pytest.raises(ValueError):
        reg.register_external(ExternalSolverConfig("fm", "x"))
    with pytest.raises(KeyError):
        reg.run("nope", req(Hypergraph(2), 1))


def test_registry_runs_builtins_with_settings():
    h = random_hypergraph(np.random.default_rng(5), 15, 20)
    reg = StrategyRegistry(ea=FAST_EA, stochg_iterations=4)
    out = reg.run("stochg", req(h, 2))
    assert len(out.history) == 4
    assert len(reg.run("ea", req(h, 2)).history) == FAST_EA.generations + 1
