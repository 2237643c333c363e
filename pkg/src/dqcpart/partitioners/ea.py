"""Population-based partitioner: tournament selection, uniform crossover with
balance repair, capacity-respecting mutation and elitism."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..hypergraph import Hypergraph, PartitionSpec
from ..rng import make_rng
from .base import PartitionOutcome, PartitionRequest, balanced_random, finish, round_robin
from .simple import greedy_assign


@dataclass(frozen=True)
class EaConfig:
    population_size: int = 32
    generations: int = 200
    tournament_size: int = 3
    mutation_rate: float = 0.05
    elite_count: int = 2

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if not 0 <= self.elite_count < self.population_size:
            raise ValueError("elite_count must be in [0, population_size)")
        if self.tournament_size < 2:
            raise ValueError("tournament_size must be >= 2")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must be in [0, 1]")
        if self.generations < 0:
            raise ValueError("generations must be >= 0")


def batch_cut(h: Hypergraph, pop: np.ndarray) -> np.ndarray:
    """Cut weight of every row of a (P, n) assignment matrix."""
    if h.num_edges == 0:
        return np.zeros(pop.shape[0], dtype=np.int64)
    pins, starts, weights = h.csr
    blocks = pop[:, pins]
    lo = np.minimum.reduceat(blocks, starts, axis=1)
    hi = np.maximum.reduceat(blocks, starts, axis=1)
    return ((lo != hi) * weights).sum(axis=1)


def fitness(cut: int, sizes, n: int, max_block: int) -> int:
    """Cut plus ``n`` per vertex of overflow summed over blocks."""
    return int(cut) + n * sum(max(0, int(s) - max_block) for s in sizes)


def batch_fitness(h: Hypergraph, spec: PartitionSpec, pop: np.ndarray) -> np.ndarray:
    sizes = np.stack([(pop == b).sum(axis=1) for b in range(spec.k)], axis=1)
    overflow = np.clip(sizes - spec.max_block, 0, None).sum(axis=1)
    return batch_cut(h, pop) + spec.n * overflow


def repair(child: np.ndarray, k: int, max_block: int) -> None:
    """Drain overfull blocks in place: most-overfull block first, lowest vertex ids
    moved into the least-loaded block."""
    sizes = np.bincount(child, minlength=k).tolist()
    while True:
        over = max(range(k), key=lambda b: (sizes[b], -b))
        if sizes[over] <= max_block:
            return
        v = int(np.flatnonzero(child == over)[0])
        dest = min(range(k), key=lambda b: (sizes[b], b))
        child[v] = dest
        sizes[over] -= 1
        sizes[dest] += 1


def mutate(child: np.ndarray, k: int, max_block: int, rate: float,
           rng: np.random.Generator) -> None:
    if rate <= 0 or k < 2:
        return
    hits = np.flatnonzero(rng.random(child.shape[0]) < rate)
    if hits.size == 0:
        return
    sizes = np.bincount(child, minlength=k).tolist()
    for v in hits:
        a = int(child[v])
        options = [b for b in range(k) if b != a and sizes[b] < max_block]
        if not options:
            continue
        b = options[int(rng.integers(len(options)))]
        child[v] = b
        sizes[a] -= 1
        sizes[b] += 1


def _tournament(fit: np.ndarray, size: int, rng: np.random.Generator) -> int:
    picks = rng.integers(fit.shape[0], size=size)
    return int(min(picks, key=lambda i: (fit[i], i)))


def partition_ea(req: PartitionRequest, cfg: EaConfig = EaConfig()) -> PartitionOutcome:
    t0 = time.perf_counter()
    h, spec = req.hypergraph, req.spec
    n, k, cap = spec.n, spec.k, spec.max_block
    rng = make_rng(req.seed, "ea")

    seeds = [round_robin(n, k), greedy_assign(h, spec)]
    while len(seeds) < cfg.population_size:
        seeds.append(balanced_random(n, k, rng))
    pop = np.array(seeds[: cfg.population_size], dtype=np.int64)
    fit = batch_fitness(h, spec, pop)
    history = [int(fit.min())]

    n_children = cfg.population_size - cfg.elite_count
    for _ in range(cfg.generations):
        order = np.lexsort((np.arange(len(fit)), fit))
        elites = pop[order[: cfg.elite_count]]
        children = np.empty((n_children, n), dtype=np.int64)
        for c in range(n_children):
            pa = pop[_tournament(fit, cfg.tournament_size, rng)]
            pb = pop[_tournament(fit, cfg.tournament_size, rng)]
            child = np.where(rng.random(n) < 0.5, pa, pb)
            repair(child, k, cap)
            mutate(child, k, cap, cfg.mutation_rate, rng)
            children[c] = child
        pop = np.concatenate([elites, children]) if cfg.elite_count else children
        fit = batch_fitness(h, spec, pop)
        history.append(int(fit.min()))

    best = int(np.lexsort((np.arange(len(fit)), fit))[0])
    return finish(req, pop[best], "ea", t0, history)
