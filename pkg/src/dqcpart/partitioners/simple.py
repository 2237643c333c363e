"""Random baseline, single-pass greedy, and stochastic greedy with restarts."""

from __future__ import annotations

import time
from typing import Optional, Sequence

from ..hypergraph import Hypergraph, PartitionSpec
from ..rng import make_rng
from .base import PartitionOutcome, PartitionRequest, finish
from .state import GainState

DEFAULT_STOCHG_BUDGET_MS = 1000.0


def partition_random(req: PartitionRequest) -> PartitionOutcome:
    """Uniform i.i.d. block per vertex; deliberately ignores balance."""
    t0 = time.perf_counter()
    rng = make_rng(req.seed, "random")
    a = rng.integers(req.spec.k, size=req.spec.n)
    return finish(req, a, "random", t0)


def _least_loaded(sizes: list[int], cap: Optional[int] = None) -> int:
    best = -1
    for b, s in enumerate(sizes):
        if cap is not None and s >= cap:
            continue
        if best < 0 or s < sizes[best]:
            best = b
    return best


def greedy_assign(h: Hypergraph, spec: PartitionSpec,
                  order: Optional[Sequence[int]] = None) -> list[int]:
    """Majority-block greedy construction over edges in ``order``."""
    k, cap = spec.k, spec.max_block
    part = [-1] * h.num_vertices
    sizes = [0] * k
    edge_ids = range(h.num_edges) if order is None else order
    for e in edge_ids:
        pins = h.edges[e][0]
        votes = [0] * k
        for p in pins:
            if part[p] >= 0:
                votes[part[p]] += 1
        for p in pins:
            if part[p] >= 0:
                continue
            top = max(votes)
            if top == 0:
                b = _least_loaded(sizes)
            else:
                tied = [x for x in range(k) if votes[x] == top]
                b = min(tied, key=lambda x: (sizes[x], x))
            if sizes[b] >= cap:
                b = _least_loaded(sizes, cap)
            part[p] = b
            sizes[b] += 1
            votes[b] += 1
    for v in range(h.num_vertices):
        if part[v] < 0:
            b = _least_loaded(sizes, cap)
            part[v] = b
            sizes[b] += 1
    return part


def partition_greedy(req: PartitionRequest) -> PartitionOutcome:
    t0 = time.perf_counter()
    return finish(req, greedy_assign(req.hypergraph, req.spec), "greedy", t0)


def improve_sweeps(state: GainState, max_block: int) -> None:
    """Strict-improvement sweeps in vertex order until a sweep makes no move.

    Each visited vertex takes its best-gain legal target (lowest block id
    on ties), provided the gain is positive.
    """
    n, k = len(state.part), state.k
    moved = True
    while moved:
        moved = False
        for v in range(n):
            a = state.part[v]
            gv = state.gains[v]
            best_t, best_g = -1, 0
            for t in range(k):
                if t != a and gv[t] > best_g and state.sizes[t] < max_block:
                    best_t, best_g = t, gv[t]
            if best_t >= 0:
                state.move(v, best_t)
                moved = True


def partition_stoch_greedy(req: PartitionRequest,
                           iterations: Optional[int] = None) -> PartitionOutcome:
    """Shuffled-order greedy restarts plus local improvement.

    With ``iterations`` set, exactly that many restarts run (reproducible);
    otherwise restarts continue until ``req.budget_ms`` (default 1 s) has
    elapsed, with at least one restart.
    """
    t0 = time.perf_counter()
    h, spec = req.hypergraph, req.spec
    rng = make_rng(req.seed, "stochg")
    budget = DEFAULT_STOCHG_BUDGET_MS if req.budget_ms is None else req.budget_ms
    best, best_cut = None, None
    history = []
    it = 0
    while True:
        order = rng.permutation(h.num_edges)
        state = GainState(h, spec.k, greedy_assign(h, spec, order))
        improve_sweeps(state, spec.max_block)
        if best_cut is None or state.cut < best_cut:
            best, best_cut = list(state.part), state.cut
        history.append(best_cut)
        it += 1
        if iterations is not None:
            if it >= iterations:
                break
        elif (time.perf_counter() - t0) * 1000.0 >= budget:
            break
    return finish(req, best, "stochg", t0, history)
