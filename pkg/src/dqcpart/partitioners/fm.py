"""k-way Fiduccia-Mattheyses refinement with per-pass rollback."""

from __future__ import annotations

import time
from typing import Sequence

from ..hypergraph import Hypergraph, PartitionSpec
from .base import PartitionOutcome, PartitionRequest, finish, round_robin
from .state import GainState


def fm_refine(h: Hypergraph, spec: PartitionSpec,
              initial: Sequence[int]) -> tuple[list[int], list[int]]:
    """Run FM passes from ``initial``; returns (assignment, cut after each pass)."""
    n, k, cap = h.num_vertices, spec.k, spec.max_block
    state = GainState(h, k, initial)
    pass_cuts = []
    while True:
        start_cut = state.cut
        locked = [False] * n
        moves: list[tuple[int, int]] = []
        best_cut, best_len = start_cut, 0
        while True:
            targets = [t for t in range(k) if state.sizes[t] < cap]
            best_v, best_t, best_g = -1, -1, None
            for v in range(n):
                if locked[v]:
                    continue
                a = state.part[v]
                gv = state.gains[v]
                for t in targets:
                    if t != a and (best_g is None or gv[t] > best_g):
                        best_v, best_t, best_g = v, t, gv[t]
            if best_v < 0:
                break
            moves.append((best_v, state.part[best_v]))
            state.move(best_v, best_t)
            locked[best_v] = True
            if state.cut < best_cut:
                best_cut, best_len = state.cut, len(moves)
        for v, s in reversed(moves[best_len:]):
            state.move(v, s)
        pass_cuts.append(state.cut)
        if best_cut >= start_cut:
            break
    return state.part, pass_cuts


def partition_fm(req: PartitionRequest) -> PartitionOutcome:
    """FM from the round-robin start ``v -> v mod k``."""
    t0 = time.perf_counter()
    start = round_robin(req.spec.n, req.spec.k)
    part, pass_cuts = fm_refine(req.hypergraph, req.spec, start)
    return finish(req, part, "fm", t0, pass_cuts)
