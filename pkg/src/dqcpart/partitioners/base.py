"""Request/outcome types shared by every partitioning strategy."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..hypergraph import Assignment, CutReport, Hypergraph, PartitionSpec, cut_report


@dataclass(frozen=True)
class PartitionRequest:
    hypergraph: Hypergraph
    spec: PartitionSpec
    seed: int = 0
    budget_ms: Optional[float] = None

    def __post_init__(self):
        if self.spec.n != self.hypergraph.num_vertices:
            raise ValueError(
                f"spec built for n={self.spec.n}, hypergraph has "
                f"{self.hypergraph.num_vertices} vertices"
            )


@dataclass(frozen=True)
class PartitionOutcome:
    assignment: Assignment
    report: CutReport
    strategy: str
    elapsed_ms: float
    seed: int
    # best-so-far objective per iteration/generation, where the strategy has one
    history: tuple = ()

    @property
    def cut(self) -> int:
        return self.report.cut_cost


def finish(req: PartitionRequest, assignment: Sequence[int], strategy: str,
           t0: float, history=()) -> PartitionOutcome:
    a = tuple(int(b) for b in assignment)
    return PartitionOutcome(
        assignment=a,
        report=cut_report(req.hypergraph, req.spec, a),
        strategy=strategy,
        elapsed_ms=(time.perf_counter() - t0) * 1000.0,
        seed=req.seed,
        history=tuple(history),
    )


def round_robin(n: int, k: int) -> list[int]:
    return [v % k for v in range(n)]


def balanced_random(n: int, k: int, rng: np.random.Generator) -> list[int]:
    """Deal a random vertex permutation round-robin over the blocks."""
    a = [0] * n
    for i, v in enumerate(rng.permutation(n)):
        a[int(v)] = i % k
    return a
