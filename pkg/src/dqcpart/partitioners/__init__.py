"""Balanced k-way hypergraph partitioners behind a common request/outcome interface."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .base import (PartitionOutcome, PartitionRequest, balanced_random, finish,
                   round_robin)
from .ea import EaConfig, partition_ea
from .external import (ExternalSolverConfig, ExternalSolverError, SolverExitError,
                       SolverOutputError, SolverTimeout, partition_external)
from .fm import fm_refine, partition_fm
from .simple import (greedy_assign, partition_greedy, partition_random,
                     partition_stoch_greedy)

BUILTIN_STRATEGIES = ("random", "greedy", "stochg", "fm", "ea")


@dataclass
class StrategyRegistry:
    """Named strategies with their per-strategy settings.

    Built-ins come first in a fixed order; externals follow in
    registration order.
    """

    ea: EaConfig = field(default_factory=EaConfig)
    stochg_iterations: Optional[int] = None
    stochg_budget_ms: Optional[float] = None
    externals: dict = field(default_factory=dict)

    def register_external(self, solver: ExternalSolverConfig) -> None:
        if solver.name in BUILTIN_STRATEGIES or solver.name in self.externals:
            raise ValueError(f"strategy {solver.name!r} already registered")
        self.externals[solver.name] = solver

    def names(self) -> list[str]:
        return list(BUILTIN_STRATEGIES) + list(self.externals)

    def __contains__(self, name: str) -> bool:
        return name in BUILTIN_STRATEGIES or name in self.externals

    def run(self, name: str, req: PartitionRequest) -> PartitionOutcome:
        if name == "random":
            return partition_random(req)
        if name == "greedy":
            return partition_greedy(req)
        if name == "stochg":
            if req.budget_ms is None and self.stochg_budget_ms is not None:
                req = PartitionRequest(req.hypergraph, req.spec, req.seed, self.stochg_budget_ms)
            return partition_stoch_greedy(req, iterations=self.stochg_iterations)
        if name == "fm":
            return partition_fm(req)
        if name == "ea":
            return partition_ea(req, self.ea)
        if name in self.externals:
            return partition_external(req, self.externals[name])
        raise KeyError(f"unknown strategy {name!r}; known: {', '.join(self.names())}")


def list_strategies(registry: Optional[StrategyRegistry] = None) -> list[str]:
    return (registry or StrategyRegistry()).names()


__all__ = [
    "BUILTIN_STRATEGIES", "EaConfig", "ExternalSolverConfig", "ExternalSolverError",
    "PartitionOutcome", "PartitionRequest", "SolverExitError", "SolverOutputError",
    "SolverTimeout", "StrategyRegistry", "balanced_random", "finish", "fm_refine",
    "greedy_assign", "list_strategies", "partition_ea", "partition_external",
    "partition_fm", "partition_greedy", "partition_random", "partition_stoch_greedy",
    "round_robin",
]
