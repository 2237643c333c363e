"""Weighted hypergraphs lowered from circuits, balance specs and cut accounting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .circuit import Circuit

Assignment = tuple[int, ...]


@dataclass(frozen=True)
class Hypergraph:
    """``num_vertices`` vertices and merged hyperedges ``(pins, weight)``.

    Pins are sorted ascending and pin sets are unique; repeated gates on the
    same qubit set are carried as edge weight.
    """

    num_vertices: int
    edges: tuple[tuple[tuple[int, ...], int], ...] = ()

    def __post_init__(self):
        if self.num_vertices < 1:
            raise ValueError("hypergraph needs at least one vertex")
        seen = set()
        norm = []
        for pins, w in self.edges:
            pins = tuple(int(p) for p in pins)
            if len(pins) < 2:
                raise ValueError(f"hyperedge {pins} has fewer than 2 pins")
            if list(pins) != sorted(set(pins)):
                raise ValueError(f"hyperedge pins must be distinct and ascending: {pins}")
            if pins[0] < 0 or pins[-1] >= self.num_vertices:
                raise ValueError(f"pin out of range in {pins}")
            if int(w) < 1:
                raise ValueError(f"hyperedge weight must be >= 1, got {w}")
            if pins in seen:
                raise ValueError(f"duplicate hyperedge {pins}")
            seen.add(pins)
            norm.append((pins, int(w)))
        object.__setattr__(self, "edges", tuple(norm))

    @classmethod
    def from_multiedges(cls, num_vertices: int, multiedges) -> "Hypergraph":
        """Merge an iterable of pin collections, keeping first-seen order."""
        weights: dict[tuple[int, ...], int] = {}
        for pins in multiedges:
            key = tuple(sorted(set(int(p) for p in pins)))
            if len(key) < 2:
                continue
            weights[key] = weights.get(key, 0) + 1
        return cls(num_vertices, tuple(weights.items()))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def total_weight(self) -> int:
        return sum(w for _, w in self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids incident to each vertex."""
        inc: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for e, (pins, _) in enumerate(self.edges):
            for p in pins:
                inc[p].append(e)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(flat pins, edge start offsets, weights) for vectorised cut evaluation."""
        pins = np.fromiter((p for ps, _ in self.edges for p in ps), dtype=np.int64)
        sizes = np.fromiter((len(ps) for ps, _ in self.edges), dtype=np.int64,
                            count=len(self.edges))
        starts = np.zeros(len(self.edges), dtype=np.int64)
        if len(sizes) > 1:
            starts[1:] = np.cumsum(sizes)[:-1]
        weights = np.fromiter((w for _, w in self.edges), dtype=np.int64,
                              count=len(self.edges))
        return pins, starts, weights


def circuit_to_hypergraph(c: Circuit) -> Hypergraph:
    return Hypergraph.from_multiedges(c.num_qubits, (g.qubits for g in c.gates))


@dataclass(frozen=True)
class PartitionSpec:
    n: int
    k: int
    epsilon: float
    max_block: int


def make_spec(n: int, k: int, epsilon: float = 0.05) -> PartitionSpec:
    """Capacity ``floor(n/k * (1 + epsilon)) + 1`` per block."""
    if n < 1 or k < 1:
        raise ValueError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    max_block = math.floor((n / k) * (1 + epsilon)) + 1
    assert k * max_block >= n, "infeasible balance spec"
    return PartitionSpec(n=n, k=k, epsilon=float(epsilon), max_block=max_block)


@dataclass(frozen=True)
class CutReport:
    cut_cost: int
    block_sizes: tuple[int, ...]
    balanced: bool


def block_sizes(assignment: Sequence[int], k: int) -> list[int]:
    sizes = [0] * k
    for b in assignment:
        sizes[b] += 1
    return sizes


def cut_cost(h: Hypergraph, assignment: Sequence[int]) -> int:
    total = 0
    for pins, w in h.edges:
        b0 = assignment[pins[0]]
        for p in pins[1:]:
            if assignment[p] != b0:
                total += w
                break
    return total


def cut_report(h: Hypergraph, spec: PartitionSpec, assignment: Sequence[int]) -> CutReport:
    if len(assignment) != h.num_vertices:
        raise ValueError(
            f"assignment has {len(assignment)} entries for {h.num_vertices} vertices"
        )
    if spec.n != h.num_vertices:
        raise ValueError(f"spec built for n={spec.n}, hypergraph has {h.num_vertices}")
    for b in assignment:
        if not 0 <= b < spec.k:
            raise ValueError(f"block id {b} outside [0, {spec.k})")
    sizes = block_sizes(assignment, spec.k)
    return CutReport(
        cut_cost=cut_cost(h, assignment),
        block_sizes=tuple(sizes),
        balanced=all(s <= spec.max_block for s in sizes),
    )


# ---------------------------------------------------------------------------
# hMETIS exchange format
# ---------------------------------------------------------------------------

class HmetisFormatError(ValueError):
    pass


def write_hmetis(h: Hypergraph) -> str:
    lines = [f"{h.num_edges} {h.num_vertices} 1"]
    for pins, w in h.edges:
        lines.append(" ".join([str(w)] + [str(p + 1) for p in pins]))
    return "\n".join(lines) + "\n"


def read_hmetis(text: str) -> Hypergraph:
    rows = [ln.split() for ln in text.splitlines()
            if ln.strip() and not ln.lstrip().startswith("%")]
    if not rows:
        raise HmetisFormatError("empty hMETIS file")
    header = rows[0]
    try:
        nums = [int(x) for x in header]
    except ValueError:
        raise HmetisFormatError(f"malformed header {' '.join(header)!r}") from None
    if len(nums) == 2:
        nums.append(0)
    if len(nums) != 3 or nums[2] not in (0, 1) or nums[0] < 0 or nums[1] < 1:
        raise HmetisFormatError(f"malformed header {' '.join(header)!r}")
    n_edges, n, fmt = nums
    if len(rows) - 1 != n_edges:
        raise HmetisFormatError(f"header declares {n_edges} edges, found {len(rows) - 1}")
    edges = []
    for i, row in enumerate(rows[1:], start=1):
        try:
            vals = [int(x) for x in row]
        except ValueError:
            raise HmetisFormatError(f"non-integer token on edge line {i}") from None
        w = 1
        if fmt == 1:
            w, vals = vals[0], vals[1:]
            if w < 1:
                raise HmetisFormatError(f"edge {i}: weight {w} < 1")
        if any(not 1 <= p <= n for p in vals):
            raise HmetisFormatError(f"edge {i}: pin index out of range 1..{n}")
        pins = tuple(sorted(set(p - 1 for p in vals)))
        if len(pins) != len(vals) or len(pins) < 2:
            raise HmetisFormatError(f"edge {i}: needs >= 2 distinct pins")
        edges.append((pins, w))
    try:
        return Hypergraph(n, tuple(edges))
    except ValueError as exc:
        raise HmetisFormatError(str(exc)) from None


def write_partition(assignment: Sequence[int]) -> str:
    return "".join(f"{b}\n" for b in assignment)


def read_partition(text: str, n: int, k: int) -> Assignment:
    """Parse a ``|V|``-line block-id file and validate it against ``n`` and ``k``."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) != n:
        raise ValueError(f"partition file has {len(lines)} lines, expected {n}")
    out = []
    for i, ln in enumerate(lines):
        try:
            b = int(ln)
        except ValueError:
            raise ValueError(f"partition line {i + 1}: not an integer: {ln!r}") from None
        if not 0 <= b < k:
            raise ValueError(f"partition line {i + 1}: block id {b} outside [0, {k})")
        out.append(b)
    return tuple(out)


# ---------------------------------------------------------------------------
# exhaustive oracle
# ---------------------------------------------------------------------------

class InstanceTooLarge(ValueError):
    pass


def brute_force_optimal(h: Hypergraph, spec: PartitionSpec,
                        limit: int = 10**7) -> tuple[Assignment, int]:
    """Minimum-cut balanced assignment by exhaustive search.

    Assignments are enumerated in lexicographic order (a k-ary counter with
    vertex 0 most significant), pruning prefixes that overfill a block; the
    first minimum found is therefore the lexicographically smallest.
    """
    n, k = h.num_vertices, spec.k
    if k ** n > limit:
        raise InstanceTooLarge(f"k^n = {k}^{n} exceeds {limit}")
    best: list = [None, math.inf]
    a = [0] * n
    sizes = [0] * k

    def rec(v: int):
        if v == n:
            c = cut_cost(h, a)
            if c < best[1]:
                best[0], best[1] = tuple(a), c
            return
        for b in range(k):
            if sizes[b] < spec.max_block:
                a[v] = b
                sizes[b] += 1
                rec(v + 1)
                sizes[b] -= 1

    rec(0)
    return best[0], best[1]
