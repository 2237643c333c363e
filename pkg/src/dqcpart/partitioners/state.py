"""Per-edge pin-count tables with incrementally maintained move gains."""

from __future__ import annotations

from typing import Sequence

from ..hypergraph import Hypergraph, block_sizes, cut_cost


class GainState:
    """Mutable partition state used by FM and the StochG improvement sweep.

    ``gains[v][t]`` is the cut-weight decrease from moving ``v`` into block
    ``t``; entries for a vertex's own block are kept at 0.
    """

    def __init__(self, h: Hypergraph, k: int, assignment: Sequence[int]):
        self.h = h
        self.k = k
        self.part = list(assignment)
        self.sizes = block_sizes(self.part, k)
        self.counts = []
        for pins, _ in h.edges:
            c = [0] * k
            for p in pins:
                c[self.part[p]] += 1
            self.counts.append(c)
        self.gains = [[0] * k for _ in range(h.num_vertices)]
        for e in range(h.num_edges):
            self._apply_edge(e, 1)
        self.cut = cut_cost(h, self.part)

    def _apply_edge(self, e: int, sign: int):
        pins, w = self.h.edges[e]
        size = len(pins)
        cnt = self.counts[e]
        k = self.k
        for u in pins:
            a = self.part[u]
            # edge currently uncut: moving u anywhere cuts it
            base = w if cnt[a] == size else 0
            gu = self.gains[u]
            for b in range(k):
                if b != a:
                    g = (w if cnt[b] == size - 1 else 0) - base
                    if g:
                        gu[b] += sign * g

    def move(self, v: int, t: int):
        s = self.part[v]
        if s == t:
            return
        gain = self.gains[v][t]
        inc = self.h.incidence[v]
        for e in inc:
            self._apply_edge(e, -1)
        self.part[v] = t
        self.sizes[s] -= 1
        self.sizes[t] += 1
        for e in inc:
            c = self.counts[e]
            c[s] -= 1
            c[t] += 1
        for e in inc:
            self._apply_edge(e, 1)
        self.cut -= gain
