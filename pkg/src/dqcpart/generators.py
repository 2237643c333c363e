"""Seeded circuit generators: two random families and structured algorithm templates.

The structured templates (GHZ, QFT, QAOA MaxCut, hardware-efficient ansatz)
are hand-written skeletons labelled ``Generated``; they stand in for a
parameterised template suite and do not reproduce any particular tool.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .circuit import Circuit, Gate, Origin, write_qasm
from .rng import make_rng


class GenKind(str, enum.Enum):
    RANDOM_UNIFORM = "random_uniform"
    RANDOM_GRAPH = "random_graph"
    GHZ = "ghz"
    QFT = "qft"
    QAOA_MAXCUT = "qaoa_maxcut"
    HARDWARE_EFFICIENT = "hardware_efficient"

    @classmethod
    def parse(cls, value) -> "GenKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {"randomuniform": "random_uniform", "randomgraph": "random_graph",
                   "qaoamaxcut": "qaoa_maxcut", "qaoa": "qaoa_maxcut",
                   "hardwareefficient": "hardware_efficient", "hea": "hardware_efficient"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown generator kind {value!r}") from None


RANDOM_KINDS = (GenKind.RANDOM_UNIFORM, GenKind.RANDOM_GRAPH)

# measured two-qubit densities of the two random ensembles being mimicked
TWO_QUBIT_FRACTION_PRESETS = (0.23, 0.66)
DEFAULT_EDGE_PROBABILITY = 0.3

SINGLE_QUBIT_GATES = ("h", "x", "y", "z", "s", "sdg", "t", "tdg", "rx", "ry", "rz")
TWO_QUBIT_GATES = ("cx", "cz", "cp", "crz", "swap")
_PARAMETRIC = {"rx", "ry", "rz", "cp", "crz"}

_EXTRA_KEYS = {
    GenKind.RANDOM_UNIFORM: {"two_qubit_fraction"},
    GenKind.RANDOM_GRAPH: {"edge_probability", "two_qubit_fraction"},
    GenKind.GHZ: set(),
    GenKind.QFT: set(),
    GenKind.QAOA_MAXCUT: {"edge_probability", "layers"},
    GenKind.HARDWARE_EFFICIENT: {"layers"},
}


class InvalidGenSpec(ValueError):
    pass


@dataclass(frozen=True)
class GenSpec:
    kind: GenKind
    num_qubits: int
    depth: int = 1
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", GenKind.parse(self.kind))
        except ValueError as exc:
            raise InvalidGenSpec(str(exc)) from None
        if self.num_qubits < 1:
            raise InvalidGenSpec(f"num_qubits must be >= 1, got {self.num_qubits}")
        if self.depth < 1:
            raise InvalidGenSpec(f"depth must be >= 1, got {self.depth}")
        unknown = set(self.extra) - _EXTRA_KEYS[self.kind]
        if unknown:
            raise InvalidGenSpec(f"{self.kind.value}: unknown parameter(s) {sorted(unknown)}")
        for key in ("two_qubit_fraction", "edge_probability"):
            if key in self.extra and not 0.0 <= float(self.extra[key]) <= 1.0:
                raise InvalidGenSpec(f"{key} must be in [0, 1]")
        if "layers" in self.extra and int(self.extra["layers"]) < 1:
            raise InvalidGenSpec("layers must be >= 1")

    @property
    def circuit_id(self) -> str:
        return f"{self.kind.value}-n{self.num_qubits}-s{self.seed}"

    def param(self, key, default):
        return self.extra.get(key, default)


def _angle(rng) -> float:
    # eighth-turn multiples keep emitted QASM short and exact
    return int(rng.integers(1, 16)) * math.pi / 8


def _random_single(rng, q: int) -> Gate:
    name = SINGLE_QUBIT_GATES[int(rng.integers(len(SINGLE_QUBIT_GATES)))]
    return Gate(name, (q,), (_angle(rng),) if name in _PARAMETRIC else ())


def _random_two(rng, a: int, b: int) -> Gate:
    name = TWO_QUBIT_GATES[int(rng.integers(len(TWO_QUBIT_GATES)))]
    return Gate(name, (a, b), (_angle(rng),) if name in _PARAMETRIC else ())


def sample_interaction_graph(n: int, p: float, rng) -> list[tuple[int, int]]:
    """Erdos-Renyi G(n, p) edge list, pairs in lexicographic order."""
    return [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]


def _random_uniform(spec: GenSpec, rng) -> list[Gate]:
    n = spec.num_qubits
    p2 = float(spec.param("two_qubit_fraction", TWO_QUBIT_FRACTION_PRESETS[1]))
    gates = []
    for _ in range(spec.depth):
        free = list(range(n))
        while free:
            q = free.pop(0)
            if rng.random() < p2:
                # a two-qubit draw with no partner left idles the qubit
                if free:
                    other = free.pop(int(rng.integers(len(free))))
                    pair = (q, other) if rng.random() < 0.5 else (other, q)
                    gates.append(_random_two(rng, *pair))
            else:
                gates.append(_random_single(rng, q))
    return gates


def _random_graph(spec: GenSpec, rng) -> tuple[list[Gate], list[tuple[int, int]]]:
    n = spec.num_qubits
    graph = sample_interaction_graph(n, float(spec.param("edge_probability", DEFAULT_EDGE_PROBABILITY)), rng)
    p2 = float(spec.param("two_qubit_fraction", 0.5))
    adj: dict[int, list[int]] = {q: [] for q in range(n)}
    for a, b in graph:
        adj[a].append(b)
        adj[b].append(a)
    gates = []
    for _ in range(spec.depth):
        busy = [False] * n
        for q in range(n):
            if busy[q]:
                continue
            busy[q] = True
            partners = [r for r in adj[q] if not busy[r]]
            if partners and rng.random() < p2:
                r = partners[int(rng.integers(len(partners)))]
                busy[r] = True
                pair = (q, r) if rng.random() < 0.5 else (r, q)
                gates.append(Gate("cx", pair))
            else:
                gates.append(_random_single(rng, q))
    return gates, graph


def _ghz(spec: GenSpec) -> list[Gate]:
    n = spec.num_qubits
    return [Gate("h", (0,))] + [Gate("cx", (i, i + 1)) for i in range(n - 1)]


def _qft(spec: GenSpec) -> list[Gate]:
    n = spec.num_qubits
    gates = []
    for j in range(n):
        gates.append(Gate("h", (j,)))
        for m in range(j + 1, n):
            gates.append(Gate("cp", (m, j), (math.pi / 2 ** (m - j),)))
    for i in range(n // 2):
        gates.append(Gate("swap", (i, n - 1 - i)))
    return gates


def _qaoa(spec: GenSpec, rng) -> tuple[list[Gate], list[tuple[int, int]]]:
    n = spec.num_qubits
    graph = sample_interaction_graph(n, float(spec.param("edge_probability", DEFAULT_EDGE_PROBABILITY)), rng)
    layers = int(spec.param("layers", spec.depth))
    gates = [Gate("h", (q,)) for q in range(n)]
    for layer in range(layers):
        # linear-ramp schedule
        gamma = (layer + 1) * math.pi / (2 * (layers + 1))
        beta = (layers - layer) * math.pi / (2 * (layers + 1))
        for a, b in graph:
            gates.append(Gate("cp", (a, b), (2 * gamma,)))
        for q in range(n):
            gates.append(Gate("rx", (q,), (2 * beta,)))
    return gates, graph


def _hardware_efficient(spec: GenSpec, rng) -> list[Gate]:
    n = spec.num_qubits
    layers = int(spec.param("layers", spec.depth))
    gates = []
    for _ in range(layers):
        for q in range(n):
            gates.append(Gate("ry", (q,), (_angle(rng),)))
            gates.append(Gate("rz", (q,), (_angle(rng),)))
        for q in range(n - 1):
            gates.append(Gate("cx", (q, q + 1)))
    return gates


def generate_with_graph(spec: GenSpec) -> tuple[Circuit, Optional[list[tuple[int, int]]]]:
    """Generate a circuit plus its sampled interaction graph, when the kind has one."""
    rng = make_rng(spec.seed, "gen", spec.kind.value, spec.num_qubits)
    graph = None
    if spec.kind is GenKind.RANDOM_UNIFORM:
        gates = _random_uniform(spec, rng)
    elif spec.kind is GenKind.RANDOM_GRAPH:
        gates, graph = _random_graph(spec, rng)
    elif spec.kind is GenKind.GHZ:
        gates = _ghz(spec)
    elif spec.kind is GenKind.QFT:
        gates = _qft(spec)
    elif spec.kind is GenKind.QAOA_MAXCUT:
        gates, graph = _qaoa(spec, rng)
    else:
        gates = _hardware_efficient(spec, rng)
    origin = Origin.RANDOM if spec.kind in RANDOM_KINDS else Origin.GENERATED
    return Circuit(spec.num_qubits, tuple(gates), spec.circuit_id, origin), graph


def generate(spec: GenSpec) -> Circuit:
    return generate_with_graph(spec)[0]


@dataclass(frozen=True)
class SuiteEntry:
    kind: GenKind
    n_min: int
    n_max: int
    step: int = 1
    seeds: int = 1
    depth: int = 1
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "kind", GenKind.parse(self.kind))
        if self.n_min < 1 or self.n_max < self.n_min or self.step < 1 or self.seeds < 1:
            raise InvalidGenSpec(f"invalid suite entry for {self.kind.value}")
        GenSpec(self.kind, self.n_min, self.depth, 0, dict(self.params))


SuiteManifest = list  # of SuiteEntry


def generate_suite(manifest, out_dir: Optional[Path] = None) -> list[Circuit]:
    """Materialise every (kind, n, seed) of a manifest, optionally as QASM files."""
    circuits = []
    for entry in manifest:
        for n in range(entry.n_min, entry.n_max + 1, entry.step):
            for s in range(entry.seeds):
                circuits.append(generate(GenSpec(entry.kind, n, entry.depth, s,
                                                 dict(entry.params))))
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for c in circuits:
            (out_dir / f"{c.id}.qasm").write_text(write_qasm(c))
    return circuits

