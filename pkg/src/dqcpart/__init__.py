"""Circuit-to-hypergraph lowering, balanced k-way partitioners and a benchmark
harness for measuring how circuit ensembles shift partitioner evaluations."""

from .circuit import Circuit, Gate, GateStats, Origin, gate_stats, parse_qasm, write_qasm
from .hypergraph import (CutReport, Hypergraph, PartitionSpec, brute_force_optimal,
                         circuit_to_hypergraph, cut_report, make_spec, read_hmetis,
                         write_hmetis)

__version__ = "0.1.0"
