"""Command-line entry point: parse, generate, partition, strategies, bench, analyze.

Exit codes: 0 success, 1 usage error, 2 runtime error. Result lines go to
stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .circuit import QasmError, gate_stats, parse_qasm, write_qasm
from .generators import GenKind, GenSpec, InvalidGenSpec, generate
from .harness import ConfigError, load_config, run_sweep, summarize
from .hypergraph import (HmetisFormatError, circuit_to_hypergraph, make_spec, read_hmetis,
                         write_hmetis, write_partition)
from .partitioners import ExternalSolverError, PartitionRequest, StrategyRegistry

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _kv(text: str):
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        num = float(value)
        return key, int(num) if num.is_integer() and "." not in value else num
    except ValueError:
        raise argparse.ArgumentTypeError(f"{key}: numeric value expected") from None


def cmd_parse(args) -> int:
    try:
        c = parse_qasm(Path(args.qasm).read_text())
    except (OSError, UnicodeDecodeError, QasmError) as exc:
        print(f"error: {args.qasm}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    h = circuit_to_hypergraph(c)
    if args.out:
        Path(args.out).write_text(write_hmetis(h))
    print(f"n={c.num_qubits} edges={h.num_edges} mq_gates={gate_stats(c).multiqubit_gates}")
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        spec = GenSpec(args.kind, args.qubits, args.depth, args.seed, dict(args.param or []))
    except InvalidGenSpec as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = write_qasm(generate(spec))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _registry(args) -> StrategyRegistry:
    if args.config:
        return load_config(args.config).registry()
    return StrategyRegistry(stochg_iterations=args.iterations)


def cmd_partition(args) -> int:
    if args.k < 1 or args.epsilon < 0:
        print("error: need --k >= 1 and --epsilon >= 0", file=sys.stderr)
        return EXIT_USAGE
    try:
        registry = _registry(args)
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if args.strategy not in registry:
        print(f"error: unknown strategy {args.strategy!r}; "
              f"known: {', '.join(registry.names())}", file=sys.stderr)
        return EXIT_USAGE
    try:
        h = read_hmetis(Path(args.hypergraph).read_text())
        req = PartitionRequest(h, make_spec(h.num_vertices, args.k, args.epsilon), args.seed,
                               args.budget_ms)
        out = registry.run(args.strategy, req)
    except (OSError, HmetisFormatError, ExternalSolverError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if args.assignment_out:
        Path(args.assignment_out).write_text(write_partition(out.assignment))
    print(f"strategy={args.strategy} k={args.k} cut={out.cut} "
          f"balanced={str(out.report.balanced).lower()}")
    return EXIT_OK


def cmd_strategies(args) -> int:
    try:
        registry = _registry(args)
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    for name in registry.names():
        print(name)
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        cfg = load_config(args.config)
        if args.output_dir:
            cfg.output_dir = Path(args.output_dir)
        if args.parallelism:
            cfg.parallelism = args.parallelism
        path = run_sweep(cfg, resume=not args.fresh)
    except (OSError, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"results={path}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    try:
        written = summarize(args.results, args.reference, args.out_dir, args.bin_width)
    except Exception as exc:  # pandas raises a zoo of types on bad CSVs
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    for name, path in written.items():
        print(f"{name}={path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dqcpart", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("parse", help="lower a QASM file to an hMETIS hypergraph")
    s.add_argument("--qasm", required=True)
    s.add_argument("--out", help="hMETIS output path")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("generate", help="write a generated circuit as QASM")
    s.add_argument("--kind", required=True, choices=[k.value for k in GenKind])
    s.add_argument("--qubits", required=True, type=int)
    s.add_argument("--depth", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--param", type=_kv, action="append",
                   help="kind-specific key=value, e.g. two_qubit_fraction=0.23")
    s.add_argument("--out")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("partition", help="partition an hMETIS hypergraph")
    s.add_argument("--hypergraph", required=True)
    s.add_argument("--strategy", required=True)
    s.add_argument("--k", required=True, type=int)
    s.add_argument("--epsilon", type=float, default=0.05)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--budget-ms", type=float)
    s.add_argument("--iterations", type=int, help="fixed StochG restart count")
    s.add_argument("--config", help="bench config providing strategy settings and externals")
    s.add_argument("--assignment-out")
    s.set_defaults(func=cmd_partition)

    s = sub.add_parser("strategies", help="list registered strategies")
    s.add_argument("--config")
    s.add_argument("--iterations", type=int)
    s.set_defaults(func=cmd_strategies)

    s = sub.add_parser("bench", help="run a benchmark sweep")
    s.add_argument("--config", required=True)
    s.add_argument("--output-dir")
    s.add_argument("--parallelism", type=int)
    s.add_argument("--fresh", action="store_true", help="discard previous results and journal")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("analyze", help="summarise a results CSV")
    s.add_argument("--results", required=True)
    s.add_argument("--reference", default="Real")
    s.add_argument("--out-dir")
    s.add_argument("--bin-width", type=int, default=15)
    s.set_defaults(func=cmd_analyze)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
