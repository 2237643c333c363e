"""Experiment driver: circuit ingestion, admission filters, the
(circuit x k x strategy) sweep with a resume journal, and summaries."""

from __future__ import annotations

import configparser
import csv
import io
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import pandas as pd

from .circuit import Circuit, Origin, QasmError, gate_stats, parse_qasm
from .generators import GenKind, SuiteEntry, generate_suite
from .hypergraph import Hypergraph, circuit_to_hypergraph, make_spec
from .partitioners import (BUILTIN_STRATEGIES, EaConfig, ExternalSolverConfig,
                           PartitionRequest, StrategyRegistry)
from .rng import derive_seed
from .stats import (BASELINE, StatsError, distortion_report, normalized_costs,
                    qubit_bin, rank_strategies, rank_table_frame)

log = logging.getLogger(__name__)

RESULT_COLUMNS = ("circuit_id", "origin", "n_qubits", "n_edges", "n_multiqubit_gates", "k",
                  "strategy", "cut_cost", "per_qubit", "rel_to_baseline", "balanced", "status",
                  "seed", "elapsed_ms")
RESULTS_NAME = "results.csv"
JOURNAL_NAME = "journal.txt"


class ConfigError(ValueError):
    pass


@dataclass
class BenchConfig:
    sources: list = field(default_factory=list)  # (directory, Origin)
    suites: list = field(default_factory=list)   # SuiteEntry
    k_values: tuple = tuple(range(2, 11))
    epsilon: float = 0.05
    min_qubits_per_qpu: int = 5
    max_qubits: int = 130
    max_multiqubit_gates: int = 20_000
    strategies: tuple = BUILTIN_STRATEGIES
    ea: EaConfig = field(default_factory=EaConfig)
    stochg_iterations: Optional[int] = None
    stochg_budget_ms: Optional[float] = None
    externals: tuple = ()
    seed: int = 0
    parallelism: int = 1
    output_dir: Path = Path("results")

    def __post_init__(self):
        self.k_values = tuple(int(k) for k in self.k_values)
        if not self.k_values or min(self.k_values) < 1:
            raise ConfigError("k range must be non-empty with k >= 1")
        if self.epsilon < 0:
            raise ConfigError("epsilon must be >= 0")
        for name in ("min_qubits_per_qpu", "max_qubits", "max_multiqubit_gates", "parallelism"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        strategies = list(dict.fromkeys(self.strategies))
        if BASELINE not in strategies:
            strategies.insert(0, BASELINE)
        self.strategies = tuple(strategies)
        self.output_dir = Path(self.output_dir)
        known = self.registry()
        for s in self.strategies:
            if s not in known:
                raise ConfigError(f"unknown strategy {s!r}")

    def registry(self) -> StrategyRegistry:
        reg = StrategyRegistry(ea=self.ea, stochg_iterations=self.stochg_iterations,
                               stochg_budget_ms=self.stochg_budget_ms)
        for ext in self.externals:
            try:
                reg.register_external(ext)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        return reg


# ---------------------------------------------------------------------------
# config file
# ---------------------------------------------------------------------------

_BENCH_KEYS = {"k_min", "k_max", "epsilon", "min_qubits_per_qpu", "max_qubits",
               "max_multiqubit_gates", "strategies", "seed", "parallelism", "output_dir"}
_SOURCE_KEYS = {"path", "origin"}
_SUITE_KEYS = {"kind", "n_min", "n_max", "step", "seeds", "depth",
               "two_qubit_fraction", "edge_probability", "layers"}
_EA_KEYS = {"population_size", "generations", "tournament_size", "mutation_rate", "elite_count"}
_STOCHG_KEYS = {"iterations", "budget_ms"}
_EXTERNAL_KEYS = {"command", "timeout_ms"}


def _check_keys(section: str, got, allowed):
    unknown = set(got) - allowed
    if unknown:
        raise ConfigError(f"[{section}]: unknown key(s) {', '.join(sorted(unknown))}")


def _num(section, key, raw, kind=int):
    try:
        return kind(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: expected {kind.__name__}, got {raw!r}") from None


def parse_config(text: str, base_dir: Path = Path(".")) -> BenchConfig:
    """Parse the sectioned ``key = value`` bench config; unknown keys are errors.

    Sections: ``[bench]``, ``[source:NAME]``, ``[suite:NAME]``,
    ``[strategy:ea]``, ``[strategy:stochg]`` and ``[external:NAME]``.
    Relative paths resolve against ``base_dir``.
    """
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    kw: dict = {}
    sources, suites, externals = [], [], []
    ea_kw: dict = {}
    for sec in cp.sections():
        items = dict(cp.items(sec))
        head, _, name = sec.partition(":")
        if sec == "bench":
            _check_keys(sec, items, _BENCH_KEYS)
            k_min = _num(sec, "k_min", items.pop("k_min", "2"))
            k_max = _num(sec, "k_max", items.pop("k_max", "10"))
            if k_max < k_min:
                raise ConfigError("[bench] k_max < k_min")
            kw["k_values"] = tuple(range(k_min, k_max + 1))
            if "strategies" in items:
                kw["strategies"] = tuple(s.strip() for s in items.pop("strategies").split(",")
                                         if s.strip())
            if "output_dir" in items:
                kw["output_dir"] = base_dir / items.pop("output_dir")
            if "epsilon" in items:
                kw["epsilon"] = _num(sec, "epsilon", items.pop("epsilon"), float)
            for key, raw in items.items():
                kw[key] = _num(sec, key, raw)
        elif head == "source" and name:
            _check_keys(sec, items, _SOURCE_KEYS)
            if "path" not in items or "origin" not in items:
                raise ConfigError(f"[{sec}] needs path and origin")
            try:
                origin = Origin.parse(items["origin"])
            except ValueError as exc:
                raise ConfigError(f"[{sec}] {exc}") from None
            sources.append((base_dir / items["path"], origin))
        elif head == "suite" and name:
            _check_keys(sec, items, _SUITE_KEYS)
            if "kind" not in items:
                raise ConfigError(f"[{sec}] needs kind")
            params = {}
            for key in ("two_qubit_fraction", "edge_probability"):
                if key in items:
                    params[key] = _num(sec, key, items[key], float)
            if "layers" in items:
                params["layers"] = _num(sec, "layers", items["layers"])
            n_min = _num(sec, "n_min", items.get("n_min", "0"))
            try:
                suites.append(SuiteEntry(
                    kind=GenKind.parse(items["kind"]), n_min=n_min,
                    n_max=_num(sec, "n_max", items.get("n_max", str(n_min))),
                    step=_num(sec, "step", items.get("step", "1")),
                    seeds=_num(sec, "seeds", items.get("seeds", "1")),
                    depth=_num(sec, "depth", items.get("depth", "1")),
                    params=params))
            except ValueError as exc:
                raise ConfigError(f"[{sec}] {exc}") from None
        elif sec == "strategy:ea":
            _check_keys(sec, items, _EA_KEYS)
            for key, raw in items.items():
                ea_kw[key] = _num(sec, key, raw, float if key == "mutation_rate" else int)
        elif sec == "strategy:stochg":
            _check_keys(sec, items, _STOCHG_KEYS)
            if "iterations" in items:
                kw["stochg_iterations"] = _num(sec, "iterations", items["iterations"])
            if "budget_ms" in items:
                kw["stochg_budget_ms"] = _num(sec, "budget_ms", items["budget_ms"], float)
        elif head == "external" and name:
            _check_keys(sec, items, _EXTERNAL_KEYS)
            if "command" not in items:
                raise ConfigError(f"[{sec}] needs command")
            timeout = _num(sec, "timeout_ms", items.get("timeout_ms", "60000"), float)
            externals.append(ExternalSolverConfig(name, items["command"], timeout))
        else:
            raise ConfigError(f"unknown section [{sec}]")
    try:
        if ea_kw:
            kw["ea"] = EaConfig(**ea_kw)
        return BenchConfig(sources=sources, suites=suites, externals=tuple(externals), **kw)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def load_config(path) -> BenchConfig:
    path = Path(path)
    return parse_config(path.read_text(), base_dir=path.parent)


# ---------------------------------------------------------------------------
# admission and job construction
# ---------------------------------------------------------------------------

def admit_counts(n: int, multiqubit_gates: int, cfg: BenchConfig, k: int) -> tuple[bool, str]:
    if n > cfg.max_qubits:
        return False, f"n > {cfg.max_qubits}"
    if multiqubit_gates > cfg.max_multiqubit_gates:
        return False, f"multi-qubit gates > {cfg.max_multiqubit_gates}"
    if n < cfg.min_qubits_per_qpu * k:
        return False, f"n < {cfg.min_qubits_per_qpu}k"
    return True, ""


def admit(c: Circuit, cfg: BenchConfig, k: int) -> tuple[bool, str]:
    """Size, gate-count and qubits-per-QPU filters for one (circuit, k) pair."""
    return admit_counts(c.num_qubits, gate_stats(c).multiqubit_gates, cfg, k)


@dataclass(frozen=True)
class LoweredCircuit:
    id: str
    origin: Origin
    n_qubits: int
    n_multiqubit_gates: int
    hypergraph: Hypergraph


def _lower(c: Circuit) -> LoweredCircuit:
    return LoweredCircuit(c.id, c.origin, c.num_qubits, gate_stats(c).multiqubit_gates,
                          circuit_to_hypergraph(c))


def collect_circuits(cfg: BenchConfig) -> list[LoweredCircuit]:
    """Read QASM sources and materialise suites; unreadable files are skipped."""
    found: dict[str, LoweredCircuit] = {}

    def add(c: Circuit):
        if c.id in found:
            log.warning("duplicate circuit id %s skipped", c.id)
            return
        found[c.id] = _lower(c)

    for directory, origin in cfg.sources:
        directory = Path(directory)
        if not directory.is_dir():
            log.warning("source %s is not a directory; skipped", directory)
            continue
        for path in sorted(directory.glob("*.qasm")):
            try:
                add(parse_qasm(path.read_text(), circuit_id=path.stem, origin=origin))
            except (OSError, UnicodeDecodeError, QasmError, ValueError) as exc:
                log.warning("skipping %s: %s", path, exc)
    for c in generate_suite(cfg.suites):
        add(c)
    return [found[i] for i in sorted(found)]


def job_seed(global_seed: int, circuit_id: str, k: int, strategy: str) -> int:
    return derive_seed(global_seed, circuit_id, k, strategy)


def _job_key(circuit_id: str, k: int, strategy: str) -> str:
    return f"{circuit_id}\t{k}\t{strategy}"


@dataclass(frozen=True)
class _Job:
    circuit: LoweredCircuit
    k: int
    strategy: str
    seed: int
    epsilon: float
    registry: StrategyRegistry


def _run_job(job: _Job) -> dict:
    c = job.circuit
    row = {"circuit_id": c.id, "origin": c.origin.value, "n_qubits": c.n_qubits,
           "n_edges": c.hypergraph.num_edges, "n_multiqubit_gates": c.n_multiqubit_gates,
           "k": job.k, "strategy": job.strategy, "cut_cost": "", "per_qubit": "",
           "rel_to_baseline": "", "balanced": "", "status": "ok", "seed": job.seed,
           "elapsed_ms": ""}
    try:
        spec = make_spec(c.n_qubits, job.k, job.epsilon)
        out = job.registry.run(job.strategy, PartitionRequest(c.hypergraph, spec, job.seed))
    except Exception as exc:  # one pathological instance must not end the sweep
        log.warning("%s k=%d %s failed: %s", c.id, job.k, job.strategy, exc)
        row["status"] = "failed"
        return row
    row.update(cut_cost=out.cut, per_qubit=out.cut / c.n_qubits,
               balanced="true" if out.report.balanced else "false",
               elapsed_ms=f"{out.elapsed_ms:.3f}")
    return row


def _finish_group(rows: list[dict]) -> list[dict]:
    base = next((r for r in rows if r["strategy"] == BASELINE and r["status"] == "ok"), None)
    for r in rows:
        if r["status"] != "ok" or base is None:
            continue
        b, c = base["cut_cost"], r["cut_cost"]
        r["rel_to_baseline"] = (c / b) if b else (1.0 if c == 0 else math.inf)
    return rows


def _fmt(v) -> str:
    if isinstance(v, float):
        return "inf" if math.isinf(v) else repr(v)
    return str(v)


def _csv_text(rows: list[dict], header: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(RESULT_COLUMNS)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in RESULT_COLUMNS])
    return buf.getvalue()


def _append(path: Path, text: str):
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())


def _reconcile(csv_path: Path, journal_path: Path, groups: dict) -> set:
    """Keep only rows of fully journaled groups; rewrite both files. Returns done keys."""
    journal = set()
    if journal_path.exists():
        journal = {ln for ln in journal_path.read_text().splitlines() if ln}
    done_groups = {g for g, keys in groups.items() if all(k in journal for k in keys)}
    done_keys = {k for g in done_groups for k in groups[g]}
    kept, seen = [], set()
    if csv_path.exists():
        with open(csv_path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is not None and tuple(header) == RESULT_COLUMNS:
                for rec in reader:
                    if len(rec) != len(RESULT_COLUMNS):
                        continue
                    row = dict(zip(RESULT_COLUMNS, rec))
                    key = _job_key(row["circuit_id"], int(row["k"]), row["strategy"])
                    if key in done_keys and key not in seen:
                        seen.add(key)
                        kept.append(row)
    tmp = csv_path.with_suffix(".tmp")
    tmp.write_text(_csv_text(kept, header=True))
    os.replace(tmp, csv_path)
    tmp = journal_path.with_suffix(".tmp")
    tmp.write_text("".join(k + "\n" for k in sorted(seen)))
    os.replace(tmp, journal_path)
    return seen


def plan_jobs(cfg: BenchConfig, circuits: list[LoweredCircuit]) -> list[list[_Job]]:
    """Jobs grouped by (circuit, k), in (circuit id, k, strategy name) order."""
    registry = cfg.registry()
    strategies = sorted(cfg.strategies)
    groups = []
    for c in circuits:
        for k in sorted(cfg.k_values):
            ok, reason = admit_counts(c.n_qubits, c.n_multiqubit_gates, cfg, k)
            if not ok:
                log.debug("%s k=%d rejected: %s", c.id, k, reason)
                continue
            groups.append([_Job(c, k, s, job_seed(cfg.seed, c.id, k, s), cfg.epsilon, registry)
                           for s in strategies])
    return groups


def run_sweep(cfg: BenchConfig, resume: bool = True, max_groups: Optional[int] = None) -> Path:
    """Evaluate every admitted (circuit, k) with every strategy; returns the CSV path.

    Rows of one (circuit, k) group are appended together, then their keys are
    journaled. With ``resume`` the journal decides which groups to skip and
    any unjournaled rows are discarded. ``max_groups`` stops after that many
    new groups (used to simulate interruption).
    """
    out_dir = cfg.output_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path, journal_path = out_dir / RESULTS_NAME, out_dir / JOURNAL_NAME
    circuits = collect_circuits(cfg)
    groups = plan_jobs(cfg, circuits)
    keyed = {(g[0].circuit.id, g[0].k): [_job_key(j.circuit.id, j.k, j.strategy) for j in g]
             for g in groups}
    if not resume:
        for p in (csv_path, journal_path):
            if p.exists():
                p.unlink()
    done = _reconcile(csv_path, journal_path, keyed)
    pending = [g for g in groups
               if not all(k in done for k in keyed[(g[0].circuit.id, g[0].k)])]
    if max_groups is not None:
        pending = pending[:max_groups]
    log.info("%d circuits, %d groups, %d pending", len(circuits), len(groups), len(pending))
    jobs = [j for g in pending for j in g]
    if not jobs:
        return csv_path

    def results():
        if cfg.parallelism > 1:
            with ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
                yield from pool.map(_run_job, jobs, chunksize=1)
        else:
            yield from map(_run_job, jobs)

    it = results()
    for g in pending:
        rows = _finish_group([next(it) for _ in g])
        _append(csv_path, _csv_text(rows))
        _append(journal_path, "".join(_job_key(j.circuit.id, j.k, j.strategy) + "\n" for j in g))
    return csv_path


# ---------------------------------------------------------------------------
# reading back and summarising
# ---------------------------------------------------------------------------

def read_results(path) -> pd.DataFrame:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    try:
        df = pd.read_csv(path, dtype={"circuit_id": str, "origin": str, "strategy": str,
                                      "status": str, "balanced": str})
    except pd.errors.EmptyDataError:
        raise StatsError(f"{path} is empty") from None
    if df.empty:
        raise StatsError(f"{path} holds no result rows")
    if tuple(df.columns) != RESULT_COLUMNS:
        raise StatsError(f"{path}: unexpected header {list(df.columns)}")
    return df


def validate_results(df: pd.DataFrame, cfg: BenchConfig) -> list[str]:
    """Re-check filter bounds and the one-baseline-per-group rule on read-back."""
    problems = []
    for _, r in df.iterrows():
        ok, reason = admit_counts(int(r["n_qubits"]), int(r["n_multiqubit_gates"]), cfg, int(r["k"]))
        if not ok:
            problems.append(f"{r['circuit_id']} k={r['k']}: {reason}")
    counts = df[df["strategy"] == BASELINE].groupby(["circuit_id", "k"]).size()
    groups = df.groupby(["circuit_id", "k"]).size()
    for key in groups.index:
        if counts.get(key, 0) != 1:
            problems.append(f"{key}: {counts.get(key, 0)} baseline rows")
    if df.duplicated(["circuit_id", "k", "strategy"]).any():
        problems.append("duplicate (circuit, k, strategy) rows")
    return problems


def aggregate_tables(nd: pd.DataFrame, bin_width: int = 15) -> dict[str, pd.DataFrame]:
    """Plot-ready aggregates: totals per (origin, strategy), dispersion grids and
    scaling views over k and qubit bins."""
    finite = nd.copy()
    finite["rel_finite"] = finite["rel_to_baseline"].where(
        finite["rel_to_baseline"].map(math.isfinite))
    finite["qubit_bin"] = qubit_bin(finite["n_qubits"].astype(int), bin_width)
    totals = (finite.groupby(["origin", "strategy"])
              .agg(total_cut=("cut_cost", "sum"), mean_cut=("cut_cost", "mean"),
                   mean_per_qubit=("per_qubit", "mean"), rows=("cut_cost", "size"))
              .reset_index())
    grid = (finite.groupby(["origin", "strategy", "k"])
            .agg(cut_variance=("cut_cost", "var"), per_qubit_std=("per_qubit", "std"),
                 rows=("cut_cost", "size"))
            .reset_index())
    agg = dict(mean_rel=("rel_finite", "mean"), mean_per_qubit=("per_qubit", "mean"),
               degenerate_rows=("degenerate", "sum"), rows=("cut_cost", "size"))
    by_k = finite.groupby(["origin", "strategy", "k"]).agg(**agg).reset_index()
    by_size = finite.groupby(["origin", "strategy", "qubit_bin"]).agg(**agg).reset_index()
    avg_k = (by_k.groupby(["origin", "strategy"])
             .agg(mean_rel_over_k=("mean_rel", "mean"),
                  mean_per_qubit_over_k=("mean_per_qubit", "mean"))
             .reset_index())
    return {"totals": totals, "dispersion_grid": grid, "scaling_by_k": by_k,
            "scaling_by_size": by_size, "scaling_avg_k": avg_k}


def summarize(results_csv, reference_origin: str, out_dir=None,
              bin_width: int = 15) -> dict[str, Path]:
    """Write rankings, distortion report and aggregate CSVs next to the results."""
    df = read_results(results_csv)
    origins = sorted(df["origin"].astype(str).unique())
    if len(origins) < 2:
        raise StatsError(f"distortion analysis needs at least 2 origins, got {origins}")
    if reference_origin not in origins:
        raise StatsError(f"reference origin {reference_origin!r} absent; have {origins}")
    nd = normalized_costs(df)
    out_dir = Path(out_dir) if out_dir is not None else Path(results_csv).parent
    out_dir.mkdir(parents=True, exist_ok=True)
    report = distortion_report(nd, reference_origin)
    tables = {
        "rankings_by_k": rank_table_frame(rank_strategies(nd, "k")),
        "rankings_by_bin": rank_table_frame(rank_strategies(nd, "qubit_bin", bin_width)),
        "distortion": report.summary,
        "distortion_by_k": report.by_k,
        "dispersion": report.dispersion,
        **aggregate_tables(nd, bin_width),
    }
    written = {}
    for name, table in tables.items():
        path = out_dir / f"{name}.csv"
        table.to_csv(path, index=False)
        written[name] = path
    return written


# ---------------------------------------------------------------------------
# built-in desk-scale sweeps
# ---------------------------------------------------------------------------

STRUCTURED_TEMPLATES = (
    (GenKind.GHZ, 1, {}),
    (GenKind.QFT, 1, {}),
    (GenKind.QAOA_MAXCUT, 1, {"layers": 2}),
    (GenKind.HARDWARE_EFFICIENT, 1, {"layers": 2}),
)


def desk_sweep_config(output_dir, sizes=(16, 24, 32), k_values=(2, 3, 4), seeds: int = 5,
                      random_depth: int = 20, two_qubit_fraction: float = 0.66,
                      parallelism: int = 1, seed: int = 0,
                      ea: EaConfig = EaConfig(generations=100),
                      stochg_iterations: int = 20) -> BenchConfig:
    """Structured templates against RandomUniform at matched sizes.

    Every (kind, n) gets ``seeds`` instances; StochG runs in fixed-iteration
    mode so the sweep is reproducible.
    """
    suites = []
    for n in sizes:
        for kind, depth, params in STRUCTURED_TEMPLATES:
            suites.append(SuiteEntry(kind, n, n, 1, seeds, depth, dict(params)))
        suites.append(SuiteEntry(GenKind.RANDOM_UNIFORM, n, n, 1, seeds, random_depth,
                                 {"two_qubit_fraction": two_qubit_fraction}))
    return BenchConfig(suites=suites, k_values=tuple(k_values), ea=ea,
                       stochg_iterations=stochg_iterations, seed=seed,
                       parallelism=parallelism, output_dir=Path(output_dir))
