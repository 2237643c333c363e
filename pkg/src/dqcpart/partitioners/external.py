"""Subprocess adapter for external partitioners speaking the hMETIS file protocol."""

from __future__ import annotations

import os
import shlex
import signal
import subprocess
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..hypergraph import read_partition, write_hmetis
from .base import PartitionOutcome, PartitionRequest, finish

TOKENS = ("input", "output", "k", "epsilon", "seed")


class ExternalSolverError(RuntimeError):
    pass


class SolverExitError(ExternalSolverError):
    pass


class SolverOutputError(ExternalSolverError):
    pass


class SolverTimeout(ExternalSolverError):
    pass


@dataclass(frozen=True)
class ExternalSolverConfig:
    """``command`` is a shell-style template; ``{input}``, ``{output}``, ``{k}``,
    ``{epsilon}`` and ``{seed}`` are substituted per argument."""

    name: str
    command: str
    timeout_ms: Optional[float] = 60_000

    def __post_init__(self):
        if not self.name:
            raise ValueError("external solver needs a name")
        if not shlex.split(self.command):
            raise ValueError(f"external solver {self.name}: empty command")


def _expand(template: str, values: dict) -> list[str]:
    args = []
    for tok in shlex.split(template):
        for key in TOKENS:
            tok = tok.replace("{" + key + "}", str(values[key]))
        args.append(tok)
    return args


def partition_external(req: PartitionRequest, solver: ExternalSolverConfig) -> PartitionOutcome:
    """Run ``solver`` on a temporary hMETIS file and score its partition locally.

    The solver's own cut report, if any, is ignored. Temporary files are
    removed on every exit path.
    """
    t0 = time.perf_counter()
    spec = req.spec
    timeout_ms = req.budget_ms if req.budget_ms is not None else solver.timeout_ms
    with tempfile.TemporaryDirectory(prefix=f"dqcpart-{solver.name}-") as tmp:
        inp = Path(tmp) / "hypergraph.hgr"
        out = Path(tmp) / "partition.txt"
        inp.write_text(write_hmetis(req.hypergraph))
        args = _expand(solver.command, {
            "input": inp, "output": out, "k": spec.k,
            "epsilon": spec.epsilon, "seed": req.seed,
        })
        proc = subprocess.Popen(args, stdout=subprocess.PIPE, stderr=subprocess.PIPE,
                                start_new_session=True, text=True)
        try:
            _, stderr = proc.communicate(
                timeout=None if timeout_ms is None else timeout_ms / 1000.0)
        except subprocess.TimeoutExpired:
            try:
                os.killpg(proc.pid, signal.SIGKILL)
            except ProcessLookupError:
                pass
            proc.communicate()
            raise SolverTimeout(
                f"{solver.name} exceeded {timeout_ms:.0f} ms and was killed") from None
        if proc.returncode != 0:
            raise SolverExitError(
                f"{solver.name} exited with status {proc.returncode}: {stderr.strip()[-500:]}")
        if not out.exists():
            raise SolverOutputError(f"{solver.name} wrote no partition file")
        try:
            assignment = read_partition(out.read_text(), spec.n, spec.k)
        except ValueError as exc:
            raise SolverOutputError(f"{solver.name}: {exc}") from None
    return finish(req, assignment, solver.name, t0)
