"""Distortion analysis: cost normalisation, strategy rankings, Mann-Whitney U
with rank-biserial effect size, and Spearman rank agreement."""

from __future__ import annotations

import enum
import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import pandas as pd

BASELINE = "random"
QUBIT_BIN_WIDTH = 15
EXACT_MAX_N = 12


class StatsError(ValueError):
    pass


def midranks(values: Sequence[float]) -> list[float]:
    """1-based ranks, tied values sharing the mean of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        r = (i + j) / 2.0 + 1.0
        for t in range(i, j + 1):
            ranks[order[t]] = r
        i = j + 1
    return ranks


# ---------------------------------------------------------------------------
# Mann-Whitney U
# ---------------------------------------------------------------------------

class MwuMethod(str, enum.Enum):
    EXACT = "exact"
    NORMAL = "normal"


@dataclass(frozen=True)
class MwuResult:
    u_statistic: float
    p_value: float
    rank_biserial: float
    method: MwuMethod


def _exact_two_sided(ranks: Sequence[float], n1: int, u: float) -> float:
    # every placement of the first sample among the pooled (mid)ranks is equally
    # likely; with ties this is the permutation distribution conditional on them
    offset = n1 * (n1 + 1) / 2.0
    le = ge = total = 0
    for combo in itertools.combinations(ranks, n1):
        u_c = sum(combo) - offset
        total += 1
        le += u_c <= u + 1e-9
        ge += u_c >= u - 1e-9
    return min(1.0, 2 * min(le, ge) / total)


def mann_whitney_u(a: Sequence[float], b: Sequence[float],
                   method: Optional[str] = None) -> MwuResult:
    """Two-sided Mann-Whitney U test; ``u_statistic`` is U of ``a``.

    Exact null distribution by enumeration when ``len(a) + len(b) <= 12``
    (over midranks, so ties are handled by conditioning on them); otherwise
    the normal approximation with tie and continuity corrections. ``rank_biserial`` is
    ``1 - 2U/(n1*n2)``, so it is positive when ``a`` tends to be smaller.
    ``method`` ("exact" or "normal") overrides the automatic choice.
    """
    a = [float(x) for x in a]
    b = [float(x) for x in b]
    n1, n2 = len(a), len(b)
    if n1 == 0 or n2 == 0:
        raise StatsError("Mann-Whitney U needs two non-empty samples")
    if not all(math.isfinite(x) for x in a + b):
        raise StatsError("samples must be finite")
    pooled = a + b
    ranks = midranks(pooled)
    u = sum(ranks[:n1]) - n1 * (n1 + 1) / 2.0
    N = n1 + n2
    ties = Counter(pooled)
    if method is None:
        method = MwuMethod.EXACT if N <= EXACT_MAX_N else MwuMethod.NORMAL
    method = MwuMethod(method)
    if method is MwuMethod.EXACT:
        p = _exact_two_sided(ranks, n1, u)
    else:
        mu = n1 * n2 / 2.0
        tie_term = sum(t ** 3 - t for t in ties.values()) / (N * (N - 1)) if N > 1 else 0.0
        var = n1 * n2 / 12.0 * ((N + 1) - tie_term)
        if var <= 0:
            p = 1.0
        else:
            z = max(abs(u - mu) - 0.5, 0.0) / math.sqrt(var)
            p = min(1.0, math.erfc(z / math.sqrt(2.0)))
    return MwuResult(u, p, 1.0 - 2.0 * u / (n1 * n2), method)


# ---------------------------------------------------------------------------
# Spearman
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpearmanResult:
    rho: float
    n: int


def spearman_rho(x: Sequence[float], y: Sequence[float]) -> SpearmanResult:
    if len(x) != len(y):
        raise StatsError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise StatsError("Spearman correlation needs at least 2 items")
    rx = np.array(midranks(list(x)))
    ry = np.array(midranks(list(y)))
    dx, dy = rx - rx.mean(), ry - ry.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise StatsError("a ranking with zero variance has no rank correlation")
    rho = float(dx @ dy) / math.sqrt(sxx * syy)
    return SpearmanResult(max(-1.0, min(1.0, rho)), len(x))


# ---------------------------------------------------------------------------
# record-level aggregation
# ---------------------------------------------------------------------------

def normalized_costs(df: pd.DataFrame, baseline: str = BASELINE) -> pd.DataFrame:
    """Attach ``per_qubit``, ``baseline_cut``, ``rel_to_baseline`` and ``degenerate``.

    Rows need ``circuit_id, k, strategy, cut_cost, n_qubits``; rows without a
    cut (failed runs) are dropped. A zero baseline gives ``rel = 1`` when the
    cut is also zero and ``inf`` otherwise; both are flagged ``degenerate``.
    """
    need = {"circuit_id", "k", "strategy", "cut_cost", "n_qubits"}
    missing = need - set(df.columns)
    if missing:
        raise StatsError(f"records lack columns {sorted(missing)}")
    out = df.copy()
    if "status" in out.columns:
        out = out[out["status"].fillna("ok") == "ok"]
    out = out[out["cut_cost"].notna()].copy()
    if out.empty:
        raise StatsError("no successful records")
    out["cut_cost"] = out["cut_cost"].astype(float)
    base = out[out["strategy"] == baseline][["circuit_id", "k", "cut_cost"]]
    if base.duplicated(["circuit_id", "k"]).any():
        raise StatsError("more than one baseline row in a (circuit, k) group")
    base = base.rename(columns={"cut_cost": "baseline_cut"})
    out = out.drop(columns=[c for c in ("baseline_cut", "per_qubit", "rel_to_baseline",
                                        "degenerate") if c in out.columns])
    out = out.merge(base, on=["circuit_id", "k"], how="left")
    lacking = out[out["baseline_cut"].isna()]
    if not lacking.empty:
        first = lacking.iloc[0]
        raise StatsError(
            f"missing {baseline!r} baseline row for circuit {first['circuit_id']} k={first['k']}")
    out["per_qubit"] = out["cut_cost"] / out["n_qubits"].astype(float)
    zero = out["baseline_cut"] == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = out["cut_cost"] / out["baseline_cut"]
    rel[zero & (out["cut_cost"] == 0)] = 1.0
    rel[zero & (out["cut_cost"] > 0)] = math.inf
    out["rel_to_baseline"] = rel
    out["degenerate"] = zero
    return out


def qubit_bin(n, width: int = QUBIT_BIN_WIDTH):
    return (np.asarray(n) // width) * width


@dataclass(frozen=True)
class RankTable:
    origin: str
    key: str  # "k" or "qubit_bin"
    value: int
    strategies: tuple[str, ...]
    mean_rel: dict = field(default_factory=dict)
    mean_per_qubit: dict = field(default_factory=dict)


def _finite_mean(s: pd.Series) -> float:
    s = s[np.isfinite(s)]
    return float(s.mean()) if len(s) else math.inf


def rank_strategies(df: pd.DataFrame, group_by: str = "k", bin_width: int = QUBIT_BIN_WIDTH,
                    baseline: str = BASELINE) -> list[RankTable]:
    """Rank strategies per (origin, k) or (origin, qubit bin), best first.

    Order is ascending mean ``rel_to_baseline`` (non-finite rows excluded),
    then mean ``per_qubit``, then name. The baseline itself is not ranked.
    """
    if group_by not in ("k", "qubit_bin"):
        raise StatsError(f"group_by must be 'k' or 'qubit_bin', got {group_by!r}")
    d = df[df["strategy"] != baseline].copy()
    if d.empty:
        raise StatsError("no non-baseline records to rank")
    if group_by == "qubit_bin":
        d["qubit_bin"] = qubit_bin(d["n_qubits"].astype(int), bin_width)
    tables = []
    for (origin, value), grp in d.groupby(["origin", group_by], sort=True):
        rel = grp.groupby("strategy")["rel_to_baseline"].apply(_finite_mean)
        pq = grp.groupby("strategy")["per_qubit"].mean()
        names = sorted(rel.index, key=lambda s: (rel[s], pq[s], s))
        tables.append(RankTable(str(origin), group_by, int(value), tuple(names),
                                {s: float(rel[s]) for s in names},
                                {s: float(pq[s]) for s in names}))
    return tables


def rank_table_frame(tables: Sequence[RankTable]) -> pd.DataFrame:
    """One row per table: ``origin_group, <key>, rank_1..rank_R``."""
    if not tables:
        return pd.DataFrame(columns=["origin_group", "k", "rank_1"])
    key = tables[0].key
    width = max(len(t.strategies) for t in tables)
    rows = []
    for t in tables:
        row = {"origin_group": t.origin, key: t.value}
        for i in range(width):
            row[f"rank_{i + 1}"] = t.strategies[i] if i < len(t.strategies) else ""
        rows.append(row)
    return pd.DataFrame(rows)


def mean_rank_positions(tables: Sequence[RankTable]) -> dict[str, float]:
    """Average 1-based position of each strategy over a set of rank tables."""
    pos: dict[str, list[int]] = {}
    for t in tables:
        for i, s in enumerate(t.strategies):
            pos.setdefault(s, []).append(i + 1)
    return {s: float(np.mean(v)) for s, v in pos.items()}


def _agreement(tables_a, tables_b) -> float:
    ra, rb = mean_rank_positions(tables_a), mean_rank_positions(tables_b)
    common = sorted(set(ra) & set(rb))
    try:
        return spearman_rho([ra[s] for s in common], [rb[s] for s in common]).rho
    except StatsError:
        return math.nan


def _iqr(values) -> float:
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    if v.size == 0:
        return math.nan
    q1, q3 = np.percentile(v, [25, 75])
    return float(q3 - q1)


def _var(values) -> float:
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    return float(v.var(ddof=1)) if v.size > 1 else math.nan


@dataclass
class DistortionReport:
    reference: str
    summary: pd.DataFrame     # one row per non-reference origin
    by_k: pd.DataFrame        # rank agreement per (origin, k)
    dispersion: pd.DataFrame  # per (origin, strategy)


def distortion_report(df: pd.DataFrame, reference_origin: str,
                      baseline: str = BASELINE) -> DistortionReport:
    """Compare every origin against ``reference_origin`` on the four distortion axes.

    Ranking agreement is Spearman rho between strategies' mean rank positions
    over the per-k rank tables. The MWU test takes the origin's per-qubit
    costs as the first sample and the reference's as the second. Dispersion
    is the IQR and variance of ``rel_to_baseline``.
    """
    origins = sorted(df["origin"].astype(str).unique())
    if len(origins) < 2:
        raise StatsError("distortion analysis needs records from at least 2 origins")
    if reference_origin not in origins:
        raise StatsError(f"reference origin {reference_origin!r} not in records {origins}")
    d = df[df["strategy"] != baseline]
    tables = rank_strategies(df, "k", baseline=baseline)
    by_origin: dict[str, list[RankTable]] = {}
    for t in tables:
        by_origin.setdefault(t.origin, []).append(t)
    ref_tables = by_origin.get(reference_origin, [])
    ref_cost = d[d["origin"] == reference_origin]["per_qubit"].to_numpy()

    summary, per_k = [], []
    for origin in origins:
        if origin == reference_origin:
            continue
        mine = by_origin.get(origin, [])
        cost = d[d["origin"] == origin]["per_qubit"].to_numpy()
        mwu = mann_whitney_u(cost, ref_cost)
        rel = d[d["origin"] == origin]["rel_to_baseline"]
        summary.append({
            "origin": origin,
            "vs_reference_rho": _agreement(mine, ref_tables),
            "mwu_p": mwu.p_value,
            "rank_biserial": mwu.rank_biserial,
            "iqr": _iqr(rel),
            "variance": _var(rel),
        })
        ref_by_k = {t.value: t for t in ref_tables}
        for t in mine:
            if t.value in ref_by_k:
                per_k.append({"origin": origin, "k": t.value,
                              "vs_reference_rho": _agreement([t], [ref_by_k[t.value]])})

    disp = []
    for (origin, strat), grp in d.groupby(["origin", "strategy"], sort=True):
        rel = grp["rel_to_baseline"]
        disp.append({"origin": origin, "strategy": strat, "iqr": _iqr(rel),
                     "variance": _var(rel),
                     "degenerate_rows": int(grp["degenerate"].sum()) if "degenerate" in grp else 0})
    return DistortionReport(
        reference=reference_origin,
        summary=pd.DataFrame(summary, columns=["origin", "vs_reference_rho", "mwu_p",
                                               "rank_biserial", "iqr", "variance"]),
        by_k=pd.DataFrame(per_k, columns=["origin", "k", "vs_reference_rho"]),
        dispersion=pd.DataFrame(disp, columns=["origin", "strategy", "iqr", "variance",
                                               "degenerate_rows"]),
    )
