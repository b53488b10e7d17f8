"""Robust lower-outlier detection over distance ensembles.

A distance X is flagged when (M - X)/S > g(N, alpha), with M the ensemble
median and S the median absolute deviation.  The critical value g(N, alpha)
standardizes the test so that a clean sample of N independent normals
contains no flagged value with probability 1 - alpha; it is estimated once
by seeded Monte Carlo (the two-sided statistic max|x - M|/S, flagging then
applied to the lower tail only) and cached persistently.

Scenario A tests the full pairwise ensemble, all n(n-1)/2 distances, and
also yields the recommended graph threshold M - g*S.  Scenario B tests each
submission's own row of n-1 distances, which localizes the question "is
anything suspiciously close to THIS submission?".
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .metrics import DistanceMatrix

__all__ = [
    "DEFAULT_SEED",
    "DEFAULT_REPLICATES",
    "DEFAULT_ALPHAS",
    "HampelParams",
    "RobustStats",
    "Flag",
    "FlagReport",
    "robust_stats",
    "simulate_critical",
    "hampel_critical",
    "calibrate_table",
    "cache_path",
    "flag_scenario_a",
    "flag_scenario_b",
]

DEFAULT_SEED = 987654321
DEFAULT_REPLICATES = 100_000
DEFAULT_ALPHAS = (0.01, 0.05)

# Monte Carlo replicates are drawn in fixed-size blocks, one jumped Philox
# substream per block, so the estimate is identical no matter how the blocks
# would be scheduled across workers.
_BLOCK = 4096


@dataclass(frozen=True)
class HampelParams:
    alpha: float = 0.05
    replicates: int = DEFAULT_REPLICATES
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha out of (0,1): {self.alpha}")
        if self.replicates < 10_000:
            raise ValueError(f"replicates too small: {self.replicates}")

    def key(self, n: int) -> str:
        return f"{n},{self.alpha!r},{self.replicates},{self.seed}"


@dataclass(frozen=True)
class RobustStats:
    median: float
    mad: float
    n: int


@dataclass(frozen=True)
class Flag:
    pair: tuple[str, str]
    distance: float
    score: float
    row: str | None = None  # set for scenario B: the row whose test fired


@dataclass
class FlagReport:
    scenario: str
    alpha: float
    threshold_value: float | None
    flags: list[Flag] = field(default_factory=list)

    def unique_pairs(self) -> list[tuple[str, str]]:
        return sorted({f.pair for f in self.flags})


def _median_of_sorted(xs: list[float]) -> float:
    n = len(xs)
    mid = n // 2
    if n % 2:
        return xs[mid]
    return (xs[mid - 1] + xs[mid]) / 2.0


def robust_stats(sample) -> RobustStats:
    """Median and median absolute deviation, computed sort-exactly."""
    xs = sorted(float(x) for x in sample)
    if len(xs) < 3:
        raise ValueError("sample too small for robust statistics")
    med = _median_of_sorted(xs)
    dev = sorted(abs(x - med) for x in xs)
    return RobustStats(med, _median_of_sorted(dev), len(xs))


def simulate_critical(n: int, p: HampelParams) -> float:
    """Monte Carlo estimate of g(n, alpha); pure, no caching.

    Draws p.replicates samples of n standard normals, takes the two-sided
    statistic T = max_i |x_i - M|/S per sample, and returns the (1 - alpha)
    empirical quantile of T (inverse-ECDF convention).
    """
    if n < 3:
        raise ValueError("critical value needs ensemble size >= 3")
    stats = np.empty(p.replicates)
    done = 0
    block_index = 0
    base = np.random.Philox(p.seed)
    while done < p.replicates:
        take = min(_BLOCK, p.replicates - done)
        rng = np.random.Generator(base.jumped(block_index))
        x = rng.standard_normal((take, n))
        med = np.median(x, axis=1, keepdims=True)
        dev = np.abs(x - med)
        mad = np.median(dev, axis=1)
        # a zero MAD cannot occur for continuous draws; guard by redrawing
        while np.any(mad == 0.0):
            bad = np.flatnonzero(mad == 0.0)
            x[bad] = rng.standard_normal((len(bad), n))
            med = np.median(x, axis=1, keepdims=True)
            dev = np.abs(x - med)
            mad = np.median(dev, axis=1)
        stats[done : done + take] = dev.max(axis=1) / mad
        done += take
        block_index += 1
    stats.sort()
    rank = math.ceil((1.0 - p.alpha) * p.replicates)
    return float(stats[rank - 1])


def cache_path() -> Path:
    root = os.environ.get("SIMDETECT_CACHE_DIR")
    if root:
        return Path(root) / "hampel_critical.json"
    return Path.home() / ".cache" / "simdetect" / "hampel_critical.json"


def _load_json(path: Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return data if isinstance(data, dict) else {}
    except (OSError, ValueError):
        return {}


def _shipped_table() -> dict:
    try:
        text = resources.files("simdetect").joinpath("_tables/hampel_critical.json").read_text()
        data = json.loads(text)
        return data if isinstance(data, dict) else {}
    except (OSError, ValueError, ModuleNotFoundError):
        return {}


_memory_cache: dict[str, float] = {}


def hampel_critical(n: int, p: HampelParams = HampelParams()) -> float:
    """g(n, alpha) with three cache layers: process, user file, shipped table.

    A miss everywhere triggers the Monte Carlo simulation and persists the
    result in the user cache (SIMDETECT_CACHE_DIR or ~/.cache/simdetect).
    """
    key = p.key(n)
    if key in _memory_cache:
        return _memory_cache[key]
    user = cache_path()
    table = _load_json(user)
    if key in table:
        g = float(table[key])
        _memory_cache[key] = g
        return g
    shipped = _shipped_table()
    if key in shipped:
        g = float(shipped[key])
        _memory_cache[key] = g
        return g
    g = simulate_critical(n, p)
    _memory_cache[key] = g
    table[key] = g
    try:
        user.parent.mkdir(parents=True, exist_ok=True)
        tmp = user.with_suffix(".tmp")
        tmp.write_text(json.dumps(table, sort_keys=True, indent=2) + "\n", encoding="utf-8")
        tmp.replace(user)
    except OSError:
        pass  # cache is an optimization; never fail the analysis over it
    return g


def calibrate_table(
    n_list,
    alpha_list,
    replicates: int = DEFAULT_REPLICATES,
    seed: int = DEFAULT_SEED,
) -> dict[str, float]:
    """Critical values for the cross product of sizes and alphas."""
    table: dict[str, float] = {}
    for n in n_list:
        for alpha in alpha_list:
            p = HampelParams(alpha=alpha, replicates=replicates, seed=seed)
            table[p.key(n)] = hampel_critical(n, p)
    return table


def _flag_ensemble(
    values: list[float],
    pairs: list[tuple[str, str]],
    p: HampelParams,
    row: str | None = None,
) -> tuple[list[Flag], float]:
    """Flags for one ensemble plus its threshold M - g*S."""
    st = robust_stats(values)
    g = hampel_critical(st.n, p)
    flags = []
    if st.mad > 0.0:
        threshold = st.median - g * st.mad
        for val, pair in zip(values, pairs):
            score = (st.median - val) / st.mad
            if score > g:
                flags.append(Flag(pair, val, score, row))
    else:
        # degenerate scale: anything strictly below the median is infinitely
        # surprising; a constant ensemble flags nothing
        threshold = st.median
        for val, pair in zip(values, pairs):
            if val < st.median:
                flags.append(Flag(pair, val, math.inf, row))
    return flags, threshold


def flag_scenario_a(m: DistanceMatrix, p: HampelParams) -> FlagReport:
    """Outliers of the full pairwise-distance ensemble."""
    n = m.n
    if n * (n - 1) // 2 < 3:
        raise ValueError("scenario A needs at least 3 pairwise distances")
    values = []
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            values.append(float(m.values[i, j]))
            pairs.append((m.ids[i], m.ids[j]))
    flags, threshold = _flag_ensemble(values, pairs, p)
    flags.sort(key=lambda f: (f.distance, f.pair))
    return FlagReport("A", p.alpha, threshold, flags)


def flag_scenario_b(m: DistanceMatrix, p: HampelParams) -> FlagReport:
    """Per-row outliers: each submission's own distance ensemble."""
    n = m.n
    if n < 4:
        raise ValueError("scenario B needs at least 4 submissions")
    flags: list[Flag] = []
    for k in range(n):
        values = []
        pairs = []
        for j in range(n):
            if j == k:
                continue
            values.append(float(m.values[k, j]))
            a, b = sorted((m.ids[k], m.ids[j]))
            pairs.append((a, b))
        row_flags, _ = _flag_ensemble(values, pairs, p, row=m.ids[k])
        flags.extend(row_flags)
    flags.sort(key=lambda f: (f.distance, f.pair, f.row or ""))
    return FlagReport("B", p.alpha, None, flags)
