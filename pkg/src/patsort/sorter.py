"""End-to-end sorter: decision-tree block sorting plus three merge layers.

Blocks of length ``k = ceil(log log log n)`` are sorted by
:func:`~patsort.treesort.sort_blocks`.  The sorted blocks are then merged
bottom-up with :func:`~patsort.merge.merge_agnostic`: first in groups of
``log log n / log log log n`` consecutive runs, then in groups of
``log n / log log n``, and finally all at once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .core import Key, keyed
from .merge import MergeStats, Run, merge_agnostic
from .treesort import (DEFAULT_TREE_BUDGET, MAX_TABLE_K, TreeSortStats,
                       binary_insertion_sort, sort_blocks)

__all__ = [
    "LayerStats",
    "SortReport",
    "SorterConfig",
    "iterated_log",
    "log_iter",
    "sort_keys",
    "sort_pattern_avoiding",
]


@dataclass(frozen=True)
class SorterConfig:
    k_override: int | None = None
    k_max: int = 3
    tree_budget: int | None = DEFAULT_TREE_BUDGET
    small_n_cutoff: int = 64

    def __post_init__(self):
        if not 1 <= self.k_max <= MAX_TABLE_K:
            raise ValueError(f"k_max must be in 1..{MAX_TABLE_K}")
        if self.k_override is not None and not 1 <= self.k_override <= MAX_TABLE_K:
            raise ValueError(f"k_override must be in 1..{MAX_TABLE_K}")
        if self.small_n_cutoff < 2:
            raise ValueError("small_n_cutoff must be >= 2")
        if self.tree_budget is not None and self.tree_budget < 0:
            raise ValueError("tree_budget must be non-negative")


@dataclass
class LayerStats:
    tuple_size: int
    runs_in: int
    runs_out: int
    groups_merged: int = 0
    comparisons: int = 0
    max_phases: int = 0
    rounds: int = 0


@dataclass
class SortReport:
    n: int
    k: int | None = None
    direct: bool = False
    block_stats: TreeSortStats | None = None
    tail_comparisons: int = 0
    layers: list[LayerStats] = field(default_factory=list)
    final_merge: MergeStats | None = None
    comparisons: int = 0

    @property
    def stage_comparisons(self) -> int:
        total = self.tail_comparisons
        if self.block_stats is not None:
            total += self.block_stats.comparisons
        total += sum(layer.comparisons for layer in self.layers)
        return total


def log_iter(n: float, t: int) -> float:
    """``log2`` applied ``t`` times; each intermediate value is clamped to 1."""
    if n < 1 or t < 0:
        raise ValueError("need n >= 1 and t >= 0")
    x = n
    for _ in range(t):
        x = max(1.0, math.log2(x))
    return float(x)


def iterated_log(n: int, t: int) -> int:
    """``ceil`` of :func:`log_iter`, at least 1."""
    return max(1, math.ceil(log_iter(n, t)))


def _merge_layer(runs: list[Run], size: int) -> tuple[list[Run], LayerStats]:
    layer = LayerStats(tuple_size=size, runs_in=len(runs), runs_out=0)
    merged: list[Run] = []
    for i in range(0, len(runs), size):
        group = runs[i:i + size]
        if len(group) == 1:
            merged.append(group[0])
            continue
        out, st = merge_agnostic(group)
        merged.append(Run(out))
        layer.groups_merged += 1
        layer.comparisons += st.comparisons
        layer.max_phases = max(layer.max_phases, st.phase_count)
        layer.rounds += st.rounds_total
    layer.runs_out = len(merged)
    return merged, layer


def sort_keys(keys: Sequence[Key], cfg: SorterConfig | None = None) -> tuple[list[Key], SortReport]:
    cfg = cfg or SorterConfig()
    n = len(keys)
    report = SortReport(n=n)
    if n <= cfg.small_n_cutoff:
        out, report.tail_comparisons = binary_insertion_sort(keys)
        report.direct = True
        report.comparisons = report.tail_comparisons
        return out, report

    k = cfg.k_override or min(iterated_log(n, 3), cfg.k_max)
    report.k = k
    full = n - n % k
    sorted_blocks, report.block_stats = sort_blocks(
        [keys[i:i + k] for i in range(0, full, k)], cfg.tree_budget)
    runs = [Run(b) for b in sorted_blocks]
    if full < n:
        tail, report.tail_comparisons = binary_insertion_sort(keys[full:])
        runs.append(Run(tail))

    lg1, lg2, lg3 = log_iter(n, 1), log_iter(n, 2), log_iter(n, 3)
    for size in (max(2, math.ceil(lg2 / lg3)), max(2, math.ceil(lg1 / lg2))):
        runs, layer = _merge_layer(runs, size)
        report.layers.append(layer)

    if len(runs) > 1:
        out, report.final_merge = merge_agnostic(runs)
        final_comps = report.final_merge.comparisons
    else:
        out, final_comps = runs[0].remaining(), 0
    report.comparisons = report.stage_comparisons + final_comps
    return out, report


def sort_pattern_avoiding(s: Sequence[int], cfg: SorterConfig | None = None
                          ) -> tuple[list[int], SortReport]:
    """Stable ascending sort of ``s``; fast when ``s`` avoids a short pattern.

    Correctness never depends on pattern avoidance, only the cost does.
    """
    out, report = sort_keys(keyed(s), cfg)
    return [key.value for key in out], report
