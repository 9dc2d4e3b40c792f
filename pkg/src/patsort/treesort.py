"""Sorting many short blocks with one shared, advancing decision tree.

A decision tree of height ``h`` for blocks of length ``k`` is stored as a
perfect binary tree in heap layout: node ``i`` (1-based) has children
``2i`` and ``2i + 1``.  Nodes ``1 .. 2^h - 1`` are internal and carry a
pair code ``c`` meaning "is ``s[c // k] <= s[c % k]``?"; nodes
``2^h .. 2^(h+1) - 1`` are leaves and carry a rank into the lexicographic
table of permutations of length ``k``.

Read in heap order, the labels form one mixed-radix numeral (base ``k*k``
for internal nodes, base ``k!`` for leaves).  Trees of one height are
enumerated by counting that numeral upwards; when it overflows, the
enumeration restarts at the next height.

:func:`sort_blocks` keeps a single candidate tree.  A block is sorted by the
candidate if the leaf it reaches names a sorting permutation; otherwise the
candidate advances and the block is retried.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Sequence

from .core import Pattern

__all__ = [
    "DEFAULT_TREE_BUDGET",
    "DecisionTree",
    "TreeEnumerator",
    "TreeSortStats",
    "binary_insertion_sort",
    "check_sorts",
    "count_trees_exact",
    "next_tree",
    "perm_table",
    "run_tree",
    "sort_blocks",
]

DEFAULT_TREE_BUDGET = 10**7
MAX_TABLE_K = 8


@lru_cache(maxsize=None)
def perm_table(k: int) -> tuple[Pattern, ...]:
    """All permutations of length ``k`` in lexicographic order."""
    if not 1 <= k <= MAX_TABLE_K:
        raise ValueError(f"permutation table supports 1 <= k <= {MAX_TABLE_K}")
    return tuple(Pattern(p) for p in permutations(range(1, k + 1)))


@dataclass(frozen=True)
class DecisionTree:
    k: int
    h: int
    internal: tuple[int, ...]
    leaves: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1 or self.h < 1:
            raise ValueError("k and h must be >= 1")
        if len(self.internal) != 2**self.h - 1 or len(self.leaves) != 2**self.h:
            raise ValueError("label arrays do not match the height")
        if any(not 0 <= c < self.k * self.k for c in self.internal):
            raise ValueError("pair code out of range")
        if any(not 0 <= r < math.factorial(self.k) for r in self.leaves):
            raise ValueError("leaf rank out of range")

    @classmethod
    def from_labels(cls, k: int, pairs: Sequence[tuple[int, int]],
                    perms: Sequence[Sequence[int]]) -> "DecisionTree":
        """Build from 1-based index pairs and leaf permutations, both in heap
        (breadth-first) order."""
        from .core import perm_rank

        h = len(perms).bit_length() - 1
        codes = tuple((i - 1) * k + (j - 1) for i, j in pairs)
        return cls(k, h, codes, tuple(perm_rank(p) for p in perms))

    def pair(self, node: int) -> tuple[int, int]:
        return divmod(self.internal[node - 1], self.k)[0] + 1, self.internal[node - 1] % self.k + 1

    @property
    def digits(self) -> tuple[int, ...]:
        return self.internal + self.leaves


def run_tree(tree: DecisionTree, s: Sequence) -> Pattern:
    """Follow ``s`` from the root to a leaf and return the leaf's permutation."""
    if len(s) != tree.k:
        raise ValueError(f"tree sorts blocks of length {tree.k}, got {len(s)}")
    k = tree.k
    node = 1
    for _ in range(tree.h):
        i, j = divmod(tree.internal[node - 1], k)
        node = 2 * node if s[i] <= s[j] else 2 * node + 1
    return perm_table(k)[tree.leaves[node - 2**tree.h]]


def check_sorts(s: Sequence, sigma: Sequence[int]) -> bool:
    if len(s) != len(sigma):
        raise ValueError("length mismatch")
    return all(s[a - 1] <= s[b - 1] for a, b in zip(sigma, sigma[1:]))


def count_trees_exact(k: int, h: int) -> int:
    """Number of label assignments for trees of height exactly ``h``."""
    if k < 1 or h < 1:
        raise ValueError("k and h must be >= 1")
    return (k * k) ** (2**h - 1) * math.factorial(k) ** (2**h)


class TreeEnumerator:
    """Counts through all decision trees for length-``k`` blocks in
    increasing height, lexicographically within a height."""

    def __init__(self, k: int, h: int | None = None):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self.kfact = math.factorial(k)
        perm_table(k)  # enforces the size cap
        self._reset(k if h is None else h)

    def _reset(self, h: int) -> None:
        if h < 1:
            raise ValueError("height must be >= 1")
        self.h = h
        self.n_internal = 2**h - 1
        size = 2 ** (h + 1) - 1
        self.digits = [0] * size
        self.bases = [self.k * self.k] * self.n_internal + [self.kfact] * (2**h)

    @property
    def current(self) -> DecisionTree:
        return DecisionTree(self.k, self.h, tuple(self.digits[:self.n_internal]),
                            tuple(self.digits[self.n_internal:]))

    def index(self) -> int:
        """Position of the current tree within its height."""
        value = 0
        for d, b in zip(self.digits, self.bases):
            value = value * b + d
        return value

    def position(self) -> tuple[int, int]:
        return self.h, self.index()

    def advance(self) -> DecisionTree:
        self.bump(len(self.digits) - 1)
        return self.current

    def bump(self, pos: int) -> int:
        """Increment digit ``pos`` (carrying), zero every less significant
        digit, and return how many single steps that jump covers.

        Overflowing the most significant digit moves to the first tree of
        the next height.
        """
        digits, bases = self.digits, self.bases
        steps = 1
        weight = 1
        for q in range(len(digits) - 1, pos, -1):
            steps += (bases[q] - 1 - digits[q]) * weight
            weight *= bases[q]
            digits[q] = 0
        q = pos
        while q >= 0:
            if digits[q] + 1 < bases[q]:
                digits[q] += 1
                return steps
            digits[q] = 0
            q -= 1
        self._reset(self.h + 1)
        return steps

    def leaf_node(self, s: Sequence) -> tuple[int, int]:
        """Run the current tree; return (heap node of the leaf, comparisons)."""
        digits, k = self.digits, self.k
        node = 1
        for _ in range(self.h):
            i, j = divmod(digits[node - 1], k)
            node = 2 * node if s[i] <= s[j] else 2 * node + 1
        return node, self.h

    def leaf_perm(self, node: int) -> Pattern:
        return perm_table(self.k)[self.digits[node - 1]]


def next_tree(e: TreeEnumerator) -> DecisionTree:
    return e.advance()


def binary_insertion_sort(items: Sequence) -> tuple[list, int]:
    """Stable binary insertion sort; returns (sorted list, comparisons)."""
    out: list = []
    comps = 0
    for x in items:
        lo, hi = 0, len(out)
        while lo < hi:
            mid = (lo + hi) // 2
            comps += 1
            if x < out[mid]:
                hi = mid
            else:
                lo = mid + 1
        out.insert(lo, x)
    return out, comps


@dataclass
class TreeSortStats:
    k: int
    blocks: int = 0
    successful_runs: int = 0
    unsuccessful_runs: int = 0
    tree_advances: int = 0
    comparisons: int = 0
    fallback_blocks: int = 0
    final_height: int = 0
    candidates: list[tuple[int, int]] = field(default_factory=list)

    @property
    def fallback_used(self) -> bool:
        return self.fallback_blocks > 0


def sort_blocks(blocks: Sequence[Sequence], budget: int | None = DEFAULT_TREE_BUDGET, *,
                record_candidates: bool = False) -> tuple[list[list], TreeSortStats]:
    """Sort equal-length blocks with a shared candidate decision tree.

    ``budget`` caps the number of single enumeration steps; once it would be
    exceeded the remaining blocks are sorted by binary insertion.  ``None``
    never gives up.

    A failed run only depends on the labels along its root-to-leaf path, and
    the reached leaf is the least significant of those.  Every tree between
    the candidate and the one with that leaf's label incremented therefore
    fails the same way, so the candidate jumps there directly; the step
    count still records every tree passed over.
    """
    blocks = [list(b) for b in blocks]
    k = len(blocks[0]) if blocks else 1
    if any(len(b) != k for b in blocks):
        raise ValueError("all blocks must have the same length")
    stats = TreeSortStats(k=k, blocks=len(blocks))
    if not blocks:
        return [], stats
    if k < 1:
        raise ValueError("blocks must be nonempty")
    enum = TreeEnumerator(k)
    if record_candidates:
        stats.candidates.append(enum.position())
    out: list[list] = []
    giving_up = False
    for s in blocks:
        if giving_up:
            srt, c = binary_insertion_sort(s)
            stats.comparisons += c
            stats.fallback_blocks += 1
            out.append(srt)
            continue
        while True:
            node, c = enum.leaf_node(s)
            sigma = enum.leaf_perm(node)
            c += k - 1
            ok = all(s[a - 1] <= s[b - 1] for a, b in zip(sigma, sigma[1:]))
            stats.comparisons += c
            if ok:
                stats.successful_runs += 1
                out.append([s[a - 1] for a in sigma])
                break
            stats.unsuccessful_runs += 1
            if budget is not None and stats.tree_advances >= budget:
                giving_up = True
            else:
                saved = (enum.h, list(enum.digits))
                steps = enum.bump(node - 1)
                if budget is not None and stats.tree_advances + steps > budget:
                    # the budget runs out among trees that all fail on s
                    enum._reset(saved[0])
                    enum.digits = saved[1]
                    stats.tree_advances = budget
                    giving_up = True
                else:
                    stats.tree_advances += steps
                    if record_candidates:
                        stats.candidates.append(enum.position())
            if giving_up:
                srt, c = binary_insertion_sort(s)
                stats.comparisons += c
                stats.fallback_blocks += 1
                out.append(srt)
                break
    stats.final_height = enum.h
    return out, stats
