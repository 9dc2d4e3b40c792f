"""Brute-force combinatorics over 0/1 matrices.

Matrices are indexed ``(col, row)`` with both coordinates 1-based and rows
counted bottom to top, so the matrix of a permutation ``p`` has its ones at
``(i, p[i-1])``.  All counting routines are exhaustive searches intended for
tiny sizes; they guard themselves with explicit caps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .core import Pattern, ResourceLimitError, contains_pattern, embeds

__all__ = [
    "BinaryMatrix",
    "count_T",
    "count_avoiders",
    "ex_brute",
    "matrix_contains",
]


@dataclass(frozen=True)
class BinaryMatrix:
    cols: int
    rows: int
    ones: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.cols < 0 or self.rows < 0:
            raise ValueError("matrix dimensions must be non-negative")
        cells = frozenset((int(c), int(r)) for c, r in self.ones)
        for c, r in cells:
            if not (1 <= c <= self.cols and 1 <= r <= self.rows):
                raise ValueError(f"cell {(c, r)} outside {self.cols}x{self.rows}")
        object.__setattr__(self, "ones", cells)

    @classmethod
    def from_permutation(cls, p: Sequence[int]) -> "BinaryMatrix":
        p = Pattern(p)
        return cls(len(p), len(p), frozenset((i, v) for i, v in enumerate(p, 1)))

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> "BinaryMatrix":
        """Build from strings listed top row first, e.g. ``["01", "10"]``."""
        n = len(rows)
        m = len(rows[0]) if rows else 0
        ones = set()
        for t, line in enumerate(rows):
            if len(line) != m:
                raise ValueError("ragged rows")
            for c, ch in enumerate(line, 1):
                if ch == "1":
                    ones.add((c, n - t))
        return cls(m, n, frozenset(ones))

    @property
    def weight(self) -> int:
        return len(self.ones)

    def __contains__(self, cell) -> bool:
        return tuple(cell) in self.ones

    def column_lists(self) -> list[list[int]]:
        columns: list[list[int]] = [[] for _ in range(self.cols)]
        for c, r in self.ones:
            columns[c - 1].append(r)
        for col in columns:
            col.sort()
        return columns

    def permutation(self) -> Pattern | None:
        """The permutation this matrix encodes, if it is a permutation matrix."""
        if self.cols != self.rows or self.weight != self.cols or self.cols == 0:
            return None
        by_col = dict(self.ones)
        if len(by_col) != self.cols or len(set(by_col.values())) != self.rows:
            return None
        return Pattern(by_col[c] for c in range(1, self.cols + 1))

    def padded(self, size: int) -> "BinaryMatrix":
        if size < max(self.cols, self.rows):
            raise ValueError("padding cannot shrink a matrix")
        return BinaryMatrix(size, size, self.ones)

    def __str__(self) -> str:
        return "\n".join(
            "".join("1" if (c, r) in self.ones else "." for c in range(1, self.cols + 1))
            for r in range(self.rows, 0, -1)
        )


def _contains_general(M: BinaryMatrix, P: BinaryMatrix) -> bool:
    if P.cols > M.cols or P.rows > M.rows:
        return False
    p_cols = P.column_lists()
    m_cols = [set(col) for col in M.column_lists()]
    for row_map in combinations(range(1, M.rows + 1), P.rows):
        # greedy leftmost matching is optimal once rows are fixed
        c = 0
        for wanted in p_cols:
            need = [row_map[r - 1] for r in wanted]
            while c < M.cols and not all(r in m_cols[c] for r in need):
                c += 1
            if c == M.cols:
                break
            c += 1
        else:
            return True
    return False


def matrix_contains(M: BinaryMatrix, P: BinaryMatrix) -> bool:
    """Whether ``P`` arises from ``M`` by deleting rows/columns and turning
    ones into zeros."""
    if P.cols == 0 or P.rows == 0:
        raise ValueError("pattern matrix must be nonempty")
    perm = P.permutation()
    if perm is not None:
        return embeds(M.column_lists(), perm)
    return _contains_general(M, P)


def _cell_order(n: int) -> list[tuple[int, int]]:
    # column-major from the bottom-left corner
    return [(c, r) for c in range(1, n + 1) for r in range(1, n + 1)]


def _creates_occurrence(columns: list[list[int]], c: int, r: int, p: Pattern) -> bool:
    # ``columns`` avoids p, so any new occurrence must end at (c, r).
    return embeds(columns[: c - 1] + [[r]], p, anchored=True)


def ex_brute(p: Sequence[int], n: int, n_max: int = 5) -> int:
    """Maximum number of ones in a ``p``-avoiding ``n x n`` matrix.

    Branch and bound over cells in column-major order; a branch is cut when
    its ones plus all undecided cells cannot beat the best matrix so far.
    """
    p = Pattern(p)
    if len(p) < 2:
        raise ValueError("pattern must have length >= 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > n_max:
        raise ResourceLimitError(f"ex_brute limited to n <= {n_max}")
    cells = _cell_order(n)
    total = len(cells)
    columns: list[list[int]] = [[] for _ in range(n)]
    best = 0

    def search(i: int, count: int) -> None:
        nonlocal best
        if count + (total - i) <= best:
            return
        if i == total:
            best = count
            return
        c, r = cells[i]
        if not _creates_occurrence(columns, c, r, p):
            columns[c - 1].append(r)
            search(i + 1, count + 1)
            columns[c - 1].pop()
        search(i + 1, count)

    search(0, 0)
    return best


def count_T(p: Sequence[int], m: int, n: int, m_max: int = 4, n_max: int = 6) -> int:
    """Number of ``p``-avoiding ``m x m`` matrices with exactly ``n`` ones."""
    p = Pattern(p)
    if m < 0 or n < 0:
        raise ValueError("sizes must be non-negative")
    if m > m_max or n > n_max:
        raise ResourceLimitError(f"count_T limited to m <= {m_max}, n <= {n_max}")
    if n > m * m:
        return 0
    cells = _cell_order(m)
    total = len(cells)
    columns: list[list[int]] = [[] for _ in range(m)]

    def search(i: int, left: int) -> int:
        if left == 0:
            return 1
        if total - i < left:
            return 0
        c, r = cells[i]
        found = 0
        if not _creates_occurrence(columns, c, r, p):
            columns[c - 1].append(r)
            found += search(i + 1, left - 1)
            columns[c - 1].pop()
        return found + search(i + 1, left)

    return search(0, n)


def count_avoiders(p: Sequence[int], n: int, n_max: int = 10) -> int:
    """``|Av_n(p)|``: permutations of length ``n`` avoiding ``p``.

    Permutations are grown value by value from the left; containment is
    inherited by extensions, so a prefix containing ``p`` is dropped with its
    whole subtree.
    """
    p = Pattern(p)
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > n_max:
        raise ResourceLimitError(f"count_avoiders limited to n <= {n_max}")
    if n < len(p):
        return math.factorial(n)
    prefix: list[list[int]] = []
    unused = set(range(1, n + 1))

    def search() -> int:
        if not unused:
            return 1
        total = 0
        for v in sorted(unused):
            prefix.append([v])
            if not embeds(prefix, p, anchored=True):
                unused.remove(v)
                total += search()
                unused.add(v)
            prefix.pop()
        return total

    return search()


def avoiders(p: Sequence[int], n: int, n_max: int = 10) -> Iterable[Pattern]:
    """All permutations of length ``n`` avoiding ``p``, lexicographically."""
    from itertools import permutations

    p = Pattern(p)
    if n > n_max:
        raise ResourceLimitError(f"avoiders limited to n <= {n_max}")
    for perm in permutations(range(1, n + 1)):
        if not contains_pattern(perm, p):
            yield Pattern(perm) if perm else perm
