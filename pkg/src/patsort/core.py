"""Keys, permutations and brute-force pattern containment.

Every element handled by the sorter is wrapped in a :class:`Key`, a
``(value, tie)`` pair whose tie component is the element's position in the
original input.  Comparing keys lexicographically gives a strict total order
even when values repeat, which is exactly what a stable sort needs.
"""
from __future__ import annotations

import math
from typing import Iterable, NamedTuple, Sequence

__all__ = [
    "Key",
    "Pattern",
    "ResourceLimitError",
    "contains_pattern",
    "inverse",
    "is_order_isomorphic",
    "keyed",
    "perm_rank",
    "perm_unrank",
    "values_of",
]


class ResourceLimitError(RuntimeError):
    """Raised when a brute-force oracle is asked for more than its caps allow."""


class Key(NamedTuple):
    value: int
    tie: int


def keyed(values: Iterable[int], start: int = 0) -> list[Key]:
    """Attach global positions ``start, start+1, ...`` as tie indices."""
    return [Key(v, i) for i, v in enumerate(values, start)]


def values_of(keys: Iterable[Key]) -> list[int]:
    return [key.value for key in keys]


class Pattern(tuple):
    """A permutation of ``1..k`` stored as an immutable tuple.

    >>> Pattern([2, 3, 1])
    Pattern(2,3,1)
    >>> Pattern.parse("2,1,3").k
    3
    """

    def __new__(cls, entries: Iterable[int]) -> "Pattern":
        items = tuple(int(x) for x in entries)
        if not items:
            raise ValueError("a pattern needs at least one entry")
        if sorted(items) != list(range(1, len(items) + 1)):
            raise ValueError(f"{items} is not a permutation of 1..{len(items)}")
        return super().__new__(cls, items)

    @classmethod
    def parse(cls, text: str) -> "Pattern":
        parts = [p for p in text.replace(" ", "").split(",") if p]
        try:
            return cls(int(p) for p in parts)
        except ValueError as exc:
            raise ValueError(f"invalid pattern {text!r}: {exc}") from None

    @property
    def k(self) -> int:
        return len(self)

    def __repr__(self) -> str:
        return "Pattern(" + ",".join(map(str, self)) + ")"

    def __str__(self) -> str:
        return ",".join(map(str, self))


def _sign(x, y) -> int:
    return (x > y) - (x < y)


def is_order_isomorphic(a: Sequence, b: Sequence) -> bool:
    if len(a) != len(b):
        return False
    n = len(a)
    for i in range(n):
        for j in range(i + 1, n):
            if _sign(a[i], a[j]) != _sign(b[i], b[j]):
                return False
    return True


def _bound_indices(p: Sequence[int]) -> tuple[list[int], list[int]]:
    """For each position j, the earlier position holding the nearest smaller
    and nearest larger pattern value (or -1)."""
    below, above = [], []
    for j, pj in enumerate(p):
        lo = hi = -1
        for ell in range(j):
            pl = p[ell]
            if pl < pj and (lo < 0 or pl > p[lo]):
                lo = ell
            elif pl > pj and (hi < 0 or pl < p[hi]):
                hi = ell
        below.append(lo)
        above.append(hi)
    return below, above


def embeds(columns: Sequence[Sequence], p: Sequence[int], *, anchored: bool = False) -> bool:
    """Whether permutation ``p`` occurs in a column-wise point set.

    ``columns[c]`` lists the row coordinates present in column ``c``; an
    occurrence uses strictly increasing columns and rows that are
    order-isomorphic to ``p``.  A plain sequence is the special case of one
    row per column.

    Depth-first search, left to right.  At each level only the leftmost
    column holding a given row is tried: any completion from a later column
    also works from the earlier one.

    With ``anchored`` only occurrences whose last entry lies in the final
    column are searched; callers growing a point set one column at a time use
    it to test just the new occurrences.
    """
    k = len(p)
    m = len(columns)
    if k > m:
        return False
    below, above = _bound_indices(p)
    chosen = [None] * k

    def search(j: int, start: int) -> bool:
        lo = chosen[below[j]] if below[j] >= 0 else None
        hi = chosen[above[j]] if above[j] >= 0 else None
        last = j == k - 1
        tried = set()
        if anchored and last:
            start = m - 1
        for c in range(start, m - (k - j) + 1):
            for r in columns[c]:
                if lo is not None and not lo < r:
                    continue
                if hi is not None and not r < hi:
                    continue
                if last:
                    return True
                if r in tried:
                    continue
                tried.add(r)
                chosen[j] = r
                if search(j + 1, c + 1):
                    return True
        return False

    return search(0, 0)


def contains_pattern(s: Sequence, p: Sequence[int]) -> bool:
    """Exhaustive (pruned) test for an occurrence of ``p`` in ``s``.

    Meant as a test oracle; the worst case is ``O(len(s) ** len(p))``.
    """
    p = p if isinstance(p, Pattern) else Pattern(p)
    return embeds([(v,) for v in s], p)


def inverse(sigma: Sequence[int]) -> Pattern:
    out = [0] * len(sigma)
    for i, v in enumerate(sigma, 1):
        out[v - 1] = i
    return Pattern(out)


def perm_rank(p: Sequence[int]) -> int:
    """Lexicographic rank of ``p`` among permutations of its length."""
    p = p if isinstance(p, Pattern) else Pattern(p)
    k = len(p)
    remaining = list(range(1, k + 1))
    rank = 0
    for i, v in enumerate(p):
        idx = remaining.index(v)
        rank += idx * math.factorial(k - 1 - i)
        remaining.pop(idx)
    return rank


def perm_unrank(r: int, k: int) -> Pattern:
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0 <= r < math.factorial(k):
        raise ValueError(f"rank {r} out of range for k={k}")
    remaining = list(range(1, k + 1))
    out = []
    for i in range(k - 1, -1, -1):
        idx, r = divmod(r, math.factorial(i))
        out.append(remaining.pop(idx))
    return Pattern(out)
