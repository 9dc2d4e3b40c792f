"""Instance families that avoid a known pattern.

Randomness comes from numpy's PCG64 bit generator seeded through
``numpy.random.SeedSequence`` (``numpy.random.default_rng(seed)``), which
is bit-for-bit reproducible across platforms and splittable via
``SeedSequence.spawn``.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import Key, Pattern, ResourceLimitError, contains_pattern, inverse, keyed
from .merge import Run

__all__ = [
    "STACK_TARGETS",
    "gen_layered_runs",
    "gen_rejection",
    "gen_stack_family",
    "inject_duplicates",
    "partition_into_runs",
]

REJECTION_MAX_N = 10
REJECTION_MAX_TRIES = 10**6


def _rng(seed: int) -> np.random.Generator:
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.default_rng(seed)


def _reverse(p: Sequence[int]) -> list[int]:
    return list(p)[::-1]


def _complement(p: Sequence[int]) -> list[int]:
    n = len(p)
    return [n + 1 - v for v in p]


def _dyck_word(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform push(+1)/pop(-1) word of length 2n with no prefix below 0.

    Cycle lemma: a uniform arrangement of n+1 pushes and n pops has exactly
    one rotation whose prefix sums stay positive; dropping its leading push
    gives a uniform balanced word.
    """
    steps = np.concatenate([np.ones(n + 1, dtype=np.int64), -np.ones(n, dtype=np.int64)])
    steps = rng.permutation(steps)
    prefix = np.concatenate([[0], np.cumsum(steps)[:-1]])
    last_min = len(prefix) - 1 - int(np.argmin(prefix[::-1]))
    return np.roll(steps, -last_min)[1:]


def _stack_output(word: np.ndarray) -> list[int]:
    stack: list[int] = []
    out: list[int] = []
    pushed = 0
    for step in word.tolist():
        if step > 0:
            pushed += 1
            stack.append(pushed)
        else:
            out.append(stack.pop())
    return out


# Outputs of a stack fed 1..n are exactly the 312-avoiders; the other
# length-3 targets are images under a symmetry of the square.
STACK_TARGETS = {
    312: lambda p: list(p),
    231: lambda p: list(inverse(p)),
    213: _reverse,
    132: _complement,
}


def gen_stack_family(n: int, target: int = 231, seed: int = 0) -> Pattern:
    """Random permutation of length ``n`` avoiding ``target`` (one of
    231, 312, 132, 213), from a uniform push/pop word."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if target not in STACK_TARGETS:
        raise ValueError(f"target must be one of {sorted(STACK_TARGETS)}")
    rng = _rng(seed)
    base = _stack_output(_dyck_word(n, rng))
    return Pattern(STACK_TARGETS[target](base))


def gen_layered_runs(n: int, t: int, seed: int = 0) -> Pattern:
    """Random interleaving of ``t`` increasing runs over consecutive value
    blocks; the result avoids the decreasing pattern of length ``t + 1``."""
    if n < 1 or t < 1:
        raise ValueError("n and t must be >= 1")
    rng = _rng(seed)
    sizes = [n // t + (1 if b < n % t else 0) for b in range(t)]
    labels = rng.permutation(np.repeat(np.arange(t), sizes))
    order = np.argsort(labels, kind="stable")
    out = np.empty(n, dtype=np.int64)
    out[order] = np.arange(1, n + 1)
    return Pattern(out.tolist())


def gen_rejection(p: Sequence[int], n: int, seed: int = 0,
                  max_tries: int = REJECTION_MAX_TRIES) -> Pattern:
    """Uniform sample from the ``p``-avoiding permutations of length ``n``."""
    p = Pattern(p)
    if not 1 <= n <= REJECTION_MAX_N:
        raise ValueError(f"rejection sampling needs 1 <= n <= {REJECTION_MAX_N}")
    rng = _rng(seed)
    for _ in range(max_tries):
        cand = (rng.permutation(n) + 1).tolist()
        if not contains_pattern(cand, p):
            return Pattern(cand)
    raise ResourceLimitError(f"no {p}-avoider found in {max_tries} draws")


def inject_duplicates(values: Sequence[int], distinct: int, seed: int = 0) -> list[int]:
    """Collapse values through a random non-decreasing map onto at most
    ``distinct`` levels.

    A non-decreasing map never creates a strict inversion, so any pattern
    avoided by ``values`` is still avoided afterwards.
    """
    if distinct < 1:
        raise ValueError("distinct must be >= 1")
    if not values:
        return []
    rng = _rng(seed)
    levels = sorted(set(values))
    cuts_needed = min(distinct, len(levels)) - 1
    cuts = np.sort(rng.choice(np.arange(1, len(levels)), size=cuts_needed, replace=False)) \
        if cuts_needed > 0 else np.array([], dtype=np.int64)
    # level index i maps to the number of cuts <= i
    bucket = np.searchsorted(cuts, np.arange(len(levels)), side="right")
    rank = {v: i for i, v in enumerate(levels)}
    return [int(bucket[rank[v]]) + 1 for v in values]


def partition_into_runs(s: Sequence[int] | Sequence[Key], block: int) -> list[Run]:
    """Cut ``s`` into consecutive blocks of ``block`` elements, each sorted.

    Plain values get their global positions as tie indices.
    """
    if block < 1:
        raise ValueError("block must be >= 1")
    keys = list(s) if s and isinstance(s[0], Key) else keyed(s)
    return [Run(sorted(keys[i:i + block])) for i in range(0, len(keys), block)]
