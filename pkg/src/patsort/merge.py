"""Multi-way merging of presorted runs in rounds.

Two drivers share one round primitive:

* :func:`merge_known` is given the merge width ``d`` up front.
* :func:`merge_agnostic` guesses it, doubling ``d`` each phase and capping
  the number of rounds per phase at the number of runs in that phase.

A round pops the ``d + 1`` runs with the smallest heads, merges the first
``d`` of them up to (excluding) the head of the last one, and pushes every
non-empty run back.  When at most ``d`` runs are left they are merged to
exhaustion in one final round.

Every comparison between keys is counted.  Rounds are recorded so that the
touch / heavy / odd-light matrices used in the avoidance arguments can be
rebuilt afterwards with :func:`certificate_matrices`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import Key
from .matrix import BinaryMatrix

__all__ = [
    "MergeStats",
    "PhaseRecord",
    "RoundRecord",
    "Run",
    "RunHeap",
    "certificate_matrices",
    "kway_merge_below",
    "merge_agnostic",
    "merge_known",
]


class Run:
    """A sorted list of keys consumed front to back."""

    __slots__ = ("elements", "cursor")

    def __init__(self, elements: Sequence[Key] = (), cursor: int = 0):
        self.elements = list(elements)
        if not 0 <= cursor <= len(self.elements):
            raise ValueError("cursor out of range")
        self.cursor = cursor

    @classmethod
    def checked(cls, elements: Sequence[Key]) -> "Run":
        els = list(elements)
        for a, b in zip(els, els[1:]):
            if not a < b:
                raise ValueError(f"run is not strictly increasing at {a!r}, {b!r}")
        return cls(els)

    @property
    def head(self) -> Key:
        return self.elements[self.cursor]

    @property
    def exhausted(self) -> bool:
        return self.cursor >= len(self.elements)

    def remaining(self) -> list[Key]:
        return self.elements[self.cursor:]

    def __len__(self) -> int:
        return len(self.elements) - self.cursor

    def __repr__(self) -> str:
        return f"Run({self.remaining()!r})"


@dataclass
class RoundRecord:
    touched: tuple[int, ...]
    cutoff: Key | None
    emitted: int
    heavy: bool
    value: int | None = None  # the common value of a heavy round


@dataclass
class PhaseRecord:
    index: int
    d: int
    m: int  # runs available to this phase, after the phase-start merges
    runs_in: int  # non-empty runs before the phase-start merges
    rounds: list[RoundRecord] = field(default_factory=list)

    def is_full(self, rnd: RoundRecord) -> bool:
        return len(rnd.touched) == self.d


@dataclass
class MergeStats:
    phases: list[PhaseRecord] = field(default_factory=list)
    comparisons: int = 0
    elements_emitted: int = 0

    @property
    def phase_count(self) -> int:
        return len(self.phases)

    @property
    def rounds_total(self) -> int:
        return sum(len(ph.rounds) for ph in self.phases)

    def phase(self, index: int) -> PhaseRecord:
        if not 1 <= index <= len(self.phases):
            raise IndexError(f"phase {index} not recorded (have {len(self.phases)})")
        return self.phases[index - 1]


class RunHeap:
    """Binary min-heap of run ids ordered by the head key of each run.

    Written out by hand (rather than with :mod:`heapq`) so that every key
    comparison can be counted.
    """

    def __init__(self, runs: Sequence[Run], ids: Iterable[int] = ()):
        self.runs = runs
        self.comparisons = 0
        self._heap: list[tuple[Key, int]] = []
        for i in ids:
            self.push(i)

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)

    def push(self, run_id: int) -> None:
        heap = self._heap
        item = (self.runs[run_id].head, run_id)
        heap.append(item)
        pos = len(heap) - 1
        comps = 0
        while pos > 0:
            parent = (pos - 1) >> 1
            comps += 1
            if item[0] < heap[parent][0]:
                heap[pos] = heap[parent]
                pos = parent
            else:
                break
        heap[pos] = item
        self.comparisons += comps

    def pop(self) -> int:
        heap = self._heap
        top = heap[0]
        last = heap.pop()
        if heap:
            self._sift_down(last)
        return top[1]

    def drain(self) -> list[int]:
        ids = [item[1] for item in self._heap]
        self._heap.clear()
        return ids

    def _sift_down(self, item: tuple[Key, int]) -> None:
        heap = self._heap
        n = len(heap)
        pos = 0
        comps = 0
        while True:
            child = 2 * pos + 1
            if child >= n:
                break
            right = child + 1
            if right < n:
                comps += 1
                if heap[right][0] < heap[child][0]:
                    child = right
            comps += 1
            if heap[child][0] < item[0]:
                heap[pos] = heap[child]
                pos = child
            else:
                break
        heap[pos] = item
        self.comparisons += comps


def _merge_two(a: Run, b: Run, cutoff: Key | None, out: list[Key]) -> int:
    """Standard two-pointer merge of ``a`` and ``b`` below ``cutoff``.
    Returns the number of key comparisons."""
    xs, i, la = a.elements, a.cursor, len(a.elements)
    ys, j, lb = b.elements, b.cursor, len(b.elements)
    comps = 0
    append = out.append
    if cutoff is None:
        while i < la and j < lb:
            comps += 1
            if ys[j] < xs[i]:
                append(ys[j])
                j += 1
            else:
                append(xs[i])
                i += 1
        out.extend(xs[i:])
        out.extend(ys[j:])
        a.cursor, b.cursor = la, lb
        return comps
    while i < la and j < lb:
        comps += 2
        if ys[j] < xs[i]:
            y = ys[j]
            if not y < cutoff:
                break
            append(y)
            j += 1
        else:
            x = xs[i]
            if not x < cutoff:
                break
            append(x)
            i += 1
    else:
        # one side is empty; drain the other below the cutoff
        if i < la:
            i, c = _drain_below(xs, i, la, cutoff, out)
        else:
            j, c = _drain_below(ys, j, lb, cutoff, out)
        comps += c
    a.cursor, b.cursor = i, j
    return comps


def _drain_below(xs: list[Key], i: int, n: int, cutoff: Key, out: list[Key]) -> tuple[int, int]:
    start = i
    comps = 0
    while i < n:
        comps += 1
        if not xs[i] < cutoff:
            break
        i += 1
    out.extend(xs[start:i])
    return i, comps


def _merge_heap(runs: list[Run], cutoff: Key | None, out: list[Key]) -> int:
    """Binary-heap ``d``-way merge below ``cutoff``; returns comparisons."""
    heap = RunHeap(runs, range(len(runs)))
    comps = 0
    h = heap._heap
    while h:
        key, rid = h[0]
        if cutoff is not None:
            comps += 1
            if not key < cutoff:
                break
        out.append(key)
        run = runs[rid]
        run.cursor += 1
        if run.cursor < len(run.elements):
            item = (run.elements[run.cursor], rid)
        else:
            item = h.pop()
            if not h:
                break
        heap._sift_down(item)
    return comps + heap.comparisons


def kway_merge_below(runs: Sequence[Run], cutoff: Key | None = None,
                     stats: MergeStats | None = None) -> list[Key]:
    """Emit, in ascending order, every unconsumed key below ``cutoff``.

    ``cutoff=None`` merges to exhaustion.  Cursors are advanced exactly past
    the emitted keys.
    """
    live = [r for r in runs if not r.exhausted]
    out: list[Key] = []
    if not live:
        comps = 0
    elif len(live) == 1:
        run = live[0]
        if cutoff is None:
            out.extend(run.remaining())
            run.cursor = len(run.elements)
            comps = 0
        else:
            run.cursor, comps = _drain_below(run.elements, run.cursor, len(run.elements), cutoff, out)
    elif len(live) == 2:
        comps = _merge_two(live[0], live[1], cutoff, out)
    else:
        comps = _merge_heap(live, cutoff, out)
    if stats is not None:
        stats.comparisons += comps
    return out


def _play_rounds(runs: list[Run], d: int, phase: PhaseRecord, stats: MergeStats,
                 out: list[Key], limit: int | None) -> bool:
    """Run rounds on ``runs`` until exhaustion or ``limit`` rounds.

    Returns True when every run has been consumed.
    """
    heap = RunHeap(runs, (i for i, r in enumerate(runs) if not r.exhausted))
    played = 0
    done = False
    while heap and (limit is None or played < limit):
        before = len(out)
        if len(heap) <= d:
            ids = sorted(heap.drain())
            cutoff = None
            out.extend(kway_merge_below([runs[i] for i in ids], None, stats))
            done = True
        else:
            ids = [heap.pop() for _ in range(d + 1)]
            cutoff = runs[ids[-1]].head
            out.extend(kway_merge_below([runs[i] for i in ids[:d]], cutoff, stats))
            for i in ids:
                if not runs[i].exhausted:
                    heap.push(i)
            ids = sorted(ids[:d])
        emitted = len(out) - before
        first, last = out[before].value, out[-1].value
        heavy = first == last
        phase.rounds.append(RoundRecord(tuple(ids), cutoff, emitted, heavy,
                                        first if heavy else None))
        played += 1
        if done:
            break
    stats.comparisons += heap.comparisons
    return done or not heap


def _live(runs: Iterable[Run]) -> list[Run]:
    return [r for r in runs if not r.exhausted]


def merge_known(runs: Sequence[Run], d: int) -> tuple[list[Key], MergeStats]:
    """Merge with a known width ``d`` (no round cap, single phase).

    Consecutive ``d``-tuples of runs are merged first, the leftover tuple
    folded into its neighbour, leaving ``floor(m / d)`` runs.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    stats = MergeStats()
    live = _live(runs)
    m = len(live)
    if m == 0:
        return [], stats
    groups = [live[i:i + d] for i in range(0, m, d)]
    merged = [g[0] if len(g) == 1 else Run(kway_merge_below(g, None, stats)) for g in groups]
    if m % d and len(merged) > 1:
        tail = merged.pop()
        merged[-1] = Run(kway_merge_below([merged[-1], tail], None, stats))
    phase = PhaseRecord(index=1, d=d, m=len(merged), runs_in=m)
    stats.phases.append(phase)
    out: list[Key] = []
    if len(merged) == 1:
        out.extend(merged[0].remaining())
    else:
        _play_rounds(merged, d, phase, stats, out, None)
    stats.elements_emitted = len(out)
    return out, stats


def _pair_up(live: list[Run], stats: MergeStats) -> list[Run]:
    m = len(live)
    if m == 1:
        return live
    paired = [Run(kway_merge_below(live[i:i + 2], None, stats)) for i in range(0, m - 1, 2)]
    if m % 2:
        paired[-1] = Run(kway_merge_below([paired[-1], live[-1]], None, stats))
    return paired


def merge_agnostic(runs: Sequence[Run]) -> tuple[list[Key], MergeStats]:
    """Merge without knowing the width: phases with ``d = 2, 4, 8, ...``.

    Each phase first merges the surviving runs in consecutive pairs (folding
    an odd one into the last pair), then plays at most as many rounds as
    there are runs.  Output already written is never revisited; the next
    phase starts from the partially consumed runs.
    """
    stats = MergeStats()
    out: list[Key] = []
    live = _live(runs)
    d = 1
    while live:
        d *= 2
        runs_in = len(live)
        live = _pair_up(live, stats)
        phase = PhaseRecord(index=len(stats.phases) + 1, d=d, m=len(live), runs_in=runs_in)
        stats.phases.append(phase)
        if _play_rounds(live, d, phase, stats, out, phase.m):
            break
        live = _live(live)
    stats.elements_emitted = len(out)
    return out, stats


def certificate_matrices(stats: MergeStats, phase: int
                         ) -> tuple[BinaryMatrix, BinaryMatrix, BinaryMatrix]:
    """Rebuild the ``(touch, heavy, odd_light)`` matrices of one phase.

    Columns are the runs of the phase in left-to-right order.  ``touch`` has
    one row per round; ``heavy`` one row per distinct value of a full heavy
    round (ascending); ``odd_light`` one row for each of the 1st, 3rd, 5th...
    full light round.
    """
    ph = stats.phase(phase)
    m = ph.m
    touch = {(c + 1, j) for j, rnd in enumerate(ph.rounds, 1) for c in rnd.touched}

    full = [rnd for rnd in ph.rounds if ph.is_full(rnd)]
    heavy_values = sorted({rnd.value for rnd in full if rnd.heavy})
    row_of = {v: j for j, v in enumerate(heavy_values, 1)}
    heavy = {(c + 1, row_of[rnd.value]) for rnd in full if rnd.heavy for c in rnd.touched}

    light = [rnd for rnd in full if not rnd.heavy][::2]
    odd_light = {(c + 1, j) for j, rnd in enumerate(light, 1) for c in rnd.touched}

    return (BinaryMatrix(m, len(ph.rounds), frozenset(touch)),
            BinaryMatrix(m, len(heavy_values), frozenset(heavy)),
            BinaryMatrix(m, len(light), frozenset(odd_light)))
