import bisect
import itertools

import pytest

from patsort.core import Key, is_order_isomorphic, keyed
from patsort.merge import Run


def make_runs(lists):
    """Runs over consecutive pieces of one global input (ties = positions)."""
    runs, pos = [], 0
    for piece in lists:
        runs.append(Run(sorted(keyed(piece, pos))))
        pos += len(piece)
    return runs


def reference_sort(values):
    return sorted(keyed(values))


def naive_contains(s, p):
    """All-subsets containment check, independent of the pruned search."""
    return any(is_order_isomorphic([s[i] for i in idx], p)
               for idx in itertools.combinations(range(len(s)), len(p)))


def stack_sortable(perm):
    """Single pass through a stack; succeeds exactly on 231-avoiders."""
    stack, out = [], []
    for v in perm:
        while stack and stack[-1] < v:
            out.append(stack.pop())
        stack.append(v)
    out.extend(reversed(stack))
    return out == sorted(perm)


def longest_decreasing(seq):
    tails = []
    for v in seq:
        x = -v
        i = bisect.bisect_left(tails, x)
        if i == len(tails):
            tails.append(x)
        else:
            tails[i] = x
    return len(tails)


@pytest.fixture
def report(capsys):
    """Print a one-line verdict for an acceptance criterion, then assert it."""
    def _report(criterion, ok, detail=""):
        with capsys.disabled():
            print(f"\n[acceptance {criterion}] {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, f"criterion {criterion} failed: {detail}"
    return _report
