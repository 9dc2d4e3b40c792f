"""Acceptance criteria; each test prints one PASS/FAIL line.

Run alone with ``pytest -m acceptance -s``.
"""
import itertools
import math
import time

import numpy as np
import pytest

from patsort.core import Key, Pattern, contains_pattern, keyed
from patsort.generators import (gen_layered_runs, gen_stack_family, inject_duplicates,
                                partition_into_runs)
from patsort.matrix import BinaryMatrix, count_avoiders, count_T, ex_brute, matrix_contains
from patsort.merge import certificate_matrices, merge_agnostic
from patsort.sorter import sort_keys, sort_pattern_avoiding
from patsort.treesort import (DecisionTree, TreeEnumerator, check_sorts, count_trees_exact,
                              run_tree, sort_blocks)

from conftest import longest_decreasing, stack_sortable

pytestmark = pytest.mark.acceptance

# comparisons/n measured once on the stack-231 family (seed 20240601 + log2 n)
# for n = 2^12 .. 2^18: 8.187, 8.868, 9.520, 8.329
FROZEN_COMPARISONS_PER_N = 9.52
SCALING_SEED = 20240601


def _fuzz_inputs(rng):
    """1000 inputs: twenty long ones up to 10^5, the rest log-uniform lengths."""
    lengths = [0, 1, 100_000] + [int(x) for x in rng.integers(20_000, 100_000, 17)]
    lengths += [int(10 ** x) for x in rng.uniform(0, math.log10(5000), 980)]
    kinds = ["multiset", "wide", "sorted", "reverse", "constant", "sawtooth",
             "organ", "stack", "layered", "blocks_reversed", "alternating"]
    for i, n in enumerate(lengths):
        kind = kinds[i % len(kinds)]
        seed = int(rng.integers(2**63))
        if n == 0:
            yield kind, []
            continue
        if kind == "multiset":
            vals = rng.integers(0, max(1, n // 4), n)
        elif kind == "wide":
            vals = rng.integers(-2**62, 2**62, n)
        elif kind == "sorted":
            vals = np.sort(rng.integers(0, n, n))
        elif kind == "reverse":
            vals = np.sort(rng.integers(0, n, n))[::-1]
        elif kind == "constant":
            vals = np.full(n, 7)
        elif kind == "sawtooth":
            vals = np.arange(n) % max(1, int(rng.integers(1, 50)))
        elif kind == "organ":
            vals = np.minimum(np.arange(n), np.arange(n)[::-1])
        elif kind == "stack":
            vals = inject_duplicates(list(gen_stack_family(n, 231, seed)), max(1, n // 3), seed)
        elif kind == "layered":
            vals = list(gen_layered_runs(n, int(rng.integers(1, 8)), seed))
        elif kind == "blocks_reversed":
            vals = np.arange(n) // 3 * 3 + 2 - np.arange(n) % 3
        else:
            vals = np.where(np.arange(n) % 2 == 0, np.arange(n), -np.arange(n))
        yield kind, [int(v) for v in vals]


def test_universal_correctness(report):
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    failures = []
    count = 0
    for kind, vals in _fuzz_inputs(rng):
        keys = keyed(vals)
        out, _ = sort_keys(keys)
        if out != sorted(keys):
            failures.append((kind, len(vals)))
        count += 1
    elapsed = time.perf_counter() - start
    report(1, count == 1000 and not failures and elapsed < 60,
           f"{count} inputs, {len(failures)} mismatches, {elapsed:.1f}s")


def test_height_three_tree(report):
    tree = DecisionTree.from_labels(
        3,
        [(1, 2), (2, 3), (1, 3), (2, 3), (1, 3), (1, 3), (2, 3)],
        [(1, 2, 3), (1, 2, 3), (1, 3, 2), (3, 1, 2), (2, 1, 3), (2, 1, 3), (2, 3, 1), (3, 2, 1)],
    )
    s = (7, 2, 3)
    sigma = run_tree(tree, s)
    report(2, sigma == (2, 3, 1) and check_sorts(s, sigma) and s[1] <= s[2] <= s[0],
           f"leaf {sigma}")


def _certificate_corpus():
    """200 stack-231 and 200 layered (t=3) instances, lengths 16..512."""
    rng = np.random.default_rng(3)
    for family, pattern in (("stack-231", Pattern((2, 3, 1))), ("layered-3", Pattern((4, 3, 2, 1)))):
        for _ in range(200):
            n = int(rng.integers(16, 513))
            seed = int(rng.integers(2**63))
            if family == "stack-231":
                s = list(gen_stack_family(n, 231, seed))
            else:
                s = list(gen_layered_runs(n, 3, seed))
            dup = inject_duplicates(s, max(2, n // 8), seed)
            yield family, pattern, s, dup


def _avoids(family, pattern, s):
    if len(s) <= 64 and contains_pattern(s, pattern):
        return False
    if family == "stack-231":
        return stack_sortable(s)
    return longest_decreasing(s) <= 3


@pytest.fixture(scope="module")
def certificate_runs():
    start = time.perf_counter()
    runs = []
    for family, pattern, s, dup in _certificate_corpus():
        assert _avoids(family, pattern, s) and _avoids(family, pattern, dup)
        _, perm_stats = merge_agnostic(partition_into_runs(s, 16))
        _, dup_stats = merge_agnostic(partition_into_runs(dup, 16))
        runs.append((family, pattern, perm_stats, dup_stats))
    return runs, time.perf_counter() - start


def test_certificate_avoidance(report, certificate_runs):
    certificate_runs, build_time = certificate_runs
    start = time.perf_counter() - build_time
    violations = phases = 0
    for family, pattern, perm_stats, dup_stats in certificate_runs:
        P = BinaryMatrix.from_permutation(pattern)
        for i in range(1, perm_stats.phase_count + 1):
            touch, _, _ = certificate_matrices(perm_stats, i)
            violations += matrix_contains(touch, P)
            phases += 1
        for i in range(1, dup_stats.phase_count + 1):
            _, heavy, odd_light = certificate_matrices(dup_stats, i)
            violations += matrix_contains(heavy, P) + matrix_contains(odd_light, P)
            phases += 1
    elapsed = time.perf_counter() - start
    report(3, len(certificate_runs) == 400 and violations == 0 and elapsed < 120,
           f"{len(certificate_runs)} instances, {phases} phases, {violations} violations, {elapsed:.1f}s")


def test_round_accounting(report, certificate_runs):
    certificate_runs, _ = certificate_runs
    bad = rounds = 0
    for _, _, *stats_pair in certificate_runs:
        for stats in stats_pair:
            for ph in stats.phases:
                bad += len(ph.rounds) > ph.m
                for rnd in ph.rounds:
                    rounds += 1
                    bad += rnd.emitted < 1
                    bad += rnd.cutoff is not None and len(rnd.touched) != ph.d
    report(4, bad == 0 and rounds > 0, f"{rounds} rounds, {bad} violations")


def test_enumerator(report):
    e = TreeEnumerator(2, 1)
    small = set()
    while e.h == 1:
        small.add(e.current)
        e.advance()
    e = TreeEnumerator(3)
    seen, positions = set(), []
    for _ in range(10**5):
        seen.add(e.current.digits)
        positions.append(e.position())
        e.advance()
    ok = (len(small) == 16 == count_trees_exact(2, 1) and len(seen) == 10**5
          and all(a < b for a, b in zip(positions, positions[1:])))
    report(5, ok, f"k=2,h=1: {len(small)} trees; k=3: {len(seen)} distinct of 10^5")


def test_reachability(report):
    blocks = [p for p in itertools.permutations((1, 2, 3)) if not contains_pattern(p, (2, 3, 1))]
    out, stats = sort_blocks(blocks, budget=10**7)
    bound = math.ceil(math.log2(5)) + 6
    ok = (len(blocks) == 5 and all(b == sorted(b) for b in out)
          and stats.final_height <= bound and stats.final_height == 3 and not stats.fallback_used)
    report(6, ok, f"height {stats.final_height} (bound {bound}), advances {stats.tree_advances}")


def test_counting_oracles(report):
    start = time.perf_counter()
    avoiders = [count_avoiders((2, 3, 1), n) for n in (3, 4, 5)]
    t22 = count_T((1, 2), 2, 2)
    ex = [ex_brute((1, 2), n) for n in range(1, 6)]
    elapsed = time.perf_counter() - start
    ok = (avoiders == [5, 14, 42] and t22 == 5 and ex == [2 * n - 1 for n in range(1, 6)]
          and elapsed < 30)
    report(7, ok, f"Av={avoiders}, T={t22}, ex={ex}, {elapsed:.1f}s")


def test_scaling_regression(report):
    start = time.perf_counter()
    ratios = []
    for e in (12, 14, 16, 18):
        n = 2**e
        _, rep = sort_pattern_avoiding(list(gen_stack_family(n, 231, SCALING_SEED + e)))
        ratios.append(rep.comparisons / n)
    elapsed = time.perf_counter() - start
    growth = [b / a for a, b in zip(ratios, ratios[1:])]
    ok = (max(ratios) <= 1.1 * FROZEN_COMPARISONS_PER_N and all(g <= 1.1 for g in growth)
          and elapsed < 120)
    report(8, ok, "comparisons/n " + ", ".join(f"{r:.3f}" for r in ratios)
           + f"; max growth {max(growth):.3f}; {elapsed:.1f}s")


def test_stability(report):
    rng = np.random.default_rng(9)
    bad = 0
    sizes = [10**4, 1, 2, 65] + [int(x) for x in rng.integers(1, 10**4, 46)]
    for n in sizes:
        vals = [int(v) for v in rng.choice([-3, 0, 8, 41], n)]
        out, _ = sort_keys(keyed(vals))
        by_value = {}
        for key in out:
            by_value.setdefault(key.value, []).append(key.tie)
        expected = {}
        for i, v in enumerate(vals):
            expected.setdefault(v, []).append(i)
        bad += by_value != expected or [k.value for k in out] != sorted(vals)
    report(9, bad == 0, f"{len(sizes)} inputs, {bad} unstable")
