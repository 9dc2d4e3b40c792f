"""Pattern-aware sorting.

Sorts sequences in time proportional to ``(log c + 1) * n`` when the input
avoids some permutation pattern whose extremal constant is ``c``, without
being told the pattern.  Correctness holds for every input.
"""
from .core import (Key, Pattern, ResourceLimitError, contains_pattern, inverse,
                   is_order_isomorphic, keyed, perm_rank, perm_unrank)
from .generators import (gen_layered_runs, gen_rejection, gen_stack_family,
                         inject_duplicates, partition_into_runs)
from .matrix import BinaryMatrix, count_avoiders, count_T, ex_brute, matrix_contains
from .merge import (MergeStats, Run, certificate_matrices, kway_merge_below,
                    merge_agnostic, merge_known)
from .sorter import SorterConfig, SortReport, iterated_log, sort_pattern_avoiding
from .treesort import (DecisionTree, TreeEnumerator, check_sorts, count_trees_exact,
                       next_tree, run_tree, sort_blocks)

__version__ = "0.1.0"

__all__ = [
    "BinaryMatrix", "DecisionTree", "Key", "MergeStats", "Pattern", "ResourceLimitError",
    "Run", "SortReport", "SorterConfig", "TreeEnumerator", "certificate_matrices",
    "check_sorts", "contains_pattern", "count_T", "count_avoiders", "count_trees_exact",
    "ex_brute", "gen_layered_runs", "gen_rejection", "gen_stack_family",
    "inject_duplicates", "inverse", "is_order_isomorphic", "iterated_log", "keyed",
    "kway_merge_below", "matrix_contains", "merge_agnostic", "merge_known", "next_tree",
    "partition_into_runs", "perm_rank", "perm_unrank", "run_tree", "sort_blocks", "sort_pattern_avoiding",
]
