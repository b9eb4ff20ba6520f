"""Timing comparison of the compiled and pure-Python walk kernels.

Run with `python benchmarks/bench_walk_kernels.py`.  When numba is active
the jitted entry point and its `.py_func` source run side by side; with
SPECTRAL_WALKS_NO_NUMBA=1 both columns show the interpreter path.
"""

import time

import numpy as np

from spectral_walks import _kernels, graphs
from spectral_walks.ensembles import sign_matrix_on_graph


def _time(fn, *args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_counts(g, k):
    indptr, indices, edge_ids, n_edges = g.csr()
    fast = _kernels.closed_walk_counts
    slow = getattr(fast, "py_func", fast)
    fast(indptr, indices, edge_ids, n_edges, 3)  # warm the JIT cache
    t_fast, r_fast = _time(fast, indptr, indices, edge_ids, n_edges, k)
    t_slow, r_slow = _time(slow, indptr, indices, edge_ids, n_edges, k, repeats=1)
    assert tuple(r_fast) == tuple(r_slow)
    return t_fast, t_slow, r_fast[0]


def bench_signed(g, k, seed=7):
    M = sign_matrix_on_graph(g, seed)
    indptr, indices, _, _ = g.csr()
    weights = np.empty(indices.shape[0])
    pos = 0
    for u in range(g.n):
        for v in g.adjacency[u]:
            weights[pos] = M.matrix[u, v]
            pos += 1
    fast = _kernels.signed_walk_matrix
    slow = getattr(fast, "py_func", fast)
    fast(indptr, indices, weights, 3)
    t_fast, r_fast = _time(fast, indptr, indices, weights, k)
    t_slow, r_slow = _time(slow, indptr, indices, weights, k, repeats=1)
    assert np.array_equal(r_fast, r_slow)
    return t_fast, t_slow


def main():
    print(f"kernel backend: {_kernels.backend()}")
    print(f"{'case':<28}{'compiled':>12}{'python':>12}{'speedup':>10}")
    cases = [
        ("closed walks K7, k=9", graphs.complete(7), 9),
        ("closed walks K6, k=10", graphs.complete(6), 10),
        ("closed walks Petersen, k=14", graphs.petersen(), 14),
    ]
    for label, g, k in cases:
        t_fast, t_slow, _ = bench_counts(g, k)
        print(f"{label:<28}{t_fast:>11.3f}s{t_slow:>11.3f}s{t_slow / t_fast:>9.1f}x")
    for label, g, k in [
        ("signed sums K7, k=9", graphs.complete(7), 9),
        ("signed sums Petersen, k=13", graphs.petersen(), 13),
    ]:
        t_fast, t_slow = bench_signed(g, k)
        print(f"{label:<28}{t_fast:>11.3f}s{t_slow:>11.3f}s{t_slow / t_fast:>9.1f}x")


if __name__ == "__main__":
    main()
