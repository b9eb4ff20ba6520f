"""Exhaustive walk-enumeration kernels shared by the graph routines.

These depth-first loops dominate the runtime of the walk censuses, so they
are compiled with numba when it is available.  Setting the environment
variable ``SPECTRAL_WALKS_NO_NUMBA=1`` (or any value other than ``0``)
selects the pure-Python path; the two paths run the same source, so results
are identical either way.  ``benchmarks/bench_walk_kernels.py`` compares
their speed.
"""

from __future__ import annotations

import os

import numpy as np


def _numba_enabled() -> bool:
    flag = os.environ.get("SPECTRAL_WALKS_NO_NUMBA", "").strip()
    if flag not in ("", "0"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _numba_enabled()

if NUMBA_ENABLED:
    from numba import njit

    def _jit(fn):
        return njit(cache=True)(fn)
else:

    def _jit(fn):
        return fn


def backend() -> str:
    return "numba" if NUMBA_ENABLED else "python"


@_jit
def closed_walk_counts(indptr, indices, edge_ids, n_edges, k):  # pragma: no cover - exercised via wrappers
    """Count closed non-backtracking walks of length k over a CSR graph.

    Returns (closed, even_closed, cyclic) where `even_closed` restricts to
    walks using every undirected edge an even number of times and `cyclic`
    additionally forbids backtracking across the closure seam.
    """
    n = indptr.shape[0] - 1
    n_closed = 0
    n_even = 0
    n_cyclic = 0
    vert = np.empty(k + 1, np.int64)
    ptr = np.empty(k + 2, np.int64)
    eid_path = np.empty(k + 1, np.int64)
    use = np.zeros(n_edges, np.int64)
    for u in range(n):
        level = 0
        vert[0] = u
        ptr[1] = indptr[u]
        odd = 0
        while level >= 0:
            if level == k:
                if vert[k] == u:
                    n_closed += 1
                    if odd == 0:
                        n_even += 1
                    if k >= 3 and vert[k - 1] != vert[1]:
                        n_cyclic += 1
                level -= 1
                if level >= 0:
                    eid = eid_path[level + 1]
                    use[eid] -= 1
                    if use[eid] % 2 == 1:
                        odd += 1
                    else:
                        odd -= 1
                continue
            row_end = indptr[vert[level] + 1]
            p = ptr[level + 1]
            while p < row_end:
                w = indices[p]
                if level >= 1 and w == vert[level - 1]:
                    p += 1
                    continue
                break
            if p < row_end:
                w = indices[p]
                ptr[level + 1] = p + 1
                vert[level + 1] = w
                eid = edge_ids[p]
                eid_path[level + 1] = eid
                use[eid] += 1
                if use[eid] % 2 == 1:
                    odd += 1
                else:
                    odd -= 1
                level += 1
                ptr[level + 1] = indptr[w]
            else:
                level -= 1
                if level >= 0:
                    eid = eid_path[level + 1]
                    use[eid] -= 1
                    if use[eid] % 2 == 1:
                        odd += 1
                    else:
                        odd -= 1
    return n_closed, n_even, n_cyclic


@_jit
def signed_walk_matrix(indptr, indices, weights, k):  # pragma: no cover - exercised via wrappers
    """Sum of entry products over all non-backtracking walks of length k.

    `weights[p]` is the matrix entry for the CSR arc at position p; the
    result `out[u, v]` sums the products along every NB walk from u to v.
    With all weights 1 the entries are exact NB-walk counts.
    """
    n = indptr.shape[0] - 1
    out = np.zeros((n, n), np.float64)
    vert = np.empty(k + 1, np.int64)
    ptr = np.empty(k + 2, np.int64)
    prod = np.empty(k + 1, np.float64)
    for u in range(n):
        if k == 0:
            out[u, u] += 1.0
            continue
        level = 0
        vert[0] = u
        prod[0] = 1.0
        ptr[1] = indptr[u]
        while level >= 0:
            if level == k:
                out[u, vert[k]] += prod[k]
                level -= 1
                continue
            row_end = indptr[vert[level] + 1]
            p = ptr[level + 1]
            while p < row_end:
                w = indices[p]
                if level >= 1 and w == vert[level - 1]:
                    p += 1
                    continue
                break
            if p < row_end:
                w = indices[p]
                ptr[level + 1] = p + 1
                vert[level + 1] = w
                prod[level + 1] = prod[level] * weights[p]
                level += 1
                ptr[level + 1] = indptr[w]
            else:
                level -= 1
    return out
