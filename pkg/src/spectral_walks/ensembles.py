"""Random matrix generators with platform-independent seeding.

All randomness flows through the xorshift64* stream in ``_rng``; identical
seeds give bitwise-identical matrices on any platform.  Trial-level streams
are derived with ``derive_seed``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._rng import XorShift64Star, derive_seed  # noqa: F401  (re-exported)
from .graphs import Graph, complete

__all__ = [
    "SignMatrix",
    "RectSignMatrix",
    "wigner_matrix",
    "sign_matrix_on_graph",
    "rect_sign_matrix",
    "covariance",
    "split_wigner",
    "hadamard",
    "derive_seed",
]


@dataclass(frozen=True)
class SignMatrix:
    """Symmetric matrix with entries +-scale on the edges of a host graph."""

    graph: Graph
    matrix: np.ndarray
    scale: float = 1.0


@dataclass(frozen=True)
class RectSignMatrix:
    """n x N matrix with independent entries +-1/sqrt(N)."""

    n: int
    N: int
    matrix: np.ndarray


def wigner_matrix(n: int, seed: int) -> np.ndarray:
    """Symmetric n x n matrix with independent fair signs times 1/(2 sqrt(n))
    on the upper triangle including the diagonal (row-major order)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = XorShift64Star(seed)
    signs = rng.signs(n * (n + 1) // 2)
    A = np.zeros((n, n))
    iu = np.triu_indices(n)
    A[iu] = signs / (2.0 * math.sqrt(n))
    A = A + np.triu(A, 1).T
    return A


def sign_matrix_on_graph(g: Graph, seed: int, constant: int | None = None) -> SignMatrix:
    """Independent fair signs on the edges of g, symmetric.

    `constant=+1` (or -1) overrides randomness with a fixed sign on every
    edge, which is handy for deterministic tests: +1 gives the adjacency
    matrix.
    """
    edges = g.edges
    if constant is None:
        signs = XorShift64Star(seed).signs(len(edges))
    else:
        if constant not in (1, -1):
            raise ValueError("constant override must be +1 or -1")
        signs = np.full(len(edges), float(constant))
    M = np.zeros((g.n, g.n))
    for (u, v), s in zip(edges, signs):
        M[u, v] = M[v, u] = s
    return SignMatrix(graph=g, matrix=M, scale=1.0)


def rect_sign_matrix(n: int, N: int, seed: int) -> RectSignMatrix:
    """n x N matrix of independent entries +-1/sqrt(N), row-major fill."""
    if not 1 <= n <= N:
        raise ValueError("need 1 <= n <= N")
    signs = XorShift64Star(seed).signs(n * N)
    B = signs.reshape(n, N) / math.sqrt(N)
    return RectSignMatrix(n=n, N=N, matrix=B)


def covariance(B: RectSignMatrix) -> np.ndarray:
    """C = B B^t: symmetric positive semidefinite with unit diagonal."""
    M = B.matrix
    return M @ M.T


def split_wigner(A: np.ndarray) -> tuple[SignMatrix, np.ndarray]:
    """Exact decomposition A = S/sqrt(n) + D of a Wigner-ensemble draw.

    S is a half-scale sign matrix on the complete graph (entries +-1/2) and
    D is the diagonal part, with operator norm exactly 1/(2 sqrt(n)).
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("input must be square")
    c = 1.0 / (2.0 * math.sqrt(n))
    if not np.all(np.isclose(np.abs(A), c)):
        raise ValueError("matrix entries do not match the +-1/(2 sqrt(n)) ensemble")
    if not np.array_equal(A, A.T):
        raise ValueError("matrix is not symmetric")
    D = np.diag(np.diag(A))
    S = (A - D) * math.sqrt(n)
    return SignMatrix(graph=complete(n), matrix=S, scale=0.5), D


def hadamard(full_signs: np.ndarray, g: Graph) -> SignMatrix:
    """Entrywise product of a full +-1 symmetric matrix with the adjacency
    pattern of g (zero off the edges)."""
    full_signs = np.asarray(full_signs, dtype=float)
    if full_signs.shape != (g.n, g.n):
        raise ValueError(f"shape {full_signs.shape} does not match graph on {g.n} vertices")
    M = np.zeros((g.n, g.n))
    for u, v in g.edges:
        M[u, v] = M[v, u] = full_signs[u, v]
    return SignMatrix(graph=g, matrix=M, scale=1.0)
