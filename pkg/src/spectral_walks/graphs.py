"""Simple undirected graphs, walk enumeration, and fragment classification.

Walk counting is exhaustive by design: it is the oracle the spectral
identities are checked against, so no transfer-matrix shortcuts are used.
The inner loops live in ``_kernels`` (numba-compiled when available).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._rng import XorShift64Star
from .errors import ResourceLimitError

_MAX_WALK_LENGTH = 14
_MAX_WALK_ESTIMATE = 10_000_000
_PAIRING_ATTEMPTS = 10_000

__all__ = [
    "Graph",
    "Walk",
    "WalkCounts",
    "CensusRow",
    "FragmentReport",
    "complete",
    "complete_bipartite",
    "cycle",
    "petersen",
    "from_edge_list",
    "parse_edge_list_text",
    "load_edge_list",
    "make_graph",
    "random_regular",
    "adjacency_matrix",
    "girth",
    "enumerate_nb_walks",
    "count_walks",
    "signed_walk_sum",
    "signed_walk_sums",
    "even_walk_census",
    "classify_fragments",
]


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph with sorted neighbor lists."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    bipartition: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    _csr: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (u, v) for u in range(self.n) for v in self.adjacency[u] if u < v
        )

    @property
    def n_edges(self) -> int:
        return sum(len(nb) for nb in self.adjacency) // 2

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def max_degree(self) -> int:
        return max((len(nb) for nb in self.adjacency), default=0)

    def is_regular(self) -> int | None:
        degs = {len(nb) for nb in self.adjacency}
        return degs.pop() if len(degs) == 1 else None

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def csr(self):
        """(indptr, indices, edge_ids, n_edges) arrays for the kernels."""
        if not self._csr:
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            for u in range(self.n):
                indptr[u + 1] = indptr[u] + len(self.adjacency[u])
            indices = np.empty(indptr[-1], dtype=np.int64)
            edge_ids = np.empty(indptr[-1], dtype=np.int64)
            eid = {e: i for i, e in enumerate(self.edges)}
            pos = 0
            for u in range(self.n):
                for v in self.adjacency[u]:
                    indices[pos] = v
                    edge_ids[pos] = eid[(u, v) if u < v else (v, u)]
                    pos += 1
            self._csr.update(
                indptr=indptr, indices=indices, edge_ids=edge_ids, n_edges=len(eid)
            )
        c = self._csr
        return c["indptr"], c["indices"], c["edge_ids"], c["n_edges"]


def _build(n: int, pairs, bipartition=None) -> Graph:
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, v in pairs:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if v in nbrs[u]:
            raise ValueError(f"parallel edge ({u}, {v})")
        nbrs[u].add(v)
        nbrs[v].add(u)
    return Graph(
        n=n,
        adjacency=tuple(tuple(sorted(s)) for s in nbrs),
        bipartition=bipartition,
    )


def complete(n: int) -> Graph:
    """K_n, (n-1)-regular."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _build(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def complete_bipartite(n: int, N: int) -> Graph:
    """K_{n,N}: left part 0..n-1, right part n..n+N-1; bi-regular (N, n)."""
    if n < 1 or N < 1:
        raise ValueError("both part sizes must be >= 1")
    left = tuple(range(n))
    right = tuple(range(n, n + N))
    return _build(
        n + N,
        ((u, v) for u in left for v in right),
        bipartition=(left, right),
    )


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return _build(n, ((i, (i + 1) % n) for i in range(n)))


def petersen() -> Graph:
    """Petersen graph: outer 5-cycle, inner pentagram, spokes; 3-regular."""
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    return _build(10, outer + inner + spokes)


def from_edge_list(pairs, n: int | None = None) -> Graph:
    pairs = [(int(u), int(v)) for u, v in pairs]
    if n is None:
        n = 1 + max((max(u, v) for u, v in pairs), default=0)
    return _build(n, pairs)


def parse_edge_list_text(text: str) -> Graph:
    """One whitespace-separated "u v" pair per line, 0-indexed."""
    pairs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: non-integer vertex in {line!r}") from exc
    if not pairs:
        raise ValueError("edge list is empty")
    return from_edge_list(pairs)


def load_edge_list(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list_text(fh.read())


def make_graph(spec: str, **params) -> Graph:
    """Named-construction dispatcher: complete, complete-bipartite, cycle, petersen, edge-list."""
    if spec == "complete":
        return complete(params["n"])
    if spec in ("complete-bipartite", "complete_bipartite"):
        return complete_bipartite(params["n"], params["N"])
    if spec == "cycle":
        return cycle(params["n"])
    if spec == "petersen":
        return petersen()
    if spec in ("edge-list", "edge_list"):
        return load_edge_list(params["path"])
    raise ValueError(f"unknown graph construction {spec!r}")


def random_regular(n: int, d: int, seed: int) -> Graph:
    """Random simple d-regular graph by stub pairing with rejection.

    Uniform conditioned on simplicity; deterministic for a given seed.
    """
    if d < 3:
        raise ValueError("d must be >= 3")
    if n <= d:
        raise ValueError("need n > d")
    if (n * d) % 2 != 0:
        raise ValueError("n*d must be even")
    rng = XorShift64Star(seed)
    for _ in range(_PAIRING_ATTEMPTS):
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        seen = set()
        ok = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v:
                ok = False
                break
            key = (u, v) if u < v else (v, u)
            if key in seen:
                ok = False
                break
            seen.add(key)
        if ok:
            return _build(n, sorted(seen))
    raise ResourceLimitError(
        f"pairing model failed to produce a simple graph in {_PAIRING_ATTEMPTS} attempts"
    )


def adjacency_matrix(g: Graph) -> np.ndarray:
    A = np.zeros((g.n, g.n))
    for u, v in g.edges:
        A[u, v] = A[v, u] = 1.0
    return A


def girth(g: Graph):
    """Length of the shortest cycle via per-root BFS; math.inf for forests."""
    best = math.inf
    for root in range(g.n):
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[root] = 0
        queue = [root]
        head = 0
        while head < len(queue):
            x = queue[head]
            head += 1
            if 2 * dist[x] >= best:
                break
            for w in g.adjacency[x]:
                if dist[w] < 0:
                    dist[w] = dist[x] + 1
                    parent[w] = x
                    queue.append(w)
                elif w != parent[x]:
                    best = min(best, dist[x] + dist[w] + 1)
    return int(best) if best < math.inf else math.inf


# -- walks ------------------------------------------------------------------


@dataclass(frozen=True)
class Walk:
    """Vertex sequence (u_0, ..., u_k) along edges of a host graph."""

    vertices: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.vertices) - 1

    @property
    def is_closed(self) -> bool:
        return self.vertices[0] == self.vertices[-1]

    @property
    def is_nonbacktracking(self) -> bool:
        v = self.vertices
        return all(v[j] != v[j - 2] for j in range(2, len(v)))

    @property
    def is_even(self) -> bool:
        """Every undirected edge appears an even number of times."""
        counts: dict[tuple[int, int], int] = {}
        v = self.vertices
        for i in range(len(v) - 1):
            e = (v[i], v[i + 1]) if v[i] < v[i + 1] else (v[i + 1], v[i])
            counts[e] = counts.get(e, 0) + 1
        return all(c % 2 == 0 for c in counts.values())

    def edges_on(self, g: Graph) -> bool:
        v = self.vertices
        return all(g.has_edge(v[i], v[i + 1]) for i in range(len(v) - 1))


@dataclass(frozen=True)
class WalkCounts:
    nb_closed: int
    nb_even_closed: int
    cyclic_nb: int


@dataclass(frozen=True)
class CensusRow:
    length: int
    count: int
    ratio: float


def _guard(g: Graph, k: int, per_pair: bool = False) -> None:
    if k > _MAX_WALK_LENGTH:
        raise ResourceLimitError(f"walk length {k} exceeds cap {_MAX_WALK_LENGTH}")
    d = g.max_degree()
    if d == 0 or k == 0:
        return
    est = d * (d - 1) ** max(k - 1, 0)
    if not per_pair:
        est *= g.n
    if est > _MAX_WALK_ESTIMATE:
        raise ResourceLimitError(
            f"estimated walk count {est} exceeds cap {_MAX_WALK_ESTIMATE}"
        )


def enumerate_nb_walks(g: Graph, u: int, v: int, k: int) -> list[Walk]:
    """All non-backtracking walks from u to v of length k, lexicographic."""
    _guard(g, k, per_pair=True)
    out: list[Walk] = []
    path = [u]

    def rec():
        if len(path) == k + 1:
            if path[-1] == v:
                out.append(Walk(tuple(path)))
            return
        prev = path[-2] if len(path) >= 2 else -1
        for w in g.adjacency[path[-1]]:
            if w != prev:
                path.append(w)
                rec()
                path.pop()

    if k == 0:
        return [Walk((u,))] if u == v else []
    rec()
    return out


def count_walks(g: Graph, k: int) -> WalkCounts:
    """Exhaustive counts of closed NB walks, their even subclass, and the
    cyclically non-backtracking class."""
    _guard(g, k)
    indptr, indices, edge_ids, n_edges = g.csr()
    nb, even, cyc = _kernels.closed_walk_counts(indptr, indices, edge_ids, n_edges, k)
    return WalkCounts(int(nb), int(even), int(cyc))


def signed_walk_sums(sign_matrix, k: int) -> np.ndarray:
    """Matrix of signed NB-walk sums: entry (u, v) is the sum over all NB
    walks u -> v of length k of the product of traversed entries."""
    g: Graph = sign_matrix.graph
    _guard(g, k)
    indptr, indices, _, _ = g.csr()
    M = sign_matrix.matrix
    weights = np.empty(indices.shape[0], dtype=np.float64)
    pos = 0
    for u in range(g.n):
        for v in g.adjacency[u]:
            weights[pos] = M[u, v]
            pos += 1
    return _kernels.signed_walk_matrix(indptr, indices, weights, k)


def signed_walk_sum(sign_matrix, u: int, v: int, k: int) -> float:
    return float(signed_walk_sums(sign_matrix, k)[u, v])


def even_walk_census(kind: str, two_k: int, n: int, N: int | None = None) -> list[CensusRow]:
    """Exact even-walk counts on K_n or K_{n,N} for lengths 2, 4, ..., two_k.

    The reported ratio divides by k n^k (complete) or k (nN)^{k/2}
    (bipartite) for inspection against the census growth bounds.
    """
    if two_k % 2 != 0 or two_k < 2:
        raise ValueError("two_k must be a positive even integer")
    if kind == "complete":
        g = complete(n)
        denom = lambda k: k * float(n) ** k
    elif kind in ("complete-bipartite", "complete_bipartite"):
        if N is None:
            raise ValueError("bipartite census needs N")
        g = complete_bipartite(n, N)
        denom = lambda k: k * float(n * N) ** (k / 2.0)
    else:
        raise ValueError(f"unknown census family {kind!r}")
    rows = []
    for length in range(2, two_k + 1, 2):
        count = count_walks(g, length).nb_even_closed
        rows.append(CensusRow(length, count, count / denom(length // 2)))
    return rows


# -- fragments ---------------------------------------------------------------


@dataclass(frozen=True)
class FragmentReport:
    """Edge classes and fragment decomposition of an even closed NB walk."""

    t1: tuple[tuple[int, int, int], ...]
    t2: tuple[tuple[int, int, int], ...]
    t3: tuple[tuple[int, int, int], ...]
    fragments: tuple[tuple[int, ...], ...]
    f_count: int


def classify_fragments(walk: Walk, g: Graph | None = None) -> FragmentReport:
    """Split the edges of an even closed NB walk into first-visit (T1),
    matched-repeat (T2) and remainder (T3) classes, then group the T1 runs
    into fragments.

    An edge is in T1 when it arrives at a vertex no earlier edge has arrived
    at (the start vertex counts as unvisited until an edge reaches it).  An
    edge is in T2 when it is the first repetition of an edge whose first
    traversal is in T1.  A proto-fragment is a maximal T1 run that reappears
    as a consecutive T2 run, forward or reversed; runs are split greedily
    left to right.  The decomposition always satisfies
    f_count <= 2 |T3| + 1.
    """
    v = walk.vertices
    if not walk.is_closed:
        raise ValueError("walk must be closed")
    if not walk.is_nonbacktracking:
        raise ValueError("walk must be non-backtracking")
    if not walk.is_even:
        raise ValueError("walk must traverse every edge an even number of times")
    if g is not None and not walk.edges_on(g):
        raise ValueError("walk does not follow edges of the given graph")

    m = len(v) - 1
    triples = [(v[r - 1], v[r], r) for r in range(1, m + 1)]
    t1: list[tuple[int, int, int]] = []
    t2: list[tuple[int, int, int]] = []
    t3: list[tuple[int, int, int]] = []
    arrived: set[int] = set()
    t1_edges: set[tuple[int, int]] = set()
    occurrences: dict[tuple[int, int], int] = {}
    t1_positions: list[int] = []
    t2_positions: set[int] = set()
    for (a, b, r) in triples:
        e = (a, b) if a < b else (b, a)
        prior = occurrences.get(e, 0)
        if b not in arrived:
            t1.append((a, b, r))
            t1_edges.add(e)
            t1_positions.append(r)
        elif prior == 1 and e in t1_edges:
            t2.append((a, b, r))
            t2_positions.add(r)
        else:
            t3.append((a, b, r))
        arrived.add(b)
        occurrences[e] = prior + 1

    # maximal consecutive runs of T1 positions
    runs: list[list[int]] = []
    for r in t1_positions:
        if runs and runs[-1][-1] == r - 1:
            runs[-1].append(r)
        else:
            runs.append([r])

    def directed(r: int) -> tuple[int, int]:
        return (v[r - 1], v[r])

    def has_t2_copy(rs: list[int]) -> bool:
        seq = [directed(r) for r in rs]
        rev = [(b, a) for (a, b) in reversed(seq)]
        L = len(seq)
        for start in range(1, m - L + 2):
            if all((start + i) in t2_positions for i in range(L)):
                cand = [directed(start + i) for i in range(L)]
                if cand == seq or cand == rev:
                    return True
        return False

    start_vertex = v[0]
    fragments: list[tuple[int, ...]] = []
    for run in runs:
        i = 0
        while i < len(run):
            j = len(run)
            while j > i and not has_t2_copy(run[i:j]):
                j -= 1
            if j == i:
                # lone first-visit edge whose repeat fell outside T2 (this
                # happens only for the first return to the start vertex);
                # it stands as its own fragment
                j = i + 1
            rs = run[i:j]
            proto = (v[rs[0] - 1],) + tuple(v[r] for r in rs)
            fragments.append(proto if proto[0] == start_vertex else proto[1:])
            i = j

    return FragmentReport(
        t1=tuple(t1),
        t2=tuple(t2),
        t3=tuple(t3),
        fragments=tuple(fragments),
        f_count=len(fragments),
    )
