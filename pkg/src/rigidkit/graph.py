"""Graph and partition value types, graph surgery, codegree and isoperimetry.

Vertices are dense integer ids ``0..n-1``.  Adjacency is stored as one Python
int bit-row per vertex, so neighbourhood unions and intersections are single
bitwise operations.  All types are immutable; surgery returns new objects.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Graph",
    "Partition",
    "EdgeListError",
    "bits",
    "mask_of",
    "popcount",
    "induced_subgraph",
    "induced_bipartite",
    "reduced_graph",
    "zero_extension",
    "vertex_split",
    "SPLIT_WITH_EDGE",
    "SPLIT_NO_EDGE",
    "codegree",
    "min_codegree",
    "isoperimetric",
    "isoperimetric_upper_estimate",
    "read_edgelist",
    "write_edgelist",
    "parse_edgelist",
    "format_edgelist",
]

SPLIT_WITH_EDGE = "with_edge"
SPLIT_NO_EDGE = "no_edge"


def popcount(x: int) -> int:
    return x.bit_count()


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int] | int) -> int:
    if isinstance(vertices, int):
        return vertices
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("_n", "_adj", "_edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        adj = [0] * n
        seen = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"parallel edge {key}")
            seen.add(key)
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self._n = n
        self._adj = tuple(adj)
        self._edges = None

    @classmethod
    def from_adjacency(cls, adj: Sequence[int]) -> "Graph":
        """Build from symmetric loop-free bit-rows (validated)."""
        n = len(adj)
        full = (1 << n) - 1
        for v, row in enumerate(adj):
            if row & ~full or (row >> v) & 1:
                raise ValueError(f"bad adjacency row for vertex {v}")
            for u in bits(row):
                if not (adj[u] >> v) & 1:
                    raise ValueError("adjacency is not symmetric")
        g = cls.__new__(cls)
        g._n = n
        g._adj = tuple(adj)
        g._edges = None
        return g

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls._trusted([full ^ (1 << v) for v in range(n)])

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def complete_bipartite(cls, a: int, b: int) -> "Graph":
        return cls(a + b, [(i, a + j) for i in range(a) for j in range(b)])

    @classmethod
    def _trusted(cls, adj: Sequence[int]) -> "Graph":
        g = cls.__new__(cls)
        g._n = len(adj)
        g._adj = tuple(adj)
        g._edges = None
        return g

    @property
    def n(self) -> int:
        return self._n

    @property
    def adj(self) -> tuple[int, ...]:
        return self._adj

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as ``(u, v)`` with ``u < v``, sorted lexicographically."""
        if self._edges is None:
            out = []
            for u, row in enumerate(self._adj):
                for v in bits(row >> (u + 1)):
                    out.append((u, u + 1 + v))
            self._edges = tuple(out)
        return self._edges

    @property
    def m(self) -> int:
        return sum(popcount(r) for r in self._adj) // 2

    @property
    def vertex_mask(self) -> int:
        return (1 << self._n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self._adj[u] >> v) & 1)

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(bits(self._adj[v]))

    def degree(self, v: int) -> int:
        return popcount(self._adj[v])

    def degrees(self) -> list[int]:
        return [popcount(r) for r in self._adj]

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def is_complete(self) -> bool:
        return self.m == self._n * (self._n - 1) // 2

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self._n, set(self.edges) | {(min(e), max(e)) for e in extra})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self) -> int:
        return hash(self._adj)

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m})"


class Partition:
    """Ordered list of disjoint nonempty blocks covering ``0..n-1``."""

    __slots__ = ("_blocks", "_n", "_block_of")

    def __init__(self, blocks: Iterable[Iterable[int]], n: int | None = None):
        blocks = tuple(tuple(sorted(set(b))) for b in blocks)
        covered = [v for b in blocks for v in b]
        if n is None:
            n = max(covered, default=-1) + 1
        if any(len(b) == 0 for b in blocks):
            raise ValueError("empty block in partition")
        if len(covered) != len(set(covered)):
            raise ValueError("blocks are not disjoint")
        if sorted(covered) != list(range(n)):
            raise ValueError(f"blocks do not cover 0..{n - 1} exactly")
        block_of = [0] * n
        for i, b in enumerate(blocks):
            for v in b:
                block_of[v] = i
        self._blocks = blocks
        self._n = n
        self._block_of = tuple(block_of)

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls([[v] for v in range(n)], n)

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return self._blocks

    @property
    def m(self) -> int:
        return len(self._blocks)

    @property
    def n(self) -> int:
        return self._n

    @property
    def masks(self) -> list[int]:
        return [mask_of(b) for b in self._blocks]

    def block_of(self, v: int) -> int:
        return self._block_of[v]

    def sizes(self) -> list[int]:
        return [len(b) for b in self._blocks]

    def check(self, G: Graph) -> None:
        if self._n != G.n:
            raise ValueError(f"partition covers {self._n} vertices, graph has {G.n}")

    def __len__(self) -> int:
        return len(self._blocks)

    def __iter__(self):
        return iter(self._blocks)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Partition) and self._blocks == other._blocks

    def __hash__(self) -> int:
        return hash(self._blocks)

    def __repr__(self) -> str:
        return f"Partition(m={self.m}, sizes={self.sizes()})"


def _check_vertices(G: Graph, mask: int) -> None:
    if mask < 0 or mask >> G.n:
        raise ValueError(f"vertex id out of range for n={G.n}")


def induced_subgraph(G: Graph, S: Iterable[int] | int) -> Graph:
    """``G[S]`` relabelled so that the i-th smallest vertex of S becomes i."""
    return induced_bipartite(G, S, S)


def bipartite_rows(G: Graph, A: int, B: int) -> list[int]:
    """Neighbour rows of ``G[A, B]`` in the original vertex ids.

    A vertex of A only keeps neighbours in B, a vertex of B only keeps
    neighbours in A, and a vertex of both keeps neighbours in ``A | B``.
    Rows of vertices outside ``A | B`` are zero.
    """
    rows = [0] * G.n
    for v in bits(A | B):
        allowed = 0
        if (A >> v) & 1:
            allowed |= B
        if (B >> v) & 1:
            allowed |= A
        rows[v] = G.adj[v] & allowed
    return rows


def induced_bipartite(G: Graph, A: Iterable[int] | int, B: Iterable[int] | int) -> Graph:
    """The graph ``G[A, B]`` on vertex set ``A | B``.

    Edges are those of G with one end in A, one end in B, and both ends in
    ``A | B``; with ``A == B`` this is the induced subgraph.  The result is
    relabelled to ``0..|A|B|-1`` in ascending order of original id.
    """
    A, B = mask_of(A), mask_of(B)
    _check_vertices(G, A | B)
    rows = bipartite_rows(G, A, B)
    order = list(bits(A | B))
    index = {v: i for i, v in enumerate(order)}
    new = []
    for v in order:
        new.append(mask_of(index[u] for u in bits(rows[v])))
    return Graph._trusted(new)


def reduced_graph(G: Graph, partition: Partition) -> Graph:
    """Quotient graph: blocks i, j adjacent iff some edge of G joins them."""
    partition.check(G)
    masks = partition.masks
    nbr = []
    for bm in masks:
        out = 0
        for v in bits(bm):
            out |= G.adj[v]
        nbr.append(out & ~bm)
    m = partition.m
    adj = [0] * m
    for i in range(m):
        for j in range(i + 1, m):
            if nbr[i] & masks[j]:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return Graph._trusted(adj)


def zero_extension(G: Graph, S: Iterable[int] | int) -> Graph:
    """Add a new vertex ``n`` adjacent exactly to S."""
    S = mask_of(S)
    if S == 0:
        raise ValueError("0-extension needs a nonempty attachment set")
    _check_vertices(G, S)
    n = G.n
    adj = [row | ((S >> v) & 1) << n for v, row in enumerate(G.adj)]
    adj.append(S)
    return Graph._trusted(adj)


def vertex_split(
    G: Graph,
    v: int,
    Nx: Iterable[int] | int,
    Ny: Iterable[int] | int,
    mode: str = SPLIT_NO_EDGE,
) -> tuple[Graph, int, int]:
    """Replace ``v`` by two vertices x, y with neighbourhoods Nx, Ny.

    ``x`` reuses the id of ``v`` and ``y`` gets the new id ``n``, so ids
    stay dense.  In ``SPLIT_WITH_EDGE`` mode the edge ``{x, y}`` is added.
    Overlap bounds (``d-1`` with the edge, ``d`` without) are the caller's
    business.  Returns ``(graph, x, y)``.
    """
    if not 0 <= v < G.n:
        raise ValueError(f"vertex {v} not in graph")
    if mode not in (SPLIT_WITH_EDGE, SPLIT_NO_EDGE):
        raise ValueError(f"unknown split mode {mode!r}")
    Nx, Ny = mask_of(Nx), mask_of(Ny)
    if (Nx | Ny) != G.adj[v]:
        raise ValueError("Nx | Ny must equal the neighbourhood of v")
    n = G.n
    x, y = v, n
    adj = list(G.adj) + [0]
    bit_v = 1 << v
    for u in bits(G.adj[v]):
        adj[u] &= ~bit_v
    adj[x] = Nx
    adj[y] = Ny
    for u in bits(Nx):
        adj[u] |= 1 << x
    for u in bits(Ny):
        adj[u] |= 1 << y
    if mode == SPLIT_WITH_EDGE:
        adj[x] |= 1 << y
        adj[y] |= 1 << x
    return Graph._trusted(adj), x, y


def codegree(G: Graph, u: int, v: int) -> int:
    return popcount(G.adj[u] & G.adj[v])


def min_codegree(G: Graph) -> int:
    if G.n < 2:
        raise ValueError("minimum codegree needs at least two vertices")
    if G.n > 64:
        A = adjacency_matrix(G, dtype=np.float32)
        C = A @ A.T
        np.fill_diagonal(C, np.inf)
        return int(C.min())
    adj = G.adj
    return min(popcount(adj[u] & adj[v]) for u, v in itertools.combinations(range(G.n), 2))


def adjacency_matrix(G: Graph, dtype=np.uint8) -> np.ndarray:
    A = np.zeros((G.n, G.n), dtype=dtype)
    if G.m:
        e = np.array(G.edges)
        A[e[:, 0], e[:, 1]] = 1
        A[e[:, 1], e[:, 0]] = 1
    return A


def isoperimetric(G: Graph, k: int = 1, cap: int = 24) -> Fraction:
    """Exact ``i(G; k) = min |boundary(U)| / |U|`` over ``k <= |U| <= n/2``.

    Enumerates every vertex subset, so ``n`` is limited by ``cap``; above it
    use :func:`isoperimetric_upper_estimate`.
    """
    n = G.n
    if n > cap:
        raise ValueError(f"n={n} exceeds the enumeration cap {cap}; use the sampling estimator")
    if k < 1 or 2 * k > n:
        raise ValueError(f"need 1 <= k <= n/2, got k={k}, n={n}")
    size = 1 << n
    inner = np.zeros(size, dtype=np.int32)  # edges inside U
    deg = np.zeros(size, dtype=np.int32)
    for b in range(n):
        lo, hi = 1 << b, 1 << (b + 1)
        base = np.arange(lo, dtype=np.int64)
        inner[lo:hi] = inner[:lo] + np.bitwise_count(base & G.adj[b]).astype(np.int32)
        deg[lo:hi] = deg[:lo] + G.degree(b)
    boundary = deg - 2 * inner
    sizes = np.bitwise_count(np.arange(size, dtype=np.int64))
    best = None
    for s in range(k, n // 2 + 1):
        r = Fraction(int(boundary[sizes == s].min()), s)
        if best is None or r < best:
            best = r
    return best


def isoperimetric_upper_estimate(
    G: Graph, k: int, samples: int, rng: np.random.Generator
) -> Fraction:
    """Smallest ``|boundary(U)|/|U|`` seen over random U; an UPPER bound on i(G; k).

    Half of the samples are uniform random sets, half are BFS balls grown
    from a random root (balls tend to have small boundary).
    """
    n = G.n
    if k < 1 or 2 * k > n:
        raise ValueError(f"need 1 <= k <= n/2, got k={k}, n={n}")
    adj = G.adj
    best = None
    for t in range(samples):
        s = int(rng.integers(k, n // 2 + 1))
        if t % 2 == 0:
            U = mask_of(int(x) for x in rng.choice(n, size=s, replace=False))
        else:
            U = _ball(adj, int(rng.integers(n)), s, rng)
        inside = sum(popcount(adj[v] & U) for v in bits(U)) // 2
        bd = sum(popcount(adj[v]) for v in bits(U)) - 2 * inside
        r = Fraction(bd, popcount(U))
        if best is None or r < best:
            best = r
    return best


def _ball(adj: Sequence[int], root: int, size: int, rng: np.random.Generator) -> int:
    U = 1 << root
    frontier = U
    while popcount(U) < size:
        nxt = 0
        for v in bits(frontier):
            nxt |= adj[v]
        nxt &= ~U
        if not nxt:
            rest = [v for v in range(len(adj)) if not (U >> v) & 1]
            nxt = 1 << int(rng.choice(rest))
        cand = list(bits(nxt))
        need = size - popcount(U)
        if len(cand) > need:
            cand = [int(c) for c in rng.choice(cand, size=need, replace=False)]
        frontier = mask_of(cand)
        U |= frontier
    return U


class EdgeListError(ValueError):
    """Malformed EdgeList input; ``line`` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_edgelist(text: str) -> Graph:
    """Parse the EdgeList format: header ``n m`` then ``m`` lines ``u v``.

    Blank lines and ``#`` comments are ignored.  Each record must satisfy
    ``0 <= u < v < n``; duplicates and self-loops are rejected.
    """
    header = None
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(lineno, f"expected two integers, got {raw.strip()!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(lineno, f"non-integer field in {raw.strip()!r}") from None
        if header is None:
            if a < 0 or b < 0:
                raise EdgeListError(lineno, "negative header value")
            header = (a, b, lineno)
            continue
        n = header[0]
        if a == b:
            raise EdgeListError(lineno, f"self-loop at vertex {a}")
        if not (0 <= a < n and 0 <= b < n):
            raise EdgeListError(lineno, f"vertex out of range 0..{n - 1}")
        if a > b:
            raise EdgeListError(lineno, f"record must have u < v, got {a} {b}")
        if (a, b) in seen:
            raise EdgeListError(lineno, f"duplicate edge {a} {b} (first on line {seen[(a, b)]})")
        seen[(a, b)] = lineno
        edges.append((a, b))
    if header is None:
        raise EdgeListError(1, "missing header line 'n m'")
    n, m, hline = header
    if len(edges) != m:
        raise EdgeListError(hline, f"header declares {m} edges, found {len(edges)}")
    return Graph(n, edges)


def format_edgelist(G: Graph, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"{G.n} {G.m}")
    lines.extend(f"{u} {v}" for u, v in G.edges)
    return "\n".join(lines) + "\n"


def read_edgelist(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edgelist(fh.read())


def write_edgelist(G: Graph, path, comments: Sequence[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edgelist(G, comments))
