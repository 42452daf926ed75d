"""Seeded random graphs, equipartitions and the codegree partition sampler."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import Graph, Partition, adjacency_matrix

__all__ = [
    "RngSpec",
    "gnp",
    "random_regular",
    "random_equipartition",
    "equipartition_blocks",
    "partition_codegree",
    "codegree_partition_stats",
    "RetryBudgetExceeded",
]

RESTART_BUDGET = 10**4


@dataclass(frozen=True)
class RngSpec:
    """A (master seed, stream) pair; equal specs give equal generators."""

    master_seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.master_seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.Philox(ss))

    def key(self) -> np.ndarray:
        ss = np.random.SeedSequence(entropy=self.master_seed, spawn_key=(self.stream_id,))
        return ss.generate_state(2, np.uint64)


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngSpec):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _pair_uniforms(spec: RngSpec, n: int) -> np.ndarray:
    """Uniforms indexed by pair rank ``t = v (v-1)/2 + u`` for ``u < v``.

    Philox is a counter-based generator: the draw for pair t only depends on
    the key and t, so any sub-range can be regenerated alone.
    """
    total = n * (n - 1) // 2
    bitgen = np.random.Philox(key=spec.key())
    return np.random.Generator(bitgen).random(total)


def gnp(n: int, p: float, rng: RngSpec | int) -> Graph:
    """Binomial random graph G(n, p)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    spec = rng if isinstance(rng, RngSpec) else RngSpec(int(rng))
    if n < 2:
        return Graph(max(n, 0))
    keep = np.flatnonzero(_pair_uniforms(spec, n) < p)
    v = np.repeat(np.arange(n), np.arange(n))[keep]
    u = keep - v * (v - 1) // 2
    return Graph(n, zip(u.tolist(), v.tolist()))


class RetryBudgetExceeded(RuntimeError):
    pass


def _configuration(n: int, r: int, gen: np.random.Generator, budget: int) -> Graph:
    stubs = np.repeat(np.arange(n), r)
    for _ in range(budget):
        pairs = gen.permutation(stubs).reshape(-1, 2)
        u, v = pairs.min(axis=1), pairs.max(axis=1)
        if (u == v).any() or len(np.unique(u * n + v)) != len(u):
            continue
        return Graph(n, zip(u.tolist(), v.tolist()))
    raise RetryBudgetExceeded(f"no simple pairing after {budget} restarts")


def _draw(free: list[int], adj: list[set], gen: np.random.Generator) -> tuple[int, int] | None:
    """Indices of two free stubs forming a new simple edge, or None if none exist."""
    misses = 0
    while True:
        i, j = gen.integers(len(free), size=2)
        a, b = free[i], free[j]
        if i != j and a != b and b not in adj[a]:
            return int(i), int(j)
        misses += 1
        if misses > 64 and not _has_suitable(free, adj):
            return None


def _has_suitable(free: list[int], adj: list[set]) -> bool:
    verts = sorted(set(free))
    return any(b not in adj[a] for x, a in enumerate(verts) for b in verts[x + 1 :])


def _sequential(n: int, r: int, gen: np.random.Generator, budget: int) -> Graph:
    # pair random free stubs, refusing loops and repeats; restart when stuck
    for _ in range(budget):
        free = np.repeat(np.arange(n), r).tolist()
        adj = [set() for _ in range(n)]
        edges = []
        while free:
            hit = _draw(free, adj, gen)
            if hit is None:
                break
            a, b = free[hit[0]], free[hit[1]]
            for t in sorted(hit, reverse=True):
                free[t] = free[-1]
                free.pop()
            adj[a].add(b)
            adj[b].add(a)
            edges.append((a, b))
        if not free:
            return Graph(n, edges)
    raise RetryBudgetExceeded(f"pairing got stuck {budget} times")


SMALL_R = 4


def random_regular(n: int, r: int, rng, budget: int = RESTART_BUDGET, method: str = "auto") -> Graph:
    """Simple r-regular graph on n vertices.

    ``rejection`` is the configuration model restarted on any loop or
    repeated pair (exactly uniform).  Its acceptance rate decays like
    exp(-(r^2 - 1)/4), so ``auto`` switches to sequential stub pairing
    (asymptotically uniform) above r = 4.
    """
    if r < 0 or r >= n:
        raise ValueError(f"need 0 <= r < n, got r={r}, n={n}")
    if (n * r) % 2:
        raise ValueError("n * r must be even")
    gen = _as_generator(rng)
    if method == "auto":
        method = "rejection" if r <= SMALL_R else "sequential"
    if method == "rejection":
        return _configuration(n, r, gen, budget)
    if method == "sequential":
        return _sequential(n, r, gen, budget)
    raise ValueError(f"unknown method {method!r}")


def equipartition_blocks(V: Sequence[int], m: int, rng) -> tuple[tuple[int, ...], ...]:
    """Uniformly random split of V into m near-equal blocks, largest first."""
    verts = np.asarray(list(V))
    n = len(verts)
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= {n}, got {m}")
    perm = _as_generator(rng).permutation(verts)
    q, extra = divmod(n, m)
    cuts = np.cumsum([0] + [q + 1] * extra + [q] * (m - extra))
    return tuple(tuple(sorted(perm[cuts[i] : cuts[i + 1]].tolist())) for i in range(m))


def random_equipartition(n: int, m: int, rng) -> Partition:
    """Random equipartition of ``range(n)``."""
    return Partition(equipartition_blocks(range(n), m, rng), n)


def partition_codegree(G: Graph, partition: Partition, A: np.ndarray | None = None) -> int:
    """``min |M(u, v)|`` over pairs: blocks holding a common neighbour of u and v."""
    if G.n < 2:
        raise ValueError("need at least two vertices")
    A = adjacency_matrix(G, np.float32) if A is None else A
    hits = np.zeros((G.n, G.n), dtype=np.int32)
    for block in partition.blocks:
        Ab = A[:, list(block)]
        hits += (Ab @ Ab.T) > 0
    np.fill_diagonal(hits, np.iinfo(np.int32).max)
    return int(hits.min())


def codegree_partition_stats(G: Graph, m: int, trials: int, rng) -> dict:
    """Empirical distribution of the partition codegree over random equipartitions."""
    if m < 1:
        raise ValueError("m must be >= 1")
    gen = _as_generator(rng)
    A = adjacency_matrix(G, np.float32)
    values = [partition_codegree(G, random_equipartition(G.n, m, gen), A) for _ in range(trials)]
    arr = np.array(values)
    return {
        "m": m,
        "trials": trials,
        "values": values,
        "min": int(arr.min()) if trials else None,
        "mean": float(arr.mean()) if trials else None,
        "histogram": {int(k): int(c) for k, c in zip(*np.unique(arr, return_counts=True))},
    }
