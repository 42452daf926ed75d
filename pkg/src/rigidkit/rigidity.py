"""Rigidity matrices and randomized generic d-rigidity.

Generic real coordinates are emulated by uniform random points of F_q.  A
rank deficiency at random points is one-sided: the computed rank never
exceeds the generic rank, so a "rigid" verdict is certain and a "flexible"
verdict is wrong with probability at most ``error_bound``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable

import numpy as np

from .ffrank import Q, FFMatrix, generic_points, pair_row_matrix, pair_row_rank
from .graph import Graph, bits, mask_of, popcount

__all__ = [
    "FrameworkSpec",
    "LimitFrameworkSpec",
    "RigidityVerdict",
    "max_rank",
    "rigidity_target",
    "rigidity_matrix",
    "generic_framework",
    "generic_rank",
    "is_d_rigid",
    "limit_rigidity_matrix",
    "is_limit_inf_rigid",
    "absorb",
    "jlv_sufficient",
]

SMALL_N = "small-n"


@dataclass(frozen=True, eq=False)
class FrameworkSpec:
    graph: Graph
    d: int
    positions: np.ndarray

    def __post_init__(self):
        p = np.mod(np.asarray(self.positions, dtype=np.int64), Q)
        if p.shape != (self.graph.n, self.d):
            raise ValueError(f"positions must have shape ({self.graph.n}, {self.d}), got {p.shape}")
        object.__setattr__(self, "positions", p)


@dataclass(frozen=True, eq=False)
class LimitFrameworkSpec:
    """Positions plus one direction per edge.

    ``directions[e]`` is ``g(u, e)`` for the smaller endpoint ``u`` of
    ``graph.edges[e]``; the larger endpoint implicitly gets ``-g(u, e)``.
    Directions are not normalized (rank is invariant under row scaling).
    """

    graph: Graph
    d: int
    positions: np.ndarray
    directions: np.ndarray

    def __post_init__(self):
        p = np.mod(np.asarray(self.positions, dtype=np.int64), Q)
        g = np.mod(np.asarray(self.directions, dtype=np.int64), Q).reshape(self.graph.m, self.d)
        if p.shape != (self.graph.n, self.d):
            raise ValueError(f"positions must have shape ({self.graph.n}, {self.d})")
        if self.graph.m and not g.any(axis=1).all():
            e = int(np.flatnonzero(~g.any(axis=1))[0])
            raise ValueError(f"zero direction vector on edge {self.graph.edges[e]}")
        object.__setattr__(self, "positions", p)
        object.__setattr__(self, "directions", g)

    @classmethod
    def from_framework(cls, F: FrameworkSpec) -> "LimitFrameworkSpec":
        us, vs = _endpoints(F.graph)
        return cls(F.graph, F.d, F.positions, F.positions[us] - F.positions[vs])


@dataclass(frozen=True)
class RigidityVerdict:
    d: int
    rank: int
    target: int
    rigid: bool
    trials: int
    seed: int
    error_bound: float = 0.0
    convention: str | None = field(default=None)

    def to_dict(self) -> dict:
        out = asdict(self)
        if out["convention"] is None:
            del out["convention"]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def max_rank(n: int, d: int) -> int:
    """Rank of the rigidity matrix of K_n at generic points of R^d."""
    if n <= d + 1:
        return n * (n - 1) // 2
    return d * n - d * (d + 1) // 2


def rigidity_target(n: int, d: int) -> int:
    """``d n - C(d+1, 2)``, or ``C(n, 2)`` when ``n <= d + 1``."""
    return max_rank(n, d)


def _endpoints(G: Graph) -> tuple[np.ndarray, np.ndarray]:
    e = np.array(G.edges, dtype=np.int64).reshape(-1, 2)
    return e[:, 0], e[:, 1]


def _trial_seed(seed: int, t: int) -> int:
    return int(np.random.SeedSequence([seed & (2**63 - 1), t]).generate_state(1, np.uint64)[0])


def generic_framework(G: Graph, d: int, seed: int) -> FrameworkSpec:
    return FrameworkSpec(G, d, generic_points(max(G.n, 1), d, seed)[: G.n])


def rigidity_matrix(F: FrameworkSpec) -> FFMatrix:
    """``|E| x dn`` matrix; edge {u,v} carries p(u)-p(v) at u and p(v)-p(u) at v."""
    us, vs = _endpoints(F.graph)
    return pair_row_matrix(us, vs, F.positions[us] - F.positions[vs], F.graph.n) if len(us) \
        else FFMatrix.zeros(0, F.graph.n * F.d)


def _framework_rank(G: Graph, d: int, seed: int) -> tuple[int, bool]:
    us, vs = _endpoints(G)
    if not len(us):
        return 0, False
    p = generic_points(G.n, d, seed)
    return pair_row_rank(us, vs, p[us] - p[vs], G.n, max_rank(G.n, d), seed=seed ^ 0x2545F491)


def generic_rank(G: Graph, d: int, seed: int = 0, trials: int = 2) -> int:
    """Max rank of the rigidity matrix over ``trials`` random point sets."""
    if d < 1:
        raise ValueError("d must be >= 1")
    best = 0
    ceiling = min(G.m, max_rank(G.n, d))
    for t in range(trials):
        r, _ = _framework_rank(G, d, _trial_seed(seed, t))
        best = max(best, r)
        if best == ceiling:
            break
    return best


def _failure_bound(rank_ceiling: int, compressed: bool, trials: int) -> float:
    per_trial = min(1.0, (2 if compressed else 1) * rank_ceiling / Q)
    return per_trial**trials


def is_d_rigid(G: Graph, d: int, seed: int = 0, trials: int = 2) -> RigidityVerdict:
    """Generic d-rigidity by randomized rank.

    For ``n >= d + 2`` the target rank is ``d n - C(d+1, 2)``.  For
    ``n <= d + 1`` a graph counts as d-rigid iff it is complete; for
    ``n <= d`` that is a convention and the verdict says so.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    n, m = G.n, G.m
    target = max_rank(n, d)
    if n <= d + 1:
        # simplex edges are independent at generic points
        return RigidityVerdict(d, m, target, m == target, 0, seed, 0.0,
                               SMALL_N if n <= d else None)
    ceiling = min(m, target)
    best, used, compressed = 0, 0, False
    for t in range(max(trials, 1)):
        r, comp = _framework_rank(G, d, _trial_seed(seed, t))
        used += 1
        compressed |= comp
        best = max(best, r)
        if best == ceiling:
            break
    rigid = best == target
    if rigid or m < target:
        bound = 0.0
    else:
        bound = _failure_bound(ceiling, compressed, used)
    return RigidityVerdict(d, best, target, rigid, used, seed, bound)


def limit_rigidity_matrix(L: LimitFrameworkSpec) -> FFMatrix:
    us, vs = _endpoints(L.graph)
    if not len(us):
        return FFMatrix.zeros(0, L.graph.n * L.d)
    return pair_row_matrix(us, vs, L.directions, L.graph.n)


def is_limit_inf_rigid(L: LimitFrameworkSpec, seed: int = 0) -> RigidityVerdict:
    """Rank test ``rank R(G, p, g) = d n - C(d+1, 2)``.

    The rank is exact unless the system is tall enough to be compressed.
    Interpreting "rigid" as d-rigidity of G requires the positions to
    affinely span at least ``d - 1`` dimensions (caller's check).
    """
    G, d = L.graph, L.d
    target = max_rank(G.n, d)
    us, vs = _endpoints(G)
    r, compressed = (0, False) if not len(us) else pair_row_rank(
        us, vs, L.directions, G.n, target, seed=seed)
    rigid = r == target
    bound = 0.0 if rigid or not compressed else _failure_bound(min(G.m, target), True, 1)
    return RigidityVerdict(d, r, target, rigid, 1, seed, bound)


def affine_span_dim(points: np.ndarray) -> int:
    """Dimension of the affine span of integer points, computed over F_q."""
    P = np.mod(np.asarray(points, dtype=np.int64), Q)
    if len(P) <= 1:
        return 0
    return FFMatrix(P[1:] - P[0]).rank()


def absorb(G: Graph, B: Iterable[int] | int, d: int) -> frozenset[int]:
    """Close B under "add any vertex with >= d neighbours inside".

    Each step is a 0-extension, so ``G[W]`` is d-rigid whenever ``G[B]``
    is.  Candidates are visited in ascending id order until a fixed point.
    """
    W = mask_of(B)
    if W == 0:
        raise ValueError("absorption needs a nonempty seed set")
    adj = G.adj
    changed = True
    while changed:
        changed = False
        for v in bits(G.vertex_mask & ~W):
            if popcount(adj[v] & W) >= d:
                W |= 1 << v
                changed = True
    return frozenset(bits(W))


def jlv_sufficient(G: Graph, d: int) -> bool:
    """``min degree >= n/2 + d - 1``: sufficient for d-rigidity, never a refutation."""
    if not 1 <= d < G.n:
        raise ValueError(f"need 1 <= d < n, got d={d}, n={G.n}")
    return 2 * G.min_degree() >= G.n + 2 * d - 2


def binom2(x: int) -> int:
    return math.comb(x, 2)
