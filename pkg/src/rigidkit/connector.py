"""Large rigid subgraphs from k-connector partitions.

Given blocks V_1..V_m, the block graph G_0 joins i and j when every pair
of k-sets X in V_i, Y in V_j spans an edge.  Vertices lying in too few of
the big bipartite components are peeled off; the rest, W, carries a strong
rigid partition certificate.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .graph import Graph, Partition, bipartite_rows, bits, induced_subgraph, mask_of, popcount
from .partitions import HYPOTHESIS_VIOLATED, CertifierVerdict, _components, certify_strong_partition
from .rigidity import is_d_rigid

__all__ = [
    "ConnectorConfig",
    "ConnectorTrace",
    "ConnectorError",
    "Undecided",
    "NoBigComponent",
    "MultipleBigComponents",
    "CapOverflow",
    "k_connector_edge",
    "build_G0",
    "big_component",
    "big_components",
    "bad_vertices",
    "eliminate_bad",
    "connector_certify",
    "ENUMERATION_CAP",
]

ENUMERATION_CAP = 10**7


class ConnectorError(ValueError):
    pass


class Undecided(ConnectorError):
    """The k-subset enumeration would exceed the runtime cap."""


class NoBigComponent(ConnectorError):
    pass


class MultipleBigComponents(ConnectorError):
    pass


class CapOverflow(ConnectorError):
    def __init__(self, block: int, cap: int):
        super().__init__(f"more than {cap} vertices removed from block {block}")
        self.block = block


@dataclass(frozen=True)
class ConnectorConfig:
    k: int
    eta: Fraction = Fraction(1)
    s: int | None = None
    seed: int = 0

    def __post_init__(self):
        eta = Fraction(self.eta).limit_denominator(10**6) if not isinstance(self.eta, Fraction) else self.eta
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not Fraction(1, 2) < eta <= 1:
            raise ValueError(f"eta must lie in (1/2, 1], got {eta}")
        s = 4 * self.k if self.s is None else self.s
        if s < self.k:
            raise ValueError("s must be >= k")
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "s", s)

    def dimension(self, m: int) -> int:
        return math.floor((self.eta - Fraction(1, 2)) * m)

    def threshold(self, degree: int) -> Fraction:
        return degree * (1 - Fraction(self.k, self.s))


@dataclass
class ConnectorTrace:
    G0: list[tuple[int, int]] = field(default_factory=list)
    steps: list[dict] = field(default_factory=list)
    U0: list[int] = field(default_factory=list)
    W: list[int] = field(default_factory=list)
    verification: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["G0"] = [list(e) for e in self.G0]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def k_connector_edge(G: Graph, Vi, Vj, k: int, cap: int = ENUMERATION_CAP) -> bool:
    """No k-set of V_i is non-adjacent to a k-set of V_j."""
    A, B = mask_of(Vi), mask_of(Vj)
    if k > popcount(A) or k > popcount(B):
        raise ValueError(f"k={k} exceeds a block size")
    if popcount(A) > popcount(B):
        A, B = B, A
    if math.comb(popcount(A), k) > cap:
        raise Undecided(f"C({popcount(A)}, {k}) exceeds the enumeration cap {cap}")
    verts = list(bits(A))
    nb = [G.adj[v] & B for v in verts]

    # DFS over k-subsets with the running neighbourhood; a prefix whose
    # non-neighbourhood is already below k cannot be extended to a witness
    def witness(start: int, left: int, covered: int) -> bool:
        if popcount(B & ~covered) < k:
            return False
        if left == 0:
            return True
        for t in range(start, len(verts) - left + 1):
            if witness(t + 1, left - 1, covered | nb[t]):
                return True
        return False

    return not witness(0, k, 0)


def build_G0(G: Graph, partition: Partition, k: int) -> Graph:
    partition.check(G)
    if min(partition.sizes()) < k:
        raise ValueError(f"every block needs at least k={k} vertices")
    masks = partition.masks
    m = partition.m
    edges = [(i, j) for i in range(m) for j in range(i + 1, m) if k_connector_edge(G, masks[i], masks[j], k)]
    return Graph(m, edges)


def big_component(G: Graph, Vi, Vj, U, k: int) -> int:
    """Mask of the unique component of G[V_i - U, V_j - U] with k vertices on each side."""
    A, B, U = mask_of(Vi), mask_of(Vj), mask_of(U)
    A &= ~U
    B &= ~U
    rows = bipartite_rows(G, A, B)
    big = [c for c in _components(rows, A | B) if popcount(c & A) >= k and popcount(c & B) >= k]
    if not big:
        raise NoBigComponent("no component has k vertices on both sides")
    if len(big) > 1:
        raise MultipleBigComponents(f"{len(big)} components have k vertices on both sides")
    return big[0]


def big_components(G: Graph, partition: Partition, G0: Graph, U: int, k: int) -> dict[tuple[int, int], int]:
    masks = partition.masks
    return {(i, j): big_component(G, masks[i], masks[j], U, k) for i, j in G0.edges}


def _membership(comps: dict, G0: Graph, i: int, v: int) -> int:
    return sum((comps[(min(i, j), max(i, j))] >> v) & 1 for j in bits(G0.adj[i]))


def bad_vertices(G: Graph, partition: Partition, G0: Graph, U: int, cfg: ConnectorConfig) -> list[tuple[int, int]]:
    """All (block, vertex) outside U lying in fewer than T_i big components, from scratch."""
    comps = big_components(G, partition, G0, U, cfg.k)
    out = []
    for i, Vi in enumerate(partition.masks):
        T = cfg.threshold(G0.degree(i))
        out.extend((i, v) for v in bits(Vi & ~U) if _membership(comps, G0, i, v) < T)
    return out


def _check_sizes(partition: Partition, k: int) -> None:
    small = [i for i, s in enumerate(partition.sizes()) if s <= 7 * k - 3]
    if small:
        raise ConnectorError(f"blocks {small} have at most 7k-3 = {7 * k - 3} vertices")


def eliminate_bad(G: Graph, partition: Partition, G0: Graph, cfg: ConnectorConfig,
                  trace: ConnectorTrace | None = None) -> tuple[int, ConnectorTrace]:
    """Peel bad vertices in ascending (block, vertex) order until none remain."""
    partition.check(G)
    _check_sizes(partition, cfg.k)
    trace = ConnectorTrace(G0=list(G0.edges)) if trace is None else trace
    masks = partition.masks
    U = 0
    comps = big_components(G, partition, G0, U, cfg.k)
    thresholds = [cfg.threshold(G0.degree(i)) for i in range(partition.m)]
    while True:
        hit = None
        for i, Vi in enumerate(masks):
            for v in bits(Vi & ~U):
                c = _membership(comps, G0, i, v)
                if c < thresholds[i]:
                    hit = (i, v, c)
                    break
            if hit:
                break
        if hit is None:
            break
        i, v, c = hit
        if popcount(U & masks[i]) + 1 > cfg.s:
            raise CapOverflow(i, cfg.s)
        U |= 1 << v
        trace.steps.append({"vertex": v, "block": i, "count": c, "threshold": str(thresholds[i])})
        for j in bits(G0.adj[i]):
            key = (min(i, j), max(i, j))
            comps[key] = big_component(G, masks[key[0]], masks[key[1]], U, cfg.k)
    trace.U0 = list(bits(U))
    return U, trace


def connector_certify(G: Graph, partition: Partition, cfg: ConnectorConfig,
                      trials: int = 2) -> tuple[frozenset[int], CertifierVerdict, ConnectorTrace]:
    """Find W with at most s vertices missing per block and certify G[W] d-rigid.

    The certificate is a strong partition of G[W] into the residual blocks;
    the rank test of G[W] is recorded alongside as ``rank_verified``.
    """
    partition.check(G)
    m = partition.m
    d = cfg.dimension(m)
    trace = ConnectorTrace()
    if d < 1:
        return frozenset(), CertifierVerdict(False, HYPOTHESIS_VIOLATED, {"text": f"d = floor((eta - 1/2) m) = {d} < 1"}), trace
    try:
        _check_sizes(partition, cfg.k)
    except ConnectorError as exc:
        return frozenset(), CertifierVerdict(False, HYPOTHESIS_VIOLATED, {"text": str(exc)}), trace
    G0 = build_G0(G, partition, cfg.k)
    trace.G0 = list(G0.edges)
    delta = G0.min_degree() if m else 0
    if delta < cfg.eta * m - 1:
        text = f"min degree of G_0 is {delta} < eta*m - 1 = {cfg.eta * m - 1}"
        return frozenset(), CertifierVerdict(False, HYPOTHESIS_VIOLATED, {"text": text}), trace
    U, trace = eliminate_bad(G, partition, G0, cfg, trace)
    Wmask = G.vertex_mask & ~U
    W = list(bits(Wmask))
    trace.W = W
    index = {v: t for t, v in enumerate(W)}
    GW = induced_subgraph(G, Wmask)
    residual = Partition([[index[v] for v in bits(Vi & Wmask)] for Vi in partition.masks], len(W))
    verdict = certify_strong_partition(GW, residual, d, allow_self=True, seed=cfg.seed, trials=trials)
    rv = is_d_rigid(GW, d, seed=cfg.seed, trials=trials)
    trace.verification = {"d": d, "strong_partition": verdict.accepted, "rank_verified": rv.to_dict()}
    detail = dict(verdict.detail, d=d, rank_verified=rv.rigid)
    witness = None
    if verdict.accepted:
        witness = dict(verdict.witness, W=W, U0=trace.U0, rank=rv.to_dict())
    out = CertifierVerdict(verdict.accepted, verdict.failing_obligation, detail, witness)
    return frozenset(W), out, trace
