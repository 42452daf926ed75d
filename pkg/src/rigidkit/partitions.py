"""Partition-based rigidity certificates.

Each certifier checks a list of sufficient conditions on a given
partition and reports the first one that fails.  Acceptance proves that G
is d-rigid; rejection says nothing about G.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .ffrank import generic_points, pair_row_rank
from .graph import Graph, Partition, bipartite_rows, bits, mask_of, popcount, reduced_graph
from .oracles import tree_packing_count
from .rigidity import LimitFrameworkSpec, is_d_rigid

__all__ = [
    "ColoredMultigraph",
    "GeneralizedPartitionSpec",
    "CertifierVerdict",
    "CombNode",
    "CombFailure",
    "REDUCED_NOT_RIGID",
    "Q_NOT_CONNECTED",
    "COMB_FAILED",
    "ANCHORING_FAILED",
    "TREE_PACKING_FAILED",
    "HYPOTHESIS_VIOLATED",
    "is_d_anchored",
    "anchoring_rank",
    "build_Q_graphs",
    "certify_strong_partition",
    "comb",
    "monochromatic_cut_violation",
    "certify_generalized_partition",
    "certify_double_partition",
    "assemble_limit_framework",
    "strong_as_generalized",
    "double_as_generalized",
]

REDUCED_NOT_RIGID = "reduced-not-rigid"
Q_NOT_CONNECTED = "Q-not-connected"
COMB_FAILED = "comb-failed"
ANCHORING_FAILED = "anchoring-failed"
TREE_PACKING_FAILED = "tree-packing-failed"
HYPOTHESIS_VIOLATED = "hypothesis-violated"

EXHAUSTIVE_CAP = 18


def _components(rows: Sequence[int], mask: int) -> list[int]:
    """Connected components (as bit masks) of the graph ``rows`` restricted to ``mask``."""
    out = []
    left = mask
    while left:
        seen = frontier = left & -left
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= rows[v]
            frontier = nxt & mask & ~seen
            seen |= frontier
        out.append(seen)
        left &= ~seen
    return out


def _rows_from_edges(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    rows = [0] * n
    for u, v in edges:
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return rows


# ---------------------------------------------------------------- anchoring


@dataclass(frozen=True)
class ColoredMultigraph:
    n: int
    edges: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        es = tuple((int(u), int(v), int(c)) for u, v, c in self.edges)
        for u, v, c in es:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
            if c < 0:
                raise ValueError(f"negative colour {c}")
        object.__setattr__(self, "edges", es)

    @property
    def colors(self) -> list[int]:
        return sorted({c for _, _, c in self.edges})

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}


def anchoring_rank(H: ColoredMultigraph, d: int, seed: int = 0, points: np.ndarray | None = None) -> int:
    """Rank of the motion constraints ``(q(u) - q(v)) . x_c = 0``."""
    if not H.edges:
        return 0
    top = max(c for _, _, c in H.edges) + 1
    x = generic_points(top, d, seed) if points is None else np.asarray(points, dtype=np.int64)
    us = [u for u, _, _ in H.edges]
    vs = [v for _, v, _ in H.edges]
    vecs = x[[c for _, _, c in H.edges]]
    r, _ = pair_row_rank(us, vs, vecs, H.n, d * (H.n - 1), seed=seed + 1)
    return r


def is_d_anchored(H: ColoredMultigraph, d: int, seed: int = 0, points: np.ndarray | None = None) -> bool:
    """Every motion is constant iff the constraints have rank ``d (n - 1)``.

    True is certain; False may be wrong with probability about rank/q.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if H.n < 1:
        raise ValueError("anchoring needs at least one vertex")
    if H.n == 1:
        return True
    return anchoring_rank(H, d, seed, points) == d * (H.n - 1)


# ---------------------------------------------------------------- verdicts


@dataclass(frozen=True)
class CertifierVerdict:
    accepted: bool
    failing_obligation: str | None = None
    detail: dict = field(default_factory=dict)
    witness: dict | None = None

    def __post_init__(self):
        if self.accepted and self.witness is None:
            raise ValueError("an accepted verdict needs a witness")

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "failing_obligation": self.failing_obligation,
            "detail": self.detail,
            "witness": self.witness,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, default=_jsonable, **kw)


def _jsonable(o):
    if isinstance(o, (CombNode, CombFailure)):
        return o.to_dict()
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (frozenset, set)):
        return sorted(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


def _reject(obligation: str, witness: dict | None = None, **detail) -> CertifierVerdict:
    return CertifierVerdict(False, obligation, detail, witness)


# ---------------------------------------------------------------- strong partitions


def _q_matrix(G: Graph, masks: list[int], i: int, others: Iterable[int]) -> np.ndarray:
    """Count, for each pair of V_i, how many G[V_i, V_j] connect it."""
    Vi = masks[i]
    verts = list(bits(Vi))
    pos = {v: t for t, v in enumerate(verts)}
    count = np.zeros((len(verts), len(verts)), dtype=np.int32)
    label = np.empty(len(verts), dtype=np.int64)
    for j in others:
        rows = bipartite_rows(G, Vi, masks[j])
        for c, comp in enumerate(_components(rows, Vi | masks[j])):
            for v in bits(comp & Vi):
                label[pos[v]] = c
        count += label[:, None] == label[None, :]
    return count


def _graph_from_counts(count: np.ndarray, d: int) -> Graph:
    k = count.shape[0]
    hit = count >= d
    np.fill_diagonal(hit, False)
    rows = [mask_of(np.flatnonzero(hit[t]).tolist()) for t in range(k)]
    return Graph._trusted(rows)


def build_Q_graphs(G: Graph, partition: Partition, d: int, allow_self: bool = True) -> list[Graph]:
    """Q_i on V_i (relabelled in ascending order): u ~ v iff d indices j connect them in G[V_i, V_j]."""
    partition.check(G)
    m = partition.m
    need = d if allow_self else d + 1
    if m < need:
        raise ValueError(f"need at least {need} blocks for d={d}, got {m}")
    masks = partition.masks
    out = []
    for i in range(m):
        others = [j for j in range(m) if allow_self or j != i]
        out.append(_graph_from_counts(_q_matrix(G, masks, i, others), d))
    return out


def _is_connected(H: Graph) -> bool:
    return H.n <= 1 or len(_components(H.adj, H.vertex_mask)) == 1


def certify_strong_partition(G: Graph, partition: Partition, d: int, allow_self: bool = True,
                             seed: int = 0, trials: int = 2) -> CertifierVerdict:
    """Reduced graph d-rigid and every Q_i connected."""
    partition.check(G)
    R = reduced_graph(G, partition)
    rv = is_d_rigid(R, d, seed=seed, trials=trials)
    if not rv.rigid:
        return _reject(REDUCED_NOT_RIGID, {"reduced": rv.to_dict()})
    Qs = build_Q_graphs(G, partition, d, allow_self)
    for i, Qi in enumerate(Qs):
        if not _is_connected(Qi):
            comps = [[partition.blocks[i][t] for t in bits(c)] for c in _components(Qi.adj, Qi.vertex_mask)]
            return _reject(Q_NOT_CONNECTED, {"components": comps}, block=i)
    return CertifierVerdict(True, witness={
        "reduced": rv.to_dict(),
        "Q_graphs": [[[partition.blocks[i][a], partition.blocks[i][b]] for a, b in Qi.edges]
                     for i, Qi in enumerate(Qs)],
    })


# ---------------------------------------------------------------- combing


@dataclass(frozen=True)
class CombNode:
    subset: tuple[int, ...]
    color: int | None = None
    left: "CombNode | None" = None
    right: "CombNode | None" = None

    def to_dict(self) -> dict:
        return {
            "subset": list(self.subset),
            "color": self.color,
            "left": self.left.to_dict() if self.left else None,
            "right": self.right.to_dict() if self.right else None,
        }

    def splits(self):
        """Yield internal nodes in preorder."""
        stack = [self]
        while stack:
            node = stack.pop()
            if node.left is not None:
                yield node
                stack.append(node.right)
                stack.append(node.left)


@dataclass(frozen=True)
class CombFailure:
    subset: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"failed_at": list(self.subset)}


def _colored_rows(n: int, colors: Mapping[tuple[int, int], int]) -> dict[int, list[int]]:
    by_color: dict[int, list[int]] = {}
    for (u, v), c in colors.items():
        rows = by_color.setdefault(c, [0] * n)
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return by_color


def _cut_at(full: list[int], by_color: dict[int, list[int]], U: int) -> tuple[bool, int | None, int]:
    """``(found, colour, U')`` for the first monochromatic cut of U."""
    comps = _components(full, U)
    if len(comps) > 1:
        return True, None, comps[0]
    present = sorted(c for c, rows in by_color.items() if any(rows[v] & U for v in bits(U)))
    for c in present:
        crow = by_color[c]
        rows = {v: full[v] & ~crow[v] for v in bits(U)}
        first = _components(rows, U)[0]
        if first != U:
            return True, c, first
    return False, None, 0


def comb(Ghat: Graph, colors: Mapping[tuple[int, int], int], U: Iterable[int] | int) -> CombNode | CombFailure:
    """Recursively split U along monochromatic cuts of ``Ghat[U]``.

    ``colors`` maps each edge ``(u, v)``, ``u < v``, with both ends in U to
    its colour.  A disconnected ``Ghat[U]`` is split with colour None.
    Returns the recursion tree, or the first subset (depth-first) that has
    no monochromatic cut.
    """
    U = mask_of(U)
    if U == 0:
        raise ValueError("cannot comb an empty set")
    by_color = _colored_rows(Ghat.n, {e: c for e, c in colors.items()
                                      if (U >> e[0]) & 1 and (U >> e[1]) & 1})
    full = [0] * Ghat.n
    for rows in by_color.values():
        for v in bits(U):
            full[v] |= rows[v]

    # explicit stack: blocks can be deeper than the recursion limit
    built: dict[int, CombNode] = {}
    stack: list[tuple[int, tuple | None]] = [(U, None)]
    while stack:
        S, plan = stack.pop()
        if popcount(S) == 1:
            built[S] = CombNode((S.bit_length() - 1,))
            continue
        if plan is None:
            found, c, left = _cut_at(full, by_color, S)
            if not found:
                return CombFailure(tuple(bits(S)))
            stack.append((S, (c, left)))
            stack.append((S & ~left, None))
            stack.append((left, None))
        else:
            c, left = plan
            built[S] = CombNode(tuple(bits(S)), c, built.pop(left), built.pop(S & ~left))
    return built[U]


def monochromatic_cut_violation(Ghat: Graph, colors: Mapping[tuple[int, int], int],
                                V: Iterable[int] | int, cap: int = EXHAUSTIVE_CAP) -> tuple[int, ...] | None:
    """Exhaustive check over every U within V with |U| >= 2; returns a violating U or None."""
    verts = list(bits(mask_of(V)))
    if len(verts) > cap:
        raise ValueError(f"exhaustive check capped at {cap} vertices, got {len(verts)}")
    by_color = _colored_rows(Ghat.n, {e: c for e, c in colors.items()})
    full = [0] * Ghat.n
    for rows in by_color.values():
        for v in range(Ghat.n):
            full[v] |= rows[v]
    for sub in range(1, 1 << len(verts)):
        if sub & (sub - 1) == 0:
            continue
        U = mask_of(verts[t] for t in range(len(verts)) if (sub >> t) & 1)
        if not _cut_at(full, by_color, U)[0]:
            return tuple(bits(U))
    return None


# ---------------------------------------------------------------- generalized partitions


@dataclass(frozen=True, eq=False)
class GeneralizedPartitionSpec:
    """Blocks V_0..V_{m-1}, bounds m_i >= m and edge-disjoint subgraphs G_ij.

    Indices are 0-based: ``subgraphs[(i, j)]`` is defined for ``i < j < m_i``
    (missing keys mean an empty subgraph).  For ``j < m`` its edges lie in
    ``V_i | V_j``; for ``j >= m`` they lie in ``V_i``.
    """

    graph: Graph
    partition: Partition
    bounds: tuple[int, ...]
    subgraphs: Mapping[tuple[int, int], tuple[tuple[int, int], ...]]

    def __post_init__(self):
        G, P = self.graph, self.partition
        P.check(G)
        m = P.m
        bounds = tuple(int(b) for b in self.bounds)
        if len(bounds) != m:
            raise ValueError(f"need {m} bounds, got {len(bounds)}")
        if any(b < m for b in bounds):
            raise ValueError("every bound m_i must be at least m")
        masks = P.masks
        owner: dict[tuple[int, int], tuple[int, int]] = {}
        subs = {}
        for key, es in self.subgraphs.items():
            i, j = key
            if not (0 <= i < m and i < j < bounds[i]):
                raise ValueError(f"index {key} is outside the index set")
            support = masks[i] | (masks[j] if j < m else 0)
            norm = []
            for u, v in es:
                e = (min(u, v), max(u, v))
                if not G.has_edge(*e):
                    raise ValueError(f"subgraph {key} uses non-edge {e}")
                if not ((support >> e[0]) & 1 and (support >> e[1]) & 1):
                    raise ValueError(f"edge {e} of subgraph {key} leaves its vertex set")
                if e in owner and owner[e] != key:
                    raise ValueError(f"edge {e} is shared by subgraphs {owner[e]} and {key}")
                owner[e] = key
                norm.append(e)
            subs[(i, j)] = tuple(sorted(set(norm)))
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "subgraphs", subs)

    @property
    def m(self) -> int:
        return self.partition.m

    def sub(self, i: int, j: int) -> tuple[tuple[int, int], ...]:
        """G_ij with the symmetric convention G_ij = G_ji."""
        if i > j:
            i, j = j, i
        return self.subgraphs.get((i, j), ())

    def union_edges(self) -> list[tuple[int, int]]:
        return sorted(e for es in self.subgraphs.values() for e in es)

    def hat(self) -> Graph:
        return Graph(self.graph.n, self.union_edges())

    def block_colors(self, i: int) -> dict[tuple[int, int], int]:
        """Edges of the union inside V_i, coloured by the other subgraph index."""
        Vi = self.partition.masks[i]
        out = {}
        for (a, b), es in self.subgraphs.items():
            if i not in (a, b):
                continue
            other = b if a == i else a
            for u, v in es:
                if (Vi >> u) & 1 and (Vi >> v) & 1:
                    out[(u, v)] = other
        return out

    def anchoring_graph(self, i: int) -> ColoredMultigraph:
        """(H_i, c_i) on V_i (relabelled), one star per component of each G_ij."""
        n = self.graph.n
        block = self.partition.blocks[i]
        pos = {v: t for t, v in enumerate(block)}
        Vi = self.partition.masks[i]
        m = self.m
        edges = []
        for j in range(self.bounds[i]):
            if j == i:
                continue
            es = self.sub(i, j)
            if not es:
                continue
            support = Vi | (self.partition.masks[j] if j < m else 0)
            for comp in _components(_rows_from_edges(n, es), support):
                inside = [pos[v] for v in bits(comp & Vi)]
                edges.extend((inside[0], w, j) for w in inside[1:])
        return ColoredMultigraph(len(block), tuple(edges))

    def reduced(self) -> Graph:
        P = self.partition
        m = P.m
        E = set()
        for (i, j), es in self.subgraphs.items():
            if j >= m:
                continue
            for u, v in es:
                if P.block_of(u) != P.block_of(v):
                    E.add((i, j))
                    break
        return Graph(m, sorted(E))


def strong_as_generalized(G: Graph, partition: Partition) -> GeneralizedPartitionSpec:
    """G_ij = G[V_i, V_j] for blocks i < j and an extra index m carrying G[V_i]."""
    m = partition.m
    masks = partition.masks
    subs = {}
    for i in range(m):
        for j in range(i + 1, m):
            subs[(i, j)] = tuple((u, v) for u, v in G.edges
                                 if ((masks[i] >> u) & 1 and (masks[j] >> v) & 1)
                                 or ((masks[j] >> u) & 1 and (masks[i] >> v) & 1))
        subs[(i, m)] = tuple((u, v) for u, v in G.edges if (masks[i] >> u) & 1 and (masks[i] >> v) & 1)
    return GeneralizedPartitionSpec(G, partition, (m + 1,) * m, subs)


def certify_generalized_partition(spec: GeneralizedPartitionSpec, d: int, seed: int = 0,
                                  trials: int = 2) -> CertifierVerdict:
    """Combing on every block, anchored parts, then a d-rigid reduced graph."""
    G, P = spec.graph, spec.partition
    Ghat = spec.hat()
    trees = []
    for i, block in enumerate(P.blocks):
        tree = comb(Ghat, spec.block_colors(i), block)
        if isinstance(tree, CombFailure):
            return _reject(COMB_FAILED, {"failed_at": list(tree.subset)}, block=i, subset=list(tree.subset))
        trees.append(tree)
    points = generic_points(max(spec.bounds), d, seed)
    for i in range(P.m):
        H = spec.anchoring_graph(i)
        if not is_d_anchored(H, d, seed, points):
            return _reject(ANCHORING_FAILED, {"anchoring_graph": H.to_dict()}, block=i)
    rv = is_d_rigid(spec.reduced(), d, seed=seed, trials=trials)
    if not rv.rigid:
        return _reject(REDUCED_NOT_RIGID, {"reduced": rv.to_dict()})
    return CertifierVerdict(True, witness={"comb_trees": [t.to_dict() for t in trees],
                                           "reduced": rv.to_dict()})


def assemble_limit_framework(spec: GeneralizedPartitionSpec, trees: Sequence[CombNode | dict],
                             points: np.ndarray) -> LimitFrameworkSpec:
    """Limit framework on the union graph with all of V_i placed at x_i.

    Crossing edges between V_a and V_b point along ``x_a - x_b``; an edge
    inside V_i separated at a comb node of colour c points along ``x_i - x_c``.
    """
    P = spec.partition
    if len(trees) != P.m or any(t is None for t in trees):
        raise ValueError("a comb tree is required for every block")
    x = np.asarray(points, dtype=np.int64)
    if x.shape[0] < max(spec.bounds):
        raise ValueError(f"need {max(spec.bounds)} points, got {x.shape[0]}")
    d = x.shape[1]
    Ghat = spec.hat()
    index = {e: t for t, e in enumerate(Ghat.edges)}
    dirs = np.zeros((Ghat.m, d), dtype=np.int64)
    done = np.zeros(Ghat.m, dtype=bool)
    for t, (u, v) in enumerate(Ghat.edges):
        a, b = P.block_of(u), P.block_of(v)
        if a != b:
            dirs[t] = x[a] - x[b]
            done[t] = True
    rows = Ghat.adj
    for i, tree in enumerate(trees):
        if isinstance(tree, dict):
            tree = _node_from_dict(tree)
        for node in tree.splits():
            left, right = mask_of(node.left.subset), mask_of(node.right.subset)
            for u in bits(left):
                for v in bits(rows[u] & right):
                    t = index[(min(u, v), max(u, v))]
                    dirs[t] = x[i] - x[node.color]
                    if u > v:
                        dirs[t] = -dirs[t]
                    done[t] = True
    if not done.all():
        raise ValueError("comb trees do not cover every edge inside the blocks")
    pos = x[[P.block_of(v) for v in range(Ghat.n)]]
    return LimitFrameworkSpec(Ghat, d, pos, dirs)


def _node_from_dict(d: dict) -> CombNode:
    return CombNode(tuple(d["subset"]), d["color"],
                    _node_from_dict(d["left"]) if d.get("left") else None,
                    _node_from_dict(d["right"]) if d.get("right") else None)


# ---------------------------------------------------------------- double partitions


def _check_forest(n: int, edges: Sequence[tuple[int, int]]) -> None:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        a, b = find(u), find(v)
        if a == b:
            raise ValueError(f"forest edge ({u}, {v}) closes a cycle")
        parent[a] = b


def _validate_double(G, partition, subparts, forests):
    partition.check(G)
    m = partition.m
    if len(subparts) != m or len(forests) != m:
        raise ValueError("need one sub-partition and one forest per block")
    out_sub, out_f = [], []
    for i in range(m):
        sp = [tuple(sorted(s)) for s in subparts[i]]
        if any(not s for s in sp):
            raise ValueError(f"empty sub-part in block {i}")
        flat = sorted(v for s in sp for v in s)
        if flat != list(partition.blocks[i]):
            raise ValueError(f"sub-parts do not partition block {i}")
        Vi = partition.masks[i]
        F = [(min(u, v), max(u, v)) for u, v in forests[i]]
        for e in F:
            if not G.has_edge(*e) or not ((Vi >> e[0]) & 1 and (Vi >> e[1]) & 1):
                raise ValueError(f"forest edge {e} is not an edge of G[V_{i}]")
        if len(set(F)) != len(F):
            raise ValueError(f"repeated forest edge in block {i}")
        _check_forest(G.n, F)
        out_sub.append(sp)
        out_f.append(F)
    return out_sub, out_f


def certify_double_partition(G: Graph, partition: Partition, subparts: Sequence[Sequence[Iterable[int]]],
                             forests: Sequence[Sequence[tuple[int, int]]], d: int, seed: int = 0,
                             trials: int = 2) -> CertifierVerdict:
    """Reduced graph d-rigid, d trees in every contracted forest, every Q_ij connected."""
    subparts, forests = _validate_double(G, partition, subparts, forests)
    m = partition.m
    if m < d:
        return _reject(HYPOTHESIS_VIOLATED, text=f"need m >= d, got m={m}, d={d}")
    rv = is_d_rigid(reduced_graph(G, partition), d, seed=seed, trials=trials)
    if not rv.rigid:
        return _reject(REDUCED_NOT_RIGID, {"reduced": rv.to_dict()})
    packs = []
    for i in range(m):
        k = len(subparts[i])
        where = {v: t for t, s in enumerate(subparts[i]) for v in s}
        contracted = [(where[u], where[v]) for u, v in forests[i] if where[u] != where[v]]
        got = tree_packing_count(k, contracted) if k >= 2 else None
        packs.append(got)
        if got is not None and got < d:
            return _reject(TREE_PACKING_FAILED, {"contracted": contracted, "trees": got}, block=i)
    masks = partition.masks
    Qs = []
    for i in range(m):
        pos = {v: t for t, v in enumerate(partition.blocks[i])}
        count = _q_matrix(G, masks, i, [s for s in range(m) if s != i])
        Qi = []
        for j, part in enumerate(subparts[i]):
            idx = [pos[v] for v in part]
            Qij = _graph_from_counts(count[np.ix_(idx, idx)], d)
            if not _is_connected(Qij):
                comps = [[part[t] for t in bits(c)] for c in _components(Qij.adj, Qij.vertex_mask)]
                return _reject(Q_NOT_CONNECTED, {"components": comps}, block=i, subpart=j)
            Qi.append([[part[a], part[b]] for a, b in Qij.edges])
        Qs.append(Qi)
    return CertifierVerdict(True, witness={"reduced": rv.to_dict(), "tree_packing": packs, "Q_graphs": Qs})


def double_as_generalized(G: Graph, partition: Partition,
                          forests: Sequence[Sequence[tuple[int, int]]]) -> GeneralizedPartitionSpec:
    """Crossing subgraphs G[V_i, V_j] plus one single-edge subgraph per forest edge."""
    m = partition.m
    masks = partition.masks
    subs = {}
    for i in range(m):
        for j in range(i + 1, m):
            subs[(i, j)] = tuple((u, v) for u, v in G.edges
                                 if ((masks[i] >> u) & 1 and (masks[j] >> v) & 1)
                                 or ((masks[j] >> u) & 1 and (masks[i] >> v) & 1))
    bounds = []
    for i in range(m):
        for t, e in enumerate(forests[i]):
            subs[(i, m + t)] = (e,)
        bounds.append(max(m, m + len(forests[i])))
    return GeneralizedPartitionSpec(G, partition, tuple(bounds), subs)
