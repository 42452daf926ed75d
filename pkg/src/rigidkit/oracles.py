"""Slow but independent ground truth used to cross-check the rank engine."""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import Graph, bits

__all__ = ["connected", "laman_rigid", "laman_independent_count", "exact_rank_rational",
           "tree_packing_count", "RATIONAL_CAP", "TREE_PACKING_CAP"]

RATIONAL_CAP = 400
TREE_PACKING_CAP = 12


def connected(G: Graph) -> bool:
    if G.n <= 1:
        return True
    seen = frontier = 1
    adj = G.adj
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= adj[v]
        frontier = nxt & ~seen
        seen |= frontier
    return seen == G.vertex_mask


class PebbleState:
    """(2,3) pebble game: two pebbles per vertex, accepted edges oriented."""

    def __init__(self, n: int):
        self.pebbles = [2] * n
        self.out: list[list[int]] = [[] for _ in range(n)]

    def _fetch(self, root: int, frozen: int) -> bool:
        # move one pebble to root along a reversed out-path
        parent = {root: None, frozen: None}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in self.out[x]:
                if y in parent:
                    continue
                parent[y] = x
                if self.pebbles[y]:
                    self.pebbles[y] -= 1
                    while parent[y] is not None:
                        p = parent[y]
                        self.out[p].remove(y)
                        self.out[y].append(p)
                        y = p
                    self.pebbles[root] += 1
                    return True
                stack.append(y)
        return False

    def try_add(self, u: int, v: int) -> bool:
        while self.pebbles[u] < 2 and self._fetch(u, v):
            pass
        while self.pebbles[v] < 2 and self._fetch(v, u):
            pass
        if self.pebbles[u] + self.pebbles[v] < 4:
            return False
        self.pebbles[u] -= 1
        self.out[u].append(v)
        return True


def laman_independent_count(G: Graph) -> int:
    """Size of a maximal (2,3)-sparse edge subset."""
    state = PebbleState(G.n)
    return sum(state.try_add(u, v) for u, v in G.edges)


def laman_rigid(G: Graph) -> bool:
    if G.n < 2:
        raise ValueError("pebble game needs n >= 2")
    return laman_independent_count(G) == 2 * G.n - 3


def exact_rank_rational(M: Sequence[Sequence[int]]) -> int:
    rows = [[Fraction(x) for x in r] for r in M]
    if not rows:
        return 0
    cols = len(rows[0])
    if len(rows) * cols > RATIONAL_CAP:
        raise ValueError(f"matrix too large for exact rank ({len(rows)}x{cols} > {RATIONAL_CAP} entries)")
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r]
        for i in range(r + 1, len(rows)):
            f = rows[i][c] / piv[c]
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], piv)]
        r += 1
    return r


def _forest_path(adj: dict, u: int, v: int) -> list[int] | None:
    """Edge ids on the forest path u..v, or None if u and v are separated."""
    prev = {u: None}
    q = deque([u])
    while q:
        x = q.popleft()
        if x == v:
            path = []
            while prev[x] is not None:
                e, x = prev[x]
                path.append(e)
            return path
        for y, e in adj.get(x, ()):
            if y not in prev:
                prev[y] = (e, x)
                q.append(y)
    return None


def _pack(n: int, edges: list[tuple[int, int]], k: int) -> int:
    """Largest union of k forests, grown by matroid-partition augmentation."""
    owner = [-1] * len(edges)
    forests: list[dict] = [dict() for _ in range(k)]

    def link(i, e):
        u, v = edges[e]
        forests[i].setdefault(u, []).append((v, e))
        forests[i].setdefault(v, []).append((u, e))
        owner[e] = i

    def unlink(i, e):
        u, v = edges[e]
        forests[i][u].remove((v, e))
        forests[i][v].remove((u, e))
        owner[e] = -1

    size = 0
    for e0, (a, b) in enumerate(edges):
        if a == b:
            continue
        parent = {e0: None}
        q = deque([e0])
        done = False
        while q and not done:
            f = q.popleft()
            u, v = edges[f]
            for i in range(k):
                if owner[f] == i:
                    continue
                path = _forest_path(forests[i], u, v)
                if path is None:
                    cur, dest = f, i
                    while True:
                        if owner[cur] >= 0:
                            unlink(owner[cur], cur)
                        link(dest, cur)
                        if parent[cur] is None:
                            break
                        cur, dest = parent[cur]
                    done = True
                    break
                for g in path:
                    if g not in parent:
                        # f goes into forest i, g leaves it
                        parent[g] = (f, i)
                        q.append(g)
        size += done
    return size


def tree_packing_count(n: int, edges: Iterable[tuple[int, int]]) -> int:
    """Maximum number of edge-disjoint spanning trees of a multigraph."""
    if n < 2:
        raise ValueError("tree packing needs n >= 2")
    if n > TREE_PACKING_CAP:
        raise ValueError(f"tree packing capped at n <= {TREE_PACKING_CAP}")
    E = [(min(u, v), max(u, v)) for u, v in edges]
    for u, v in E:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) out of range")
    k = 0
    while (k + 1) * (n - 1) <= len(E) and _pack(n, E, k + 1) == (k + 1) * (n - 1):
        k += 1
    return k
