"""Dense linear algebra over the prime field F_q, q = 2**31 - 1.

Entries are stored as int64 (or float64 inside the blocked path) with values
in ``[0, q)``.  A product of two residues is below ``2**62`` and fits in a
signed 64-bit word, which keeps the numba kernels branch-free.

Rank is Gaussian elimination with partial pivoting by first nonzero.  Small
matrices are reduced in one numba pass; larger ones are processed in column
panels of width 64 whose trailing updates go through BLAS (exact, see
:func:`matmul_mod`).
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numba
import numpy as np

Q = (1 << 31) - 1
PANEL = 64

__all__ = [
    "Q",
    "FFMatrix",
    "rank",
    "generic_points",
    "matmul_mod",
    "pair_row_matrix",
    "pair_row_rank",
]

_Q = np.int64(Q)


@numba.njit(inline="always", cache=True)
def _red(x):
    x = (x & _Q) + (x >> 31)
    x = (x & _Q) + (x >> 31)
    return x - _Q if x >= _Q else x


@numba.njit(cache=True)
def _inv(a):
    # Fermat: a^(q-2)
    res = np.int64(1)
    e = _Q - 2
    while e > 0:
        if e & 1:
            res = _red(res * a)
        a = _red(a * a)
        e >>= 1
    return res


@numba.njit(cache=True, nogil=True)
def _panel_lu(P):
    """Eliminate ``P`` in place; return pivot rows and the multiplier matrix.

    ``L[x, t]`` is the multiple of the t-th pivot row subtracted from row x.
    Pivot rows only carry multipliers of earlier pivots.
    """
    r, b = P.shape
    L = np.zeros((r, b), dtype=np.int64)
    used = np.zeros(r, dtype=np.bool_)
    piv = np.empty(b, dtype=np.int64)
    k = 0
    for c in range(b):
        p = -1
        for i in range(r):
            if not used[i] and P[i, c] != 0:
                p = i
                break
        if p < 0:
            continue
        used[p] = True
        piv[k] = p
        inv = _inv(P[p, c])
        prow = P[p]
        for i in range(p + 1, r):
            if used[i] or P[i, c] == 0:
                continue
            f = _red(P[i, c] * inv)
            L[i, k] = f
            nf = _Q - f
            row = P[i]
            row[c] = 0
            for j in range(c + 1, b):
                row[j] = _red(row[j] + nf * prow[j])
        k += 1
    return piv[:k].copy(), L[:, :k].copy()


@numba.njit(cache=True)
def _unit_lower_inverse(L):
    """Inverse of ``I + strict_lower(L)`` mod q."""
    k = L.shape[0]
    X = np.zeros((k, k), dtype=np.int64)
    for c in range(k):
        X[c, c] = 1
        for i in range(c + 1, k):
            acc = np.int64(0)
            for s in range(c, i):
                if L[i, s] != 0 and X[s, c] != 0:
                    acc = _red(acc + L[i, s] * X[s, c])
            X[i, c] = (_Q - acc) % _Q
    return X


@numba.njit(cache=True, nogil=True)
def _combine(hi, lo, base, sign):
    # base + sign * (hi * 2**16 + lo) mod q; hi, lo are exact float products
    r, c = hi.shape
    out = np.empty((r, c), dtype=np.float64)
    for i in range(r):
        for j in range(c):
            x = (np.int64(hi[i, j]) % _Q) * 65536 + np.int64(lo[i, j]) % _Q
            x %= _Q
            if sign < 0:
                x = _Q - x
            y = (np.int64(base[i, j]) + x) % _Q
            out[i, j] = y
    return out


def matmul_mod(A: np.ndarray, B: np.ndarray, base: np.ndarray | None = None, sign: int = 1) -> np.ndarray:
    """Exact ``base + sign * (A @ B) mod q`` using float64 BLAS.

    ``B`` is split into a high 15-bit and a low 16-bit limb; with an inner
    dimension of at most 64 every partial sum stays below 2**53, so each
    float matmul is exact.  Longer inner dimensions are chunked.
    """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    hi = np.floor(B / 65536.0)
    lo = B - hi * 65536.0
    out = np.zeros((A.shape[0], B.shape[1])) if base is None else np.asarray(base, dtype=np.float64)
    for s in range(0, max(A.shape[1], 1), PANEL):
        a = np.ascontiguousarray(A[:, s : s + PANEL])
        out = _combine(a @ hi[s : s + PANEL], a @ lo[s : s + PANEL], out, sign)
    return out


def _rank_array(A: np.ndarray) -> int:
    """Rank of an int64 residue matrix (consumed)."""
    if A.size == 0:
        return 0
    if A.shape[0] < A.shape[1]:
        A = A.T
    if A.shape[1] <= PANEL:
        piv, _ = _panel_lu(np.ascontiguousarray(A, dtype=np.int64))
        return len(piv)
    W = np.ascontiguousarray(A, dtype=np.float64)
    total = 0
    while W.shape[0] and W.shape[1]:
        P = np.ascontiguousarray(W[:, :PANEL], dtype=np.int64)
        piv, L = _panel_lu(P)
        k = len(piv)
        total += k
        rest = W[:, PANEL:]
        if rest.shape[1] == 0:
            break
        keep = np.ones(W.shape[0], dtype=bool)
        keep[piv] = False
        if k:
            UT = matmul_mod(_unit_lower_inverse(L[piv]), rest[piv])
            rest = matmul_mod(L[keep], UT, base=rest[keep], sign=-1)
        W = np.ascontiguousarray(rest)
    return total


class FFMatrix:
    """Dense matrix over F_q (row-major int64 residues)."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        a = np.asarray(entries, dtype=np.int64)
        if a.ndim != 2:
            a = a.reshape(a.shape[0] if a.ndim else 0, -1)
        self.entries = np.mod(a, Q)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "FFMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, n: int) -> "FFMatrix":
        return cls(np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def T(self) -> "FFMatrix":
        return FFMatrix(self.entries.T)

    def rank(self) -> int:
        return _rank_array(self.entries.copy())

    def __eq__(self, other):
        return isinstance(other, FFMatrix) and np.array_equal(self.entries, other.entries)

    def __repr__(self):
        return f"FFMatrix({self.rows}x{self.cols})"


def rank(M) -> int:
    """Rank over F_q of an FFMatrix or anything ``np.asarray`` accepts."""
    if not isinstance(M, FFMatrix):
        M = FFMatrix(M)
    return M.rank()


def generic_points(count: int, dim: int, seed: int) -> np.ndarray:
    """``count`` pseudorandom points of F_q^dim; a pure function of ``seed``."""
    if count < 1 or dim < 1:
        raise ValueError("count and dim must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.integers(0, Q, size=(count, dim), dtype=np.int64)


def pair_row_matrix(us: Sequence[int], vs: Sequence[int], vecs: np.ndarray, n: int) -> FFMatrix:
    """Matrix with one row per pair: ``+vec`` in u's block, ``-vec`` in v's.

    This is the common shape of rigidity matrices, limit rigidity matrices
    and anchoring systems.
    """
    vecs = np.mod(np.asarray(vecs, dtype=np.int64).reshape(len(us), -1), Q)
    d = vecs.shape[1] if len(us) else 0
    M = np.zeros((len(us), n * d), dtype=np.int64)
    for e, (u, v) in enumerate(zip(us, vs)):
        M[e, u * d : (u + 1) * d] = vecs[e]
        M[e, v * d : (v + 1) * d] = (Q - vecs[e]) % Q
    return FFMatrix(M)


@numba.njit(cache=True)
def _splitmix(x):
    x = (x + np.uint64(0x9E3779B97F4A7C15))
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


@numba.njit(cache=True, nogil=True)
def _compress_pair_rows(us, vs, vecs, n, d, k_out, seed):
    # (S R)^T for a pseudorandom k_out x E matrix S; S[i, e] = h(seed, e, i).
    out = np.zeros((n * d, k_out), dtype=np.int64)
    s = np.empty(k_out, dtype=np.int64)
    base = _splitmix(np.uint64(seed))
    for e in range(us.shape[0]):
        ctr = base ^ _splitmix(np.uint64(e) + np.uint64(0x5851F42D4C957F2D))
        for i in range(k_out):
            s[i] = np.int64(_splitmix(ctr + np.uint64(i)) % np.uint64(Q))
        u = us[e]
        v = vs[e]
        for t in range(d):
            g = vecs[e, t]
            if g == 0:
                continue
            ng = _Q - g
            ru = out[u * d + t]
            rv = out[v * d + t]
            for i in range(k_out):
                ru[i] = _red(ru[i] + g * s[i])
                rv[i] = _red(rv[i] + ng * s[i])
    return out


def pair_row_rank(
    us: Sequence[int],
    vs: Sequence[int],
    vecs: np.ndarray,
    n: int,
    bound: int,
    seed: int = 0,
) -> tuple[int, bool]:
    """Rank of :func:`pair_row_matrix`, compressing tall systems.

    When there are more rows than ``bound`` (a known upper bound on the
    rank) and the matrix is not tiny, the rows are replaced by ``bound``
    pseudorandom combinations of them first.  Compression can only lower
    the rank, and does so with probability at most ``2*bound/q``.
    Returns ``(rank, compressed)``.
    """
    E = len(us)
    if E == 0:
        return 0, False
    vecs = np.mod(np.asarray(vecs, dtype=np.int64).reshape(E, -1), Q)
    d = vecs.shape[1]
    if E > bound and n * d > PANEL and bound > 0:
        C = _compress_pair_rows(
            np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64),
            np.ascontiguousarray(vecs), n, d, bound, np.uint64(seed & 0xFFFFFFFFFFFFFFFF),
        )
        return _rank_array(C), True
    return pair_row_matrix(us, vs, vecs, n).rank(), False


def from_rows(rows: Iterable[Iterable[int]]) -> FFMatrix:
    return FFMatrix([list(r) for r in rows])
