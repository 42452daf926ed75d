import itertools
import json

import numpy as np
import pytest

from rigidkit.experiments import overlapping_cliques
from rigidkit.ffrank import generic_points
from rigidkit.graph import SPLIT_NO_EDGE, SPLIT_WITH_EDGE, Graph, vertex_split, zero_extension
from rigidkit.oracles import connected, exact_rank_rational, laman_rigid
from rigidkit.rigidity import (
    FrameworkSpec,
    LimitFrameworkSpec,
    absorb,
    generic_framework,
    generic_rank,
    is_d_rigid,
    is_limit_inf_rigid,
    jlv_sufficient,
    limit_rigidity_matrix,
    max_rank,
    rigidity_matrix,
)
from instances import dense_graph


def test_rigidity_matrix_examples():
    F = FrameworkSpec(Graph(2, [(0, 1)]), 1, np.array([[4], [1]]))
    M = rigidity_matrix(F)
    assert M.shape == (1, 2) and M.rank() == 1
    assert rigidity_matrix(FrameworkSpec(Graph(3), 2, np.zeros((3, 2)))).rows == 0


def test_triangle_rank_matches_rational_oracle():
    pos = np.array([[0, 0], [5, 1], [2, 7]])
    G = Graph.complete(3)
    rows = []
    for u, v in G.edges:
        row = [0] * 6
        diff = pos[u] - pos[v]
        row[2 * u : 2 * u + 2] = diff.tolist()
        row[2 * v : 2 * v + 2] = (-diff).tolist()
        rows.append(row)
    assert exact_rank_rational(rows) == 3 == rigidity_matrix(FrameworkSpec(G, 2, pos)).rank()


def test_framework_shape_checked():
    with pytest.raises(ValueError):
        FrameworkSpec(Graph.complete(3), 2, np.zeros((2, 2)))


@pytest.mark.parametrize("G, d, expect", [
    (Graph.cycle(4), 2, 4),
    (Graph.complete(4), 2, 5),
    (Graph.path(3), 1, 2),
])
def test_generic_rank_examples(G, d, expect):
    assert generic_rank(G, d) == expect


@pytest.mark.parametrize("d", range(1, 7))
def test_simplex_is_rigid(d):
    v = is_d_rigid(Graph.complete(d + 1), d)
    assert v.rigid and v.rank == v.target and v.error_bound == 0


def test_small_n_convention_flagged():
    v = is_d_rigid(Graph.complete(3), 4)
    assert v.rigid and v.to_dict()["convention"] == "small-n"
    v = is_d_rigid(Graph.path(3), 4)
    assert not v.rigid


def test_two_cliques_sharpness():
    G = overlapping_cliques(12, 4)
    assert is_d_rigid(G, 4).rigid
    flex = is_d_rigid(G, 5)
    assert not flex.rigid and flex.error_bound < 1e-12


def test_verdict_json_keys():
    out = json.loads(is_d_rigid(Graph.cycle(5), 2, seed=3).to_json())
    assert set(out) == {"d", "rank", "target", "rigid", "trials", "seed", "error_bound"}
    assert out["rigid"] == (out["rank"] == out["target"])


def test_flexible_below_edge_count_is_certain():
    v = is_d_rigid(Graph.path(6), 2)
    assert not v.rigid and v.error_bound == 0


def test_rank_bounded_and_monotone_along_edge_chain():
    rng = np.random.default_rng(1)
    for d in (2, 3):
        n = 9
        order = list(itertools.combinations(range(n), 2))
        rng.shuffle(order)
        prev = 0
        for t in range(len(order) + 1):
            G = Graph(n, order[:t])
            r = generic_rank(G, d)
            assert prev <= r <= min(G.m, max_rank(n, d))
            prev = r


def test_d1_matches_connectivity_and_d2_matches_pebble_game():
    rng = np.random.default_rng(2)
    for _ in range(300):
        n = int(rng.integers(2, 11))
        G = dense_graph(n, float(rng.uniform(0.1, 0.9)), rng)
        assert is_d_rigid(G, 1).rigid == connected(G)
        assert is_d_rigid(G, 2).rigid == laman_rigid(G)


def test_dimension_ladder():
    rng = np.random.default_rng(3)
    for _ in range(200):
        n = int(rng.integers(3, 16))
        G = dense_graph(n, float(rng.uniform(0.3, 1.0)), rng)
        for d in range(2, 5):
            if is_d_rigid(G, d).rigid:
                assert is_d_rigid(G, d - 1).rigid


def test_two_seeds_agree():
    rng = np.random.default_rng(4)
    for _ in range(50):
        G = dense_graph(15, 0.5, rng)
        assert generic_rank(G, 3, seed=1) == generic_rank(G, 3, seed=99)


def _rigid_seed(rng, d, n):
    while True:
        G = dense_graph(n, float(rng.uniform(0.5, 0.9)), rng)
        if is_d_rigid(G, d).rigid:
            return G


def test_moves_preserve_rigidity():
    rng = np.random.default_rng(5)
    for _ in range(60):
        d = int(rng.integers(1, 5))
        G = _rigid_seed(rng, d, int(rng.integers(d + 2, 14)))
        S = rng.choice(G.n, size=d, replace=False).tolist()
        assert is_d_rigid(zero_extension(G, S), d).rigid
        v = int(rng.integers(G.n))
        N = sorted(G.neighbors(v))
        mode = SPLIT_WITH_EDGE if rng.random() < 0.5 else SPLIT_NO_EDGE
        shared = d - 1 if mode == SPLIT_WITH_EDGE else d
        perm = rng.permutation(N).tolist()
        both, rest = perm[:shared], perm[shared:]
        side = rng.random(len(rest)) < 0.5
        Nx = both + [u for u, s in zip(rest, side) if s]
        Ny = both + [u for u, s in zip(rest, side) if not s]
        H, _, _ = vertex_split(G, v, Nx, Ny, mode)
        assert is_d_rigid(H, d).rigid


def test_limit_matrix_specializes_to_framework():
    G = dense_graph(10, 0.6, np.random.default_rng(6))
    F = generic_framework(G, 3, 5)
    L = LimitFrameworkSpec.from_framework(F)
    assert limit_rigidity_matrix(L).rank() == rigidity_matrix(F).rank()


def test_limit_single_edge_and_zero_direction():
    G = Graph(2, [(0, 1)])
    L = LimitFrameworkSpec(G, 2, np.zeros((2, 2)), np.array([[1, 0]]))
    assert limit_rigidity_matrix(L).rank() == 1
    with pytest.raises(ValueError):
        LimitFrameworkSpec(G, 2, np.zeros((2, 2)), np.array([[0, 0]]))


def test_limit_complete_singletons():
    n, d = 8, 3
    x = generic_points(n, d, 2)
    G = Graph.complete(n)
    us, vs = zip(*G.edges)
    L = LimitFrameworkSpec(G, d, x, x[list(us)] - x[list(vs)])
    assert is_limit_inf_rigid(L).rigid == is_d_rigid(G, d).rigid is True


def test_absorb_examples():
    assert absorb(Graph.complete(7), [0, 1, 2], 2) == frozenset(range(7))
    G = overlapping_cliques(12, 4)
    W = absorb(G, range(8), 4)
    assert W == frozenset(range(12))
    assert absorb(G, range(12), 4) == frozenset(range(12))
    with pytest.raises(ValueError):
        absorb(G, [], 2)


def test_absorb_is_closed_and_rigid():
    rng = np.random.default_rng(7)
    for _ in range(40):
        G = dense_graph(16, 0.35, rng)
        W = absorb(G, range(4), 2)
        for v in set(range(16)) - W:
            assert len(G.neighbors(v) & W) < 2


def test_jlv():
    assert jlv_sufficient(Graph.complete(10), 5)
    assert not jlv_sufficient(Graph.cycle(8), 1)
    with pytest.raises(ValueError):
        jlv_sufficient(Graph.complete(4), 4)
    rng = np.random.default_rng(8)
    for _ in range(20):
        G = dense_graph(60, 0.9, rng)
        if jlv_sufficient(G, 3):
            assert is_d_rigid(G, 3).rigid
