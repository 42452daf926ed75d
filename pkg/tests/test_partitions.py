import itertools
import json

import numpy as np
import pytest

from rigidkit.ffrank import FFMatrix, generic_points, pair_row_matrix
from rigidkit.graph import Graph, Partition, induced_bipartite
from rigidkit.oracles import connected, tree_packing_count
from rigidkit.partitions import (
    COMB_FAILED,
    Q_NOT_CONNECTED,
    TREE_PACKING_FAILED,
    ColoredMultigraph,
    CombFailure,
    CombNode,
    GeneralizedPartitionSpec,
    anchoring_rank,
    assemble_limit_framework,
    build_Q_graphs,
    certify_double_partition,
    certify_generalized_partition,
    certify_strong_partition,
    comb,
    double_as_generalized,
    is_d_anchored,
    monochromatic_cut_violation,
    strong_as_generalized,
)
from rigidkit.rigidity import is_d_rigid, is_limit_inf_rigid
from instances import dense_graph, double_instance, generalized_instance, random_blocks, strong_instance

TRIANGLE_SPLIT = ColoredMultigraph(3, ((0, 1, 0), (0, 2, 0), (1, 2, 1), (1, 2, 2)))


def test_anchoring_examples():
    assert is_d_anchored(ColoredMultigraph(1), 3)
    for d in (1, 2, 3, 4):
        H = ColoredMultigraph(2, tuple((0, 1, c) for c in range(d)))
        assert is_d_anchored(H, d)
        assert not is_d_anchored(H, d + 1)
    assert not is_d_anchored(TRIANGLE_SPLIT, 2)
    assert tree_packing_count(3, [(u, v) for u, v, _ in TRIANGLE_SPLIT.edges]) == 2


def test_colored_multigraph_validation():
    with pytest.raises(ValueError):
        ColoredMultigraph(2, ((0, 0, 1),))
    with pytest.raises(ValueError):
        ColoredMultigraph(2, ((0, 1, -1),))


def test_monochromatic_path_constraint_in_row_space():
    rng = np.random.default_rng(0)
    d = 2
    for _ in range(30):
        n = 6
        edges = tuple((*sorted(rng.choice(n, 2, replace=False).tolist()), int(rng.integers(3))) for _ in range(10))
        H = ColoredMultigraph(n, edges)
        x = generic_points(3, d, 1)
        base = anchoring_rank(H, d, points=x)
        for c in range(3):
            mono = Graph(n, {(u, v) for u, v, col in edges if col == c})
            for u, v in itertools.combinations(range(n), 2):
                if u in _component(mono, v):
                    rows = [(a, b, x[col]) for a, b, col in edges] + [(u, v, x[c])]
                    us, vs, vecs = zip(*rows)
                    assert pair_row_matrix(us, vs, np.array(vecs), n).rank() == base


def _component(G, v):
    seen, stack = {v}, [v]
    while stack:
        for w in G.neighbors(stack.pop()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def test_q_graphs_complete_case():
    G = Graph.complete(12)
    P = Partition([range(0, 3), range(3, 6), range(6, 9), range(9, 12)])
    for Q in build_Q_graphs(G, P, 3, allow_self=False):
        assert Q.is_complete()


def test_q_graph_edgeless_when_self_index_disconnected():
    G = Graph.complete_bipartite(3, 3)
    P = Partition([[0, 1, 2], [3, 4, 5]])
    Q1 = build_Q_graphs(G, P, 2, allow_self=True)[0]
    assert Q1.m == 0


def test_q_graphs_bruteforce():
    rng = np.random.default_rng(1)
    for _ in range(40):
        G = dense_graph(12, 0.3, rng)
        P = random_blocks(12, 4, rng)
        d = int(rng.integers(1, 4))
        for allow in (True, False):
            Qs = build_Q_graphs(G, P, d, allow_self=allow)
            for i, block in enumerate(P.blocks):
                for a, b in itertools.combinations(range(len(block)), 2):
                    u, v = block[a], block[b]
                    hits = 0
                    for j in range(P.m):
                        if j == i and not allow:
                            continue
                        H = induced_bipartite(G, block, P.blocks[j])
                        order = sorted(set(block) | set(P.blocks[j]))
                        if order.index(v) in _component(H, order.index(u)):
                            hits += 1
                    assert Qs[i].has_edge(a, b) == (hits >= d)


def test_q_graphs_need_enough_blocks():
    with pytest.raises(ValueError):
        build_Q_graphs(Graph.complete(6), Partition([[0, 1, 2], [3, 4, 5]]), 2, allow_self=False)


def test_strong_examples():
    G = Graph.complete(12)
    P = Partition([range(0, 3), range(3, 6), range(6, 9), range(9, 12)])
    v = certify_strong_partition(G, P, 3)
    assert v.accepted and v.witness["reduced"]["rigid"]
    json.loads(v.to_json())
    # vertex 0 only meets block 1 and vertex 1 only block 2, so Q_0 splits
    G = Graph(5, [(0, 2), (0, 3), (1, 4), (3, 4)])
    v = certify_strong_partition(G, Partition([[0, 1], [2, 3], [4]]), 1)
    assert v.failing_obligation == Q_NOT_CONNECTED and v.detail["block"] == 0
    G = Graph(6, [(0, 2), (0, 3), (1, 4), (1, 5), (2, 4), (3, 5), (2, 3), (4, 5)])
    P = Partition([[0, 1], [2, 3], [4, 5]])
    v = certify_strong_partition(G, P, 2, allow_self=False)
    assert v.failing_obligation == Q_NOT_CONNECTED and v.detail["block"] == 0


def test_strong_soundness_sweep():
    rng = np.random.default_rng(2)
    accepted = 0
    for _ in range(200):
        G, P, d = strong_instance(rng)
        v = certify_strong_partition(G, P, d)
        if v.accepted:
            accepted += 1
            assert is_d_rigid(G, d).rigid
    assert accepted > 50


def test_comb_examples():
    tree = comb(Graph(4), {}, range(4))
    assert isinstance(tree, CombNode) and len(list(tree.splits())) == 3
    path = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    assert isinstance(comb(path, {e: t for t, e in enumerate(path.edges)}, range(5)), CombNode)
    tri = Graph.complete(3)
    fail = comb(tri, {(0, 1): 0, (0, 2): 1, (1, 2): 2}, range(3))
    assert isinstance(fail, CombFailure) and fail.subset == (0, 1, 2)
    assert monochromatic_cut_violation(tri, {(0, 1): 0, (0, 2): 1, (1, 2): 2}, range(3)) == (0, 1, 2)


def test_comb_tree_cuts_are_monochromatic():
    rng = np.random.default_rng(3)
    for _ in range(100):
        G = dense_graph(9, 0.4, rng)
        colors = {e: int(rng.integers(0, 3)) for e in G.edges}
        tree = comb(G, colors, range(9))
        if isinstance(tree, CombFailure):
            continue
        for node in tree.splits():
            L, R = set(node.left.subset), set(node.right.subset)
            crossing = {colors[e] for e in G.edges if (e[0] in L and e[1] in R) or (e[0] in R and e[1] in L)}
            assert crossing <= ({node.color} if node.color is not None else set())


def test_exhaustive_cut_checker_implies_comb_success():
    rng = np.random.default_rng(4)
    for _ in range(60):
        G = dense_graph(7, 0.5, rng)
        colors = {e: int(rng.integers(0, 3)) for e in G.edges}
        if monochromatic_cut_violation(G, colors, range(7)) is None:
            assert isinstance(comb(G, colors, range(7)), CombNode)
    with pytest.raises(ValueError):
        monochromatic_cut_violation(Graph(19), {}, range(19))


def test_generalized_dominates_strong():
    G = Graph.complete(12)
    P = Partition([range(0, 3), range(3, 6), range(6, 9), range(9, 12)])
    assert certify_generalized_partition(strong_as_generalized(G, P), 3).accepted
    rng = np.random.default_rng(5)
    extra = 0
    for _ in range(100):
        G, P, d = strong_instance(rng)
        a = certify_strong_partition(G, P, d).accepted
        b = certify_generalized_partition(strong_as_generalized(G, P), d).accepted
        # anchoring is weaker than Q-connectivity, so only one direction holds
        assert b or not a
        if b and not a:
            extra += 1
            assert is_d_rigid(G, d).rigid
    assert extra <= 5


def test_generalized_spec_validation():
    G = Graph.complete(4)
    P = Partition([[0, 1], [2, 3]])
    with pytest.raises(ValueError):
        GeneralizedPartitionSpec(G, P, (3, 3), {(0, 1): [(0, 2)], (0, 2): [(0, 2)]})
    with pytest.raises(ValueError):
        GeneralizedPartitionSpec(G, P, (3, 3), {(0, 2): [(0, 2)]})
    with pytest.raises(ValueError):
        GeneralizedPartitionSpec(G, P, (1, 2), {})
    with pytest.raises(ValueError):
        GeneralizedPartitionSpec(Graph(4, [(0, 1)]), P, (2, 2), {(0, 1): [(1, 2)]})


def test_generalized_comb_failure_reported():
    G = Graph.complete(6)
    P = Partition([[0, 1, 2], [3, 4, 5]])
    subs = {(0, 1): [(u, v) for u in range(3) for v in range(3, 6)],
            (0, 2): [(0, 1)], (0, 3): [(0, 2)], (0, 4): [(1, 2)]}
    spec = GeneralizedPartitionSpec(G, P, (5, 2), subs)
    v = certify_generalized_partition(spec, 1)
    assert v.failing_obligation == COMB_FAILED and v.detail["subset"] == [0, 1, 2]


def test_generalized_soundness_and_limit_path():
    rng = np.random.default_rng(6)
    accepted = 0
    for _ in range(300):
        spec, d = generalized_instance(rng)
        v = certify_generalized_partition(spec, d)
        if not v.accepted:
            continue
        accepted += 1
        assert is_d_rigid(spec.graph, d).rigid
        L = assemble_limit_framework(spec, v.witness["comb_trees"], generic_points(max(spec.bounds), d, 9))
        assert is_limit_inf_rigid(L).rigid
    assert accepted > 30


def test_assemble_singletons_matches_framework():
    G = dense_graph(7, 0.6, np.random.default_rng(7))
    P = Partition.singletons(7)
    spec = strong_as_generalized(G, P)
    trees = [comb(spec.hat(), spec.block_colors(i), b) for i, b in enumerate(P.blocks)]
    x = generic_points(8, 2, 3)
    L = assemble_limit_framework(spec, trees, x)
    assert is_limit_inf_rigid(L).rank == is_d_rigid(G, 2).rank
    with pytest.raises(ValueError):
        assemble_limit_framework(spec, trees[:-1], x)


def test_limit_rank_drops_when_q_disconnected():
    # vertices 0, 1 of block 0 each see one other block: they can move apart
    G = Graph(6, [(0, 2), (0, 3), (1, 4), (1, 5), (2, 4), (3, 5), (2, 3), (4, 5)])
    P = Partition([[0, 1], [2, 3], [4, 5]])
    spec = strong_as_generalized(G, P)
    trees = [comb(spec.hat(), spec.block_colors(i), b) for i, b in enumerate(P.blocks)]
    L = assemble_limit_framework(spec, trees, generic_points(4, 2, 1))
    v = is_limit_inf_rigid(L)
    assert v.rank < v.target


def test_double_partition_examples():
    G = Graph.complete(9)
    P = Partition([range(0, 3), range(3, 6), range(6, 9)])
    single = [[list(b)] for b in P.blocks]
    a = certify_double_partition(G, P, single, [[], [], []], 2)
    assert a.accepted == certify_strong_partition(G, P, 2, allow_self=False).accepted
    with pytest.raises(ValueError):
        certify_double_partition(G, P, single, [[(0, 1), (1, 2), (0, 2)], [], []], 2)
    with pytest.raises(ValueError):
        certify_double_partition(G, P, [[[0, 1]], [[3, 4, 5]], [[6, 7, 8]]], [[], [], []], 2)


def test_double_partition_bipartite_style():
    # each block split into two halves joined by d forest edges
    G = Graph.complete(12)
    P = Partition([range(0, 4), range(4, 8), range(8, 12)])
    subparts = [[[b[0], b[1]], [b[2], b[3]]] for b in P.blocks]
    forests = [[(b[0], b[2]), (b[1], b[3])] for b in P.blocks]
    v = certify_double_partition(G, P, subparts, forests, 2)
    assert v.accepted and is_d_rigid(G, 2).rigid
    short = [[(b[0], b[2])] for b in P.blocks]
    assert certify_double_partition(G, P, subparts, short, 2).failing_obligation == TREE_PACKING_FAILED


def test_double_soundness_and_generalized_cross_check():
    rng = np.random.default_rng(8)
    accepted = 0
    for _ in range(200):
        G, P, S, F, d = double_instance(rng)
        v = certify_double_partition(G, P, S, F, d)
        if v.accepted:
            accepted += 1
            assert is_d_rigid(G, d).rigid
    assert accepted > 50


def test_double_as_generalized_with_forest_edges():
    G = Graph.complete(12)
    P = Partition([range(0, 4), range(4, 8), range(8, 12)])
    forests = [[(b[0], b[2]), (b[1], b[3])] for b in P.blocks]
    spec = double_as_generalized(G, P, forests)
    v = certify_generalized_partition(spec, 2)
    assert v.accepted
