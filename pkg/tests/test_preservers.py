import random

import pytest
from hypothesis import given, settings, strategies as st

from addspan.graph import gen_graph
from addspan.preservers import (boundary_pair, bottleneck_in_range, bottleneck_radius, consistent_paths,
                                distance_preserver, group_by_source)
from oracles import pair_errors


def test_bottleneck_on_star_of_paths():
    # three legs of length 6 from vertex 0; layer sizes 1,3,3,3,3,3,3
    edges = []
    nxt = 1
    for _ in range(3):
        prev = 0
        for _ in range(6):
            edges.append((prev, nxt))
            prev, nxt = nxt, nxt + 1
    from addspan.graph import Graph
    g = Graph(nxt, edges)
    # window (1, 4]: every d has 3+3, the smallest wins
    assert bottleneck_radius(g, 0, 1, 4, 6) == 2
    # d = 6: layer 6 has 3, layer 7 is empty
    assert bottleneck_in_range(g, 0, 2, 6, 7) == 6
    assert boundary_pair(g, 0, 6) == {6, 12, 18}
    assert bottleneck_in_range(g, 0, 0, 0, 1) == 0


@pytest.mark.parametrize("args", [(0, 2, 5), (2, 2, 5), (1, 5, 5), (3, 2, 5)])
def test_bottleneck_argument_errors(args):
    g = gen_graph("path", n=10)
    with pytest.raises(ValueError):
        bottleneck_radius(g, 0, *args)


def test_bottleneck_average_bound():
    g = gen_graph("grid", rows=20, cols=20)
    c, r1, r2, r = 0, 2, 10, 12
    d = bottleneck_radius(g, c, r1, r2, r)
    from addspan.graph import ball
    assert len(boundary_pair(g, c, d)) <= 2 * len(ball(g, c, r)) / (r2 - r1)


def test_group_by_source():
    assert group_by_source([(3, 1), (1, 3), (2, 2), (0, 5), (0, 4)]) == {0: [4, 5], 1: [3]}


def test_consistency_pairwise_intersections_contiguous():
    g = gen_graph("grid", rows=7, cols=7)
    fam = consistent_paths(g, range(0, 49, 5))
    paths = list(fam.paths.values())
    for p in paths:
        for q in paths:
            common = [i for i, v in enumerate(p) if v in set(q)]
            if common:
                assert common == list(range(common[0], common[-1] + 1))


def test_unreachable_pairs_reported():
    g = gen_graph("gnm", 0, n=6, m=0)
    res = distance_preserver(g, [(0, 1)])
    assert res.edges == set() and res.unreachable == [(0, 1)]


@settings(max_examples=40, deadline=None)
@given(st.integers(5, 150), st.integers(0, 10**6), st.integers(1, 30))
def test_preserver_exact(n, seed, k):
    g = gen_graph("gnm", seed, n=n, m=min(2 * n, n * (n - 1) // 2))
    rng = random.Random(seed)
    P = [tuple(rng.sample(range(n), 2)) for _ in range(k)]
    res = distance_preserver(g, P)
    errs = pair_errors(g, res.edges, P)
    assert (errs == 0).all()
