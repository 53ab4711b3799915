import random

import pytest

from addspan.clustering import build_clustering
from addspan.graph import gen_graph, unique_shortest_path
from addspan.partition import PathPartition, Segment, check_partition, path_partition


def test_single_ball_path():
    g = gen_graph("path", n=10)
    cl = build_clustering(g, 20, 0.5)  # one ball covers everything
    part = path_partition(g, list(range(10)), cl)
    assert part.segments == [Segment(0, 9, 0)]
    assert part.endpoints(0) == (0, 9)
    assert check_partition(g, part, cl) == []


def test_trivial_path():
    g = gen_graph("path", n=3)
    cl = build_clustering(g, 1, 0.5)
    assert path_partition(g, [1], cl).l == 0


def test_rejects_non_path():
    g = gen_graph("path", n=5)
    cl = build_clustering(g, 1, 0.5)
    with pytest.raises(ValueError):
        path_partition(g, [0, 2, 3], cl)


def test_cycle_segments_hand_checked():
    # C_24, R=2, growth factor 24: radius 2 is accepted at once, so the
    # balls are centred at 0, 3, 6, 9, ... (next uncovered vertex each time)
    g = gen_graph("cycle", n=24)
    cl = build_clustering(g, 2, 1.0)
    assert [b.center for b in cl.balls][:4] == [0, 3, 6, 9]
    part = path_partition(g, list(range(0, 13)), cl)
    # each segment starts in its host ball and reaches the last vertex within 2r = 4 of the center
    assert [(s.start, s.end) for s in part.segments] == [(0, 4), (4, 7), (7, 10), (10, 12)]
    assert part.hosts() == [0, 1, 2, 3]
    assert check_partition(g, part, cl) == []


def test_check_partition_flags_bad_input():
    g = gen_graph("path", n=12)
    cl = build_clustering(g, 1, 0.01)
    good = path_partition(g, list(range(12)), cl)
    bad = PathPartition(good.path, good.segments + [good.segments[-1]])
    errs = check_partition(g, bad, cl)
    assert any("distinct" in e for e in errs)


@pytest.mark.parametrize("kind,params", [
    ("grid", dict(rows=12, cols=15)), ("gnm", dict(n=300, m=450)), ("geometric", dict(n=400, degree=6)),
    ("tree", dict(n=300)),
])
@pytest.mark.parametrize("R", [1, 2, 3])
def test_random_paths_satisfy_invariants(kind, params, R):
    g = gen_graph(kind, 11, **params)
    cl = build_clustering(g, R, 0.5)
    rng = random.Random(R)
    for _ in range(15):
        s, t = rng.sample(range(g.n), 2)
        pi = unique_shortest_path(g, s, t)
        if pi is None:
            continue
        part = path_partition(g, pi, cl)
        assert check_partition(g, part, cl) == []
