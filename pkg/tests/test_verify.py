import json
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from addspan.base import allpairs6
from addspan.graph import INF, Graph, gen_graph
from addspan.verify import (Sample, additive_error_terms, audit_result, bidirectional_distance, cross_check,
                            fitted_constant, slope_fit, stretch_report)


def test_identity_has_zero_error():
    g = gen_graph("gnm", 0, n=80, m=200)
    rep = stretch_report(g, g, "all")
    assert rep.max_error == 0 and rep.mean_error == 0
    assert rep.unreachable_in_g + len(rep.rows) == 80 * 79 // 2


def test_path_spanning_tree_is_itself():
    g = gen_graph("path", n=40)
    assert stretch_report(g, Graph(40, g.edges), "all").max_error == 0


def test_cycle_minus_edge():
    g = gen_graph("cycle", n=10)
    h = Graph(10, [e for e in g.edges if e != (0, 9)])
    rep = stretch_report(g, h, [(0, 9), (0, 5)])
    assert [r.error for r in rep.rows] == [8, 0]
    assert rep.class_max() == {1: 8, 4: 0}
    assert rep.check_bound("toy", 8) and not rep.check_bound("toy", 7)


def test_disconnection_is_infinite():
    g = gen_graph("path", n=4)
    h = Graph(4, [(0, 1), (2, 3)])
    rep = stretch_report(g, h, "all")
    assert rep.max_error == math.inf and rep.disconnected == 4
    assert json.loads(rep.to_json())["max_error"] == "inf"
    assert "inf" in rep.to_csv()


def test_not_a_subgraph():
    g = gen_graph("path", n=4)
    with pytest.raises(ValueError):
        stretch_report(g, Graph(4, [(0, 2)]), "all")
    with pytest.raises(ValueError):
        stretch_report(g, Graph(5, []), "all")


def test_all_pairs_cap():
    g = gen_graph("gnm", 0, n=2049, m=100)
    with pytest.raises(ValueError):
        stretch_report(g, g, "all")
    with pytest.raises(ValueError):
        stretch_report(g, g, "most")


def test_sampling_deterministic():
    g = gen_graph("gnm", 0, n=300, m=900)
    h = allpairs6(g)
    a = stretch_report(g, h, Sample(500, 3))
    b = stretch_report(g, h.as_graph(), Sample(500, 3))
    assert [(r.s, r.t) for r in a.rows] == [(r.s, r.t) for r in b.rows]
    assert a.summary() == b.summary()


def test_allpairs6_reference():
    g = gen_graph("gnm", 0, n=512, m=3072)
    rep = stretch_report(g, allpairs6(g), "all")
    assert rep.max_error <= 6 and rep.disconnected == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 60), st.integers(0, 10**6))
def test_bidirectional_agrees(n, seed):
    g = gen_graph("gnm", seed, n=n, m=min(n, n * (n - 1) // 2))
    rng = random.Random(seed)
    pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(30)]
    assert cross_check(g, pairs) == []


def test_bidirectional_unreachable():
    assert bidirectional_distance(Graph(3, [(0, 1)]), 0, 2) == INF
    assert bidirectional_distance(Graph(3, [(0, 1)]), 2, 2) == 0


@pytest.mark.parametrize("exp", [1.0, 1.5, 0.5])
def test_slope_exact(exp):
    fit = slope_fit([(n, 3 * n ** exp) for n in (64, 128, 256, 512, 1024)])
    assert fit.slope == pytest.approx(exp, abs=1e-9)
    assert math.exp(fit.intercept) == pytest.approx(3.0)
    assert fit.residual < 1e-9
    assert fit.predict(2048) == pytest.approx(3 * 2048 ** exp)


@pytest.mark.parametrize("obs", [[(1, 1), (2, 2), (3, 3)], [(1, 1), (2, 2), (2, 3), (4, 4)],
                                 [(1, 1), (2, 0), (3, 3), (4, 4)]])
def test_slope_errors(obs):
    with pytest.raises(ValueError):
        slope_fit(obs)


def test_constants_and_terms():
    assert fitted_constant([2, 9], [1, 3]) == 3
    a, b = additive_error_terms(1024, 8, 0.5)
    assert a == pytest.approx(256) and b == pytest.approx(1024 ** 1.5 / 16)


def test_audit_result():
    g = gen_graph("path", n=5)
    res = allpairs6(g)
    assert audit_result(g, res)["subgraph"]
    res.edges[(0, 3)] = "bogus"
    assert not audit_result(g, res)["subgraph"]
