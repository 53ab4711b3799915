import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from addspan.graph import (INF, Graph, ball, ball_boundary, bfs_distances, bfs_layers, gen_graph,
                           induced_subgraph, is_path, path_key, read_edge_list, read_pair_file,
                           read_vertex_file, shortest_path_tree, unique_shortest_path, write_edge_list)


def to_nx(g):
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)
    return G


def test_graph_basic():
    g = Graph(4, [(1, 0), (2, 1), (0, 1)])
    assert g.m == 2
    assert g.edges == ((0, 1), (1, 2))
    assert g.adj[1] == (0, 2)
    assert g.has_edge(2, 1) and not g.has_edge(0, 3)
    assert g.degree(3) == 0


@pytest.mark.parametrize("bad", [[(0, 0)], [(0, 5)], [(-1, 2)]])
def test_graph_rejects(bad):
    with pytest.raises(ValueError):
        Graph(3, bad)


@pytest.mark.parametrize("kind,params,m", [
    ("path", dict(n=5), 4),
    ("cycle", dict(n=7), 7),
    ("complete", dict(n=6), 15),
    ("star", dict(n=9), 8),
    ("grid", dict(rows=10, cols=10), 180),
    ("tree", dict(n=50), 49),
    ("gnm", dict(n=100, m=300), 300),
    ("gnm", dict(n=10, m=40), 40),
])
def test_generators_edge_counts(kind, params, m):
    assert gen_graph(kind, 3, **params).m == m


def test_generator_errors():
    with pytest.raises(ValueError):
        gen_graph("gnm", 0, n=5, m=11)
    with pytest.raises(ValueError):
        gen_graph("nope", 0, n=5)
    with pytest.raises(ValueError):
        gen_graph("grid", 0, rows=0, cols=2)


def test_generators_deterministic():
    assert gen_graph("gnm", 1, n=100, m=300) == gen_graph("gnm", 1, n=100, m=300)
    assert gen_graph("geometric", 1, n=200) == gen_graph("geometric", 1, n=200)
    assert gen_graph("gnm", 1, n=100, m=300) != gen_graph("gnm", 2, n=100, m=300)


@pytest.mark.parametrize("seed", range(4))
def test_bfs_matches_networkx(seed):
    g = gen_graph("gnm", seed, n=120, m=150)
    G = to_nx(g)
    for s in (0, 17, 99):
        ref = nx.single_source_shortest_path_length(G, s)
        d = bfs_distances(g, s)
        assert all(d[v] == ref.get(v, INF) for v in range(g.n))


def test_ball_and_boundary():
    g = gen_graph("path", n=10)
    assert ball(g, 4, 2).members == frozenset({2, 3, 4, 5, 6})
    assert ball_boundary(g, 4, 2) == {2, 6}
    assert ball_boundary(g, 0, 20) == set()
    dist, layers = bfs_layers(g, 0, 3)
    assert layers == [[0], [1], [2], [3]] and dist[3] == 3


def test_induced_subgraph():
    g = gen_graph("cycle", n=6)
    h, verts = induced_subgraph(g, [5, 0, 1, 3])
    assert verts == [0, 1, 3, 5]
    assert h.edges == ((0, 1), (0, 3))


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 40), st.integers(0, 10_000))
def test_tie_broken_paths_are_shortest_and_unique(n, seed):
    g = gen_graph("gnm", seed, n=n, m=min(2 * n, n * (n - 1) // 2))
    G = to_nx(g)
    dist, parent = shortest_path_tree(g, 0)
    for t in dist:
        p = unique_shortest_path(g, 0, t)
        assert is_path(g, p) and len(p) - 1 == nx.shortest_path_length(G, 0, t)
        # minimality of the key among all shortest paths
        best = min(path_key(g, q) for q in nx.all_shortest_paths(G, 0, t))
        assert path_key(g, p) == best


def test_tie_break_is_symmetric():
    g = gen_graph("grid", rows=5, cols=5)
    for s, t in [(0, 24), (4, 20), (3, 17)]:
        assert unique_shortest_path(g, s, t) == unique_shortest_path(g, t, s)[::-1]


def test_edge_list_round_trip(tmp_path):
    g = gen_graph("gnm", 5, n=30, m=40)
    p = tmp_path / "g.txt"
    write_edge_list(p, g.n, g.edges)
    lg = read_edge_list(p)
    assert lg.graph == g and not lg.relabeled and lg.duplicates == 0


def test_edge_list_relabel_and_duplicates(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("# comment\na b\nb c\nb a\n\n")
    lg = read_edge_list(p)
    assert lg.labels == ["a", "b", "c"] and lg.graph.m == 2 and lg.duplicates == 1
    (tmp_path / "v.txt").write_text("c\n# x\na\n")
    (tmp_path / "p.txt").write_text("a c\n")
    idx = {lab: i for i, lab in enumerate(lg.labels)}
    assert read_vertex_file(tmp_path / "v.txt", idx) == [2, 0]
    assert read_pair_file(tmp_path / "p.txt", idx) == [(0, 2)]


def test_edge_list_header_pads_isolated(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("# n=6\n0 1\n")
    assert read_edge_list(p).graph.n == 6


def test_edge_list_self_loop(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("1 1\n")
    with pytest.raises(ValueError):
        read_edge_list(p)
