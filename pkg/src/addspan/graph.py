"""Immutable unweighted graphs, BFS primitives, balls and tie-broken paths."""
from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

# distance sentinel for unreachable vertices; integer so hop arithmetic stays exact
INF = 1 << 60

Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    Neighbour sequences are sorted tuples. Every edge carries a rank, its
    position in the sorted list of ``(min, max)`` pairs; the rank drives the
    deterministic shortest-path tie-break.
    """

    __slots__ = ("n", "m", "adj", "adj_rank", "_edges", "_csr")

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        es = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            es.add(norm_edge(u, v))
        ordered = sorted(es)
        nbrs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for rank, (u, v) in enumerate(ordered):
            nbrs[u].append((v, rank))
            nbrs[v].append((u, rank))
        self.n = n
        self.m = len(ordered)
        self._edges = tuple(ordered)
        adj = []
        adj_rank = []
        for lst in nbrs:
            lst.sort()
            adj.append(tuple(w for w, _ in lst))
            adj_rank.append(tuple(r for _, r in lst))
        self.adj = tuple(adj)
        self.adj_rank = tuple(adj_rank)
        self._csr = None

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def vol(self, vertices: Iterable[int]) -> int:
        adj = self.adj
        return sum(len(adj[v]) for v in vertices)

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adj[u]
        # adjacency tuples are sorted, so bisect would do; degrees are small
        from bisect import bisect_left
        i = bisect_left(a, v)
        return i < len(a) and a[i] == v

    def check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise ValueError(f"vertex {v} out of range for n={self.n}")

    def csr(self):
        """(indptr, indices) numpy arrays, built once."""
        if self._csr is None:
            import numpy as np
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            for v, a in enumerate(self.adj):
                indptr[v + 1] = indptr[v] + len(a)
            indices = np.fromiter((w for a in self.adj for w in a), dtype=np.int64, count=int(indptr[-1]))
            self._csr = (indptr, indices)
        return self._csr

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self._edges == other._edges

    def __hash__(self):
        return hash((self.n, self._edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def subgraph_from_edges(n: int, edges: Iterable[Edge]) -> Graph:
    return Graph(n, edges)


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
    """Induced subgraph with vertices relabelled ``0..k-1`` in ascending order.

    Returns the subgraph and the local-to-global id table.
    """
    verts = sorted(set(vertices))
    local = {v: i for i, v in enumerate(verts)}
    es = []
    for v in verts:
        lv = local[v]
        for w in g.adj[v]:
            if w > v and w in local:
                es.append((lv, local[w]))
    return Graph(len(verts), es), verts


# ---------------------------------------------------------------- BFS


def bfs_distances(g: Graph, source: int) -> list[int]:
    g.check_vertex(source)
    dist = [INF] * g.n
    dist[source] = 0
    adj = g.adj
    q = deque([source])
    pop, push = q.popleft, q.append
    while q:
        u = pop()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] == INF:
                dist[w] = du
                push(w)
    return dist


def bfs_layers(g: Graph, source: int, depth: int) -> tuple[dict[int, int], list[list[int]]]:
    """Truncated BFS: distances and layers for every vertex within ``depth`` hops.

    Work is proportional to vol(B(source, depth)) plus the scan of the last layer.
    """
    g.check_vertex(source)
    dist = {source: 0}
    layers = [[source]]
    adj = g.adj
    d = 0
    frontier = layers[0]
    while frontier and d < depth:
        nxt = []
        d += 1
        for u in frontier:
            for w in adj[u]:
                if w not in dist:
                    dist[w] = d
                    nxt.append(w)
        if not nxt:
            break
        layers.append(nxt)
        frontier = nxt
    return dist, layers


@dataclass(frozen=True)
class Ball:
    center: int
    radius: int
    members: frozenset[int] = field(repr=False)

    def __len__(self):
        return len(self.members)

    def __contains__(self, v):
        return v in self.members


def ball(g: Graph, c: int, r: int) -> Ball:
    if r < 0:
        raise ValueError("radius must be nonnegative")
    dist, _ = bfs_layers(g, c, r)
    return Ball(c, r, frozenset(dist))


def ball_boundary(g: Graph, c: int, d: int) -> set[int]:
    if d < 0:
        raise ValueError("radius must be nonnegative")
    _, layers = bfs_layers(g, c, d)
    return set(layers[d]) if d < len(layers) else set()


# ------------------------------------------------------- tie-broken paths
#
# A path is keyed by sum(2**rank(e)) over its edges, i.e. by its edge set read
# as a bitmask. Distinct simple paths have distinct keys, the key is additive
# and direction-free, so the minimum-key shortest path is unique for every
# pair and the whole family is consistent.


def shortest_path_tree(g: Graph, source: int, allowed: set[int] | frozenset[int] | None = None):
    """BFS from ``source`` choosing, for each vertex, the minimum-key parent.

    Returns ``(dist, parent)`` dicts over the reached vertices. With
    ``allowed`` the search stays inside that vertex set (induced subgraph).
    """
    g.check_vertex(source)
    adj, adj_rank = g.adj, g.adj_rank
    dist = {source: 0}
    key = {source: 0}
    parent = {source: -1}
    frontier = [source]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            ku = key[u]
            ranks = adj_rank[u]
            for j, w in enumerate(adj[u]):
                if allowed is not None and w not in allowed:
                    continue
                dw = dist.get(w)
                if dw is None:
                    dist[w] = d
                    key[w] = ku + (1 << ranks[j])
                    parent[w] = u
                    nxt.append(w)
                elif dw == d:
                    cand = ku + (1 << ranks[j])
                    if cand < key[w]:
                        key[w] = cand
                        parent[w] = u
        frontier = nxt
    return dist, parent


def path_from_tree(parent: dict[int, int], source: int, t: int) -> list[int] | None:
    if t not in parent:
        return None
    path = [t]
    while path[-1] != source:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def unique_shortest_path(g: Graph, s: int, t: int) -> list[int] | None:
    """The tie-broken shortest s-t path, or None when t is unreachable."""
    g.check_vertex(t)
    _, parent = shortest_path_tree(g, s)
    return path_from_tree(parent, s, t)


def path_key(g: Graph, path: Sequence[int]) -> tuple[int, int]:
    """(hop length, edge-set key) used to order candidate paths."""
    k = 0
    for a, b in zip(path, path[1:]):
        i = g.adj[a].index(b)
        k += 1 << g.adj_rank[a][i]
    return len(path) - 1, k


def is_path(g: Graph, path: Sequence[int]) -> bool:
    return len(path) > 0 and all(g.has_edge(a, b) for a, b in zip(path, path[1:]))


def path_edges(path: Sequence[int]) -> list[Edge]:
    return [norm_edge(a, b) for a, b in zip(path, path[1:])]


# ----------------------------------------------------------- generators

GENERATORS = ("path", "cycle", "grid", "gnm", "geometric", "complete", "star", "tree")


def gen_graph(kind: str, seed: int = 0, **params) -> Graph:
    """Deterministic graph generator keyed by (kind, params, seed)."""
    n = params.get("n")
    if kind == "path":
        _need(n, 1)
        return Graph(n, [(i, i + 1) for i in range(n - 1)])
    if kind == "cycle":
        _need(n, 3)
        return Graph(n, [(i, (i + 1) % n) for i in range(n)])
    if kind == "complete":
        _need(n, 1)
        return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    if kind == "star":
        _need(n, 1)
        return Graph(n, [(0, i) for i in range(1, n)])
    if kind == "grid":
        rows, cols = params.get("rows"), params.get("cols")
        _need(rows, 1)
        _need(cols, 1)
        es = []
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c
                if c + 1 < cols:
                    es.append((v, v + 1))
                if r + 1 < rows:
                    es.append((v, v + cols))
        return Graph(rows * cols, es)
    rng = random.Random(seed)
    if kind == "tree":
        _need(n, 1)
        # uniform random recursive tree
        return Graph(n, [(i, rng.randrange(i)) for i in range(1, n)])
    if kind == "gnm":
        m = params.get("m")
        _need(n, 1)
        if m is None or m < 0:
            raise ValueError("gnm needs m >= 0")
        cap = n * (n - 1) // 2
        if m > cap:
            raise ValueError(f"m={m} exceeds n(n-1)/2={cap}")
        if m > cap // 2:
            every = [(i, j) for i in range(n) for j in range(i + 1, n)]
            return Graph(n, rng.sample(every, m))
        es: set[Edge] = set()
        while len(es) < m:
            u, v = rng.randrange(n), rng.randrange(n)
            if u != v:
                es.add(norm_edge(u, v))
        return Graph(n, sorted(es))
    if kind == "geometric":
        # random geometric graph on the unit torus; radius from target degree
        _need(n, 1)
        deg = float(params.get("degree", 8.0))
        import math
        rad = math.sqrt(deg / (math.pi * max(n, 1)))
        pts = [(rng.random(), rng.random()) for _ in range(n)]
        cells = max(1, int(1.0 / rad))
        grid: dict[tuple[int, int], list[int]] = {}
        for i, (x, y) in enumerate(pts):
            grid.setdefault((int(x * cells) % cells, int(y * cells) % cells), []).append(i)
        es = set()
        r2 = rad * rad
        for (cx, cy), members in grid.items():
            near = []
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    near.extend(grid.get(((cx + dx) % cells, (cy + dy) % cells), ()))
            near = set(near)
            for i in members:
                xi, yi = pts[i]
                for j in near:
                    if j <= i:
                        continue
                    ddx = abs(xi - pts[j][0])
                    ddy = abs(yi - pts[j][1])
                    ddx, ddy = min(ddx, 1 - ddx), min(ddy, 1 - ddy)
                    if ddx * ddx + ddy * ddy <= r2:
                        es.add((i, j))
        return Graph(n, sorted(es))
    raise ValueError(f"unknown graph kind {kind!r}; expected one of {GENERATORS}")


def _need(x, lo):
    if x is None or x < lo:
        raise ValueError(f"parameter must be an integer >= {lo}, got {x!r}")


# ------------------------------------------------------------- edge lists


@dataclass
class LoadedGraph:
    graph: Graph
    labels: list[str]  # labels[i] is the original token of vertex i
    duplicates: int = 0

    @property
    def relabeled(self) -> bool:
        return any(lab != str(i) for i, lab in enumerate(self.labels))


def read_edge_list(path) -> LoadedGraph:
    """Parse a ``u v`` per line edge list; ``#`` starts a comment.

    Integer labels that already form ``0..n-1`` are kept; anything else is
    relabelled densely in order of first appearance (integers sorted
    numerically first). A ``# n=<count>`` header pads isolated vertices.
    Self-loops are rejected; parallel edges are dropped and counted.
    """
    raw: list[tuple[str, str]] = []
    declared_n = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            body, _, comment = line.partition("#")
            if comment:
                for tok in comment.split():
                    if tok.startswith("n="):
                        try:
                            declared_n = int(tok[2:])
                        except ValueError:
                            pass
            toks = body.split()
            if not toks:
                continue
            if len(toks) < 2:
                raise ValueError(f"{path}:{lineno}: expected 'u v'")
            u, v = toks[0], toks[1]
            if u == v:
                raise ValueError(f"{path}:{lineno}: self-loop on {u}")
            raw.append((u, v))
    tokens = {t for e in raw for t in e}
    if all(_is_int(t) for t in tokens):
        ints = sorted(int(t) for t in tokens)
        dense = all(x >= 0 for x in ints) and (not ints or ints[-1] < max(len(ints), declared_n or 0) and ints[0] >= 0)
        if dense and (not ints or len(set(ints)) == len(ints)):
            n = max((ints[-1] + 1) if ints else 0, declared_n or 0)
            labels = [str(i) for i in range(n)]
            index = {str(i): i for i in range(n)}
        else:
            labels = [str(x) for x in ints]
            index = {t: i for i, t in enumerate(labels)}
    else:
        labels = []
        index = {}
        for e in raw:
            for t in e:
                if t not in index:
                    index[t] = len(labels)
                    labels.append(t)
    seen = set()
    dups = 0
    for u, v in raw:
        e = norm_edge(index[u], index[v])
        if e in seen:
            dups += 1
        seen.add(e)
    if dups:
        log.warning("%s: dropped %d parallel edges", path, dups)
    return LoadedGraph(Graph(len(labels), seen), labels, dups)


def _is_int(tok: str) -> bool:
    try:
        int(tok)
        return True
    except ValueError:
        return False


def write_edge_list(path, n: int, edges: Iterable[Edge], labels: Sequence[str] | None = None) -> None:
    es = sorted(norm_edge(u, v) for u, v in edges)
    with open(path, "w") as fh:
        fh.write(f"# n={n} m={len(es)}\n")
        for u, v in es:
            if labels is None:
                fh.write(f"{u} {v}\n")
            else:
                fh.write(f"{labels[u]} {labels[v]}\n")


def read_vertex_file(path, index: dict[str, int] | None = None) -> list[int]:
    out = []
    with open(path) as fh:
        for line in fh:
            toks = line.partition("#")[0].split()
            if toks:
                out.append(index[toks[0]] if index is not None else int(toks[0]))
    return out


def read_pair_file(path, index: dict[str, int] | None = None) -> list[Edge]:
    out = []
    with open(path) as fh:
        for line in fh:
            toks = line.partition("#")[0].split()
            if len(toks) >= 2:
                if index is not None:
                    out.append((index[toks[0]], index[toks[1]]))
                else:
                    out.append((int(toks[0]), int(toks[1])))
    return out
