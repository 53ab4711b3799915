"""Building-block spanners: +6 pairwise, +6 all-pairs, and (2k-1)-multiplicative.

The +6 builders share one scheme. A degree-threshold clustering keeps every
edge of low-degree vertices and one edge from each high-degree vertex to a
sampled center. Demand pairs are then scanned in order and any pair whose
distance in the current subgraph exceeds ``dist_G + 6`` buys a shortest path
of ``G``. The stretch guarantee therefore holds by construction, and the
clustering is what keeps the number of bought paths small.
"""
from __future__ import annotations

import math
import random
from collections import deque
from typing import Iterable

from .graph import INF, Edge, Graph, bfs_distances, norm_edge
from .preservers import group_by_source
from .result import SpannerResult

ADDITIVE = 6


def degree_clustering(g: Graph, delta: float, seed: int = 0, c: float = 1.0) -> tuple[set[Edge], list[int]]:
    """Low-degree edges plus one center edge per high-degree vertex.

    Returns the edge set and the chosen center (or -1) per vertex.
    """
    n = g.n
    rng = random.Random(seed)
    p = 1.0 if delta <= 0 else min(1.0, c * math.log(max(n, 2)) / delta)
    is_center = [rng.random() < p for _ in range(n)]
    edges: set[Edge] = set()
    center = [-1] * n
    for v in range(n):
        nb = g.adj[v]
        if len(nb) <= delta:
            edges.update(norm_edge(v, w) for w in nb)
            continue
        if is_center[v]:
            center[v] = v
            continue
        for w in nb:
            if is_center[w]:
                center[v] = w
                edges.add(norm_edge(v, w))
                break
        else:
            # no sampled neighbour: keeping every edge is always safe
            edges.update(norm_edge(v, w) for w in nb)
    return edges, center


class _Incremental:
    """Adjacency sets for a growing subgraph plus BFS over it."""

    def __init__(self, n: int, edges: Iterable[Edge]):
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self.edges: set[Edge] = set()
        for u, v in edges:
            self.add(u, v)

    def add(self, u: int, v: int) -> bool:
        e = norm_edge(u, v)
        if e in self.edges:
            return False
        self.edges.add(e)
        self.adj[u].add(v)
        self.adj[v].add(u)
        return True

    def bfs(self, s: int) -> list[int]:
        dist = [INF] * len(self.adj)
        dist[s] = 0
        q = deque([s])
        adj = self.adj
        while q:
            u = q.popleft()
            du = dist[u] + 1
            for w in adj[u]:
                if dist[w] == INF:
                    dist[w] = du
                    q.append(w)
        return dist


def _bfs_parents(g: Graph, s: int) -> tuple[list[int], list[int]]:
    n = g.n
    dist = [INF] * n
    par = [-1] * n
    dist[s] = 0
    q = deque([s])
    adj = g.adj
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] == INF:
                dist[w] = du
                par[w] = u
                q.append(w)
    return dist, par


def _repair(g: Graph, h: _Incremental, groups: dict[int, list[int]], slack: int) -> tuple[int, list[tuple[int, int]]]:
    """Buy shortest paths for pairs whose error exceeds ``slack``."""
    bought = 0
    unreachable = []
    for s, targets in groups.items():
        dg, par = _bfs_parents(g, s)
        todo = [t for t in targets if dg[t] < INF]
        unreachable.extend((s, t) for t in targets if dg[t] >= INF)
        # farthest first: a long bought path often settles nearer targets
        todo.sort(key=lambda t: (-dg[t], t))
        dh = h.bfs(s)
        for t in todo:
            if dh[t] <= dg[t] + slack:
                continue
            path = [t]
            while path[-1] != s:
                path.append(par[path[-1]])
            path.reverse()
            for a, b in zip(path, path[1:]):
                h.add(a, b)
            bought += 1
            _lower_distances(h.adj, dh, path)
    return bought, unreachable


def _lower_distances(adj: list[set[int]], dist: list[int], path: list[int]) -> None:
    """Update BFS distances from ``path[0]`` after the edges of ``path`` were added.

    Distances only shrink, so the changes are propagated outward level by
    level from the path vertices whose distance dropped.
    """
    buckets: dict[int, list[int]] = {}
    for i, x in enumerate(path):
        if i < dist[x]:
            dist[x] = i
            buckets.setdefault(i, []).append(x)
    if not buckets:
        return
    d = min(buckets)
    while buckets:
        layer = buckets.pop(d, None)
        if layer:
            nd = d + 1
            for u in layer:
                if dist[u] != d:
                    continue
                for w in adj[u]:
                    if nd < dist[w]:
                        dist[w] = nd
                        buckets.setdefault(nd, []).append(w)
        d += 1


def pairwise6(g: Graph, P: Iterable[tuple[int, int]], seed: int = 0) -> SpannerResult:
    """+6 pairwise spanner for the demand pairs ``P``."""
    pairs = [(s, t) for s, t in P]
    for s, t in pairs:
        g.check_vertex(s)
        g.check_vertex(t)
    groups = group_by_source(pairs)
    npairs = sum(len(v) for v in groups.values())
    delta = max(1, math.ceil(max(npairs, 1) ** 0.25))
    base, _ = degree_clustering(g, delta, seed)
    h = _Incremental(g.n, base)
    bought, bad = _repair(g, h, groups, ADDITIVE)
    res = SpannerResult(g.n)
    res.add(base, "cluster")
    res.add(h.edges, "path")
    res.log.update(kind="pairwise6", pairs=npairs, delta=delta, bought=bought, unreachable=bad)
    return res


def allpairs6(g: Graph, seed: int = 0) -> SpannerResult:
    """+6 spanner for all pairs."""
    n = g.n
    delta = max(1.0, n ** (1.0 / 3.0))
    base, _ = degree_clustering(g, delta, seed)
    h = _Incremental(n, base)
    groups = {s: list(range(s + 1, n)) for s in range(n - 1)}
    bought, _ = _repair(g, h, groups, ADDITIVE)
    res = SpannerResult(n)
    res.add(base, "cluster")
    res.add(h.edges, "path")
    res.log.update(kind="allpairs6", delta=delta, bought=bought)
    return res


def multiplicative_spanner(g: Graph, k: int, seed: int = 0) -> SpannerResult:
    """Randomized cluster-growing (2k-1)-spanner with edge rank as weight."""
    if k < 1:
        raise ValueError("k must be >= 1")
    n = g.n
    rng = random.Random(seed)
    p = n ** (-1.0 / k) if n > 0 else 1.0
    # remaining edges: per vertex, neighbour -> rank
    rem: list[dict[int, int]] = [dict(zip(g.adj[v], g.adj_rank[v])) for v in range(n)]
    cluster: list[int] = list(range(n))  # -1 once a vertex leaves the clustering
    out: set[Edge] = set()

    def drop(v: int, w: int) -> None:
        rem[v].pop(w, None)
        rem[w].pop(v, None)

    def lightest_per_cluster(v: int) -> dict[int, tuple[int, int]]:
        best: dict[int, tuple[int, int]] = {}
        for w, rk in rem[v].items():
            c = cluster[w]
            if c < 0:
                continue
            cur = best.get(c)
            if cur is None or rk < cur[0]:
                best[c] = (rk, w)
        return best

    for _ in range(k - 1):
        centers = sorted({c for c in cluster if c >= 0})
        sampled = {c for c in centers if rng.random() < p}
        new_cluster = [cluster[v] if cluster[v] in sampled else -1 for v in range(n)]
        for v in range(n):
            cv = cluster[v]
            if cv < 0 or cv in sampled:
                continue
            best = lightest_per_cluster(v)
            near = [(rk, w, c) for c, (rk, w) in best.items() if c in sampled]
            if near:
                rk0, w0, c0 = min(near)
                out.add(norm_edge(v, w0))
                new_cluster[v] = c0
                for w in [w for w in rem[v] if cluster[w] == c0]:
                    drop(v, w)
                for c, (rk, w) in best.items():
                    if rk < rk0:
                        out.add(norm_edge(v, w))
                        for x in [x for x in rem[v] if cluster[x] == c]:
                            drop(v, x)
            else:
                for c, (rk, w) in best.items():
                    out.add(norm_edge(v, w))
                for w in list(rem[v]):
                    drop(v, w)
        cluster = new_cluster
        for v in range(n):
            if cluster[v] < 0:
                continue
            for w in [w for w in rem[v] if cluster[w] == cluster[v]]:
                drop(v, w)
    for v in range(n):
        for c, (rk, w) in lightest_per_cluster(v).items():
            out.add(norm_edge(v, w))
    res = SpannerResult(n)
    res.add(out, "multiplicative")
    res.log.update(kind="multiplicative", k=k, seed=seed)
    return res
