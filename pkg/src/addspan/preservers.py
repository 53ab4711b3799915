"""Bottleneck radii, consistent shortest-path families and distance preservers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .graph import Edge, Graph, bfs_layers, norm_edge, path_from_tree, shortest_path_tree


def _layer_sizes(g: Graph, c: int, r: int) -> list[int]:
    _, layers = bfs_layers(g, c, r)
    sizes = [len(x) for x in layers]
    return sizes + [0] * (r + 2 - len(sizes))


def bottleneck_radius(g: Graph, c: int, r1: int, r2: int, r: int) -> int:
    """Smallest ``d`` in ``(r1, r2]`` minimising ``|B=(c,d)| + |B=(c,d+1)|``.

    The minimum is at most the average over the window, which gives
    ``2 |B(c, r)| / (r2 - r1)``.
    """
    g.check_vertex(c)
    if not (0 < r1 < r2 < r):
        raise ValueError(f"need 0 < r1 < r2 < r, got r1={r1}, r2={r2}, r={r}")
    return _argmin_window(_layer_sizes(g, c, r), r1 + 1, r2)


def bottleneck_in_range(g: Graph, c: int, lo: int, hi: int, r: int) -> int:
    """Like :func:`bottleneck_radius` on the closed window ``[lo, hi]``.

    Also accepts ``lo = 0`` which the strict form cannot express.
    """
    if not (0 <= lo <= hi and hi + 1 <= r):
        raise ValueError(f"need 0 <= lo <= hi < r, got lo={lo}, hi={hi}, r={r}")
    return _argmin_window(_layer_sizes(g, c, r), lo, hi)


def _argmin_window(sizes: list[int], lo: int, hi: int) -> int:
    best, best_d = None, lo
    for d in range(lo, hi + 1):
        s = sizes[d] + sizes[d + 1]
        if best is None or s < best:
            best, best_d = s, d
    return best_d


def boundary_pair(g: Graph, c: int, d: int) -> set[int]:
    """``B=(c, d)`` together with ``B=(c, d + 1)``."""
    _, layers = bfs_layers(g, c, d + 1)
    out: set[int] = set()
    for x in (d, d + 1):
        if x < len(layers):
            out.update(layers[x])
    return out


@dataclass
class ConsistentPathFamily:
    paths: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)
    unreachable: list[tuple[int, int]] = field(default_factory=list)

    def union_edges(self) -> set[Edge]:
        out: set[Edge] = set()
        for p in self.paths.values():
            out.update(norm_edge(a, b) for a, b in zip(p, p[1:]))
        return out


def consistent_paths(g: Graph, S: Iterable[int], allowed=None) -> ConsistentPathFamily:
    """Tie-broken shortest paths for every pair ``s < t`` of ``S``.

    ``allowed`` restricts the search to an induced subgraph.
    """
    verts = sorted(set(S))
    fam = ConsistentPathFamily()
    for i, s in enumerate(verts):
        g.check_vertex(s)
        if i + 1 == len(verts):
            break
        _, parent = shortest_path_tree(g, s, allowed)
        for t in verts[i + 1:]:
            p = path_from_tree(parent, s, t)
            if p is None:
                fam.unreachable.append((s, t))
            else:
                fam.paths[(s, t)] = tuple(p)
    return fam


@dataclass
class PreserverResult:
    edges: set[Edge]
    unreachable: list[tuple[int, int]]


def group_by_source(pairs: Iterable[tuple[int, int]]) -> dict[int, list[int]]:
    """Unordered pairs grouped under their smaller endpoint, sorted."""
    groups: dict[int, list[int]] = {}
    for s, t in pairs:
        if s == t:
            continue
        a, b = (s, t) if s < t else (t, s)
        groups.setdefault(a, []).append(b)
    return {s: sorted(set(ts)) for s, ts in sorted(groups.items())}


def distance_preserver(g: Graph, P: Iterable[tuple[int, int]]) -> PreserverResult:
    """Union of tie-broken shortest paths, one per demand pair."""
    edges: set[Edge] = set()
    bad = []
    for s, ts in group_by_source(P).items():
        g.check_vertex(s)
        _, parent = shortest_path_tree(g, s)
        for t in ts:
            g.check_vertex(t)
            p = path_from_tree(parent, s, t)
            if p is None:
                bad.append((s, t))
                continue
            edges.update(norm_edge(a, b) for a, b in zip(p, p[1:]))
    return PreserverResult(edges, bad)
