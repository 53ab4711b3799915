"""Containers shared by all spanner builders."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import Edge, Graph, norm_edge

SCHEMA = 1


class ProbabilisticFailure(RuntimeError):
    """A randomized step kept failing after the allowed number of reseeds."""


@dataclass
class SpannerResult:
    """Edge subset of a host graph plus the rule that first added each edge."""

    n: int
    edges: dict[Edge, str] = field(default_factory=dict)
    log: dict = field(default_factory=dict)

    def add(self, edges: Iterable[Edge], tag: str) -> int:
        added = 0
        es = self.edges
        for u, v in edges:
            e = norm_edge(u, v)
            if e not in es:
                es[e] = tag
                added += 1
        return added

    def add_path(self, path: Sequence[int], tag: str) -> int:
        return self.add(zip(path, path[1:]), tag)

    def merge(self, other: "SpannerResult", tag: str | None = None, mapping: Sequence[int] | None = None) -> int:
        """Union in another result, optionally translating local ids."""
        if mapping is None:
            items = other.edges.items()
        else:
            items = ((norm_edge(mapping[u], mapping[v]), t) for (u, v), t in other.edges.items())
        added = 0
        for e, t in items:
            if e not in self.edges:
                self.edges[e] = tag or t
                added += 1
        return added

    @property
    def size(self) -> int:
        return len(self.edges)

    def edge_list(self) -> list[Edge]:
        return sorted(self.edges)

    def as_graph(self) -> Graph:
        return Graph(self.n, self.edges)

    def tag_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for t in self.edges.values():
            out[t] = out.get(t, 0) + 1
        return dict(sorted(out.items()))

    def is_subgraph_of(self, g: Graph) -> bool:
        return self.n == g.n and all(g.has_edge(u, v) for u, v in self.edges)


def bfs_tree_edges(g: Graph, root: int, depth: int | None = None, allowed=None) -> list[Edge]:
    """Edges of a BFS tree (first-discovery parents) truncated at ``depth``."""
    adj = g.adj
    seen = {root: 0}
    frontier = [root]
    out = []
    d = 0
    while frontier and (depth is None or d < depth):
        d += 1
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in seen and (allowed is None or w in allowed):
                    seen[w] = d
                    out.append(norm_edge(u, w))
                    nxt.append(w)
        frontier = nxt
    return out
