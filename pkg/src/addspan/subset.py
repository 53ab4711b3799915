"""Subset additive spanners over a terminal set ``U``.

The graph is clustered with base radius ``ceil(|U|**1.5)``. Small balls keep
a distance preserver among the two boundary layers at a bottleneck radius;
large balls rely on shortest paths between terminals, bought only where the
path leaves the region covered by the enlarged small balls.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .clustering import Clustering, build_clustering
from .graph import Graph, bfs_layers
from .preservers import bottleneck_in_range, boundary_pair, consistent_paths
from .result import SpannerResult, bfs_tree_edges


class Coverage(str, Enum):
    UNCOVERED = "uncovered"
    COVERED = "covered"
    AT_BOUNDARY = "covered-at-boundary"


def clustering_eps(eps: float, n: int) -> float:
    """Growth exponent ``10 / (eps log2 n)`` that pins the radius window to ``[R, R n^eps]``."""
    return 10.0 / (eps * math.log2(n)) if n > 1 else 10.0 / eps


@dataclass
class SubsetState:
    terminals: list[int]
    R: int
    cl: Clustering
    small: list[bool]
    # per small ball: bottleneck radius d and its boundary layers
    bottleneck: dict[int, int] = field(default_factory=dict)
    boundary: dict[int, set[int]] = field(default_factory=dict)
    # distance from each small-ball center, truncated at d + 1
    inner: dict[int, dict[int, int]] = field(default_factory=dict)
    holders: dict[int, list[int]] = field(default_factory=dict)  # vertex -> small balls covering it
    settled: dict[int, set[int]] = field(default_factory=dict)  # large ball -> U_c
    bought: dict[int, int] = field(default_factory=dict)  # large ball -> bought path count
    violations: list[str] = field(default_factory=list)

    def covered_by(self, v: int) -> list[int]:
        """Small balls whose enlarged ball ``B(c, d)`` contains ``v``."""
        return self.holders.get(v, [])


def boundary_coverage_status(state: SubsetState, v: int) -> Coverage:
    """Whether ``v`` is covered by the enlarged small balls, and only on their rims."""
    holders = state.covered_by(v)
    if not holders:
        return Coverage.UNCOVERED
    if all(state.inner[i][v] == state.bottleneck[i] for i in holders):
        return Coverage.AT_BOUNDARY
    return Coverage.COVERED


def build_subset_spanner(g: Graph, U: Iterable[int], eps: float, audit: bool = False) -> SpannerResult:
    """Subset spanner on terminals ``U`` with error at most ``24 R n^eps``."""
    res, _ = build_subset_state(g, U, eps, audit)
    return res


def build_subset_state(g: Graph, U: Iterable[int], eps: float, audit: bool = False):
    if not eps > 0:
        raise ValueError("eps must be positive")
    terms = sorted(set(U))
    for u in terms:
        g.check_vertex(u)
    n = g.n
    res = SpannerResult(n)
    R = max(1, math.ceil(len(terms) ** 1.5 - 1e-9))
    if n == 0:
        return res, None
    cl = build_clustering(g, R, clustering_eps(eps, n))
    small = [len(b) <= len(terms) ** 2 for b in cl.balls]
    st = SubsetState(terms, R, cl, small)

    for b in cl.balls:
        res.add(bfs_tree_edges(g, b.center, 4 * b.radius), "tree")

    boundary_sizes = []
    for i, b in enumerate(cl.balls):
        if not small[i]:
            continue
        r = b.radius
        d = bottleneck_in_range(g, b.center, r, 2 * r, 4 * r)
        outer, _ = bfs_layers(g, b.center, 4 * r)
        bset = boundary_pair(g, b.center, d)
        st.bottleneck[i] = d
        st.boundary[i] = bset
        st.inner[i] = {v: dv for v, dv in outer.items() if dv <= d + 1}
        boundary_sizes.append(len(bset))
        for v, dv in st.inner[i].items():
            if dv <= d:
                st.holders.setdefault(v, []).append(i)
        if len(bset) > 2 * len(outer) / (r + 1) + 1e-9:
            st.violations.append(f"ball {i}: boundary set exceeds the bottleneck bound")
        if len(bset) >= 2:
            fam = consistent_paths(g, bset, allowed=outer)
            res.add(fam.union_edges(), "boundary")

    n_large = len(small) - sum(small)
    if n_large and len(terms) >= 2:
        process_terminal_paths(g, st, res, audit)
    res.log.update(kind="subset", eps=eps, terminals=len(terms), R=R, balls=len(cl.balls),
                   small=sum(small), large=n_large, boundary_sizes=boundary_sizes,
                   bought_per_large=dict(sorted(st.bought.items())),
                   error_bound=24 * R * n ** eps, violations=st.violations[:20], edges=res.size)
    return res, st


def process_terminal_paths(g: Graph, st: SubsetState, res: SpannerResult, audit: bool = False) -> None:
    """Scan terminal paths in order and buy their uncovered stretches."""
    owner = st.cl.owner
    fam = consistent_paths(g, st.terminals)
    for i, s in enumerate(st.small):
        if not s:
            st.settled[i] = set()
            st.bought[i] = 0
    for (s, t), pi in fam.paths.items():
        chosen = [owner[x] for x in pi]
        if any(not st.small[c] and s in st.settled[c] and t in st.settled[c] for c in chosen):
            continue
        flags = [x in st.holders for x in pi]
        # edges outside maximal covered runs: an edge is kept unless both ends are covered
        buy = [(pi[j], pi[j + 1]) for j in range(len(pi) - 1) if not (flags[j] and flags[j + 1])]
        if audit:
            _check_run_ends(st, pi, flags)
        res.add(buy, "terminal")
        for c in set(chosen):
            if not st.small[c]:
                if s not in st.settled[c] or t not in st.settled[c]:
                    st.bought[c] += 1
                st.settled[c].update((s, t))


def _check_run_ends(st: SubsetState, pi: Sequence[int], flags: Sequence[bool]) -> None:
    """Interior endpoints of maximal covered runs must be covered at the rim."""
    L = len(pi)
    for j in range(L):
        if not flags[j]:
            continue
        start = j == 0 or not flags[j - 1]
        end = j == L - 1 or not flags[j + 1]
        if (start and j != 0) or (end and j != L - 1):
            if boundary_coverage_status(st, pi[j]) is not Coverage.AT_BOUNDARY:
                st.violations.append(f"run endpoint {pi[j]} not covered at boundary")
