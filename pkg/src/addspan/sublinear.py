"""All-pairs sublinear additive spanners.

Each distance class is clustered as in the pairwise construction. Balls
holding at most ``L_k`` vertices are handled by a recursive all-pairs
spanner (parameter ``k - 1``) on ``G[B(c, 4r)]``; larger balls get a
pairwise spanner for demand pairs found by a hitting-set pass.
"""
from __future__ import annotations

import math

from .base import allpairs6
from .graph import Graph, bfs_distances, bfs_layers, induced_subgraph
from .pairwise import (MAX_RESEEDS, SPTCache, SublinearParams, ball_scaffold, build_pairwise_sublinear,
                       distance_classes, draw_sample, hitting_pass, log2n, new_class_state, pow2,
                       sample_hits)
from .partition import BallDistances
from .result import ProbabilisticFailure, SpannerResult


def small_threshold(n: int, k: int) -> int:
    """``L_k = ceil(n ** ((2^k - 1) / (2^(k+1) - 1)))``."""
    if n <= 1:
        return 1
    e = (2 ** k - 1) / (2 ** (k + 1) - 1)
    return math.ceil(n ** e - 1e-9)


def build_sublinear(g: Graph, params: SublinearParams, audit: bool = False) -> SpannerResult:
    """All-pairs spanner with stretch ``d + 2**(30k/eps) * d**(1-1/k)``."""
    if params.k == 1:
        res = allpairs6(g, seed=params.seed)
        res.log["k"] = 1
        return res
    n = g.n
    res = SpannerResult(n)
    res.log.update(kind="sublinear", k=params.k, eps=params.eps, seed=params.seed,
                   small_threshold=small_threshold(n, params.k), classes=[])
    for D in distance_classes(n):
        h_d = _build_class(g, D, params, audit)
        res.merge(h_d)
        res.log["classes"].append(h_d.log)
    return res


def _build_class(g: Graph, D: int, params: SublinearParams, audit: bool) -> SpannerResult:
    n = g.n
    k, eps = params.k, params.eps
    st = new_class_state(g, D, k, eps)
    cl = st.cl
    Lk = small_threshold(n, k)
    large = [len(b) > Lk for b in cl.balls]
    res = SpannerResult(n)
    ball_scaffold(g, cl, res)

    size = min(n, math.ceil(10.0 * n / Lk * log2n(n)))
    if any(large):
        for attempt in range(MAX_RESEEDS + 1):
            st.sample = draw_sample(n, size, params.seed, D, attempt, "sublinear")
            if sample_hits(cl, st.sample, large):
                break
        else:
            raise ProbabilisticFailure(f"sample missed a large ball after {MAX_RESEEDS} reseeds (D={D})")
        threshold = 2 * D + 4 * pow2(10.0 / eps) * st.R
        dist4 = BallDistances(g, cl, 4) if audit else None
        hitting_pass(g, st, large, threshold, SPTCache(g), BallDistances(g, cl, 2), dist4)
    else:
        st.stats.update(sample_paths_added=0, sample_paths_skipped=0)

    rec = []
    for i, b in enumerate(cl.balls):
        if large[i] and not st.demand[i]:
            continue
        outer, _ = bfs_layers(g, b.center, 4 * b.radius)
        local, verts = induced_subgraph(g, outer)
        sub_params = SublinearParams(k - 1, eps, params.seed + i + 1)
        if large[i]:
            index = {v: j for j, v in enumerate(verts)}
            lp = [(index[s], index[t]) for s, t in sorted(st.demand[i])]
            sub = build_pairwise_sublinear(local, lp, sub_params)
            tag = "pairwise"
        else:
            sub = build_sublinear(local, sub_params)
            tag = "small"
        rec.append((i, "large" if large[i] else "small", len(verts), sub.size))
        res.merge(sub, tag, mapping=verts)

    settled_err = None
    if audit and any(large):
        h = res.as_graph()
        settled_err = 0
        for i, b in enumerate(cl.balls):
            if not large[i] or not st.settled[i]:
                continue
            dg = bfs_distances(g, b.center)
            dh = bfs_distances(h, b.center)
            settled_err = max(settled_err, max(dh[s] - dg[s] for s in st.settled[i]))
    res.log.update(
        D=D, R=st.R, balls=len(cl.balls), large=sum(large), small=len(large) - sum(large),
        sample_size=len(st.sample), max_demand=max((len(x) for x in st.demand), default=0),
        recursion=rec, settled_max_error=settled_err, edges=res.size,
        violations=st.violations[:20], **st.stats,
    )
    return res
