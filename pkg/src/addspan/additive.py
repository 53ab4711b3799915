"""Linear-size additive spanners.

``build_additive_37`` sparsifies dense inputs, clusters with base radius
``ceil(n**(3/7))``, protects small balls with local subset spanners on their
bottleneck layers, and covers the rest with one global subset spanner on a
random sample. ``build_additive_0403`` nests the same recipe: large balls of
level ``j`` are handed to the level ``j - 1`` builder, and the exponents
follow the schedule ``rho -> f(rho) + eps``.
"""
from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field

from .base import multiplicative_spanner
from .clustering import build_clustering
from .graph import Graph, bfs_layers, induced_subgraph
from .pairwise import log2n
from .preservers import bottleneck_in_range, boundary_pair
from .result import SpannerResult, bfs_tree_edges
from .subset import build_subset_spanner, clustering_eps

log = logging.getLogger(__name__)

RHO0 = 3.0 / 7.0 + 0.1
GAMMA = 13.0 / 7.0
RHO_STAR = (15.0 - math.sqrt(54.0)) / 19.0


def f_map(rho: float) -> float:
    """Exponent map ``(3/2 - rho) / (4 - 19 rho / 6)``; its fixed point is ``RHO_STAR``."""
    return (1.5 - rho) / (4.0 - 19.0 * rho / 6.0)


def g_map(rho: float) -> float:
    """Small-ball exponent ``(3/2) f(rho) / (3/2 - rho)``."""
    return 1.5 * f_map(rho) / (1.5 - rho)


def side_condition(rho: float, gamma: float = GAMMA) -> bool:
    """``gamma >= 1 + (3/2) f(rho) (1 - rho) / (3/2 - rho)``."""
    return gamma >= 1.0 + g_map(rho) * (1.0 - rho)


@dataclass
class ReductionSchedule:
    eps: float
    rhos: list[float]  # rhos[j] is the error exponent after j reductions
    target: float | None = None
    gamma: float = GAMMA
    side_ok: list[bool] = field(default_factory=list)

    @property
    def K(self) -> int:
        return len(self.rhos) - 1

    def to_dict(self) -> dict:
        return {"eps": self.eps, "target": self.target, "K": self.K, "rhos": self.rhos,
                "gamma": self.gamma, "side_condition": self.side_ok, "fixed_point": RHO_STAR}


def iterate_schedule(eps: float, K: int, rho0: float = RHO0) -> ReductionSchedule:
    rhos = [rho0]
    for _ in range(K):
        rhos.append(f_map(rhos[-1]) + eps)
    return ReductionSchedule(eps, rhos, side_ok=[side_condition(r) for r in rhos])


def reduction_schedule(eps: float, target: float, rho0: float = RHO0, max_steps: int = 10_000) -> ReductionSchedule:
    """Smallest ``K`` whose exponent ``rho_K`` is below ``target``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    if target <= RHO_STAR:
        raise ValueError(f"target {target} is not above the fixed point {RHO_STAR:.6f}")
    rhos = [rho0]
    while rhos[-1] >= target:
        nxt = f_map(rhos[-1]) + eps
        if nxt >= rhos[-1] or len(rhos) > max_steps:
            raise ValueError(f"target {target} unreachable with eps={eps}: the schedule stalls at {rhos[-1]:.6f}")
        rhos.append(nxt)
    return ReductionSchedule(eps, rhos, target, side_ok=[side_condition(r) for r in rhos])


def useful_depth(eps: float, rho0: float = RHO0, max_steps: int = 10_000) -> int:
    """Number of reductions after which the schedule stops decreasing."""
    rho, K = rho0, 0
    while K < max_steps:
        nxt = f_map(rho) + eps
        if nxt >= rho:
            break
        rho, K = nxt, K + 1
    return K


# ------------------------------------------------------------ sparsify


def sparsify(g: Graph, d: float, seed: int = 0) -> Graph:
    """Keep low-degree edges plus a ``ceil(log2 n)``-multiplicative spanner."""
    n = g.n
    if not 1 < d < n:
        raise ValueError(f"need 1 < d < n, got d={d}, n={n}")
    cap = math.ceil(d)
    keep = set()
    for v in range(n):
        if len(g.adj[v]) <= cap:
            keep.update((min(v, w), max(v, w)) for w in g.adj[v])
    k = max(1, math.ceil(math.log2(n)))
    keep.update(multiplicative_spanner(g, k, seed).edges)
    return Graph(n, keep)


# ------------------------------------------------------------ builders


def _ceil_pow(n: int, e: float) -> int:
    return max(1, math.ceil(n ** e - 1e-9))


def _outer_subgraph(g: Graph, c: int, depth: int):
    outer, _ = bfs_layers(g, c, depth)
    return induced_subgraph(g, outer)


def _core(g: Graph, eps: float, seed: int, level: int, rho: float | None, sched: ReductionSchedule | None,
          audit: bool) -> SpannerResult:
    """Shared body; ``rho is None`` selects the base recipe."""
    n = g.n
    res = SpannerResult(n)
    info: dict = {"level": level, "n": n, "m": g.m}
    if n <= 1:
        res.log.update(kind="additive", **info)
        return res
    if rho is None:
        a, b = 3.0 / 7.0, 5.0 / 3.0  # R = n^a, small iff |B| <= R^b
        dense = 10 * n ** (2 - a)
        R = _ceil_pow(n, a)
        small_cap = R ** b
    else:
        fa, ga = f_map(rho), g_map(rho)
        dense = 10 * n ** (2 - fa)
        R = _ceil_pow(n, fa)
        small_cap = n ** ga
        info.update(rho=rho, f=fa, g=ga)
    gp = g
    d = None
    if g.m >= dense:
        d = n ** (1 - (3.0 / 7.0 if rho is None else f_map(rho)))
        d = min(max(math.ceil(d - 1e-9), 2), n - 1)
        gp = sparsify(g, d, seed)
    cl = build_clustering(gp, R, clustering_eps(eps, n))
    small = [len(b) <= small_cap + 1e-9 for b in cl.balls]
    for b in cl.balls:
        res.add(bfs_tree_edges(gp, b.center, 4 * b.radius), "tree")
    sub_sizes = []
    for i, b in enumerate(cl.balls):
        r = b.radius
        if small[i]:
            dd = bottleneck_in_range(gp, b.center, r, 2 * r, 4 * r)
            bset = boundary_pair(gp, b.center, dd)
            if len(bset) < 2:
                continue
            local, verts = _outer_subgraph(gp, b.center, 4 * r)
            index = {v: j for j, v in enumerate(verts)}
            sub = build_subset_spanner(local, [index[v] for v in bset], eps)
            res.merge(sub, "local", mapping=verts)
            sub_sizes.append(("small", len(verts), len(bset), sub.size))
        else:
            if rho is None or level == 0:
                continue
            local, verts = _outer_subgraph(gp, b.center, 4 * r)
            sub = _level(local, eps, seed + i + 1, level - 1, sched, audit)
            res.merge(sub, "nested", mapping=verts)
            sub_sizes.append(("large", len(verts), sub.size))
    ssize = min(n, math.ceil(10 * R ** (2.0 / 3.0) * log2n(n)))
    rng = random.Random(f"additive:{seed}:{level}")
    S = sorted(rng.sample(range(n), ssize)) if ssize < n else list(range(n))
    hat = build_subset_spanner(gp, S, eps)
    res.merge(hat, "sample")
    info.update(R=R, small_cap=small_cap, sparsified=d is not None, sparsify_d=d, m_sparse=gp.m,
                balls=len(cl.balls), small=sum(small), large=len(small) - sum(small),
                sample_size=ssize, sample_edges=hat.size, recursion=sub_sizes, edges=res.size)
    res.log.update(kind="additive", eps=eps, **info)
    return res


def _level(g: Graph, eps: float, seed: int, level: int, sched: ReductionSchedule | None, audit: bool):
    if level == 0:
        return _core(g, eps, seed, 0, None, None, audit)
    return _core(g, eps, seed, level, sched.rhos[level - 1], sched, audit)


def build_additive_37(g: Graph, eps: float, seed: int = 0, audit: bool = False) -> SpannerResult:
    """Linear-size spanner with error ``O~(n^(3/7 + eps))``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    res = _core(g, eps, seed, 0, None, None, audit)
    res.log["schema"] = 1
    return res


def build_additive_0403(g: Graph, eps: float, K: int, seed: int = 0, schedule_eps: float | None = None,
                        rho0: float = RHO0, audit: bool = False) -> SpannerResult:
    """Level-``K`` nested spanner; level 0 is :func:`build_additive_37`.

    ``schedule_eps`` is the slack added at every reduction step (defaults to
    ``eps``). Levels beyond the point where the schedule stops decreasing
    cannot lower the exponent, so ``K`` is clamped there with a warning.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if K < 0:
        raise ValueError("K must be nonnegative")
    se = eps if schedule_eps is None else schedule_eps
    top = useful_depth(se, rho0)
    if K > top:
        log.warning("K=%d exceeds the useful schedule depth %d; clamping", K, top)
        K = top
    sched = iterate_schedule(se, K, rho0)
    res = _level(g, eps, seed, K, sched, audit)
    res.log.update(schema=1, K=K, schedule=sched.to_dict())
    return res
