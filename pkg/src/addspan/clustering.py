"""Ball clustering with a bounded radius window and bounded overlap.

Balls are grown greedily around the lowest-id uncovered vertex. The radius
starts at ``R`` and is multiplied by four until both the size and the volume
of ``B(c, 4r)`` are within a factor ``beta = n**eps`` of ``B(c, r // 2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .graph import Ball, Graph, bfs_layers


@dataclass(frozen=True)
class BallRecord:
    center: int
    radius: int
    members: frozenset[int] = field(repr=False)
    half_size: int = 0
    outer_size: int = 0
    outer_vol: int = 0
    attempts: int = 1  # number of radii tried before acceptance

    @property
    def ball(self) -> Ball:
        return Ball(self.center, self.radius, self.members)

    def __len__(self):
        return len(self.members)


@dataclass
class Clustering:
    n: int
    m: int
    R: int
    eps: float
    balls: list[BallRecord]
    # lowest index of a ball containing each vertex
    owner: list[int] = field(repr=False, default_factory=list)

    @property
    def beta(self) -> float:
        return growth_factor(self.n, self.m, self.eps)

    def max_radius(self) -> float:
        """Upper end of the radius window, ``2**(10/eps) * R`` (may be inf)."""
        try:
            return self.R * 2.0 ** (10.0 / self.eps)
        except OverflowError:
            return math.inf

    def containing(self, v: int) -> list[int]:
        return [i for i, b in enumerate(self.balls) if v in b.members]


def growth_factor(n: int, m: int, eps: float) -> float:
    """``n**eps``, capped at ``max(n, 2m, 1)``.

    Any factor at least that large accepts every radius, so the cap only
    avoids float overflow for tiny ``eps`` values.
    """
    cap = max(n, 2 * m, 1)
    if n <= 1:
        return 1.0
    lg = eps * math.log(n)
    if lg >= math.log(cap):
        return float(cap)
    return math.exp(lg)


def scaled_floor(beta: float, x: int) -> int:
    """Largest integer not exceeding ``beta * x`` (with a tiny tolerance)."""
    return math.floor(beta * x + 1e-9)


def accepts(beta: float, outer_size: int, half_size: int, outer_vol: int, half_vol: int) -> bool:
    return outer_size <= scaled_floor(beta, half_size) and outer_vol <= scaled_floor(beta, half_vol)


def build_clustering(g: Graph, R: int, eps: float) -> Clustering:
    """Cover ``g`` by balls following the grow-by-four rule.

    Parameters
    ----------
    g : Graph
    R : int
        Base radius, at least 1.
    eps : float
        Growth exponent; the acceptance factor is ``n**eps``.
    """
    if not isinstance(R, int) or R < 1:
        raise ValueError(f"base radius must be an integer >= 1, got {R!r}")
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps!r}")
    n = g.n
    beta = growth_factor(n, g.m, eps)
    adj = g.adj
    owner = [-1] * n
    balls: list[BallRecord] = []
    nxt = 0
    while True:
        while nxt < n and owner[nxt] >= 0:
            nxt += 1
        if nxt >= n:
            break
        c = nxt
        r = R
        attempts = 0
        while True:
            attempts += 1
            dist, layers = bfs_layers(g, c, 4 * r)
            half = r // 2
            half_size = half_vol = 0
            for d in range(min(half, len(layers) - 1) + 1):
                half_size += len(layers[d])
                half_vol += sum(len(adj[v]) for v in layers[d])
            outer_size = len(dist)
            outer_vol = sum(len(adj[v]) for v in dist)
            if accepts(beta, outer_size, half_size, outer_vol, half_vol):
                break
            r *= 4
        members = frozenset(v for v, dv in dist.items() if dv <= r)
        idx = len(balls)
        for v in members:
            if owner[v] < 0:
                owner[v] = idx
        balls.append(BallRecord(c, r, members, half_size, outer_size, outer_vol, attempts))
    return Clustering(n, g.m, R, eps, balls, owner)


# ----------------------------------------------------------------- audit


@dataclass
class ClusteringAudit:
    ok: bool
    failures: list[str]
    n_balls: int
    sum_half: int
    sum_outer: int
    sum_outer_vol: int
    max_capture: int
    capture_bound: float
    half_const: float  # sum_half / (n / eps)
    outer_const: float  # sum_outer / (n**(1+eps) / eps)
    vol_const: float  # sum_outer_vol / (m n**eps / eps)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def audit_clustering(g: Graph, cl: Clustering, max_failures: int = 20) -> ClusteringAudit:
    """Recheck every clustering guarantee from scratch with fresh BFS runs."""
    if cl.n != g.n or cl.m != g.m:
        raise ValueError("clustering was built on a different graph")
    fails: list[str] = []

    def fail(msg):
        if len(fails) < max_failures:
            fails.append(msg)

    n = g.n
    beta = growth_factor(n, g.m, cl.eps)
    covered = [False] * n
    capture = [0] * n
    half_sets: list[frozenset[int]] = []
    sum_half = sum_outer = sum_vol = 0
    log_hi = math.log(cl.R) + (10.0 / cl.eps) * math.log(2)
    for i, b in enumerate(cl.balls):
        dist, layers = bfs_layers(g, b.center, 4 * b.radius)
        members = {v for v, d in dist.items() if d <= b.radius}
        if members != set(b.members):
            fail(f"ball {i}: stored members differ from B(c, r)")
        for v in members:
            covered[v] = True
        if b.radius < cl.R or math.log(b.radius) > log_hi + 1e-12:
            fail(f"ball {i}: radius {b.radius} outside [R, 2^(10/eps) R]")
        half = frozenset(v for v, d in dist.items() if d <= b.radius // 2)
        half_sets.append(half)
        hs, hv = len(half), g.vol(half)
        os_, ov = len(dist), g.vol(dist)
        if not accepts(beta, os_, hs, ov, hv):
            fail(f"ball {i}: growth condition violated")
        for v in half:
            capture[v] += 1
        sum_half += hs
        sum_outer += os_
        sum_vol += ov
    missing = [v for v in range(n) if not covered[v]]
    if missing:
        fail(f"{len(missing)} vertices uncovered, e.g. {missing[:5]}")
    bound = 5.0 / cl.eps
    max_cap = max(capture, default=0)
    if max_cap > bound:
        fail(f"capture count {max_cap} exceeds 5/eps = {bound:g}")
    # separation: replay insertion order
    holders: list[list[int]] = [[] for _ in range(n)]
    for i, half in enumerate(half_sets):
        r = cl.balls[i].radius
        earlier = set()
        for v in half:
            earlier.update(holders[v])
        for j in earlier:
            if 4 * cl.balls[j].radius > r:
                fail(f"separation: ball {j} (r={cl.balls[j].radius}) meets ball {i} (r={r})")
        for v in half:
            holders[v].append(i)
    e = cl.eps
    nn = max(n, 1)
    return ClusteringAudit(
        ok=not fails,
        failures=fails,
        n_balls=len(cl.balls),
        sum_half=sum_half,
        sum_outer=sum_outer,
        sum_outer_vol=sum_vol,
        max_capture=max_cap,
        capture_bound=bound,
        half_const=sum_half / (nn / e),
        outer_const=sum_outer / (nn * beta / e),
        vol_const=(sum_vol / (max(g.m, 1) * beta / e)),
    )
