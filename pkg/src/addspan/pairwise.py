"""Pairwise sublinear additive spanners.

For every distance class ``D`` (a power of two) the graph is clustered with
base radius ``ceil(D**(1-1/k))``. Each ball contributes a BFS tree of
``B(c, 4r)`` and a recursive pairwise spanner (parameter ``k - 1``) for the
demand pairs routed to it. Demand pairs come from two passes: a hitting-set
pass over a random sample ``S`` that serves the largest balls, and an
interval-tree pass over the real demand pairs of the class.
"""
from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .base import pairwise6
from .clustering import Clustering, build_clustering
from .graph import INF, Graph, bfs_distances, bfs_layers, induced_subgraph, path_from_tree, shortest_path_tree
from .partition import BallDistances, PathPartition, check_partition, path_partition
from .result import ProbabilisticFailure, SpannerResult, bfs_tree_edges

log = logging.getLogger(__name__)

MAX_RESEEDS = 3


class BridgeLemmaError(RuntimeError):
    """No bridging index triple exists although the split condition fired."""


@dataclass(frozen=True)
class SublinearParams:
    k: int = 2
    eps: float = 0.25
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"k must be an integer >= 1, got {self.k!r}")
        if not 0 < self.eps < 1:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps!r}")

    def lower(self, seed_offset: int = 0) -> "SublinearParams":
        return SublinearParams(self.k - 1, self.eps, self.seed + seed_offset)

    @property
    def max_level(self) -> int:
        return math.ceil(1.0 / self.eps - 1e-12)

    def log2_budget_coeff(self) -> float:
        """log2 of ``2**(30k/eps)``, the stretch coefficient."""
        return 30.0 * self.k / self.eps

    def stretch_bound(self, d: int) -> float:
        """``d + 2**(30k/eps) * d**(1-1/k)`` as a float (may be inf)."""
        if d <= 0:
            return float(d)
        return d + pow2(self.log2_budget_coeff()) * d ** (1.0 - 1.0 / self.k)


def pow2(x: float) -> float:
    try:
        return 2.0 ** x
    except OverflowError:
        return math.inf


def ceil_root_power(D: int, k: int) -> int:
    """Exact ``ceil(D ** ((k - 1) / k))`` for integers."""
    if k == 1:
        return 1
    target = D ** (k - 1)
    y = max(1, int(round(target ** (1.0 / k))))
    while y ** k < target:
        y += 1
    while y > 1 and (y - 1) ** k >= target:
        y -= 1
    return y


def log2n(n: int) -> float:
    return math.log2(n) if n > 1 else 1.0


def sample_size(n: int, scale: float) -> int:
    """``min(n, ceil(10 * scale * log2 n))``."""
    if scale <= 0:
        return 0
    return min(n, math.ceil(10.0 * scale * log2n(n)))


def distance_classes(n: int) -> list[int]:
    if n < 2:
        return []
    return [1 << i for i in range(int(math.floor(math.log2(n))) + 1)]


def normalize_pairs(g: Graph, P: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    out = set()
    for s, t in P:
        g.check_vertex(s)
        g.check_vertex(t)
        if s != t:
            out.add((s, t) if s < t else (t, s))
    return sorted(out)


# ----------------------------------------------------------- per-class state


@dataclass
class ClassState:
    """Bookkeeping for one distance class."""

    D: int
    R: int
    cl: Clustering
    level: list[int]
    demand: list[set[tuple[int, int]]]  # per-ball demand pairs
    settled: list[set[int]]  # per-ball settled sample vertices
    sample: list[int] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    def add_demand(self, ball: int, s: int, t: int) -> None:
        self.demand[ball].add((s, t) if s < t else (t, s))


class SPTCache:
    """Tie-broken shortest-path trees keyed by source (small LRU)."""

    def __init__(self, g: Graph, keep: int = 4):
        self.g = g
        self.keep = keep
        self._d: dict[int, tuple[dict, dict]] = {}

    def __call__(self, s: int):
        hit = self._d.pop(s, None)
        if hit is None:
            hit = shortest_path_tree(self.g, s)
        self._d[s] = hit
        while len(self._d) > self.keep:
            self._d.pop(next(iter(self._d)))
        return hit

    def path(self, s: int, t: int):
        dist, parent = self(s)
        return path_from_tree(parent, s, t)


def ball_scaffold(g: Graph, cl: Clustering, res: SpannerResult, tag: str = "tree") -> None:
    for b in cl.balls:
        res.add(bfs_tree_edges(g, b.center, 4 * b.radius), tag)


def draw_sample(n: int, size: int, seed: int, D: int, attempt: int, salt: str) -> list[int]:
    rng = random.Random(f"{salt}:{seed}:{D}:{attempt}")
    if size >= n:
        return list(range(n))
    return sorted(rng.sample(range(n), size))


def sample_hits(cl: Clustering, sample: Sequence[int], must_hit: Sequence[bool]) -> bool:
    sset = set(sample)
    return all(not must or not sset.isdisjoint(b.members) for b, must in zip(cl.balls, must_hit))


def components(g: Graph) -> list[int]:
    """Connected-component id per vertex."""
    comp = [-1] * g.n
    cid = 0
    for v in range(g.n):
        if comp[v] >= 0:
            continue
        comp[v] = cid
        stack = [v]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if comp[w] < 0:
                    comp[w] = cid
                    stack.append(w)
        cid += 1
    return comp


def hitting_pass(g: Graph, st: ClassState, relevant: Sequence[bool], threshold: float,
                 spt: SPTCache, dist2: BallDistances, dist4: BallDistances | None = None) -> None:
    """Path-buying over sample pairs in ascending order.

    A sample path is skipped when it has no relevant host, or when some
    relevant host already settled both endpoints. Otherwise every relevant
    host receives its segment endpoints as a demand pair and settles both
    path endpoints.
    """
    S = st.sample
    U = st.settled
    owner = st.cl.owner
    added = skipped = 0
    stats = st.stats
    if not any(relevant) or len(S) < 2:
        stats.update(sample_paths_added=0, sample_paths_skipped=0)
        return
    comp = components(g)
    remaining: dict[int, int] = {}  # sample vertices per component not yet used as source
    for x in S:
        remaining[comp[x]] = remaining.get(comp[x], 0) + 1
    # settled[b][c]: sample vertices of component c settled in ball b
    per_comp: list[dict[int, int]] = [dict() for _ in U]
    comp_size = dict(remaining)
    for a, s in enumerate(S):
        cs = comp[s]
        remaining[cs] -= 1
        if remaining[cs] == 0:
            continue  # no later sample vertex can be reached from s
        o = owner[s]
        if relevant[o] and s in U[o] and per_comp[o].get(cs, 0) == comp_size[cs]:
            # the first host of every path from s is o, which settled them all
            skipped += remaining[cs]
            continue
        dist, parent = spt(s)
        for t in S[a + 1:]:
            if comp[t] != cs:
                continue
            if relevant[o] and s in U[o] and t in U[o]:
                skipped += 1
                continue
            if not dist[t] < threshold:
                continue
            pi = path_from_tree(parent, s, t)
            part = path_partition(g, pi, st.cl, check=False, dist2=dist2)
            hosts = [h for h in part.hosts() if relevant[h]]
            if not hosts or any(s in U[h] and t in U[h] for h in hosts):
                skipped += 1
                continue
            if dist4 is not None:
                st.violations.extend(check_partition(g, part, st.cl, dist4))
            for i, seg in enumerate(part.segments):
                h = seg.host
                if not relevant[h]:
                    continue
                st.add_demand(h, *part.endpoints(i))
                for x in (s, t):
                    if x not in U[h]:
                        U[h].add(x)
                        per_comp[h][cs] = per_comp[h].get(cs, 0) + 1
            added += 1
    stats.update(sample_paths_added=added, sample_paths_skipped=skipped)


def new_class_state(g: Graph, D: int, k: int, eps: float) -> ClassState:
    R = ceil_root_power(D, k)
    cl = build_clustering(g, R, eps)
    nb = len(cl.balls)
    return ClassState(D, R, cl, [0] * nb, [set() for _ in range(nb)], [set() for _ in range(nb)])


# ---------------------------------------------------------------- tightness


class TightnessLedger:
    """Tightness of center pairs against the current class subgraph ``H_D``."""

    def __init__(self, g: Graph, res: SpannerResult, budget: float):
        self.g = g
        self.res = res
        self.budget = budget
        self.tight: set[tuple[int, int]] = set()
        self._version = -1
        self._dh: dict[int, list[int]] = {}
        self._dg: dict[int, list[int]] = {}
        self._comp: list[int] | None = None
        self._h: Graph | None = None

    def _refresh(self):
        v = len(self.res.edges)
        if v != self._version:
            self._version = v
            self._h = Graph(self.g.n, self.res.edges)
            self._dh.clear()
            self._comp = None

    @property
    def coarse(self) -> bool:
        # every finite distance is < n, so the test reduces to connectivity
        return self.budget >= self.g.n

    def _components(self) -> list[int]:
        if self._comp is None:
            h = self._h
            comp = [-1] * h.n
            cid = 0
            for v in range(h.n):
                if comp[v] >= 0:
                    continue
                stack = [v]
                comp[v] = cid
                while stack:
                    u = stack.pop()
                    for w in h.adj[u]:
                        if comp[w] < 0:
                            comp[w] = cid
                            stack.append(w)
                cid += 1
            self._comp = comp
        return self._comp

    def is_tight(self, a: int, b: int) -> bool:
        if a == b:
            return True
        key = (a, b) if a < b else (b, a)
        if key in self.tight:
            return True
        self._refresh()
        if self.coarse:
            comp = self._components()
            ok = comp[a] == comp[b]
        else:
            dh = self._dh.get(a)
            if dh is None:
                dh = self._dh[a] = bfs_distances(self._h, a)
            dg = self._dg.get(a)
            if dg is None:
                dg = self._dg[a] = bfs_distances(self.g, a)
            ok = dh[b] < INF and dh[b] <= dg[b] + self.budget
        if ok:
            self.tight.add(key)
        return ok

    def non_tight(self, centers: Sequence[int]) -> int:
        """Number of non-tight pairs among ``centers``."""
        cs = sorted(set(centers))
        self._refresh()
        if self.coarse:
            comp = self._components()
            by: dict[int, int] = {}
            for c in cs:
                by[comp[c]] = by.get(comp[c], 0) + 1
            total = len(cs) * (len(cs) - 1) // 2
            same = sum(x * (x - 1) // 2 for x in by.values())
            return total - same
        cnt = 0
        for i, a in enumerate(cs):
            for b in cs[i + 1:]:
                if not self.is_tight(a, b):
                    cnt += 1
        return cnt


# ---------------------------------------------------------------- levels


def ball_level(size: int, n: int, npairs: int, eps: float, max_level: int) -> int:
    """Level 0 above ``n / sqrt|P|``; level i in ``(n^(1-i eps), n^(1-(i-1) eps)] / sqrt|P|``."""
    if npairs <= 0 or n <= 1:
        return max_level
    ln = math.log(n)
    x = (math.log(size) + 0.5 * math.log(npairs)) / ln  # size = n^x / sqrt|P|
    if x > 1 + 1e-12:
        return 0
    i = math.floor((1.0 - x) / eps + 1e-12) + 1
    return max(1, min(max_level, i))


def level_beta(n: int, L: int, eps: float, cap: int) -> int:
    """``ceil(n ** ((L + 1) eps))`` capped at ``cap`` (larger values act alike)."""
    e = (L + 1) * eps * math.log(max(n, 1))
    if e >= math.log(cap + 1):
        return cap + 1
    return math.ceil(math.exp(e) - 1e-9)


# ------------------------------------------------------------ interval tree


@dataclass
class TreeReport:
    depth: int = 0
    case1: int = 0
    case2: int = 0
    activations: int = 0
    nodes: int = 1


def process_pair_tree(part: PathPartition, st: ClassState, ledger: TightnessLedger, n: int,
                      eps: float, max_level: int) -> TreeReport:
    """Choose which segments of one demand path become demand pairs."""
    l = part.l
    rep = TreeReport()
    if l == 0:
        return rep
    hosts = part.hosts()
    lev = [st.level[h] for h in hosts]
    centers = [st.cl.balls[h].center for h in hosts]
    active = [False] * l

    def activate(i: int):
        if not active[i]:
            active[i] = True
            st.add_demand(hosts[i], *part.endpoints(i))
            rep.activations += 1

    zero = [i for i in range(l) if lev[i] == 0]
    if zero:
        leaves = [(0, zero[0] - 1, 1), (zero[-1] + 1, l - 1, 1)]
        rep.nodes += 2
        rep.depth = 1
    else:
        leaves = [(0, l - 1, 0)]
    while leaves:
        lo, hi, depth = leaves.pop()
        if lo > hi or all(active[lo:hi + 1]):
            continue
        by_level: dict[int, list[int]] = {}
        for i in range(lo, hi + 1):
            by_level.setdefault(lev[i], []).append(i)
        split = None
        for L in range(1, max_level + 1):
            idx = by_level.get(L, [])
            p = len(idx)
            beta = level_beta(n, L, eps, l)
            if p <= 4 * beta:
                continue
            q = ledger.non_tight([centers[i] for i in idx])
            if p > max(4 * beta, 8 * q / beta):
                split = (L, idx, beta)
                break
        if split is None:
            rep.case1 += 1
            for i in range(lo, hi + 1):
                activate(i)
            continue
        rep.case2 += 1
        L, idx, beta = split
        p = len(idx)
        for i in idx[:beta] + idx[p - beta:]:
            activate(i)
        triple = None
        for x in range(beta):
            for y in range(p - beta, p):
                for z in range(beta, p - beta):
                    if ledger.is_tight(centers[idx[x]], centers[idx[z]]) and \
                            ledger.is_tight(centers[idx[y]], centers[idx[z]]):
                        triple = (x, y, z)
                        break
                if triple:
                    break
            if triple:
                break
        if triple is None:
            raise BridgeLemmaError(f"no bridge triple at level {L} with p={p}, beta={beta}")
        ix, iy = idx[triple[0]], idx[triple[1]]
        leaves.append((iy, hi, depth + 1))
        leaves.append((lo, ix, depth + 1))
        rep.nodes += 2
        rep.depth = max(rep.depth, depth + 1)
    return rep


# ------------------------------------------------------------------ builder


def build_pairwise_sublinear(g: Graph, P: Iterable[tuple[int, int]], params: SublinearParams,
                             audit: bool = False) -> SpannerResult:
    """Pairwise spanner with stretch ``d + 2**(30k/eps) * d**(1-1/k)`` on ``P``.

    ``k = 1`` uses the +6 pairwise spanner directly. With ``audit`` the
    partition invariants of every inserted demand pair are rechecked.
    """
    pairs = normalize_pairs(g, P)
    if params.k == 1:
        res = pairwise6(g, pairs, seed=params.seed)
        res.log["k"] = 1
        return res
    n = g.n
    res = SpannerResult(n)
    res.log.update(kind="pairwise_sublinear", k=params.k, eps=params.eps, seed=params.seed,
                   pairs=len(pairs), classes=[], tightness_graph="scaffold plus finalized sub-spanners")
    # distance class of each pair
    by_class: dict[int, list[tuple[int, int]]] = {}
    unreachable = []
    src = None
    dist: list[int] = []
    for s, t in pairs:
        if s != src:
            src, dist = s, bfs_distances(g, s)
        d = dist[t]
        if d >= INF:
            unreachable.append((s, t))
            continue
        by_class.setdefault(1 << (d.bit_length() - 1), []).append((s, t))
    res.log["unreachable"] = unreachable
    for D in distance_classes(n):
        h_d = build_distance_class(g, by_class.get(D, []), D, params, len(pairs), audit=audit)
        res.merge(h_d)
        res.log["classes"].append(h_d.log)
    return res


def build_distance_class(g: Graph, P_D: Sequence[tuple[int, int]], D: int, params: SublinearParams,
                         total_pairs: int, audit: bool = False) -> SpannerResult:
    """Subgraph serving the demand pairs at distance ``[D, 2D)``."""
    n = g.n
    k, eps = params.k, params.eps
    st = new_class_state(g, D, k, eps)
    cl = st.cl
    Lmax = params.max_level
    st.level = [ball_level(len(b), n, total_pairs, eps, Lmax) for b in cl.balls]
    res = SpannerResult(n)
    ball_scaffold(g, cl, res)
    spt = SPTCache(g)
    dist2 = BallDistances(g, cl, 2)
    dist4 = BallDistances(g, cl, 4) if audit else None

    # Step 1: hitting set for level-0 balls
    size = sample_size(n, math.sqrt(total_pairs))
    must_hit = [lv == 0 for lv in st.level]
    for attempt in range(MAX_RESEEDS + 1):
        st.sample = draw_sample(n, size, params.seed, D, attempt, "pairwise")
        if sample_hits(cl, st.sample, must_hit):
            break
    else:
        raise ProbabilisticFailure(f"sample missed a level-0 ball after {MAX_RESEEDS} reseeds (D={D})")
    threshold = 2 * D + 4 * pow2(10.0 / eps) * st.R
    hitting_pass(g, st, [True] * len(cl.balls), threshold, spt, dist2, dist4)
    step1_max = max((len(x) for x in st.demand), default=0)

    # Step 2: interval tree per demand pair
    budget = (3 * pow2((30 * k - 20) / eps) + 10 * pow2(10.0 / eps)) * st.R
    ledger = TightnessLedger(g, res, budget)
    levels = range(1, Lmax + 1)
    centers_at = {L: [cl.balls[i].center for i in range(len(cl.balls)) if st.level[i] == L] for L in levels}

    def phi():
        return [ledger.non_tight(centers_at[L]) for L in levels]

    phi_traj = [phi()]
    reps = []
    for s, t in P_D:
        pi = spt.path(s, t)
        part = path_partition(g, pi, cl, check=False, dist2=dist2)
        if dist4 is not None:
            st.violations.extend(check_partition(g, part, cl, dist4))
        reps.append(process_pair_tree(part, st, ledger, n, eps, Lmax))
        phi_traj.append(phi())

    # finalize the per-ball recursive spanners
    rec_sizes = []
    for i, b in enumerate(cl.balls):
        if not st.demand[i]:
            continue
        outer, _ = bfs_layers(g, b.center, 4 * b.radius)
        local, verts = induced_subgraph(g, outer)
        index = {v: j for j, v in enumerate(verts)}
        lp = [(index[s], index[t]) for s, t in sorted(st.demand[i])]
        sub = build_pairwise_sublinear(local, lp, SublinearParams(k - 1, eps, params.seed + i + 1))
        rec_sizes.append((i, len(verts), len(lp), sub.size))
        res.merge(sub, "recursive", mapping=verts)
    phi_traj.append(phi())

    demand_by_level = [0] * (Lmax + 1)
    for i, dm in enumerate(st.demand):
        demand_by_level[st.level[i]] += len(dm)
    census = [0] * (Lmax + 1)
    for lv in st.level:
        census[lv] += 1
    res.log.update(
        D=D, R=st.R, pairs=len(P_D), balls=len(cl.balls), level_census=census,
        sample_size=len(st.sample), step1_max_demand=step1_max,
        demand_by_level=demand_by_level,
        max_demand=max((len(x) for x in st.demand), default=0),
        case1=sum(r.case1 for r in reps), case2=sum(r.case2 for r in reps),
        max_tree_depth=max((r.depth for r in reps), default=0),
        phi=phi_traj, recursion=rec_sizes, edges=res.size,
        violations=st.violations[:20], **st.stats,
    )
    return res
