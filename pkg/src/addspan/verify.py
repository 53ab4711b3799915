"""Stretch oracles, a second independent distance routine, and log-log slope fits."""
from __future__ import annotations

import csv
import io
import json
import math
import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graph import INF, Edge, Graph, bfs_distances

ALL_PAIRS_CAP = 2048


@dataclass(frozen=True)
class Sample:
    """Request ``k`` uniformly random unordered pairs, reproducible under ``seed``."""

    k: int
    seed: int = 0


@dataclass
class PairRow:
    s: int
    t: int
    dist_g: int
    dist_h: int

    @property
    def error(self) -> float:
        if self.dist_h >= INF:
            return math.inf
        return self.dist_h - self.dist_g


@dataclass
class StretchReport:
    description: str
    rows: list[PairRow] = field(default_factory=list)
    unreachable_in_g: int = 0
    bounds: list[dict] = field(default_factory=list)

    @property
    def max_error(self) -> float:
        return max((r.error for r in self.rows), default=0)

    @property
    def mean_error(self) -> float:
        if not self.rows:
            return 0.0
        return sum(r.error for r in self.rows) / len(self.rows)

    @property
    def disconnected(self) -> int:
        """Pairs connected in G but not in H."""
        return sum(1 for r in self.rows if r.dist_h >= INF)

    def class_max(self) -> dict[int, float]:
        """Maximum error per distance class ``D = 2**floor(log2 dist_G)``."""
        out: dict[int, float] = {}
        for r in self.rows:
            if r.dist_g == 0:
                continue
            D = 1 << (r.dist_g.bit_length() - 1)
            out[D] = max(out.get(D, 0), r.error)
        return dict(sorted(out.items()))

    def check_bound(self, name: str, bound: float, measured: float | None = None) -> bool:
        """Record ``measured <= bound`` (defaults to the max error) and return the verdict."""
        m = self.max_error if measured is None else measured
        ok = m <= bound
        self.bounds.append({"name": name, "measured": _num(m), "bound": bound, "pass": ok})
        return ok

    def summary(self) -> dict:
        return {
            "schema": 1, "pairs": self.description, "evaluated": len(self.rows),
            "unreachable_in_g": self.unreachable_in_g, "disconnected_in_h": self.disconnected,
            "max_error": _num(self.max_error), "mean_error": _num(self.mean_error),
            "class_max": {str(k): _num(v) for k, v in self.class_max().items()},
            "bounds": self.bounds,
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "t", "dist_g", "dist_h", "error"])
        for r in self.rows:
            w.writerow([r.s, r.t, r.dist_g, _num(r.dist_h if r.dist_h < INF else math.inf), _num(r.error)])
        return buf.getvalue()


def _num(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def _as_graph(g: Graph, h) -> Graph:
    if isinstance(h, Graph):
        return h
    if hasattr(h, "edges") and isinstance(getattr(h, "edges"), dict):
        h = h.edges
    return Graph(g.n, h)


def check_subgraph(g: Graph, h: Graph) -> None:
    if h.n != g.n:
        raise ValueError(f"vertex count mismatch: {h.n} vs {g.n}")
    for u, v in h.edges:
        if not g.has_edge(u, v):
            raise ValueError(f"edge ({u}, {v}) is not in the host graph")


def _sample_pairs(n: int, k: int, seed: int) -> list[tuple[int, int]]:
    if n < 2:
        return []
    total = n * (n - 1) // 2
    rng = random.Random(seed)
    if k >= total:
        return [(s, t) for s in range(n) for t in range(s + 1, n)]
    out: set[tuple[int, int]] = set()
    while len(out) < k:
        s, t = rng.randrange(n), rng.randrange(n)
        if s != t:
            out.add((min(s, t), max(s, t)))
    return sorted(out)


def stretch_report(g: Graph, h, pairs="all") -> StretchReport:
    """Exact BFS errors ``dist_H - dist_G`` on the requested pairs.

    ``pairs`` is ``"all"`` (only for ``n <= 2048``), a :class:`Sample`, or an
    iterable of ``(s, t)`` pairs.
    """
    h = _as_graph(g, h)
    check_subgraph(g, h)
    n = g.n
    if isinstance(pairs, str):
        if pairs != "all":
            raise ValueError(f"unknown pair spec {pairs!r}")
        if n > ALL_PAIRS_CAP:
            raise ValueError(f"all-pairs oracle limited to n <= {ALL_PAIRS_CAP}")
        desc = "all"
        groups = {s: range(s + 1, n) for s in range(n - 1)}
    else:
        if isinstance(pairs, Sample):
            desc = f"sample(k={pairs.k}, seed={pairs.seed})"
            plist = _sample_pairs(n, pairs.k, pairs.seed)
        else:
            plist = [(int(s), int(t)) for s, t in pairs]
            desc = f"given({len(plist)})"
        grouped: dict[int, list[int]] = defaultdict(list)
        for s, t in plist:
            g.check_vertex(s)
            g.check_vertex(t)
            a, b = (s, t) if s <= t else (t, s)
            grouped[a].append(b)
        groups = dict(sorted(grouped.items()))
    rep = StretchReport(desc)
    for s, targets in groups.items():
        dg = bfs_distances(g, s)
        dh = bfs_distances(h, s)
        for t in targets:
            if dg[t] >= INF:
                rep.unreachable_in_g += 1
                continue
            rep.rows.append(PairRow(s, t, dg[t], dh[t]))
    return rep


def bidirectional_distance(g: Graph, s: int, t: int) -> int:
    """Hop distance via alternating frontier expansion from both ends."""
    if s == t:
        return 0
    adj = g.adj
    ds, dt = {s: 0}, {t: 0}
    fs, ft = [s], [t]
    while fs and ft:
        # expand the smaller side by one full level
        if len(fs) <= len(ft):
            frontier, mine, other = fs, ds, dt
        else:
            frontier, mine, other = ft, dt, ds
        nxt = []
        best = INF
        for u in frontier:
            du = mine[u] + 1
            for w in adj[u]:
                if w in other:
                    best = min(best, du + other[w])
                if w not in mine:
                    mine[w] = du
                    nxt.append(w)
        if best < INF:
            return best
        if frontier is fs:
            fs = nxt
        else:
            ft = nxt
    return INF


def cross_check(g: Graph, pairs: Iterable[tuple[int, int]]) -> list[tuple[int, int, int, int]]:
    """Pairs where BFS and bidirectional BFS disagree (empty when consistent)."""
    bad = []
    cache: dict[int, list[int]] = {}
    for s, t in pairs:
        if s not in cache:
            cache[s] = bfs_distances(g, s)
        a = cache[s][t]
        b = bidirectional_distance(g, s, t)
        if a != b:
            bad.append((s, t, a, b))
    return bad


# ------------------------------------------------------------ slopes


@dataclass
class SlopeFit:
    ns: list[float]
    values: list[float]
    slope: float
    intercept: float
    residual: float  # root-mean-square residual in natural-log space

    def predict(self, n: float) -> float:
        return math.exp(self.intercept) * n ** self.slope

    def to_dict(self) -> dict:
        return {"ns": self.ns, "values": self.values, "slope": self.slope,
                "intercept": self.intercept, "residual": self.residual}


def slope_fit(observations: Sequence[tuple[float, float]]) -> SlopeFit:
    """Least-squares line through ``(log n, log value)``."""
    obs = [(float(a), float(b)) for a, b in observations]
    if len(obs) < 4:
        raise ValueError("slope fit needs at least 4 observations")
    ns = [a for a, _ in obs]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("n values must be strictly increasing")
    if any(a <= 0 or b <= 0 for a, b in obs):
        raise ValueError("observations must be positive")
    x = np.log(np.array(ns))
    y = np.log(np.array([b for _, b in obs]))
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return SlopeFit(ns, [b for _, b in obs], float(slope), float(intercept), resid)


def fitted_constant(measured: Sequence[float], shape: Sequence[float]) -> float:
    """Smallest ``C`` with ``measured[i] <= C * shape[i]`` for every point."""
    return max(m / s for m, s in zip(measured, shape))


def additive_error_terms(n: int, R: int, eps: float) -> tuple[float, float]:
    """The two shapes ``R n^eps`` and ``n^(1+eps) / R^(4/3)`` that bound the linear-size error."""
    return R * n ** eps, n ** (1 + eps) / R ** (4.0 / 3.0)


def audit_result(g: Graph, res) -> dict:
    """Structural checks that every builder output must pass."""
    bad = [e for e in res.edges if not g.has_edge(*e)]
    return {"schema": 1, "subgraph": not bad, "foreign_edges": [list(e) for e in bad[:10]],
            "edges": len(res.edges), "tags": res.tag_counts() if hasattr(res, "tag_counts") else {}}
