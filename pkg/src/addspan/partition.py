"""Chop a shortest path into segments hosted by clustering balls."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .clustering import Clustering
from .graph import Graph, bfs_layers, is_path


@dataclass(frozen=True)
class Segment:
    start: int  # index into the path
    end: int
    host: int  # ball index in the clustering


@dataclass
class PathPartition:
    path: tuple[int, ...]
    segments: list[Segment]

    @property
    def l(self) -> int:
        return len(self.segments)

    def endpoints(self, i: int) -> tuple[int, int]:
        seg = self.segments[i]
        return self.path[seg.start], self.path[seg.end]

    def hosts(self) -> list[int]:
        return [s.host for s in self.segments]


class BallDistances:
    """Memoized truncated distances ``dist(c_i, .)`` up to ``depth(r_i)``.

    ``depth`` maps a ball radius to the BFS depth to keep, e.g. ``2r``.
    """

    def __init__(self, g: Graph, cl: Clustering, factor: int = 2):
        self.g = g
        self.cl = cl
        self.factor = factor
        self._cache: dict[int, dict[int, int]] = {}

    def __call__(self, i: int) -> dict[int, int]:
        d = self._cache.get(i)
        if d is None:
            b = self.cl.balls[i]
            d, _ = bfs_layers(self.g, b.center, self.factor * b.radius)
            self._cache[i] = d
        return d


def path_partition(g: Graph, pi: Sequence[int], cl: Clustering, check: bool = True,
                   dist2: BallDistances | None = None) -> PathPartition:
    """Split ``pi`` into segments ``pi[s_i .. t_i]`` with distinct host balls.

    The host of ``s_i`` is the lowest-index ball containing it, and ``t_i``
    is the last vertex of the path after ``s_i`` within distance ``2 r_i`` of
    the host center.
    """
    pi = tuple(pi)
    if check:
        if not is_path(g, pi):
            raise ValueError("input is not a path in the graph")
        if len(cl.owner) != g.n or min(cl.owner, default=0) < 0:
            raise RuntimeError("clustering does not cover every vertex")
    if dist2 is None:
        dist2 = BallDistances(g, cl, 2)
    segs: list[Segment] = []
    i = 0
    last = len(pi) - 1
    while i < last:
        h = cl.owner[pi[i]]
        dmap = dist2(h)
        j = last
        while pi[j] not in dmap:
            j -= 1
        if j <= i:  # unreachable for a genuine path: the next vertex is within r + 1
            raise RuntimeError("path segment made no progress")
        segs.append(Segment(i, j, h))
        i = j
    return PathPartition(pi, segs)


def check_partition(g: Graph, part: PathPartition, cl: Clustering,
                    dist4: BallDistances | None = None) -> list[str]:
    """Return violated invariants (empty when all hold)."""
    errs = []
    pi = part.path
    hosts = part.hosts()
    if len(set(hosts)) != len(hosts):
        errs.append("host balls not distinct")
    if part.segments:
        if part.segments[0].start != 0 or part.segments[-1].end != len(pi) - 1:
            errs.append("segments do not span the path")
        for a, b in zip(part.segments, part.segments[1:]):
            if a.end != b.start:
                errs.append("segments not contiguous")
    d4 = dist4 if dist4 is not None else BallDistances(g, cl, 4)
    for seg in part.segments:
        b = cl.balls[seg.host]
        dm = d4(seg.host)
        if pi[seg.start] not in b.members:
            errs.append(f"s_i not in host ball {seg.host}")
        if dm.get(pi[seg.end], 1 << 60) > 2 * b.radius:
            errs.append(f"t_i outside B(c, 2r) of ball {seg.host}")
        if any(v not in dm for v in pi[seg.start:seg.end + 1]):
            errs.append(f"segment leaves B(c, 4r) of ball {seg.host}")
    if cl.balls:
        rmin = min(b.radius for b in cl.balls)
        if part.l > (len(pi) - 1) / rmin + 1:
            errs.append(f"l={part.l} exceeds |pi|/R + 1")
    for seg in part.segments[:-1]:
        if seg.end - seg.start < cl.balls[seg.host].radius:
            errs.append("interior segment shorter than its host radius")
    return errs
