"""Independent distance oracles built on scipy's csgraph routines."""
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path


def adjacency(n, edges):
    edges = list(edges)
    if not edges:
        return csr_matrix((n, n))
    a = np.array(edges)
    data = np.ones(2 * len(a))
    rows = np.concatenate([a[:, 0], a[:, 1]])
    cols = np.concatenate([a[:, 1], a[:, 0]])
    return csr_matrix((data, (rows, cols)), shape=(n, n))


def apsp(n, edges, sources=None):
    """Hop distances (``inf`` when unreachable) from ``sources`` (default all)."""
    return shortest_path(adjacency(n, edges), unweighted=True, directed=False, indices=sources)


def pair_errors(g, h_edges, pairs):
    """``dist_H - dist_G`` per pair using unweighted Dijkstra over both graphs."""
    pairs = list(pairs)
    if not pairs:
        return np.array([])
    srcs = sorted({s for s, _ in pairs})
    pos = {s: i for i, s in enumerate(srcs)}
    dg = apsp(g.n, g.edges, srcs)
    dh = apsp(g.n, h_edges, srcs)
    return np.array([dh[pos[s], t] - dg[pos[s], t] for s, t in pairs if np.isfinite(dg[pos[s], t])])
