"""Exact k-nearest-neighbor queries with deterministic tie-breaking.

Distances are Euclidean.  Ties are broken by ascending dataset index, so a
query's neighbor list is a pure function of the data.  A kd-tree
(:class:`scipy.spatial.cKDTree`) proposes candidates; distances are always
recomputed here, and any query whose cut-off is ambiguous is re-answered by
a brute-force scan, so results match the scan exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .exceptions import EmptyDataset, KTooLarge

__all__ = ["NeighborIndex", "NeighborList", "build_index", "knn_query", "brute_force_knn"]

# Relative gap under which two candidate distances are treated as a possible tie.
_TIE_RTOL = 1e-9


@dataclass(frozen=True)
class NeighborList:
    """The ``k`` nearest points of a query and the distance ``r_next`` to the next one."""

    indices: np.ndarray
    distances: np.ndarray
    r_next: float


def _distances(X, q):
    diff = X - q
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def _order(idx, dist):
    order = np.lexsort((idx, dist))
    return idx[order], dist[order]


def brute_force_knn(X, query, m):
    """The ``m`` nearest rows of ``X`` to ``query`` by full scan, ties by index."""
    X = np.asarray(X, dtype=float)
    q = np.asarray(query, dtype=float).reshape(-1)
    dist = _distances(X, q)
    idx, dist = _order(np.arange(X.shape[0]), dist)
    return idx[:m], dist[:m]


class NeighborIndex:
    """Immutable index over an ``(n, d)`` point set."""

    def __init__(self, X, use_tree=True):
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if X.ndim != 2 or X.shape[0] == 0:
            raise EmptyDataset("cannot index an empty dataset")
        if not np.all(np.isfinite(X)):
            raise ValueError("points must be finite")
        self.X = X
        self.X.setflags(write=False)
        self._tree = cKDTree(X) if use_tree and X.shape[0] > 32 else None

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def dim(self):
        return self.X.shape[1]

    def __len__(self):
        return self.n

    def nearest(self, queries, m):
        """Indices and distances of the ``m`` nearest points for each query row.

        Returns two ``(q, m)`` arrays sorted by ``(distance, index)``.
        """
        Q = np.asarray(queries, dtype=float)
        if Q.ndim == 1:
            Q = Q[None, :] if Q.size == self.dim else Q[:, None]
        if Q.shape[1] != self.dim:
            raise ValueError(f"queries have dimension {Q.shape[1]}, expected {self.dim}")
        if not 1 <= m <= self.n:
            raise KTooLarge(f"requested {m} neighbors from {self.n} points")
        out_idx = np.empty((Q.shape[0], m), dtype=np.intp)
        out_dist = np.empty((Q.shape[0], m))
        if self._tree is None:
            for r, q in enumerate(Q):
                out_idx[r], out_dist[r] = brute_force_knn(self.X, q, m)
            return out_idx, out_dist

        # One extra candidate exposes ties at the cut-off.
        extra = min(m + 1, self.n)
        _, cand = self._tree.query(Q, k=extra)
        cand = cand.reshape(Q.shape[0], extra)
        for r, q in enumerate(Q):
            idx = cand[r]
            dist = _distances(self.X[idx], q)
            idx, dist = _order(idx, dist)
            if extra > m and dist[m] - dist[m - 1] <= _TIE_RTOL * max(dist[m], 1e-300):
                idx, dist = brute_force_knn(self.X, q, m)
            else:
                idx, dist = idx[:m], dist[:m]
            out_idx[r], out_dist[r] = idx, dist
        return out_idx, out_dist


def build_index(X, use_tree=True):
    return NeighborIndex(X, use_tree=use_tree)


def knn_query(index, query, k):
    """The ``k`` nearest neighbors of ``query`` plus the ``(k+1)``-st distance."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if k + 1 > index.n:
        raise KTooLarge(f"k={k} needs at least {k + 1} points, index has {index.n}")
    idx, dist = index.nearest(np.asarray(query, dtype=float).reshape(1, -1), k + 1)
    return NeighborList(indices=idx[0, :k], distances=dist[0, :k], r_next=float(dist[0, k]))
