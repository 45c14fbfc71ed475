"""Graph-Laplacian interpolation for semi-supervised learning.

Labeled vertices keep their labels; every unlabeled vertex ``i`` satisfies

    sum_j w_ij (f_i - f_j) + kappa^2 f_i = 0,
    equivalently  f_i = z_i / (kappa^2 + z_i) * (1/z_i) sum_j w_ij f_j,

with ``z_i`` the weighted degree.  ``kappa = 0`` is label propagation (the
harmonic extension of the labels).  Labels follow the ``{-1, +1}``
convention of the fully connected analysis, though any reals work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .exceptions import ConfigError, NegativeKappa, NoLabels, SingularSystem

__all__ = [
    "LabeledGraph",
    "GraphInterpolant",
    "solve_graph_interpolant",
    "fully_connected_eta",
    "hoeffding_excess_bound",
    "knn_graph",
    "complete_graph",
    "read_edge_list",
    "read_labels",
    "DENSE_LIMIT",
]

DENSE_LIMIT = 2000


@dataclass
class LabeledGraph:
    """Symmetric nonnegative weights, a labeled vertex subset and ``kappa``."""

    weights: sp.csr_matrix
    labeled: np.ndarray
    labels: np.ndarray
    kappa: float = 0.0

    def __post_init__(self):
        W = sp.csr_matrix(self.weights, dtype=float)
        if W.shape[0] != W.shape[1]:
            raise ConfigError(f"weight matrix must be square, got {W.shape}")
        if W.nnz and (W.data.min() < 0 or not np.all(np.isfinite(W.data))):
            raise ConfigError("edge weights must be finite and nonnegative")
        if abs(W - W.T).max() > 1e-12 * max(1.0, abs(W).max()):
            raise ConfigError("weight matrix must be symmetric")
        W.setdiag(0.0)
        W.eliminate_zeros()
        self.weights = W
        self.labeled = np.asarray(self.labeled, dtype=int).reshape(-1)
        self.labels = np.asarray(self.labels, dtype=float).reshape(-1)
        if self.labeled.size == 0:
            raise NoLabels("at least one vertex must be labeled")
        if self.labeled.size != self.labels.size:
            raise ConfigError("labeled vertices and labels differ in length")
        if len(np.unique(self.labeled)) != self.labeled.size:
            raise ConfigError("a vertex is labeled twice")
        if self.labeled.min() < 0 or self.labeled.max() >= W.shape[0]:
            raise ConfigError("labeled vertex id out of range")
        if self.kappa < 0:
            raise NegativeKappa(f"kappa must be nonnegative, got {self.kappa}")

    @property
    def n(self):
        return self.weights.shape[0]

    @property
    def degrees(self):
        return np.asarray(self.weights.sum(axis=1)).ravel()

    def laplacian(self):
        """Unnormalized Laplacian ``D - W``."""
        return sp.diags(self.degrees) - self.weights


@dataclass(frozen=True)
class GraphInterpolant:
    values: np.ndarray
    iterations: int = 0

    def residual(self, graph):
        """Largest ``|((D - W) f)_i + kappa^2 f_i|`` over unlabeled vertices."""
        r = graph.laplacian() @ self.values + graph.kappa ** 2 * self.values
        mask = np.ones(graph.n, dtype=bool)
        mask[graph.labeled] = False
        return float(np.abs(r[mask]).max()) if mask.any() else 0.0

    def to_csv(self, path=None):
        lines = ["vertex,eta_hat"] + [f"{i},{v!r}" for i, v in enumerate(self.values.tolist())]
        text = "\n".join(lines) + "\n"
        if path is None:
            return text
        Path(path).write_text(text)
        return None


def _check_components(graph, unlabeled):
    _, comp = connected_components(graph.weights, directed=False)
    has_label = np.zeros(comp.max() + 1, dtype=bool)
    has_label[comp[graph.labeled]] = True
    bad = unlabeled[~has_label[comp[unlabeled]]]
    if bad.size:
        raise SingularSystem(
            f"kappa = 0 and vertices {bad[:10].tolist()} lie in components without labels"
        )


def solve_graph_interpolant(graph, tol=1e-10, max_iter=100000, method=None):
    """Interpolate labels over ``graph``.

    ``method`` is ``"direct"`` (dense solve) or ``"jacobi"`` (the fixed-point
    iteration); by default direct for ``n <= DENSE_LIMIT``.
    """
    n = graph.n
    f = np.zeros(n)
    f[graph.labeled] = graph.labels
    unlabeled = np.setdiff1d(np.arange(n), graph.labeled)
    if unlabeled.size == 0:
        return GraphInterpolant(f)
    if graph.kappa == 0:
        _check_components(graph, unlabeled)
    if method is None:
        method = "direct" if n <= DENSE_LIMIT else "jacobi"

    W = graph.weights
    z = graph.degrees
    k2 = graph.kappa ** 2
    W_ul = W[unlabeled][:, graph.labeled]
    W_uu = W[unlabeled][:, unlabeled]
    b = W_ul @ graph.labels

    if method == "direct":
        A = np.diag(z[unlabeled] + k2) - W_uu.toarray()
        f[unlabeled] = scipy.linalg.solve(A, b, assume_a="pos")
        return GraphInterpolant(f)
    if method != "jacobi":
        raise ConfigError(f"unknown method {method!r}")

    denom = z[unlabeled] + k2
    # Isolated unlabeled vertices with kappa > 0 are pinned at zero.
    safe = np.where(denom > 0, denom, 1.0)
    fu = np.zeros(unlabeled.size)
    for it in range(1, max_iter + 1):
        fu = np.where(denom > 0, (W_uu @ fu + b) / safe, 0.0)
        resid = np.abs(denom * fu - W_uu @ fu - b).max()
        if resid <= tol:
            break
    f[unlabeled] = fu
    return GraphInterpolant(f, iterations=it)


def fully_connected_eta(n, n_plus, n_minus, kappa):
    """Unlabeled value on the complete unit-weight graph: ``(n+ - n-) / (k + kappa^2)``."""
    k = n_plus + n_minus
    if k < 1:
        raise NoLabels("at least one labeled vertex is required")
    if n <= k:
        raise ConfigError("the graph needs at least one unlabeled vertex")
    if kappa < 0:
        raise NegativeKappa(f"kappa must be nonnegative, got {kappa}")
    return (n_plus - n_minus) / (k + kappa ** 2)


def hoeffding_excess_bound(p, k):
    """``exp(-2 (p - 1/2)^2 k)``, bounding ``P(n+ - n- < 0)`` for ``k`` labels."""
    if not 0 <= p <= 1:
        raise ConfigError("p must lie in [0, 1]")
    if k < 1:
        raise ConfigError("k must be at least 1")
    return math.exp(-2.0 * (p - 0.5) ** 2 * k)


def complete_graph(n):
    W = np.ones((n, n)) - np.eye(n)
    return sp.csr_matrix(W)


def knn_graph(X, k, weight="unit"):
    """Symmetrized ``k``-nearest-neighbor graph over the rows of ``X``."""
    from .neighbors import build_index

    X = np.asarray(X, dtype=float)
    index = build_index(X)
    idx, dist = index.nearest(X, k + 1)
    rows = np.repeat(np.arange(X.shape[0]), k)
    cols = idx[:, 1:].ravel()
    if weight == "unit":
        vals = np.ones(rows.size)
    else:
        d = dist[:, 1:].ravel()
        vals = np.exp(-(d / np.median(d)) ** 2)
    W = sp.csr_matrix((vals, (rows, cols)), shape=(X.shape[0],) * 2)
    return W.maximum(W.T)


def read_edge_list(path, n=None):
    """Read ``i j w`` lines into a symmetric sparse weight matrix.

    An edge may be listed in either direction, or both with equal weight.
    """
    edges = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) not in (2, 3):
            raise ConfigError(f"bad edge line: {line!r}")
        i, j = int(parts[0]), int(parts[1])
        w = float(parts[2]) if len(parts) == 3 else 1.0
        key = (min(i, j), max(i, j))
        if key in edges and edges[key] != w:
            raise ConfigError(f"edge {key} listed with weights {edges[key]} and {w}")
        edges[key] = w
    top = max((max(k) for k in edges), default=-1) + 1
    size = top if n is None else n
    if size < top:
        raise ConfigError(f"edge list mentions vertex {top - 1} but n={n}")
    rows = [i for i, j in edges] + [j for i, j in edges]
    cols = [j for i, j in edges] + [i for i, j in edges]
    vals = list(edges.values()) * 2
    return sp.csr_matrix((vals, (rows, cols)), shape=(size, size))


def read_labels(path):
    ids, ys = [], []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        ids.append(int(parts[0]))
        ys.append(float(parts[1]))
    return np.array(ids, dtype=int), np.array(ys)
