"""Whole-network metrics, centrality scores, and degree-tail fitting.

All measures treat edges as unweighted presence and paths as directed with
unit lengths.  Conventions that the literature leaves open are pinned here:

* density uses the active vertices (those touching at least one edge) as
  its primary basis; the all-vertices figure is reported alongside.
* characteristic path length averages over ordered pairs at finite
  directed distance only.
* closeness is reach-adjusted: ``r**2 / ((n_active - 1) * sum_of_dists)``
  over the ``r`` vertices that reach (or are reached, for the out variant).
* the directed clustering coefficient counts triangles of every
  orientation pattern, normalized per vertex by
  ``d_tot * (d_tot - 1) - 2 * d_reciprocal``, averaged where that is > 0.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .graph import DomainError, Graph
from .spectral import NumericalError

CENTRALITY_METRICS = (
    "in_degree",
    "out_degree",
    "in_closeness",
    "out_closeness",
    "betweenness",
    "hub",
    "authority",
    "pagerank",
)

MAX_ITERATIONS = 10_000
POWER_TOL = 1e-12


class DegenerateFitError(NumericalError):
    """The degree distribution has no spread to fit."""


@dataclass(frozen=True)
class MetricsReport:
    vertex_count: int
    active_vertex_count: int
    edge_count: int
    density: float
    density_all_vertices: float
    reciprocity: float
    diameter: int
    characteristic_path_length: float
    mean_clustering_directed: float

    def as_dict(self) -> dict[str, float | int]:
        return {
            "vertex_count": self.vertex_count,
            "active_vertex_count": self.active_vertex_count,
            "edge_count": self.edge_count,
            "density": self.density,
            "density_all_vertices": self.density_all_vertices,
            "reciprocity": self.reciprocity,
            "diameter": self.diameter,
            "characteristic_path_length": self.characteristic_path_length,
            "mean_clustering_directed": self.mean_clustering_directed,
        }


@dataclass(frozen=True)
class CentralityTable:
    """Per-vertex scores for the eight centrality metrics."""

    vertices: tuple[str, ...]
    scores: dict[str, dict[str, float]]


@dataclass(frozen=True)
class DegreeFit:
    """Maximum-entropy exponential fit of the total-degree distribution.

    The fitted law is ``exp(-lam * (d - d_min))`` on ``[d_min, inf)`` with
    the rate matched to the empirical mean, so the fitted CCDF is exactly 1
    at the minimum observed degree.
    """

    degrees: tuple[int, ...]
    lam: float
    d_min: int
    mean: float
    ccdf_points: tuple[tuple[int, float, float], ...]


def _bfs_distances(adjacency: list[list[int]], source: int) -> list[int]:
    dist = [-1] * len(adjacency)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _out_adjacency(g: Graph) -> list[list[int]]:
    idx = g.index
    return [[idx[w] for w in g.out_map[v]] for v in g.vertices]


def _clustering_directed(g: Graph) -> float:
    n = len(g.vertices)
    a = np.zeros((n, n))
    idx = g.index
    for u, v in g.weights:
        a[idx[u], idx[v]] = 1.0
    s = a + a.T
    triangles = np.einsum("ii->i", s @ s @ s) / 2.0
    d_tot = a.sum(axis=0) + a.sum(axis=1)
    d_bi = (a * a.T).sum(axis=1)
    denom = d_tot * (d_tot - 1.0) - 2.0 * d_bi
    mask = denom > 0
    if not mask.any():
        return 0.0
    return float((triangles[mask] / denom[mask]).mean())


def metrics_report(g: Graph) -> MetricsReport:
    """The seven summary metrics of one network.

    Raises :class:`~unires.graph.DomainError` for an edgeless graph (the
    path-based quantities would be undefined).
    """
    m = g.edge_count
    if m == 0:
        raise DomainError("metrics need at least one edge")
    n = len(g.vertices)
    n_active = len(g.active_vertices())
    reciprocal = sum(1 for (u, v) in g.weights if (v, u) in g.weights)
    adjacency = _out_adjacency(g)
    total = 0
    finite_pairs = 0
    diameter = 0
    for source in range(n):
        if not adjacency[source]:
            continue
        dist = _bfs_distances(adjacency, source)
        for target, d in enumerate(dist):
            if target != source and d > 0:
                total += d
                finite_pairs += 1
                if d > diameter:
                    diameter = d
    return MetricsReport(
        vertex_count=n,
        active_vertex_count=n_active,
        edge_count=m,
        density=m / (n_active * (n_active - 1)),
        density_all_vertices=m / (n * (n - 1)) if n > 1 else 0.0,
        reciprocity=reciprocal / m,
        diameter=diameter,
        characteristic_path_length=total / finite_pairs,
        mean_clustering_directed=_clustering_directed(g),
    )


def _betweenness(adjacency: list[list[int]]) -> list[float]:
    # Brandes accumulation; path counts stay integral, so only the final
    # dependency sums are floating point.
    n = len(adjacency)
    scores = [0.0] * n
    for source in range(n):
        if not adjacency[source]:
            continue
        sigma = [0] * n
        sigma[source] = 1
        dist = [-1] * n
        dist[source] = 0
        preds: list[list[int]] = [[] for _ in range(n)]
        order: list[int] = []
        queue = deque([source])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in adjacency[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
                if dist[w] == dist[u] + 1:
                    sigma[w] += sigma[u]
                    preds[w].append(u)
        delta = [0.0] * n
        for w in reversed(order):
            for u in preds[w]:
                delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w])
            if w != source:
                scores[w] += delta[w]
    return scores


def _hits(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = a.shape[0]
    hub = np.full(n, 1.0 / math.sqrt(n))
    auth = np.full(n, 1.0 / math.sqrt(n))
    for _ in range(MAX_ITERATIONS):
        new_auth = a.T @ hub
        norm = np.linalg.norm(new_auth)
        if norm > 0:
            new_auth /= norm
        new_hub = a @ new_auth
        norm = np.linalg.norm(new_hub)
        if norm > 0:
            new_hub /= norm
        delta = max(
            np.linalg.norm(new_auth - auth) / max(np.linalg.norm(new_auth), 1e-300),
            np.linalg.norm(new_hub - hub) / max(np.linalg.norm(new_hub), 1e-300),
        )
        hub, auth = new_hub, new_auth
        if delta <= POWER_TOL:
            return hub, auth
    raise NumericalError("hubs/authorities power iteration did not converge")


def _pagerank(a: np.ndarray, damping: float) -> np.ndarray:
    n = a.shape[0]
    out_degree = a.sum(axis=1)
    dangling = out_degree == 0
    transition = np.divide(a, out_degree[:, None], out=np.zeros_like(a), where=out_degree[:, None] > 0)
    x = np.full(n, 1.0 / n)
    teleport = (1.0 - damping) / n
    for _ in range(MAX_ITERATIONS):
        new_x = damping * (transition.T @ x) + teleport
        new_x += damping * x[dangling].sum() / n
        if np.abs(new_x - x).sum() <= POWER_TOL:
            return new_x
        x = new_x
    raise NumericalError("pagerank power iteration did not converge")


def centrality_suite(g: Graph, pagerank_damping: float = 0.85) -> CentralityTable:
    """All eight centrality scores for every vertex.

    Raises :class:`~unires.graph.DomainError` on an edgeless graph and
    :class:`~unires.spectral.NumericalError` if a power iteration fails to
    converge within 10^4 steps.
    """
    if g.edge_count == 0:
        raise DomainError("centrality needs at least one edge")
    if not 0.0 < pagerank_damping < 1.0:
        raise DomainError(f"pagerank damping must be in (0, 1), got {pagerank_damping!r}")
    names = g.vertices
    n = len(names)
    n_active = len(g.active_vertices())
    adjacency = _out_adjacency(g)

    sum_out = [0] * n
    reach_out = [0] * n
    sum_in = [0] * n
    reach_in = [0] * n
    for source in range(n):
        if not adjacency[source]:
            continue
        dist = _bfs_distances(adjacency, source)
        for target, d in enumerate(dist):
            if target != source and d > 0:
                sum_out[source] += d
                reach_out[source] += 1
                sum_in[target] += d
                reach_in[target] += 1

    def closeness(reach: list[int], sums: list[int], i: int) -> float:
        if sums[i] == 0:
            return 0.0
        return reach[i] * reach[i] / ((n_active - 1) * sums[i])

    a = np.zeros((n, n))
    for u, v in g.weights:
        a[g.index[u], g.index[v]] = 1.0
    hub, auth = _hits(a)
    pagerank = _pagerank(a, pagerank_damping)
    betweenness = _betweenness(adjacency)

    scores = {
        "in_degree": {v: float(len(g.in_map[v])) for v in names},
        "out_degree": {v: float(len(g.out_map[v])) for v in names},
        "in_closeness": {v: closeness(reach_in, sum_in, i) for i, v in enumerate(names)},
        "out_closeness": {v: closeness(reach_out, sum_out, i) for i, v in enumerate(names)},
        "betweenness": {v: betweenness[i] for i, v in enumerate(names)},
        "hub": {v: float(hub[i]) for i, v in enumerate(names)},
        "authority": {v: float(auth[i]) for i, v in enumerate(names)},
        "pagerank": {v: float(pagerank[i]) for i, v in enumerate(names)},
    }
    return CentralityTable(names, scores)


def top_k(table: CentralityTable, k: int) -> dict[str, list[tuple[int, str, float]]]:
    """Per metric, the ``k`` best vertices as (rank, name, score) rows.

    Ties break by vertex name; ``k`` beyond the vertex count truncates.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    ranked: dict[str, list[tuple[int, str, float]]] = {}
    for metric in CENTRALITY_METRICS:
        by_score = sorted(table.scores[metric].items(), key=lambda it: (-it[1], it[0]))
        ranked[metric] = [(rank, name, score) for rank, (name, score) in enumerate(by_score[:k], start=1)]
    return ranked


def degree_fit(g: Graph) -> DegreeFit:
    """Exponential tail fit of the total-degree distribution.

    Matches the empirical mean on ``[d_min, inf)``, giving the rate
    ``1 / (mean - d_min)``.  Raises :class:`DegenerateFitError` when all
    degrees coincide.
    """
    degrees = sorted(g.degree(v) for v in g.vertices)
    if len(set(degrees)) < 2:
        raise DegenerateFitError("all degrees are equal; nothing to fit")
    d_min = degrees[0]
    mean = sum(degrees) / len(degrees)
    lam = 1.0 / (mean - d_min)
    n = len(degrees)
    points = []
    at_least = n
    i = 0
    for d in sorted(set(degrees)):
        while i < n and degrees[i] < d:
            i += 1
            at_least -= 1
        points.append((d, at_least / n, math.exp(-lam * (d - d_min))))
    return DegreeFit(tuple(degrees), lam, d_min, mean, tuple(points))
