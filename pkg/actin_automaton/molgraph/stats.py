"""
Degree and distance statistics of a molecular graph.

Distances are unweighted shortest paths inside the largest connected
component, computed by BFS from every source in chunks. Chunks may run
in parallel; they are reduced in source order so the result does not
depend on the worker count.
"""

import logging

import numpy as np
from pydantic import BaseModel
from scipy.sparse import csgraph

from actin_automaton.molgraph.graph import MolecularGraph
from actin_automaton.utils.pool import map_ordered

logger = logging.getLogger(__name__)

CHUNK = 256


# =========================
# SCHEMA
# =========================

class GraphStats(BaseModel):
    node_count: int
    edge_count: int
    degree_min: int
    degree_max: int
    degree_mean: float
    degree_stddev: float
    degree_median: float
    degree_histogram: dict[int, int]
    component_count: int
    largest_component_size: int
    diameter_nodes: int
    mean_distance: float
    median_distance: float
    diameter_endpoints: tuple[int, int]
    diameter_path: list[int]

    def to_rows(self) -> list[tuple[str, str]]:
        """Flat key,value pairs for the stats CSV."""
        rows = [
            ("node_count", str(self.node_count)),
            ("edge_count", str(self.edge_count)),
            ("degree_min", str(self.degree_min)),
            ("degree_max", str(self.degree_max)),
            ("degree_mean", f"{self.degree_mean:.6f}"),
            ("degree_stddev", f"{self.degree_stddev:.6f}"),
            ("degree_median", f"{self.degree_median:g}"),
        ]
        rows += [(f"degree_hist_{d}", str(c)) for d, c in sorted(self.degree_histogram.items())]
        rows += [
            ("component_count", str(self.component_count)),
            ("largest_component_size", str(self.largest_component_size)),
            ("diameter_nodes", str(self.diameter_nodes)),
            ("mean_distance", f"{self.mean_distance:.6f}"),
            ("median_distance", f"{self.median_distance:g}"),
            ("diameter_source", str(self.diameter_endpoints[0])),
            ("diameter_target", str(self.diameter_endpoints[1])),
            ("diameter_path", " ".join(map(str, self.diameter_path))),
        ]
        return rows


# ======================================================
# COMPONENTS
# ======================================================

def largest_component(g: MolecularGraph) -> tuple[np.ndarray, int]:
    """Sorted member ids of the largest component (ties: smallest member id) and the component count."""
    count, labels = csgraph.connected_components(g.matrix, directed=False)
    sizes = np.bincount(labels, minlength=count)
    first_member = np.full(count, g.node_count, dtype=np.int64)
    np.minimum.at(first_member, labels, np.arange(g.node_count))

    best = max(range(count), key=lambda c: (sizes[c], -first_member[c]))
    if count > 1:
        logger.warning(
            "Graph is disconnected, distances use the largest component | components=%s largest=%s sizes=%s",
            count, int(sizes[best]), sorted(sizes.tolist(), reverse=True)[:10],
        )
    return np.flatnonzero(labels == best), count


def bfs_distances(g: MolecularGraph, source: int) -> np.ndarray:
    """Hop distances from source; -1 for unreachable nodes."""
    dist = csgraph.shortest_path(g.matrix, directed=False, unweighted=True, indices=[source])[0]
    out = np.full(g.node_count, -1, dtype=np.int64)
    finite = np.isfinite(dist)
    out[finite] = dist[finite].astype(np.int64)
    return out


def shortest_path_between(g: MolecularGraph, source: int, target: int, dist_from_source: np.ndarray | None = None) -> list[int]:
    """
    One concrete shortest path, rebuilt from target back to source by
    always stepping to the smallest-id neighbour one hop closer.
    """
    dist = bfs_distances(g, source) if dist_from_source is None else dist_from_source
    if dist[target] < 0:
        raise ValueError(f"node {target} is not reachable from {source}")

    path = [target]
    current = target
    while current != source:
        for w in g.neighbors(current):
            if dist[w] == dist[current] - 1:
                current = int(w)
                break
        path.append(current)
    path.reverse()
    return path


def eccentricity_nodes(g: MolecularGraph, node: int) -> int:
    """Node count of the longest shortest path starting at ``node``."""
    return int(bfs_distances(g, node).max()) + 1


# ======================================================
# DISTANCE SCAN
# ======================================================

def _scan_chunk(args) -> tuple[np.ndarray, int, tuple[int, int]]:
    matrix, sources = args
    dist = csgraph.shortest_path(matrix, directed=False, unweighted=True, indices=sources)
    dist = dist.astype(np.int64)
    n = dist.shape[1]

    hist = np.zeros(n + 1, dtype=np.int64)
    best_d, best_pair = -1, (0, 0)
    for row, s in enumerate(sources):
        upper = dist[row, s + 1:]
        if upper.size == 0:
            continue
        hist += np.bincount(upper, minlength=n + 1)[: n + 1]
        t = int(np.argmax(upper))
        d = int(upper[t])
        if d > best_d:
            best_d, best_pair = d, (int(s), int(s + 1 + t))
    return hist, best_d, best_pair


def distance_summary(g: MolecularGraph, workers: int = 1) -> dict:
    """Histogram-based distance statistics of a connected graph."""
    n = g.node_count
    sources = np.arange(n)
    chunks = [(g.matrix, sources[i:i + CHUNK]) for i in range(0, n, CHUNK)]
    parts = map_ordered(_scan_chunk, chunks, workers)

    hist = np.zeros(n + 1, dtype=np.int64)
    best_d, best_pair = -1, (0, 0)
    for part_hist, d, pair in parts:
        hist += part_hist
        if d > best_d:
            best_d, best_pair = d, pair

    pairs = int(hist.sum())
    if pairs == 0:
        return {"mean": 0.0, "median": 0.0, "max": 0, "pair": (0, 0), "pairs": 0}

    values = np.arange(len(hist))
    mean = float((values * hist).sum() / pairs)

    cum = np.cumsum(hist)
    lo = int(np.searchsorted(cum, (pairs - 1) // 2 + 1))
    hi = int(np.searchsorted(cum, pairs // 2 + 1))
    median = (lo + hi) / 2

    return {"mean": mean, "median": median, "max": best_d, "pair": best_pair, "pairs": pairs}


# ======================================================
# COMPUTE_STATS
# ======================================================

def compute_stats(g: MolecularGraph, workers: int = 1) -> GraphStats:
    if g.node_count == 0:
        raise ValueError("compute_stats needs a non-empty graph")

    deg = g.degrees
    values, counts = np.unique(deg, return_counts=True)

    members, component_count = largest_component(g)
    core = g.subgraph(members) if len(members) < g.node_count else g
    summary = distance_summary(core, workers)

    if summary["pairs"]:
        s_local, t_local = summary["pair"]
        path_local = shortest_path_between(core, s_local, t_local)
    else:
        s_local = t_local = 0
        path_local = [0]

    path = members[path_local].tolist()
    endpoints = (int(members[s_local]), int(members[t_local]))

    return GraphStats(
        node_count=g.node_count,
        edge_count=g.edge_count,
        degree_min=int(deg.min()),
        degree_max=int(deg.max()),
        degree_mean=float(deg.mean()),
        degree_stddev=float(deg.std()),
        degree_median=float(np.median(deg)),
        degree_histogram={int(v): int(c) for v, c in zip(values, counts)},
        component_count=component_count,
        largest_component_size=len(members),
        diameter_nodes=len(path),
        mean_distance=summary["mean"],
        median_distance=summary["median"],
        diameter_endpoints=endpoints,
        diameter_path=path,
    )
