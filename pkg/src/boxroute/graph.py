"""Undirected weighted graphs plus the shortest-path primitives used by the
covering and routing layers.

Node ids are always contiguous integers ``0..n-1``. Ids read from an edge
list are remapped (ascending order preserved) and the original ids are kept
in :attr:`Graph.labels` so they can be echoed back in outputs.

Unreachable distances are reported as :data:`UNREACHABLE` (``math.inf``).
"""
from __future__ import annotations

import heapq
import math
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, TextIO

import numpy as np

UNREACHABLE = math.inf

# Node ids must stay addressable as 32-bit signed integers.
MAX_NODE_COUNT = 2**31 - 1
APSP_CAP = 512


class GraphError(ValueError):
    pass


class EdgeListError(GraphError):
    def __init__(self, message: str, line: int):
        super().__init__(f"{message} at line {line}")
        self.line = line


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph with strictly positive edge weights.

    ``edges`` holds each edge once as ``(u, v, w)`` with ``u < v``, sorted.
    ``adjacency[u]`` is a tuple of ``(neighbor, weight)`` pairs sorted by
    neighbor id. Equality is structural and ignores ``labels``.
    """

    node_count: int
    edges: tuple[tuple[int, int, float], ...]
    adjacency: tuple[tuple[tuple[int, float], ...], ...] = field(repr=False, compare=False)
    labels: tuple[int, ...] = field(repr=False, compare=False)
    _weights: dict = field(repr=False, compare=False)

    @classmethod
    def from_edges(
        cls,
        node_count: int,
        edges: Iterable[tuple],
        labels: Optional[Iterable[int]] = None,
    ) -> "Graph":
        if node_count < 0:
            raise GraphError("node_count must be non-negative")
        if node_count > MAX_NODE_COUNT:
            raise GraphError(f"node_count {node_count} exceeds {MAX_NODE_COUNT}")
        weights: dict[tuple[int, int], float] = {}
        for e in edges:
            if len(e) == 2:
                u, v = e
                w = 1.0
            else:
                u, v, w = e
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise GraphError(f"edge ({u}, {v}) references a node outside 0..{node_count - 1}")
            if u == v:
                raise GraphError(f"self-loop on node {u}")
            if not (w > 0 and math.isfinite(w)):
                raise GraphError(f"edge ({u}, {v}) has invalid weight {w!r}")
            key = (u, v) if u < v else (v, u)
            if key in weights:
                raise GraphError(f"duplicate edge ({u}, {v})")
            weights[key] = w

        adj: list[list[tuple[int, float]]] = [[] for _ in range(node_count)]
        for (u, v), w in weights.items():
            adj[u].append((v, w))
            adj[v].append((u, w))
        for row in adj:
            row.sort()
        if labels is None:
            labels = range(node_count)
        labels = tuple(int(x) for x in labels)
        if len(labels) != node_count:
            raise GraphError("labels must have one entry per node")
        return cls(
            node_count=node_count,
            edges=tuple(sorted((u, v, w) for (u, v), w in weights.items())),
            adjacency=tuple(tuple(row) for row in adj),
            labels=labels,
            _weights=weights,
        )

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def weight(self, u: int, v: int) -> float:
        """Weight of edge ``{u, v}``; raises ``KeyError`` if absent."""
        return self._weights[(u, v) if u < v else (v, u)]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._weights

    def neighbors(self, u: int) -> list[int]:
        return [v for v, _ in self.adjacency[u]]

    def check_node(self, v: int) -> None:
        if not (isinstance(v, (int, np.integer)) and 0 <= v < self.node_count):
            raise GraphError(f"invalid node id {v!r} for graph with {self.node_count} nodes")


@dataclass(frozen=True)
class DistanceField:
    source: int
    dist: tuple[float, ...]
    pred: tuple[Optional[int], ...]

    def path_to(self, target: int) -> Optional[list[int]]:
        if self.dist[target] == UNREACHABLE:
            return None
        path = [target]
        while path[-1] != self.source:
            path.append(self.pred[path[-1]])
        path.reverse()
        return path


@dataclass(frozen=True)
class HopField:
    source: int
    hops: tuple[float, ...]  # int hop counts, UNREACHABLE for unreachable nodes


# ---------------------------------------------------------------- edge lists


def parse_edge_list(text: str | TextIO) -> Graph:
    """Parse ``u v [w]`` lines into a :class:`Graph`.

    ``#`` starts a comment line and blank lines are skipped. Input ids may
    be any non-negative integers; they are remapped to ``0..n-1`` in
    ascending order and the originals are kept as ``labels``.
    """
    if not isinstance(text, str):
        text = text.read()
    raw: list[tuple[int, int, float]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise EdgeListError(f"malformed line {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(f"non-integer node id in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise EdgeListError(f"negative node id in {line!r}", lineno)
        w = 1.0
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise EdgeListError(f"malformed weight {parts[2]!r}", lineno) from None
            if not (w > 0 and math.isfinite(w)):
                raise EdgeListError(f"weight must be positive and finite, got {parts[2]!r}", lineno)
        if u == v:
            raise EdgeListError(f"self-loop on node {u}", lineno)
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise EdgeListError("duplicate edge", lineno)
        seen.add(key)
        raw.append((u, v, w))

    ids = sorted({x for u, v, _ in raw for x in (u, v)})
    index = {x: i for i, x in enumerate(ids)}
    return Graph.from_edges(
        len(ids),
        ((index[u], index[v], w) for u, v, w in raw),
        labels=ids,
    )


def _format_weight(w: float) -> str:
    if w.is_integer() and abs(w) < 2**53:
        return str(int(w))
    return repr(w)


def write_edge_list(g: Graph, sink: Optional[TextIO] = None) -> str:
    """Serialize ``g`` as ``u v w`` lines, ``u < v``, lexicographically sorted.

    Isolated nodes have no representation in the format and are dropped.
    """
    out = "".join(f"{u} {v} {_format_weight(w)}\n" for u, v, w in g.edges)
    if sink is not None:
        sink.write(out)
    return out


# ---------------------------------------------------------------- generators


def ternary_tree_size(depth: int) -> int:
    return (3 ** (depth + 1) - 1) // 2


def gen_ternary_tree(depth: int) -> Graph:
    """Complete rooted 3-ary tree; node ``i`` has children ``3i+1..3i+3``."""
    if depth < 0:
        raise GraphError("depth must be non-negative")
    n = ternary_tree_size(depth)
    if n > MAX_NODE_COUNT:
        raise GraphError(f"depth {depth} gives {n} nodes, above the {MAX_NODE_COUNT} limit")
    return Graph.from_edges(n, (((i - 1) // 3, i) for i in range(1, n)))


def gen_random_graph(n: int, p: float, seed: int = 0) -> Graph:
    """Largest connected component of a seeded G(n, p) graph, unit weights.

    Ties between equally large components go to the one holding the lowest
    node id.
    """
    if n < 0:
        raise GraphError("n must be non-negative")
    if not 0.0 <= p <= 1.0:
        raise GraphError("p must lie in [0, 1]")
    rng = random.Random(seed)
    adj: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                adj[i].append(j)
                adj[j].append(i)

    best: list[int] = []
    seen = [False] * n
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        if len(comp) > len(best):
            best = comp
    best.sort()
    index = {x: i for i, x in enumerate(best)}
    edges = [(index[u], index[v]) for u in best for v in adj[u] if u < v]
    return Graph.from_edges(len(best), edges)


# ---------------------------------------------------------------- search


def dijkstra_search(
    adjacency,
    source: int,
    target: Optional[int] = None,
    allowed=None,
) -> tuple[dict[int, float], dict[int, int]]:
    """Heap Dijkstra over ``adjacency``; returns ``(dist, pred)`` dicts.

    Only nodes in ``allowed`` (when given) are visited. Stops once
    ``target`` is settled. Equal-cost relaxations keep the lower
    predecessor id.
    """
    dist = {source: 0.0}
    pred: dict[int, int] = {}
    done = set()
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == target:
            break
        for v, w in adjacency[u]:
            if v in done or (allowed is not None and v not in allowed):
                continue
            nd = d + w
            old = dist.get(v)
            if old is None or nd < old:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
            elif nd == old and u < pred[v]:
                pred[v] = u
    return dist, pred


def bfs_search(adjacency, source: int, allowed=None, max_depth: Optional[int] = None) -> dict[int, int]:
    """Hop distances from ``source``, optionally within ``allowed`` and up
    to ``max_depth`` hops."""
    hops = {source: 0}
    frontier = [source]
    depth = 0
    while frontier and (max_depth is None or depth < max_depth):
        depth += 1
        nxt = []
        for u in frontier:
            for v, _ in adjacency[u]:
                if v not in hops and (allowed is None or v in allowed):
                    hops[v] = depth
                    nxt.append(v)
        frontier = nxt
    return hops


def _check_scope(g: Graph, source: int, restrict) -> Optional[frozenset]:
    g.check_node(source)
    if restrict is None:
        return None
    restrict = restrict if isinstance(restrict, (set, frozenset)) else frozenset(restrict)
    if source not in restrict:
        raise GraphError(f"source {source} is outside the restricted node set")
    return restrict


def dijkstra_sssp(g: Graph, source: int, restrict: Optional[Iterable[int]] = None) -> DistanceField:
    allowed = _check_scope(g, source, restrict)
    dist, pred = dijkstra_search(g.adjacency, source, allowed=allowed)
    return DistanceField(
        source=source,
        dist=tuple(dist.get(v, UNREACHABLE) for v in range(g.node_count)),
        pred=tuple(pred.get(v) for v in range(g.node_count)),
    )


def bfs_hops(g: Graph, source: int, restrict: Optional[Iterable[int]] = None) -> HopField:
    allowed = _check_scope(g, source, restrict)
    hops = bfs_search(g.adjacency, source, allowed=allowed)
    return HopField(source=source, hops=tuple(hops.get(v, UNREACHABLE) for v in range(g.node_count)))


def eccentricities(g: Graph, restrict: Optional[Iterable[int]] = None) -> dict[int, int]:
    """Hop eccentricity of every node in scope, by BFS from each node.

    The scope (all of ``g`` or the subgraph induced by ``restrict``) must
    be connected.
    """
    scope = sorted(range(g.node_count) if restrict is None else set(restrict))
    for v in scope:
        g.check_node(v)
    allowed = None if restrict is None else frozenset(scope)
    ecc = {}
    for v in scope:
        hops = bfs_search(g.adjacency, v, allowed=allowed)
        if len(hops) != len(scope):
            raise GraphError("eccentricity undefined on disconnected scope")
        ecc[v] = max(hops.values())
    return ecc


def apsp_oracle(g: Graph, cap: int = APSP_CAP) -> np.ndarray:
    """Floyd-Warshall all-pairs distances; ``inf`` marks unreachable pairs."""
    n = g.node_count
    if n > cap:
        raise GraphError(f"apsp_oracle limited to {cap} nodes, graph has {n}")
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v, w in g.edges:
        d[u, v] = d[v, u] = w
    for k in range(n):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    return d

