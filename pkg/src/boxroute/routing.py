"""Hierarchical box-covering routing (BCR) and the flat Dijkstra baseline.

A query first finds a box sequence on the quotient super-graph, then walks
it, picking at each hop the crossing edge closest to the current node, and
finally stitches the intra-box legs into one simple path.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace
from typing import Optional

from .covering import BoxCover, validate_cover
from .graph import Graph, GraphError, dijkstra_search


class NoRouteError(GraphError):
    pass


class Method(str, enum.Enum):
    DIJKSTRA = "dijkstra"
    BCR = "bcr"


@dataclass(frozen=True)
class SuperEdge:
    a: int
    b: int
    weight: float
    connecting: tuple[tuple[int, int, float], ...]  # (u, v, w), u in box a, v in box b


@dataclass(frozen=True)
class SuperGraph:
    base: Graph
    cover: BoxCover
    edges: dict  # (a, b) with a < b -> SuperEdge
    adjacency: tuple  # per box: ((neighbor box, weight), ...)
    box_nodes: tuple[frozenset[int], ...]
    # (from box, to box) -> crossing edges oriented from -> to, sorted by (u, v)
    crossings: dict

    @property
    def node_count(self) -> int:
        return len(self.box_nodes)


@dataclass(frozen=True)
class Route:
    s: int
    t: int
    nodes: tuple[int, ...]
    cost: float
    method: Method
    box_sequence: Optional[tuple[int, ...]] = None
    fallbacks: int = 0
    stretch: Optional[float] = None


def build_supergraph(g: Graph, cover: BoxCover, check: bool = True) -> SuperGraph:
    if check:
        problems = validate_cover(g, cover)
        if problems:
            raise GraphError("invalid cover: " + "; ".join(problems[:5]))
    box_of = cover.assignment
    crossing: dict[tuple[int, int], list[tuple[int, int, float]]] = {}
    for u, v, w in g.edges:
        a, b = box_of[u], box_of[v]
        if a == b:
            continue
        crossing.setdefault((a, b), []).append((u, v, w))
        crossing.setdefault((b, a), []).append((v, u, w))
    crossings = {key: tuple(sorted(lst)) for key, lst in crossing.items()}

    edges = {}
    adj: list[list[tuple[int, float]]] = [[] for _ in cover.boxes]
    for (a, b), lst in sorted(crossings.items()):
        if a < b:
            weight = min(w for _, _, w in lst)
            edges[(a, b)] = SuperEdge(a, b, weight, lst)
            adj[a].append((b, weight))
            adj[b].append((a, weight))
    for row in adj:
        row.sort()
    return SuperGraph(
        base=g,
        cover=cover,
        edges=edges,
        adjacency=tuple(tuple(row) for row in adj),
        box_nodes=tuple(b.nodes for b in cover.boxes),
        crossings=crossings,
    )


def _trace(pred: dict[int, int], source: int, target: int) -> list[int]:
    path = [target]
    while path[-1] != source:
        path.append(pred[path[-1]])
    path.reverse()
    return path


def _full_path(g: Graph, s: int, t: int) -> list[int]:
    dist, pred = dijkstra_search(g.adjacency, s, target=t)
    if t not in dist:
        raise NoRouteError(f"no route from {s} to {t}")
    return _trace(pred, s, t)


def remove_loops(nodes: list[int]) -> list[int]:
    """Cut out the cycle between repeated occurrences of a node."""
    out: list[int] = []
    where: dict[int, int] = {}
    for v in nodes:
        i = where.get(v)
        if i is not None:
            for dropped in out[i + 1:]:
                del where[dropped]
            del out[i + 1:]
        else:
            where[v] = len(out)
            out.append(v)
    return out


def path_cost(g: Graph, nodes) -> float:
    cost = 0.0
    for u, v in zip(nodes, nodes[1:]):
        cost += g.weight(u, v)
    return cost


def dijkstra_route(g: Graph, s: int, t: int) -> Route:
    g.check_node(s)
    g.check_node(t)
    nodes = _full_path(g, s, t)
    return Route(s=s, t=t, nodes=tuple(nodes), cost=path_cost(g, nodes), method=Method.DIJKSTRA)


def bcr_route(g: Graph, sg: SuperGraph, s: int, t: int) -> Route:
    g.check_node(s)
    g.check_node(t)
    adj = g.adjacency
    box_of = sg.cover.assignment
    bs, bt = box_of[s], box_of[t]
    fallbacks = 0

    if bs == bt:
        dist, pred = dijkstra_search(adj, s, target=t, allowed=sg.box_nodes[bs])
        if t in dist:
            nodes = _trace(pred, s, t)
        else:
            nodes = _full_path(g, s, t)
            fallbacks += 1
        return Route(s, t, tuple(nodes), path_cost(g, nodes), Method.BCR, (bs,), fallbacks)

    sdist, spred = dijkstra_search(sg.adjacency, bs, target=bt)
    if bt not in sdist:
        # quotient lost connectivity; route flat if the base graph allows it
        nodes = _full_path(g, s, t)
        return Route(s, t, tuple(nodes), path_cost(g, nodes), Method.BCR, None, 1)
    seq = _trace(spred, bs, bt)

    walk = [s]
    cur = s
    for a, b in zip(seq, seq[1:]):
        dist, pred = dijkstra_search(adj, cur, allowed=sg.box_nodes[a])
        best = None
        for u, v, w in sg.crossings[(a, b)]:
            du = dist.get(u)
            if du is not None and (best is None or du + w < best[0]):
                best = (du + w, u, v)
        if best is not None:
            _, u, v = best
            leg = _trace(pred, cur, u)
        else:
            fallbacks += 1
            dist, pred = dijkstra_search(adj, cur)
            for u, v, w in sg.crossings[(a, b)]:
                du = dist.get(u)
                if du is not None and (best is None or du + w < best[0]):
                    best = (du + w, u, v)
            if best is None:
                raise NoRouteError(f"no route from {s} to {t}")
            _, u, v = best
            leg = _trace(pred, cur, u)
        walk.extend(leg[1:])
        walk.append(v)
        cur = v

    dist, pred = dijkstra_search(adj, cur, target=t, allowed=sg.box_nodes[bt])
    if t in dist:
        leg = _trace(pred, cur, t)
    else:
        fallbacks += 1
        leg = _full_path(g, cur, t)
    walk.extend(leg[1:])

    nodes = remove_loops(walk)
    return Route(s, t, tuple(nodes), path_cost(g, nodes), Method.BCR, tuple(seq), fallbacks)


def compute_stretch(g: Graph, route: Route) -> Route:
    if route.s == route.t:
        return replace(route, stretch=1.0)
    if route.method is Method.DIJKSTRA:
        return replace(route, stretch=1.0)
    best = dijkstra_route(g, route.s, route.t).cost
    return replace(route, stretch=route.cost / best)


def route_to_dict(route: Route, labels=None) -> dict:
    """JSON-ready dict; ``labels`` maps contiguous ids back to input ids."""
    name = (lambda v: v) if labels is None else (lambda v: labels[v])
    return {
        "method": route.method.value,
        "s": name(route.s),
        "t": name(route.t),
        "nodes": [name(v) for v in route.nodes],
        "cost": route.cost,
        "box_sequence": list(route.box_sequence) if route.box_sequence is not None else None,
        "fallbacks": route.fallbacks,
        "stretch": route.stretch,
    }


def route_to_json(route: Route, labels=None) -> str:
    return json.dumps(route_to_dict(route, labels), separators=(",", ":"))
