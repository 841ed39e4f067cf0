"""Box-covering partitioners: greedy coloring (GC), maximum excluded mass
burning (MEMB) and the center-including eccentricity algorithm (CIEA).

All radii and eccentricities are hop counts; edge weights are ignored here.
"""
from __future__ import annotations

import enum
import heapq
import json
import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .graph import Graph, GraphError, bfs_search


class Algorithm(str, enum.Enum):
    GC = "gc"
    MEMB = "memb"
    CIEA = "ciea"


class GCMode(str, enum.Enum):
    STRICT = "strict"  # same box iff hop distance <= r_b
    SONG = "song"  # same box iff hop distance <= 2 r_b, i.e. < l


class CoverError(GraphError):
    pass


@dataclass(frozen=True)
class Box:
    id: int
    nodes: frozenset[int]
    center: Optional[int] = None


@dataclass(frozen=True)
class BoxCover:
    r_b: int
    algorithm: Algorithm
    boxes: tuple[Box, ...]
    assignment: tuple[int, ...]
    gc_mode: Optional[GCMode] = None

    @property
    def l(self) -> int:
        return 2 * self.r_b + 1

    @property
    def node_count(self) -> int:
        return len(self.assignment)

    def __len__(self) -> int:
        return len(self.boxes)

    @classmethod
    def from_boxes(
        cls,
        node_count: int,
        r_b: int,
        algorithm: Algorithm | str,
        boxes: Iterable[Iterable[int]],
        centers: Optional[Iterable[Optional[int]]] = None,
        gc_mode: Optional[GCMode | str] = None,
    ) -> "BoxCover":
        """Assemble a cover from node groups, keeping box ids in given order.

        Nodes left out get assignment -1; a node listed twice keeps its
        first box. Neither case is rejected here, see :func:`validate_cover`.
        """
        groups = [frozenset(b) for b in boxes]
        centers = list(centers) if centers is not None else [None] * len(groups)
        assignment = [-1] * node_count
        for i, group in enumerate(groups):
            for v in group:
                if 0 <= v < node_count and assignment[v] == -1:
                    assignment[v] = i
        return cls(
            r_b=r_b,
            algorithm=Algorithm(algorithm),
            boxes=tuple(Box(i, group, c) for i, (group, c) in enumerate(zip(groups, centers))),
            assignment=tuple(assignment),
            gc_mode=GCMode(gc_mode) if gc_mode is not None else None,
        )


def _check_args(g: Graph, r_b: int) -> None:
    if g.node_count == 0:
        raise CoverError("cannot cover an empty graph")
    if not isinstance(r_b, int) or r_b < 1:
        raise CoverError(f"r_b must be a positive integer, got {r_b!r}")


# ---------------------------------------------------------------- GC


def gc_same_box_radius(r_b: int, mode: GCMode | str) -> int:
    """Largest hop distance two nodes may have and still share a GC box."""
    return r_b if GCMode(mode) is GCMode.STRICT else 2 * r_b


def dual_graph(g: Graph, r_b: int, mode: GCMode | str = GCMode.STRICT) -> list[set[int]]:
    """Explicit dual network: u, v adjacent iff they may not share a box.

    Quadratic in size; :func:`gc_cover` never materializes it.
    """
    limit = gc_same_box_radius(r_b, mode)
    n = g.node_count
    dual = [set() for _ in range(n)]
    for u in range(n):
        near = bfs_search(g.adjacency, u, max_depth=limit)
        for v in range(n):
            if v != u and v not in near:
                dual[u].add(v)
    return dual


def _coloring_order(n: int, order_seed: Optional[int]) -> list[int]:
    order = list(range(n))
    if order_seed is not None:
        random.Random(order_seed).shuffle(order)
    return order


def gc_cover(
    g: Graph,
    r_b: int,
    mode: GCMode | str = GCMode.STRICT,
    order_seed: Optional[int] = None,
) -> BoxCover:
    """Greedy coloring of the dual network.

    Node ``v`` may take color ``c`` iff no node already colored ``c`` is a
    dual neighbor, i.e. iff the whole color class lies inside the hop ball
    of ``v``. Counting colored nodes inside that ball is enough to find the
    smallest admissible color without building the dual graph.
    """
    _check_args(g, r_b)
    mode = GCMode(mode)
    limit = gc_same_box_radius(r_b, mode)
    n = g.node_count
    color = [-1] * n
    class_size: list[int] = []
    for v in _coloring_order(n, order_seed):
        counts = Counter(color[u] for u in bfs_search(g.adjacency, v, max_depth=limit) if color[u] >= 0)
        fits = [c for c, k in counts.items() if k == class_size[c]]
        if fits:
            c = min(fits)
            class_size[c] += 1
        else:
            c = len(class_size)
            class_size.append(1)
        color[v] = c

    # box ids ordered by smallest member
    first_seen: dict[int, int] = {}
    for v in range(n):
        first_seen.setdefault(color[v], len(first_seen))
    groups: list[list[int]] = [[] for _ in first_seen]
    for v in range(n):
        groups[first_seen[color[v]]].append(v)
    return BoxCover(
        r_b=r_b,
        algorithm=Algorithm.GC,
        gc_mode=mode,
        boxes=tuple(Box(i, frozenset(nodes)) for i, nodes in enumerate(groups)),
        assignment=tuple(first_seen[c] for c in color),
    )


# ---------------------------------------------------------------- MEMB


def excluded_mass(g: Graph, node: int, r_b: int, covered: Iterable[int] = ()) -> int:
    """Uncovered nodes within full-graph hop distance ``r_b`` of ``node``."""
    g.check_node(node)
    covered = covered if isinstance(covered, (set, frozenset)) else set(covered)
    return sum(1 for v in bfs_search(g.adjacency, node, max_depth=r_b) if v not in covered)


def memb_cover(g: Graph, r_b: int) -> BoxCover:
    """Repeatedly center a box on the uncovered node of largest excluded mass
    (lowest id on ties) and cover the residual BFS ball of radius ``r_b``.
    """
    _check_args(g, r_b)
    adj = g.adjacency
    n = g.node_count
    balls: dict[int, list[int]] = {}

    def ball(v: int) -> list[int]:
        b = balls.get(v)
        if b is None:
            b = balls[v] = list(bfs_search(adj, v, max_depth=r_b))
        return b

    mass = [len(ball(v)) for v in range(n)]
    heap = [(-m, v) for v, m in enumerate(mass)]
    heapq.heapify(heap)
    uncovered = set(range(n))
    boxes: list[Box] = []
    assignment = [-1] * n
    while uncovered:
        neg, c = heapq.heappop(heap)
        if c not in uncovered:
            continue
        if -neg != mass[c]:
            # masses only shrink, so a stale key re-enters at its true rank
            heapq.heappush(heap, (-mass[c], c))
            continue
        members = bfs_search(adj, c, allowed=uncovered, max_depth=r_b)
        box_id = len(boxes)
        for v in members:
            uncovered.discard(v)
            assignment[v] = box_id
            for w in ball(v):
                mass[w] -= 1
        boxes.append(Box(box_id, frozenset(members), c))
    return BoxCover(r_b=r_b, algorithm=Algorithm.MEMB, boxes=tuple(boxes), assignment=tuple(assignment))


# ---------------------------------------------------------------- CIEA


def peripheral_node(adjacency, component: Iterable[int], allowed=None) -> tuple[int, dict[int, int]]:
    """Lowest-id node of maximum eccentricity in a connected node set.

    Eccentricity bounds from each BFS (``ecc(w) >= max(d, ecc(v) - d)`` and
    ``ecc(w) <= ecc(v) + d``) prune the search, so usually only a handful of
    BFS runs are needed instead of one per node. Returns the node and its
    hop distances.
    """
    nodes = sorted(component)
    allowed = frozenset(nodes) if allowed is None else allowed
    size = len(nodes)
    lo = dict.fromkeys(nodes, 0)
    hi = dict.fromkeys(nodes, size)
    exact: dict[int, int] = {}
    fields: dict[int, dict[int, int]] = {}

    def run(v: int) -> int:
        d = bfs_search(adjacency, v, allowed=allowed)
        if len(d) != size:
            raise GraphError("eccentricity undefined on disconnected scope")
        e = max(d.values())
        exact[v] = e
        fields[v] = d
        for w, dw in d.items():
            if w not in exact:
                lo[w] = max(lo[w], dw, e - dw)
                hi[w] = min(hi[w], e + dw)
        lo[v] = hi[v] = e
        return e

    pick_high = True
    while True:
        d_lo = max(lo.values())
        d_hi = max(hi.values())
        if d_lo == d_hi:
            break
        pending = [w for w in nodes if w not in exact]
        if pick_high:
            v = max(pending, key=lambda w: (hi[w], -w))
        else:
            v = min(pending, key=lambda w: (lo[w], w))
        pick_high = not pick_high
        run(v)

    diameter = d_lo
    for w in nodes:
        if hi[w] < diameter:
            continue
        e = exact[w] if w in exact else run(w)
        if e == diameter:
            return w, fields[w]
    raise AssertionError("unreachable: some node attains the maximum")


def ciea_cover(g: Graph, r_b: int) -> BoxCover:
    """Cover each connected component in turn. Within a residual fragment the
    center sits at hop distance ``min(r_b, ecc)`` from the fragment's most
    eccentric node, chosen to cover the most uncovered nodes.
    """
    _check_args(g, r_b)
    adj = g.adjacency
    n = g.node_count
    uncovered = set(range(n))
    assignment = [-1] * n
    boxes: list[Box] = []

    components: list[list[int]] = []
    seen: set[int] = set()
    for v in range(n):
        if v not in seen:
            comp = bfs_search(adj, v)
            seen.update(comp)
            components.append(sorted(comp))

    for comp in components:
        remaining = set(comp)
        while remaining:
            fragment = bfs_search(adj, min(remaining), allowed=uncovered)
            e, from_e = peripheral_node(adj, fragment, allowed=uncovered)
            k = min(r_b, max(from_e.values()))
            best: Optional[dict[int, int]] = None
            center = -1
            for cand in sorted(v for v, d in from_e.items() if d == k):
                ball = bfs_search(adj, cand, allowed=uncovered, max_depth=r_b)
                if best is None or len(ball) > len(best):
                    best, center = ball, cand
            box_id = len(boxes)
            for v in best:
                uncovered.discard(v)
                remaining.discard(v)
                assignment[v] = box_id
            boxes.append(Box(box_id, frozenset(best), center))
    return BoxCover(r_b=r_b, algorithm=Algorithm.CIEA, boxes=tuple(boxes), assignment=tuple(assignment))


def cover(
    g: Graph,
    algorithm: Algorithm | str,
    r_b: int,
    gc_mode: GCMode | str = GCMode.STRICT,
    order_seed: Optional[int] = None,
) -> BoxCover:
    algorithm = Algorithm(algorithm)
    if algorithm is Algorithm.GC:
        return gc_cover(g, r_b, gc_mode, order_seed)
    if algorithm is Algorithm.MEMB:
        return memb_cover(g, r_b)
    return ciea_cover(g, r_b)


# ---------------------------------------------------------------- validation


def hop_matrix(g: Graph) -> np.ndarray:
    """All-pairs hop distances (``inf`` when unreachable)."""
    n = g.node_count
    rows = [u for u, v, _ in g.edges]
    cols = [v for u, v, _ in g.edges]
    m = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    return shortest_path(m, directed=False, unweighted=True)


def validate_cover(g: Graph, cover: BoxCover, hops: Optional[np.ndarray] = None) -> list[str]:
    """List every way ``cover`` fails to be a well-formed cover of ``g``.

    ``hops`` may carry a precomputed :func:`hop_matrix` when validating many
    covers of one graph.
    """
    n = g.node_count
    if cover.node_count != n:
        raise CoverError(f"cover describes {cover.node_count} nodes, graph has {n}")
    problems: list[str] = []

    membership: list[list[int]] = [[] for _ in range(n)]
    for box in cover.boxes:
        if not box.nodes:
            problems.append(f"empty box: {box.id}")
        for v in sorted(box.nodes):
            if not 0 <= v < n:
                problems.append(f"box {box.id} holds unknown node {v}")
            else:
                membership[v].append(box.id)
        if box.center is not None and box.center not in box.nodes:
            problems.append(f"center outside box: box {box.id} center {box.center}")
    for v, owners in enumerate(membership):
        if not owners:
            problems.append(f"uncovered: {v}")
        elif len(owners) > 1:
            problems.append(f"multiply assigned: {v}")
        elif cover.assignment[v] != owners[0]:
            problems.append(f"assignment mismatch: {v} -> {cover.assignment[v]}, listed in box {owners[0]}")
    if [b.id for b in cover.boxes] != list(range(len(cover.boxes))):
        problems.append("box ids are not 0..k-1 in order")

    if hops is None:
        hops = hop_matrix(g)
    r_b = cover.r_b
    if cover.algorithm is Algorithm.GC:
        limit = gc_same_box_radius(r_b, cover.gc_mode or GCMode.STRICT)
        for box in cover.boxes:
            problems.extend(_pairwise_excess(box, hops, limit, "diameter violation"))
        return problems

    covered: set[int] = set()
    for box in cover.boxes:
        members = sorted(v for v in box.nodes if 0 <= v < n)
        if not members:
            continue
        if len(bfs_search(g.adjacency, members[0], allowed=box.nodes)) != len(members):
            problems.append(f"disconnected box: {box.id}")
        problems.extend(_pairwise_excess(box, hops, 2 * r_b, "radius violation"))
        if box.center is None:
            problems.append(f"missing center: box {box.id}")
        elif box.center in box.nodes and box.center not in covered:
            residual = bfs_search(
                g.adjacency, box.center, allowed=_Complement(covered), max_depth=r_b
            )
            far = [v for v in members if v not in residual]
            if far:
                problems.append(
                    f"radius violation: box {box.id} nodes {far} beyond residual depth {r_b} of center {box.center}"
                )
        covered.update(members)
    return problems


class _Complement:
    """Membership test for 'not in the given set'."""

    def __init__(self, excluded: set[int]):
        self.excluded = excluded

    def __contains__(self, v: int) -> bool:
        return v not in self.excluded


def _pairwise_excess(box: Box, hops: np.ndarray, limit: int, label: str) -> list[str]:
    members = np.array(sorted(box.nodes), dtype=np.intp)
    if len(members) < 2 or members.min() < 0 or members.max() >= hops.shape[0]:
        return []
    sub = hops[np.ix_(members, members)]
    bad = np.argwhere(np.triu(sub > limit, k=1))
    if not len(bad):
        return []
    i, j = bad[0]
    u, v = int(members[i]), int(members[j])
    return [f"{label}: box {box.id} pair ({u}, {v}) at hop distance {sub[i, j]:g} > {limit}"]


# ---------------------------------------------------------------- JSON


def cover_to_dict(cover: BoxCover) -> dict:
    return {
        "algorithm": cover.algorithm.value,
        "rb": cover.r_b,
        "l": cover.l,
        "gc_mode": cover.gc_mode.value if cover.gc_mode is not None else None,
        "boxes": [
            {"id": b.id, "center": b.center, "nodes": sorted(b.nodes)} for b in cover.boxes
        ],
        "assignment": list(cover.assignment),
    }


def cover_from_dict(doc: dict) -> BoxCover:
    boxes = sorted(doc["boxes"], key=lambda b: b["id"])
    return BoxCover(
        r_b=int(doc["rb"]),
        algorithm=Algorithm(doc["algorithm"]),
        gc_mode=GCMode(doc["gc_mode"]) if doc.get("gc_mode") is not None else None,
        boxes=tuple(Box(int(b["id"]), frozenset(b["nodes"]), b["center"]) for b in boxes),
        assignment=tuple(doc["assignment"]),
    )


def cover_to_json(cover: BoxCover) -> str:
    return json.dumps(cover_to_dict(cover), separators=(",", ":"))
