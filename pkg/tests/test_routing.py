import json
import random

import pytest

from boxroute.covering import Algorithm, BoxCover, GCMode, cover, memb_cover
from boxroute.graph import Graph, GraphError, apsp_oracle, dijkstra_sssp, gen_ternary_tree
from boxroute.routing import (
    Method,
    NoRouteError,
    bcr_route,
    build_supergraph,
    compute_stretch,
    dijkstra_route,
    remove_loops,
    route_to_dict,
    route_to_json,
)

from conftest import assert_valid_route, connected_er, cycle_graph, random_weighted_graph


def singleton_cover(g: Graph) -> BoxCover:
    return BoxCover.from_boxes(g.node_count, 1, "gc", [{v} for v in range(g.node_count)], gc_mode="strict")


def all_simple_paths(g: Graph, s: int, t: int):
    stack = [(s, [s])]
    while stack:
        u, path = stack.pop()
        if u == t:
            yield path
            continue
        for v in g.neighbors(u):
            if v not in path:
                stack.append((v, path + [v]))


# ------------------------------------------------------------------ super-graph


def test_supergraph_p5(p5):
    sg = build_supergraph(p5, memb_cover(p5, 1))
    assert sg.node_count == 2
    assert list(sg.edges) == [(0, 1)]
    edge = sg.edges[(0, 1)]
    assert edge.connecting == ((2, 3, 1.0),) and edge.weight == 1.0


def test_supergraph_singleton_is_identity():
    g = random_weighted_graph(5, n_max=8)
    sg = build_supergraph(g, singleton_cover(g))
    assert sorted((a, b, e.weight) for (a, b), e in sg.edges.items()) == list(g.edges)


def test_supergraph_single_box(p5):
    one = BoxCover.from_boxes(5, 2, "memb", [range(5)], centers=[2])
    sg = build_supergraph(p5, one)
    assert sg.node_count == 1 and sg.edges == {}


def test_supergraph_rejects_invalid_cover(p5):
    bad = BoxCover.from_boxes(5, 1, "gc", [{0, 4}, {1}, {2}, {3}], gc_mode="strict")
    with pytest.raises(GraphError, match="invalid cover"):
        build_supergraph(p5, bad)


@pytest.mark.parametrize("seed", range(15))
def test_supergraph_invariants(seed):
    g = random_weighted_graph(seed, n_max=30, integer_weights=False)
    if g.node_count == 0:
        return
    c = cover(g, Algorithm.MEMB, 1)
    sg = build_supergraph(g, c)
    box = c.assignment
    crossing = {tuple(sorted((box[u], box[v]))) for u, v, _ in g.edges if box[u] != box[v]}
    assert set(sg.edges) == crossing
    for (a, b), e in sg.edges.items():
        assert a < b
        assert e.weight == min(w for _, _, w in e.connecting)
        assert list(e.connecting) == sorted(e.connecting)
        assert all(box[u] == a and box[v] == b for u, v, _ in e.connecting)


# ------------------------------------------------------------------ routes


def test_bcr_p5(p5):
    sg = build_supergraph(p5, memb_cover(p5, 1))
    r = bcr_route(p5, sg, 0, 4)
    assert r.nodes == (0, 1, 2, 3, 4)
    assert r.cost == 4.0 and r.box_sequence == (0, 1) and r.fallbacks == 0
    assert r.method is Method.BCR
    assert compute_stretch(p5, r).stretch == 1.0


def test_same_endpoint():
    g = random_weighted_graph(11)
    sg = build_supergraph(g, cover(g, "ciea", 1))
    for s in range(g.node_count):
        r = bcr_route(g, sg, s, s)
        assert r.nodes == (s,) and r.cost == 0
        assert compute_stretch(g, r).stretch == 1.0
        assert dijkstra_route(g, s, s).nodes == (s,)


def test_dijkstra_route_p5(p5):
    r = dijkstra_route(p5, 0, 4)
    assert r.nodes == (0, 1, 2, 3, 4) and r.cost == 4
    assert r.method is Method.DIJKSTRA and r.box_sequence is None
    assert compute_stretch(p5, r).stretch == 1.0


def test_no_route():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(NoRouteError):
        dijkstra_route(g, 0, 3)
    sg = build_supergraph(g, cover(g, "memb", 1))
    with pytest.raises(NoRouteError):
        bcr_route(g, sg, 0, 3)


def test_dijkstra_prefers_lower_predecessor():
    # two equal-cost routes 0-1-3 and 0-2-3
    g = Graph.from_edges(4, [(0, 2), (0, 1), (2, 3), (1, 3)])
    assert dijkstra_route(g, 0, 3).nodes == (0, 1, 3)
    assert dijkstra_route(g, 3, 0).nodes == (3, 1, 0)


def test_c6_stretch_two():
    # only the SONG reading admits {0,1,2} as one box at r_b = 1
    c6 = cycle_graph(6)
    cv = BoxCover.from_boxes(6, 1, "gc", [{0, 1, 2}, {3}, {4}, {5}], gc_mode="song")
    sg = build_supergraph(c6, cv)
    r = compute_stretch(c6, bcr_route(c6, sg, 4, 0))
    assert r.nodes == (4, 3, 2, 1, 0)
    costs = sorted(len(p) - 1 for p in all_simple_paths(c6, 4, 0))
    assert costs == [2, 4]
    assert r.cost == costs[-1] and r.stretch == 2.0
    worst = max(compute_stretch(c6, bcr_route(c6, sg, s, t)).stretch for s in range(6) for t in range(6))
    assert worst == 2.0


def test_remove_loops():
    assert remove_loops([0, 1, 2, 1, 3]) == [0, 1, 3]
    assert remove_loops([0, 1, 2, 3, 1, 4, 2, 5]) == [0, 1, 4, 2, 5]
    assert remove_loops([5, 6, 5]) == [5]
    assert remove_loops([1, 2, 3]) == [1, 2, 3]


def test_fallback_on_disconnected_box():
    # siblings 4 and 5 share a GC box without their parent 1
    g = gen_ternary_tree(2)
    c = cover(g, Algorithm.GC, 2, GCMode.STRICT)
    box = next(b for b in c.boxes if {4, 5} <= b.nodes)
    assert 1 not in box.nodes
    r = bcr_route(g, build_supergraph(g, c), 4, 5)
    assert r.nodes == (4, 1, 5) and r.fallbacks == 1
    assert r.box_sequence == (c.assignment[4],)


@pytest.mark.parametrize("seed", range(50))
def test_bcr_never_beats_oracle(seed):
    g = random_weighted_graph(seed, n_max=8)
    d = apsp_oracle(g)
    for alg in Algorithm:
        for mode in GCMode:
            sg = build_supergraph(g, cover(g, alg, 1, mode)) if g.node_count else None
            for s in range(g.node_count):
                for t in range(g.node_count):
                    if d[s, t] == float("inf"):
                        with pytest.raises(NoRouteError):
                            bcr_route(g, sg, s, t)
                        continue
                    r = bcr_route(g, sg, s, t)
                    assert_valid_route(g, r, s, t)
                    assert r.cost >= d[s, t] - 1e-9
                    if s != t:
                        assert compute_stretch(g, r).stretch >= 1 - 1e-12


@pytest.mark.parametrize("seed", range(10))
def test_singleton_cover_matches_dijkstra(seed):
    g = connected_er(seed, 5, 64)
    sg = build_supergraph(g, singleton_cover(g))
    for s in range(g.node_count):
        dist = dijkstra_sssp(g, s).dist
        for t in range(g.node_count):
            r = bcr_route(g, sg, s, t)
            assert r.cost == dist[t] == dijkstra_route(g, s, t).cost


@pytest.mark.parametrize("depth", [2, 3])
@pytest.mark.parametrize("alg", list(Algorithm))
@pytest.mark.parametrize("r_b", [1, 2, 3])
def test_tree_routes_are_the_unique_path(depth, alg, r_b):
    g = gen_ternary_tree(depth)
    sg = build_supergraph(g, cover(g, alg, r_b))
    for s in range(g.node_count):
        for t in range(g.node_count):
            r = bcr_route(g, sg, s, t)
            assert_valid_route(g, r, s, t)
            assert r.nodes == dijkstra_route(g, s, t).nodes


@pytest.mark.parametrize("seed", range(8))
def test_random_er_routes_valid(seed):
    g = connected_er(seed, 20, 120)
    rng = random.Random(seed)
    for alg in Algorithm:
        sg = build_supergraph(g, cover(g, alg, 2))
        for _ in range(30):
            s, t = rng.randrange(g.node_count), rng.randrange(g.node_count)
            r = bcr_route(g, sg, s, t)
            assert_valid_route(g, r, s, t)
            assert r.cost >= dijkstra_route(g, s, t).cost
            assert r == bcr_route(g, sg, s, t)


def test_route_json_layout(p5):
    sg = build_supergraph(p5, memb_cover(p5, 1))
    text = route_to_json(compute_stretch(p5, bcr_route(p5, sg, 0, 4)))
    assert text == (
        '{"method":"bcr","s":0,"t":4,"nodes":[0,1,2,3,4],"cost":4.0,'
        '"box_sequence":[0,1],"fallbacks":0,"stretch":1.0}'
    )
    doc = json.loads(route_to_json(compute_stretch(p5, dijkstra_route(p5, 4, 1))))
    assert doc["method"] == "dijkstra" and doc["box_sequence"] is None


def test_route_json_echoes_labels():
    g = Graph.from_edges(3, [(0, 1), (1, 2)], labels=[10, 20, 30])
    doc = route_to_dict(dijkstra_route(g, 0, 2), g.labels)
    assert doc["s"] == 10 and doc["t"] == 30 and doc["nodes"] == [10, 20, 30]
