import math
import random

import pytest

from boxroute.graph import Graph, gen_random_graph


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def random_weighted_graph(seed: int, n_max: int = 8, integer_weights: bool = True) -> Graph:
    """Connected-ish random graph with random weights.

    Integer weights keep every path sum exact in floating point, so distance
    comparisons between different summation orders can be exact.
    """
    rng = random.Random(seed)
    n = rng.randint(1, n_max)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < 0.45:
                w = float(rng.randint(1, 9)) if integer_weights else rng.uniform(0.1, 5.0)
                edges.append((u, v, w))
    return Graph.from_edges(n, edges)


def connected_er(seed: int, n_lo: int = 5, n_hi: int = 200) -> Graph:
    """Seeded G(n, p) with p above the connectivity threshold (largest component)."""
    rng = random.Random(seed)
    n = rng.randint(n_lo, n_hi)
    p = min(1.0, 1.5 * max(1.0, math.log(n)) / n)
    return gen_random_graph(n, p, seed)


def assert_valid_route(g: Graph, route, s: int, t: int) -> None:
    nodes = route.nodes
    assert nodes[0] == s and nodes[-1] == t
    assert len(set(nodes)) == len(nodes), "route repeats a node"
    cost = 0.0
    for u, v in zip(nodes, nodes[1:]):
        assert g.has_edge(u, v), f"({u}, {v}) is not an edge"
        cost += g.weight(u, v)
    assert cost == route.cost


@pytest.fixture
def p5() -> Graph:
    return path_graph(5)


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def report():
    def _report(criterion: int, ok: bool, detail: str) -> None:
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
        _ACCEPTANCE[criterion] = line
        print(line)

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[key])
