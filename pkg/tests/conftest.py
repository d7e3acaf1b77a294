"""Shared helpers: random topology generation and the algorithm roster."""

import random

import pytest

from tcnet.algorithms import parse_algorithm
from tcnet.topology import Topology

ALGORITHM_SPECS = [
    "maxpower",
    "ktc(k=1)",
    "ktc(k=1.41)",
    "ktc(k=2)",
    "xtc",
    "gg",
    "rng",
    "lktc(k=1.41,a=1.5)",
    "yao(cones=4)",
    "yao(cones=6)",
    "ektc(k=1.41)",
]

STRICT_DOMINANCE_SPECS = [s for s in ALGORITHM_SPECS
                          if not s.startswith("yao")]


def make_random_topology(rng: random.Random, max_nodes: int = 6,
                         max_links: int = 12,
                         integer_weight_bias: float = 0.5) -> Topology:
    """Random simple digraph with random attributes.

    A bias towards small integer weights produces frequent weight ties,
    which exercises the id tie-breaking.
    """
    topo = Topology()
    for _ in range(rng.randint(2, max_nodes)):
        topo.add_node((rng.uniform(0, 100), rng.uniform(0, 100)),
                      rng.uniform(1, 200), rng.randint(-1, 5))
    ids = list(topo.nodes)
    pairs = [(a, b) for a in ids for b in ids if a != b]
    rng.shuffle(pairs)
    for a, b in pairs[:rng.randint(0, max_links)]:
        if rng.random() < integer_weight_bias:
            weight = float(rng.randint(1, 10))
        else:
            weight = rng.uniform(1.0, 50.0)
        topo.add_link(a, b, weight)
    return topo


def make_connected_topology(rng: random.Random, nodes: int = 8,
                            extra_links: int = 10) -> Topology:
    """Random topology whose full graph is connected in both directions:
    a bidirectional spanning tree plus random extra links."""
    topo = Topology()
    for _ in range(nodes):
        topo.add_node((rng.uniform(0, 100), rng.uniform(0, 100)),
                      rng.uniform(1, 200), rng.randint(0, 5))
    ids = list(topo.nodes)
    for i in range(1, len(ids)):
        other = ids[rng.randrange(i)]
        weight = rng.uniform(1.0, 50.0)
        topo.add_link(ids[i], other, weight)
        topo.add_link(other, ids[i], weight)
    pairs = [(a, b) for a in ids for b in ids
             if a != b and topo.link_between(a, b) is None]
    rng.shuffle(pairs)
    for a, b in pairs[:extra_links]:
        topo.add_link(a, b, rng.uniform(1.0, 50.0))
    return topo


# verdict lines recorded by the acceptance tests, echoed after the run
# (regular prints are swallowed by pytest's output capture)
acceptance_results: list = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_results:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_results:
            terminalreporter.write_line(line)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260826)


def all_algorithms():
    return [parse_algorithm(spec) for spec in ALGORITHM_SPECS]
