"""Pytest configuration and shared fixtures."""

from fractions import Fraction

import pytest

from core.generator import generate_random_topology
from core.topology import ConnectivityGraph, dump_topology
from models import TopologySpec


def make_chain(hops, capacity=12):
    """Chain 0-1-...-hops with equal capacities."""
    return ConnectivityGraph(hops + 1, [(i, i + 1, capacity) for i in range(hops)])


def make_random(seed, node_count=None):
    """Seeded 20-30 node unit-disk instance with four directed links per node."""
    n = node_count or 20 + seed % 11
    return generate_random_topology(
        TopologySpec(node_count=n, target_directed_link_count=4 * n, seed=seed)
    )


@pytest.fixture
def chain():
    """Factory for equal-capacity chains."""
    return make_chain


@pytest.fixture
def single_edge():
    """Two nodes joined by an 11 Mbps link."""
    return ConnectivityGraph(2, [(0, 1, 11)])


@pytest.fixture
def diamond():
    """S=0, a=1, b=2, D=3 with routes 0-1-3 (5, 5) and 0-2-3 (11, 2)."""
    return ConnectivityGraph(4, [(0, 1, 5), (1, 3, 5), (0, 2, 11), (2, 3, 2)])


@pytest.fixture
def two_chains():
    """Two node-disjoint 6-hop chains of 12 Mbps joining S=0 and D=11."""
    a = [0, 1, 2, 3, 4, 5, 11]
    b = [0, 6, 7, 8, 9, 10, 11]
    edges = [(u, v, 12) for route in (a, b) for u, v in zip(route, route[1:])]
    return ConnectivityGraph(12, edges)


@pytest.fixture
def chain_with_chord():
    """Chain 0-1-2 at 11 Mbps plus a 2 Mbps chord 0-2."""
    return ConnectivityGraph(3, [(0, 1, 11), (1, 2, 11), (0, 2, 2)])


@pytest.fixture
def k5():
    """Complete graph on five nodes."""
    return ConnectivityGraph(
        5, [(u, v, 5 + u + v) for u in range(5) for v in range(u + 1, 5)]
    )


@pytest.fixture
def multirate_pair():
    """S-a-D with capacities 11 and 5.5."""
    return ConnectivityGraph(3, [(0, 1, 11), (1, 2, Fraction(11, 2))])


@pytest.fixture
def write_topology(tmp_path):
    """Write a graph to a JSON file and return its path."""

    def _write(graph, name="topology.json"):
        path = tmp_path / name
        path.write_text(dump_topology(graph))
        return str(path)

    return _write
