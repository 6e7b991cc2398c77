"""
Benchmark suite for meshflow.

Measures:
1. Topology generation at experiment scale
2. Multipath solves at increasing hop distance
3. The MTM baseline and a single SpatialReuse scan

Usage:
    python -m pytest benchmark/bench.py --benchmark-only
    python -m pytest benchmark/bench.py --benchmark-only --benchmark-json=result.json
    python -m pytest benchmark/bench.py::TestSolveBenchmarks --benchmark-only
"""

from fractions import Fraction

import pytest

from core.experiment import draw_pair
from core.generator import generate_random_topology
from core.mtm import mtm_path
from core.optimizer import solve_multipath
from core.schedule import spatial_reuse
from core.topology import ConnectivityGraph
from models import TopologySpec

EXPERIMENT_SPEC = TopologySpec(node_count=100, target_directed_link_count=320, seed=42)

# Seconds one solve may take on the 100-node instance
SOLVE_LIMIT_S = 10.0


# ============================================================================
# Fixtures
# ============================================================================


@pytest.fixture(scope="module")
def mesh() -> ConnectivityGraph:
    """The 100-node, 320-link instance used by the hop sweep."""
    return generate_random_topology(EXPERIMENT_SPEC)


def _pair(graph: ConnectivityGraph, hop: int):
    pair = draw_pair(graph, hop, seed=hop)
    if pair is None:
        pytest.skip(f"no pair at {hop} hops")
    return pair


# ============================================================================
# Benchmarks
# ============================================================================


@pytest.mark.benchmark
class TestGeneratorBenchmarks:
    """Instance generation."""

    def test_generate_experiment_instance(self, benchmark):
        graph = benchmark(generate_random_topology, EXPERIMENT_SPEC)
        assert graph.node_count == 100


@pytest.mark.benchmark
class TestSolveBenchmarks:
    """Multipath and baseline solves."""

    @pytest.mark.parametrize("hop", [1, 3, 5])
    def test_solve_multipath(self, benchmark, mesh, hop):
        s, d = _pair(mesh, hop)
        sol = benchmark.pedantic(solve_multipath, args=(mesh, s, d), rounds=3, iterations=1)
        assert sol.throughput > 0
        if benchmark.stats is not None:
            assert benchmark.stats.stats.max < SOLVE_LIMIT_S

    def test_mtm_path(self, benchmark, mesh):
        s, d = _pair(mesh, 5)
        result = benchmark(mtm_path, mesh, s, d)
        assert result.throughput > 0

    def test_spatial_reuse_scan(self, benchmark, mesh):
        """One scan against a frame built by a full solve."""
        s, d = _pair(mesh, 5)
        sol = solve_multipath(mesh, s, d)
        link = mesh.links[0]
        plan = benchmark(spatial_reuse, sol.schedule, mesh, link, Fraction(1))
        assert plan.allocated == 1
