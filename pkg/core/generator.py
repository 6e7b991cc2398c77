"""
Random unit-disk topology generator.

Nodes are dropped uniformly in the unit square and two nodes are linked when
they lie within a common radius. The radius is bisected over the sorted pair
distances so the directed link count lands within 5% of the target.
"""

from __future__ import annotations

import bisect
import logging
import math
from typing import List, Optional, Tuple

import networkx as nx

from core.errors import GenerationError
from core.rng import Xoshiro256StarStar, derive_seed
from core.topology import ConnectivityGraph
from models import TopologySpec

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 100
TOLERANCE = 0.05

Point = Tuple[float, float]
Pair = Tuple[float, int, int]


def _sorted_pairs(points: List[Point]) -> List[Pair]:
    """All node pairs as (squared distance, u, v), nearest first."""
    pairs = []
    for u in range(len(points)):
        ux, uy = points[u]
        for v in range(u + 1, len(points)):
            vx, vy = points[v]
            pairs.append(((ux - vx) ** 2 + (uy - vy) ** 2, u, v))
    pairs.sort()
    return pairs


def _unit_disk_pairs(pairs: List[Pair], wanted: int) -> List[Tuple[int, int]]:
    """Pairs within the radius that admits ``wanted`` pairs (ties included)."""
    if wanted <= 0:
        return []
    distances = [p[0] for p in pairs]
    radius2 = distances[min(wanted, len(distances)) - 1]
    count = bisect.bisect_right(distances, radius2)
    return [(u, v) for _, u, v in pairs[:count]]


def _components(node_count: int, edges: List[Tuple[int, int]]) -> List[List[int]]:
    graph = nx.Graph()
    graph.add_nodes_from(range(node_count))
    graph.add_edges_from(edges)
    return [sorted(c) for c in nx.connected_components(graph)]


def _bridge(points: List[Point], edges: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Join every minor component to its nearest node in the growing main component."""
    components = _components(len(points), edges)
    components.sort(key=lambda c: (-len(c), c[0]))
    main = set(components[0])
    bridges = []
    for component in sorted(components[1:], key=lambda c: c[0]):
        best = None
        for u in component:
            ux, uy = points[u]
            for v in sorted(main):
                d2 = (ux - points[v][0]) ** 2 + (uy - points[v][1]) ** 2
                if best is None or (d2, min(u, v), max(u, v)) < best:
                    best = (d2, min(u, v), max(u, v))
        bridges.append((best[1], best[2]))
        main.update(component)
    return bridges


def _assign_capacities(
    rng: Xoshiro256StarStar, spec: TopologySpec, pairs: List[Tuple[int, int]]
) -> List[tuple]:
    levels = spec.capacity_levels()
    return [(u, v, levels[rng.below(len(levels))]) for u, v in sorted(pairs)]


def generate_random_topology(spec: TopologySpec) -> ConnectivityGraph:
    """
    Generate a connected random unit-disk instance.

    Deterministic for a fixed spec: attempt ``k`` draws its layout from
    ``derive_seed(spec.seed, k)``. When no attempt yields a connected unit-disk
    graph and ``spec.bridge_components`` is set, the first layout is bridged.

    Args:
        spec: Generator parameters

    Returns:
        Connected ConnectivityGraph with node positions

    Raises:
        GenerationError: If the link target or connectivity cannot be met
    """
    target = spec.target_directed_link_count
    low = math.ceil(target * (1 - TOLERANCE))
    high = math.floor(target * (1 + TOLERANCE))
    wanted = max(1, (target + 1) // 2)
    n = spec.node_count

    first: Optional[Tuple[Xoshiro256StarStar, List[Point], List[Pair]]] = None
    for attempt in range(MAX_ATTEMPTS):
        rng = Xoshiro256StarStar(derive_seed(spec.seed, attempt))
        points = rng.points(n)
        pairs = _sorted_pairs(points)
        if first is None:
            first = (rng, points, pairs)
        edges = _unit_disk_pairs(pairs, wanted)
        if not low <= 2 * len(edges) <= high:
            logger.debug(f"Attempt {attempt}: {2 * len(edges)} links outside {low}..{high}")
            continue
        if len(_components(n, edges)) == 1:
            logger.info(f"Generated {n} nodes / {2 * len(edges)} links on attempt {attempt}")
            return ConnectivityGraph(n, _assign_capacities(rng, spec, edges), points)
        logger.debug(f"Attempt {attempt}: unit-disk graph is disconnected")

    if spec.bridge_components and first is not None:
        rng, points, pairs = first
        for shrink in range(wanted + 1):
            edges = _unit_disk_pairs(pairs, wanted - shrink)
            bridges = _bridge(points, edges)
            total = 2 * (len(edges) + len(bridges))
            if total < low:
                break
            if total <= high:
                logger.warning(
                    f"No connected unit-disk layout in {MAX_ATTEMPTS} attempts; "
                    f"joined the first layout with {len(bridges)} bridge link(s) longer than the radius"
                )
                return ConnectivityGraph(
                    n, _assign_capacities(rng, spec, edges + bridges), points, bridges
                )

    raise GenerationError(
        f"Could not generate a connected graph with {low}..{high} directed links "
        f"on {n} nodes in {MAX_ATTEMPTS} attempts"
    )
