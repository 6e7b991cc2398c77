"""
Label-setting least-cost route search over a routing view.

Costs are exact: the medium-time metric adds ``1/c`` per link, the hop-count
metric adds 1. Ties go to fewer hops, then to the lexicographically smaller
node sequence, which keeps every caller deterministic.
"""

from __future__ import annotations

import heapq
import itertools
import logging
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple

from core.topology import RoutingView
from models import Link

logger = logging.getLogger(__name__)

Route = Tuple[int, ...]

METRICS: Dict[str, Callable[[Link], Fraction]] = {
    "medium-time": lambda link: 1 / link.capacity,
    "hop-count": lambda link: Fraction(1),
}


def least_cost_route(
    view: RoutingView, source: int, destination: int, metric: str = "medium-time"
) -> Optional[Tuple[Fraction, Route]]:
    """
    Cheapest routable node sequence from source to destination.

    Args:
        view: Routing view to search (deleted directions are skipped)
        source: Start node
        destination: End node
        metric: "medium-time" or "hop-count"

    Returns:
        (cost, nodes), or None when the destination is unreachable

    Raises:
        ValueError: On an unknown metric name
    """
    try:
        weight = METRICS[metric]
    except KeyError:
        raise ValueError(f"Unknown metric {metric!r}; expected one of {sorted(METRICS)}") from None

    graph = view.graph
    counter = itertools.count()
    # (cost, hops, nodes) orders labels; the counter only breaks exact duplicates
    heap = [(Fraction(0), 0, (source,), next(counter))]
    settled: Dict[int, Tuple[Fraction, Route]] = {}

    while heap:
        cost, hops, nodes, _ = heapq.heappop(heap)
        node = nodes[-1]
        if node in settled:
            continue
        settled[node] = (cost, nodes)
        if node == destination:
            return cost, nodes
        for nxt in sorted(view.routing_neighbors(node)):
            if nxt in settled:
                continue
            step = weight(graph.link(node, nxt))
            heapq.heappush(heap, (cost + step, hops + 1, nodes + (nxt,), next(counter)))

    logger.debug(f"No routable path from {source} to {destination}")
    return None
