"""
Medium-time-metric single-path baseline.

The route minimizing the sum of ``1/c`` over its links, scheduled with the same
SpatialReuse machinery as the multipath optimizer.
"""

from __future__ import annotations

import logging

from core.errors import InfeasiblePath, NoPath, SameNode
from core.optimizer import empty_solution, path_links, schedule_path
from core.routes import least_cost_route
from core.topology import ConnectivityGraph, RoutingView
from models import ZERO, MtmResult, PathFlow

logger = logging.getLogger(__name__)


def mtm_path(
    graph: ConnectivityGraph,
    source: int,
    destination: int,
    reuse: bool = True,
    metric: str = "medium-time",
) -> MtmResult:
    """
    Best single route under the medium time metric.

    Args:
        graph: Physical graph
        source: Source node
        destination: Destination node
        reuse: Schedule with spatial reuse; when False every hop gets its own
            slot and throughput is ``1 / sum(1/c)``
        metric: "medium-time", or "hop-count" for debugging

    Returns:
        MtmResult with the route, its medium time per megabit and throughput

    Raises:
        InfeasiblePath: If either node is not in the graph
        SameNode: If source equals destination
        NoPath: If the destination is unreachable
    """
    for node in (source, destination):
        if not graph.has_node(node):
            raise InfeasiblePath(f"Node {node} is not in the graph")
    if source == destination:
        raise SameNode(f"Source and destination are both {source}")

    found = least_cost_route(RoutingView(graph), source, destination, metric)
    if found is None:
        raise NoPath(source, destination)

    links = path_links(graph, found[1])
    medium_time = sum((1 / link.capacity for link in links), ZERO)
    if reuse:
        cand = schedule_path(empty_solution(source, destination), links, graph)
        path, rate = cand.path, cand.new_throughput
    else:
        path = PathFlow(0, tuple(links), min(link.capacity for link in links))
        rate = 1 / medium_time

    logger.debug(f"MTM route {found[1]}: {medium_time} s/Mb, {float(rate):.3f} Mbps")
    return MtmResult(path=path, medium_time_per_bit=medium_time, throughput=rate)
