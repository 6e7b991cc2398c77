"""
Greedy multipath optimizer.

Paths are added one at a time. Each round a depth-first branch-and-bound
search finds the source-to-destination path that would give the highest
end-to-end throughput once scheduled with SpatialReuse, and the path is kept
only if it strictly raises the throughput of the solution.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from core.config import SolverConfig
from core.errors import InfeasiblePath, NoPath, SameNode, ZeroTime
from core.routes import least_cost_route
from core.schedule import apply_plan, spatial_reuse, total_duration
from core.topology import ConnectivityGraph, RoutingView, min_hop_distance
from models import ZERO, AllocationPlan, Candidate, Link, PathFlow, Schedule, Solution, as_fraction

logger = logging.getLogger(__name__)

ONE = Fraction(1)


def throughput(total_flow, total_time) -> Fraction:
    """
    End-to-end throughput: useful megabits per frame over frame seconds.

    Raises:
        ZeroTime: If ``total_time`` is not positive
    """
    flow = as_fraction(total_flow)
    time = as_fraction(total_time)
    if time <= 0:
        raise ZeroTime(f"Throughput is undefined over a frame of {time} s")
    return flow / time


def empty_solution(source: int, destination: int) -> Solution:
    return Solution(source=source, destination=destination)


def routing_view(sol: Solution, graph: ConnectivityGraph) -> RoutingView:
    """The graph as the next path search sees it."""
    return RoutingView(graph, sol.deleted_routing_links)


def path_links(graph: ConnectivityGraph, nodes: Sequence[int]) -> List[Link]:
    """Directed links along a node sequence (MissingLink if a hop is absent)."""
    return [graph.link(u, v) for u, v in zip(nodes, nodes[1:])]


def _check_path(sol: Solution, path: Sequence[Link], graph: ConnectivityGraph) -> None:
    if not path:
        raise InfeasiblePath("Path has no links")
    if path[0].src != sol.source or path[-1].dst != sol.destination:
        raise InfeasiblePath(
            f"Path runs {path[0].src}->{path[-1].dst}, expected {sol.source}->{sol.destination}"
        )
    seen = {path[0].src}
    for prev, link in zip((None, *path), path):
        if prev is not None and prev.dst != link.src:
            raise InfeasiblePath(f"Path is disconnected between {prev} and {link}")
        if not graph.has_link(link.src, link.dst) or graph.capacity(link.src, link.dst) != link.capacity:
            raise InfeasiblePath(f"Link {link} is not in the graph")
        if link.key in sol.deleted_routing_links:
            raise InfeasiblePath(f"Link {link} has been removed from routing")
        if link.dst in seen:
            raise InfeasiblePath(f"Path revisits node {link.dst}")
        seen.add(link.dst)


def _schedule_links(
    schedule: Schedule, graph: ConnectivityGraph, links: Sequence[Link], bottleneck: Fraction
) -> Tuple[Schedule, List[AllocationPlan], Fraction]:
    plans = []
    delta = ZERO
    for link in links:
        plan = spatial_reuse(schedule, graph, link, bottleneck / link.capacity)
        schedule = apply_plan(schedule, plan, link)
        plans.append(plan)
        delta += plan.delta
    return schedule, plans, delta


def schedule_path(sol: Solution, path: Sequence[Link], graph: ConnectivityGraph) -> Candidate:
    """
    Schedule one more path against a solution without changing it.

    Links are allocated in path order from the source, each needing
    ``bottleneck / capacity`` seconds.

    Args:
        sol: Current solution
        path: Ordered directed links from source to destination
        graph: Physical graph

    Returns:
        Candidate with per-link plans, delta and the resulting throughput

    Raises:
        InfeasiblePath: If the links do not form a routable simple path
    """
    path = list(path)
    _check_path(sol, path, graph)
    bottleneck = min(link.capacity for link in path)
    schedule, plans, delta = _schedule_links(sol.schedule, graph, path, bottleneck)
    new_throughput = throughput(
        sol.total_flow + bottleneck, total_duration(sol.schedule) + delta
    )
    return Candidate(
        path=PathFlow(0, tuple(path), bottleneck),
        plans=tuple(plans),
        delta=delta,
        new_throughput=new_throughput,
        schedule=schedule,
    )


def prefix_throughput(
    sol: Solution, links: Sequence[Link], graph: ConnectivityGraph, bottleneck
) -> Fraction:
    """
    Throughput bound of a partial path scheduled at a given bottleneck.

    Any path that starts with ``links`` and has bottleneck ``bottleneck``
    reaches at most this throughput when added to ``sol``.
    """
    bottleneck = as_fraction(bottleneck)
    _, _, delta = _schedule_links(sol.schedule, graph, links, bottleneck)
    return throughput(sol.total_flow + bottleneck, total_duration(sol.schedule) + delta)


def _better(cand: Candidate, best: Optional[Candidate]) -> bool:
    """Higher throughput, then fewer hops, then smaller node sequence."""
    if best is None:
        return True
    if cand.new_throughput != best.new_throughput:
        return cand.new_throughput > best.new_throughput
    if cand.path.hops != best.path.hops:
        return cand.path.hops < best.path.hops
    return cand.path.nodes < best.path.nodes


@dataclass
class _Branch:
    """A prefix scheduled against the committed frame for one bottleneck level."""

    level: Fraction
    schedule: Schedule
    plans: Tuple[AllocationPlan, ...]
    delta: Fraction


@dataclass
class _Prefix:
    nodes: List[int]
    links: List[Link]
    bottleneck: Fraction
    branches: List[_Branch]


class AugmentingPathSearch:
    """
    Depth-first branch-and-bound search for the best next path.

    Every completion of a prefix schedules the prefix's links first, with the
    completion's bottleneck ``b``, against the same committed frame, so its
    delta is at least the prefix's delta at ``b``. The search therefore keeps
    one incrementally scheduled copy of the prefix per capacity level that
    could still be the bottleneck, and bounds the completions at that level
    by ``(flow + level) / (time + delta)``. A level is dropped once that bound
    cannot beat the incumbent or the ``>= level`` links can no longer reach the
    destination; a prefix with no level left is pruned. A step is also
    skipped when the destination cannot be reached from it without revisiting
    the prefix.

    On an empty solution every slot scales with the bottleneck, so a single
    copy scheduled at unit bottleneck stands for all levels and its bound is
    ``1 / delta``.
    """

    def __init__(
        self,
        sol: Solution,
        graph: ConnectivityGraph,
        config: Optional[SolverConfig] = None,
        bound_by_current: bool = True,
    ) -> None:
        self.sol = sol
        self.graph = graph
        self.config = config or SolverConfig()
        self.view = routing_view(sol, graph)
        self.floor = sol.throughput if bound_by_current else ZERO
        self.flow = sol.total_flow
        self.time = total_duration(sol.schedule)
        self.scaled = self.time == 0
        self.best: Optional[Candidate] = None
        self.expansions = 0
        self.pruned = 0
        self.exhausted = False
        self._hops_to: Dict[int, int] = {}
        self._reach: Dict[Fraction, Dict[int, int]] = {}
        self._out: Dict[int, Tuple[int, ...]] = {}

    def run(self) -> Optional[Candidate]:
        """Search; None when the destination is not routable."""
        s, d = self.sol.source, self.sol.destination
        if s == d:
            return None
        self._hops_to = self.view.hops_to(d)
        self._out = {
            node: tuple(sorted(self.view.routing_neighbors(node)))
            for node in range(self.graph.node_count)
        }
        if s not in self._hops_to:
            return None

        seed = least_cost_route(self.view, s, d)
        if seed is not None:
            self.best = schedule_path(self.sol, path_links(self.graph, seed[1]), self.graph)
            logger.debug(f"Seeded search with {seed[1]} at {float(self.best.new_throughput):.3f} Mbps")

        self._extend(_Prefix([s], [], ZERO, self._root_branches()))

        if self.exhausted:
            logger.warning(
                f"Path search stopped after {self.expansions} expansions; "
                f"returning best path found so far"
            )
        logger.debug(f"Search: {self.expansions} expansions, {self.pruned} pruned")
        return self.best

    def _root_branches(self) -> List[_Branch]:
        start = self.sol.schedule
        if self.scaled:
            return [_Branch(ONE, start, (), ZERO)]
        s, d = self.sol.source, self.sol.destination
        levels = sorted({link.capacity for link in self.graph.links if self.view.has_link(*link.key)})
        branches = []
        for level in levels:
            reach = self.view.hops_to(d, min_capacity=level)
            if s in reach:
                self._reach[level] = reach
                branches.append(_Branch(level, start, (), ZERO))
        return branches

    def _children(self, node: int, visited: List[int]) -> List[int]:
        on_path = set(visited)
        options = [
            v
            for v in self._out[node]
            if v not in on_path and v in self._hops_to
        ]
        options.sort(key=lambda v: (-self.graph.capacity(node, v), v))
        return options

    def _bound(self, branch: _Branch) -> Fraction:
        if self.scaled:
            return ONE / branch.delta
        return throughput(self.flow + branch.level, self.time + branch.delta)

    def _hops_left(self, branch: _Branch, node: int) -> Optional[int]:
        if self.scaled:
            return self._hops_to.get(node)
        return self._reach[branch.level].get(node)

    def _prunable(self, branch: _Branch, hops: int, node: int) -> bool:
        left = self._hops_left(branch, node)
        if left is None:
            return True
        bound = self._bound(branch)
        if bound <= self.floor:
            return True
        if self.best is None:
            return False
        if bound < self.best.new_throughput:
            return True
        if bound == self.best.new_throughput:
            return hops + left > self.best.path.hops
        return False

    def _step(self, prefix: _Prefix, link: Link) -> _Prefix:
        bottleneck = min(prefix.bottleneck, link.capacity) if prefix.links else link.capacity
        hops = len(prefix.links) + 1
        branches = []
        for branch in prefix.branches:
            if branch.level > link.capacity and not self.scaled:
                break
            plan = spatial_reuse(branch.schedule, self.graph, link, branch.level / link.capacity)
            child = _Branch(
                branch.level,
                apply_plan(branch.schedule, plan, link),
                branch.plans + (plan,),
                branch.delta + plan.delta,
            )
            if self._prunable(child, hops, link.dst):
                continue
            branches.append(child)
        return _Prefix(prefix.nodes + [link.dst], prefix.links + [link], bottleneck, branches)

    def _arrive(self, prefix: _Prefix) -> Optional[Candidate]:
        if self.scaled:
            return schedule_path(self.sol, prefix.links, self.graph)
        for branch in prefix.branches:
            if branch.level == prefix.bottleneck:
                return Candidate(
                    path=PathFlow(0, tuple(prefix.links), prefix.bottleneck),
                    plans=branch.plans,
                    delta=branch.delta,
                    new_throughput=self._bound(branch),
                    schedule=branch.schedule,
                )
        return None

    def _finishes(self, start: int, path: List[int], floor: Optional[Fraction]) -> bool:
        """Whether the destination is reachable from ``start`` without revisiting ``path``."""
        d = self.sol.destination
        seen = set(path)
        frontier = deque([start])
        while frontier:
            node = frontier.popleft()
            for v in self._out[node]:
                if v in seen or (floor is not None and self.graph.capacity(node, v) < floor):
                    continue
                if v == d:
                    return True
                seen.add(v)
                frontier.append(v)
        return False

    def _extend(self, prefix: _Prefix) -> None:
        node = prefix.nodes[-1]
        for nxt in self._children(node, prefix.nodes):
            if self.expansions >= self.config.search_budget:
                self.exhausted = True
                return
            self.expansions += 1
            arrived = nxt == self.sol.destination
            floor = None if self.scaled else prefix.branches[0].level
            if not arrived and not self._finishes(nxt, prefix.nodes + [nxt], floor):
                self.pruned += 1
                continue
            child = self._step(prefix, self.graph.link(node, nxt))
            if not child.branches:
                self.pruned += 1
                continue
            if arrived:
                cand = self._arrive(child)
                if cand is not None and _better(cand, self.best):
                    self.best = cand
                continue
            self._extend(child)
            if self.exhausted:
                return


def find_best_augmenting_path(
    sol: Solution,
    graph: ConnectivityGraph,
    config: Optional[SolverConfig] = None,
    bound_by_current: bool = True,
) -> Optional[Candidate]:
    """
    Best path to add next, scheduled against the current solution.

    The returned candidate may still fail ``accept``; deciding that is the
    caller's job.

    Args:
        sol: Current solution
        graph: Physical graph
        config: Search budget; defaults when None
        bound_by_current: Also prune prefixes that cannot beat the current
            solution's throughput

    Returns:
        The best candidate, or None when no routable path remains
    """
    return AugmentingPathSearch(sol, graph, config, bound_by_current).run()


def accept(sol: Solution, cand: Candidate) -> bool:
    """Keep the candidate only if it strictly raises throughput."""
    if not sol.paths:
        return cand.new_throughput > 0
    return cand.new_throughput > sol.throughput


def commit(sol: Solution, cand: Candidate) -> Solution:
    """
    Add an accepted candidate to the solution.

    Reverse directions of the path's links are removed from routing.

    Raises:
        StalePlan: If the candidate was computed against another schedule
    """
    schedule = sol.schedule
    for plan, link in zip(cand.plans, cand.path.links):
        schedule = apply_plan(schedule, plan, link)

    path = PathFlow(len(sol.paths) + 1, cand.path.links, cand.path.bottleneck)
    deleted = sol.deleted_routing_links | {(link.dst, link.src) for link in path.links}
    paths = sol.paths + (path,)
    flow = sum((p.bottleneck for p in paths), ZERO)
    logger.debug(
        f"Committed p({path.id}): {'->'.join(map(str, path.nodes))} "
        f"bottleneck={path.bottleneck} delta={cand.delta}"
    )
    return Solution(
        source=sol.source,
        destination=sol.destination,
        paths=paths,
        schedule=schedule,
        deleted_routing_links=frozenset(deleted),
        throughput=throughput(flow, total_duration(schedule)),
    )


def solve_multipath(
    graph: ConnectivityGraph,
    source: int,
    destination: int,
    config: Optional[SolverConfig] = None,
) -> Solution:
    """
    Add improving paths until none is left.

    Args:
        graph: Physical graph
        source: Source node
        destination: Destination node
        config: Solver settings; defaults when None

    Returns:
        The final Solution

    Raises:
        SameNode: If source equals destination
        NoPath: If the destination is unreachable
        InfeasiblePath: If either node is not in the graph
    """
    for node in (source, destination):
        if not graph.has_node(node):
            raise InfeasiblePath(f"Node {node} is not in the graph")
    if source == destination:
        raise SameNode(f"Source and destination are both {source}")
    if min_hop_distance(graph, source, destination) is None:
        raise NoPath(source, destination)

    config = config or SolverConfig()
    sol = empty_solution(source, destination)
    while len(sol.paths) < config.max_paths:
        cand = find_best_augmenting_path(sol, graph, config)
        if cand is None:
            logger.debug("No routable path left")
            break
        if not accept(sol, cand):
            logger.debug(
                f"Rejected {cand.path.nodes}: {cand.new_throughput} <= {sol.throughput}"
            )
            break
        sol = commit(sol, cand)
    else:
        logger.warning(f"Stopped after the {config.max_paths}-path limit")

    logger.info(
        f"Solved {source}->{destination}: {len(sol.paths)} path(s), "
        f"{len(sol.schedule.slots)} slot(s), {float(sol.throughput):.3f} Mbps"
    )
    return sol
