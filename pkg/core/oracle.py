"""
Brute-force reference computations for small instances.

Used to cross-check the optimizer: exhaustive simple-path enumeration, the
best throughput over every order in which paths could be committed, and a
constraint checker written directly from the flow and interference equations
without sharing code with core.validator.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple

import networkx as nx

from core.errors import BudgetExceeded, InfeasiblePath
from core.optimizer import accept, commit, empty_solution, path_links, schedule_path
from core.topology import ConnectivityGraph
from models import OracleBudget, Solution, Violation, ViolationKind

logger = logging.getLogger(__name__)

NodePath = Tuple[int, ...]


def _check_size(graph: ConnectivityGraph, budget: OracleBudget) -> None:
    if graph.node_count > budget.max_nodes:
        raise BudgetExceeded(
            f"Graph has {graph.node_count} nodes; the oracle handles at most {budget.max_nodes}"
        )


def enumerate_simple_paths(
    graph: ConnectivityGraph,
    source: int,
    destination: int,
    max_hops: int = 8,
    budget: Optional[OracleBudget] = None,
) -> List[NodePath]:
    """
    Every node-simple path from source to destination, sorted.

    Args:
        graph: Physical graph
        source: Start node
        destination: End node
        max_hops: Longest path to report, in links
        budget: Size limits; defaults when None

    Returns:
        Node tuples in lexicographic order

    Raises:
        BudgetExceeded: If the graph exceeds the budget
    """
    _check_size(graph, budget or OracleBudget())
    if source == destination:
        return []
    paths = nx.all_simple_paths(graph.nx_graph, source, destination, cutoff=max_hops)
    return sorted(tuple(p) for p in paths)


class _Replay:
    """Depth-first walk over commit orders."""

    def __init__(self, graph: ConnectivityGraph, paths: List[NodePath], budget: OracleBudget):
        self.graph = graph
        self.paths = paths
        self.budget = budget
        self.replays = 0
        self.best = Fraction(0)

    def walk(self, sol: Solution, used: Set[int]) -> None:
        if len(used) >= self.budget.max_paths_considered:
            return
        for index, nodes in enumerate(self.paths):
            if index in used:
                continue
            self.replays += 1
            if self.replays > self.budget.max_sequences:
                raise BudgetExceeded(
                    f"More than {self.budget.max_sequences} path replays needed"
                )
            try:
                cand = schedule_path(sol, path_links(self.graph, nodes), self.graph)
            except InfeasiblePath:
                continue
            if not accept(sol, cand):
                continue
            nxt = commit(sol, cand)
            self.best = max(self.best, nxt.throughput)
            self.walk(nxt, used | {index})


def best_over_orderings(
    graph: ConnectivityGraph,
    source: int,
    destination: int,
    budget: Optional[OracleBudget] = None,
) -> Fraction:
    """
    Highest throughput reachable by committing paths in any order.

    Each sequence of distinct simple paths (up to ``max_paths_considered``
    long) is replayed through schedule_path, accept and commit; a sequence
    ends where a path is rejected.

    Raises:
        BudgetExceeded: If the graph or the number of replays exceeds the budget
    """
    budget = budget or OracleBudget()
    paths = enumerate_simple_paths(graph, source, destination, budget.max_hops, budget)
    replay = _Replay(graph, paths, budget)
    replay.walk(empty_solution(source, destination), set())
    logger.debug(f"Oracle: {len(paths)} paths, {replay.replays} replays, best {replay.best}")
    return replay.best


def replays_greedy(sol: Solution, budget: Optional[OracleBudget] = None) -> bool:
    """Whether ``best_over_orderings`` enumerates the greedy's own commit order."""
    budget = budget or OracleBudget()
    routes = [p.nodes for p in sol.paths]
    return (
        len(routes) <= budget.max_paths_considered
        and all(len(r) - 1 <= budget.max_hops for r in routes)
        and len(set(routes)) == len(routes)
    )


def check_constraints_literal(sol: Solution, graph: ConnectivityGraph) -> List[Violation]:
    """
    Check a solution straight from the constraint equations.

    - each node takes part in at most one transmission per slot
    - no receiver is in range of a second active sender
    - a link carries at most capacity x duration per slot
    - every relay's frame inflow equals its outflow
    - the source's outflow equals the destination's inflow
    - throughput equals destination inflow over frame length
    """
    found: List[Violation] = []
    frame = Fraction(0)
    inflow: Dict[int, Fraction] = {}
    outflow: Dict[int, Fraction] = {}

    for slot in sol.schedule.slots:
        frame += slot.duration
        active = [(a.link.src, a.link.dst, a.link.capacity, a.flow) for a in slot.allocations]

        busy: Dict[int, int] = {}
        for i, j, _, _ in active:
            busy[i] = busy.get(i, 0) + 1
            busy[j] = busy.get(j, 0) + 1
        for node, count in sorted(busy.items()):
            if count > 1:
                found.append(
                    Violation(ViolationKind.PRIMARY, f"{count} transmissions", slot.id, node)
                )

        for i, j, _, _ in active:
            for k, _, _, _ in active:
                if k not in (i, j) and graph.has_link(k, j):
                    found.append(
                        Violation(ViolationKind.RECEIVER, f"{k} interferes with {i}->{j}", slot.id, j)
                    )

        for i, j, cap, flow in active:
            if not graph.has_link(i, j):
                found.append(Violation(ViolationKind.TOPOLOGY, f"No link {i}->{j}", slot.id))
            elif flow > graph.capacity(i, j) * slot.duration or flow > cap * slot.duration:
                found.append(Violation(ViolationKind.CAPACITY, f"{i}->{j} over capacity", slot.id))
            outflow[i] = outflow.get(i, Fraction(0)) + flow
            inflow[j] = inflow.get(j, Fraction(0)) + flow

    for node in range(graph.node_count):
        if node in (sol.source, sol.destination):
            continue
        if inflow.get(node, 0) != outflow.get(node, 0):
            found.append(Violation(ViolationKind.CONSERVATION, "in != out", node=node))

    delivered = inflow.get(sol.destination, Fraction(0))
    if outflow.get(sol.source, Fraction(0)) != delivered:
        found.append(Violation(ViolationKind.SOURCE_DESTINATION, "source out != destination in"))
    rate = delivered / frame if frame else Fraction(0)
    if rate != sol.throughput:
        found.append(Violation(ViolationKind.THROUGHPUT, f"{rate} != {sol.throughput}"))
    return found


def best_next_path(sol: Solution, graph: ConnectivityGraph, max_hops: int = 8) -> Fraction:
    """
    Best throughput over every routable simple path added to ``sol``.

    Each path is scheduled with schedule_path against the solution's frame;
    paths through routing-deleted directions are skipped.
    """
    best = Fraction(0)
    for nodes in enumerate_simple_paths(
        graph, sol.source, sol.destination, max_hops, OracleBudget(max_nodes=graph.node_count)
    ):
        try:
            cand = schedule_path(sol, path_links(graph, nodes), graph)
        except InfeasiblePath:
            continue
        best = max(best, cand.new_throughput)
    return best


def solve_by_enumeration(
    graph: ConnectivityGraph, source: int, destination: int, max_hops: int = 8
) -> Fraction:
    """Best first-path throughput over every simple path, scheduled on an empty frame."""
    return best_next_path(empty_solution(source, destination), graph, max_hops)
