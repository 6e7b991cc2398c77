"""
Connectivity graph, routing views and the topology file format.

The physical graph is immutable after construction. Path searches work on a
RoutingView, which hides individual link directions without touching the
neighbourhoods the interference model reads.
"""

from __future__ import annotations

import json
import logging
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from core.errors import InvariantError, MissingLink, ParseError
from models import Link, LinkKey, as_fraction

logger = logging.getLogger(__name__)

Edge = Tuple[int, int, Fraction]


class ConnectivityGraph:
    """
    Symmetric, capacity-weighted wireless connectivity graph.

    Every undirected edge stands for the two directed links (u, v) and (v, u)
    with equal capacity.
    """

    def __init__(
        self,
        node_count: int,
        edges: Iterable[Tuple[int, int, object]],
        positions: Optional[Sequence[Tuple[float, float]]] = None,
        bridges: Iterable[Tuple[int, int]] = (),
    ) -> None:
        """
        Build and validate a graph.

        Args:
            node_count: Number of nodes, ids 0..node_count-1
            edges: Undirected (u, v, capacity) triples
            positions: Optional (x, y) per node, kept for reproducibility only
            bridges: Edges added to join components rather than by distance

        Raises:
            InvariantError: On self-loops, duplicate or asymmetric edges,
                non-positive capacities, unknown node ids or a bridge that is not an edge
        """
        if node_count < 1:
            raise InvariantError("A graph needs at least one node")
        if positions is not None and len(positions) != node_count:
            raise InvariantError(
                f"Expected {node_count} positions, got {len(positions)}"
            )

        graph = nx.Graph()
        graph.add_nodes_from(range(node_count))
        for u, v, cap in edges:
            capacity = as_fraction(cap)
            if u == v:
                raise InvariantError(f"Self-loop on node {u}")
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise InvariantError(f"Edge ({u}, {v}) references an unknown node")
            if capacity <= 0:
                raise InvariantError(f"Edge ({u}, {v}) has non-positive capacity {capacity}")
            if graph.has_edge(u, v):
                existing = graph.edges[u, v]["capacity"]
                if existing != capacity:
                    raise InvariantError(
                        f"Asymmetric capacity between {u} and {v}: {existing} vs {capacity}"
                    )
                raise InvariantError(f"Duplicate edge between {u} and {v}")
            graph.add_edge(u, v, capacity=capacity)

        self._graph = nx.freeze(graph)
        self.node_count = node_count
        self.positions: Optional[Tuple[Tuple[float, float], ...]] = (
            tuple((float(x), float(y)) for x, y in positions) if positions is not None else None
        )
        self._neighbors: Dict[int, FrozenSet[int]] = {
            n: frozenset(self._graph.adj[n]) for n in range(node_count)
        }
        self._capacity: Dict[LinkKey, Fraction] = {}
        for u, v, cap in self._graph.edges(data="capacity"):
            self._capacity[(u, v)] = cap
            self._capacity[(v, u)] = cap
        self.bridges: Tuple[Tuple[int, int], ...] = tuple(sorted((min(u, v), max(u, v)) for u, v in bridges))
        for u, v in self.bridges:
            if not graph.has_edge(u, v):
                raise InvariantError(f"Bridge ({u}, {v}) is not an edge")

    @property
    def nx_graph(self) -> nx.Graph:
        """Frozen undirected networkx view of the topology."""
        return self._graph

    @property
    def links(self) -> Tuple[Link, ...]:
        """All directed links, sorted by (src, dst)."""
        return tuple(Link(u, v, c) for (u, v), c in sorted(self._capacity.items()))

    def undirected_edges(self) -> List[Edge]:
        """Edges as (u, v, capacity) with u < v, ascending."""
        return sorted((min(u, v), max(u, v), c) for u, v, c in self._graph.edges(data="capacity"))

    def neighbors(self, node: int) -> FrozenSet[int]:
        return self._neighbors[node]

    def has_link(self, src: int, dst: int) -> bool:
        return (src, dst) in self._capacity

    def capacity(self, src: int, dst: int) -> Fraction:
        try:
            return self._capacity[(src, dst)]
        except KeyError:
            raise MissingLink(src, dst) from None

    def link(self, src: int, dst: int) -> Link:
        return Link(src, dst, self.capacity(src, dst))

    def has_node(self, node: int) -> bool:
        return 0 <= node < self.node_count

    def delete_link(self, src: int, dst: int) -> RoutingView:
        """Routing view of this graph with one link direction removed."""
        return RoutingView(self).delete_link(src, dst)

    def scaled(self, factor) -> ConnectivityGraph:
        """Copy with every capacity multiplied by ``factor``."""
        k = as_fraction(factor)
        return ConnectivityGraph(
            self.node_count,
            ((u, v, c * k) for u, v, c in self.undirected_edges()),
            self.positions,
            self.bridges,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConnectivityGraph):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and self.undirected_edges() == other.undirected_edges()
        )

    def __hash__(self) -> int:
        return hash((self.node_count, tuple(self.undirected_edges())))

    def __repr__(self) -> str:
        return f"ConnectivityGraph(nodes={self.node_count}, links={len(self._capacity)})"


class RoutingView:
    """
    A search view over a physical graph with some directions deleted.

    Views are immutable values; ``delete_link`` returns a new view.
    """

    def __init__(self, graph: ConnectivityGraph, deleted: Iterable[LinkKey] = ()) -> None:
        self.graph = graph
        self.deleted: FrozenSet[LinkKey] = frozenset(deleted)

    def has_link(self, src: int, dst: int) -> bool:
        return self.graph.has_link(src, dst) and (src, dst) not in self.deleted

    def delete_link(self, src: int, dst: int) -> RoutingView:
        """
        Remove one direction from routing.

        Raises:
            MissingLink: If the direction is absent from this view
        """
        if not self.has_link(src, dst):
            raise MissingLink(src, dst)
        return RoutingView(self.graph, self.deleted | {(src, dst)})

    def routing_neighbors(self, node: int) -> FrozenSet[int]:
        """Nodes reachable from ``node`` in one routable hop."""
        return frozenset(v for v in self.graph.neighbors(node) if (node, v) not in self.deleted)

    def interference_neighbors(self, node: int) -> FrozenSet[int]:
        """Physical neighbourhood; deletions never affect it."""
        return self.graph.neighbors(node)

    def to_digraph(self, min_capacity: Optional[Fraction] = None) -> nx.DiGraph:
        """Routable links as a DiGraph, optionally only those of at least ``min_capacity``."""
        digraph = nx.DiGraph()
        digraph.add_nodes_from(range(self.graph.node_count))
        for link in self.graph.links:
            if link.key in self.deleted:
                continue
            if min_capacity is not None and link.capacity < min_capacity:
                continue
            digraph.add_edge(link.src, link.dst, capacity=link.capacity)
        return digraph

    def hops_to(self, destination: int, min_capacity: Optional[Fraction] = None) -> Dict[int, int]:
        """Routable hop count from every node that can still reach ``destination``."""
        reverse = self.to_digraph(min_capacity).reverse(copy=False)
        return dict(nx.single_source_shortest_path_length(reverse, destination))


def min_hop_distance(graph: ConnectivityGraph, source: int, destination: int) -> Optional[int]:
    """
    Breadth-first hop distance between two nodes.

    Returns:
        The hop count, or None when the nodes are in different components
    """
    try:
        return nx.shortest_path_length(graph.nx_graph, source, destination)
    except nx.NetworkXNoPath:
        return None


def parse_topology(text: str) -> ConnectivityGraph:
    """
    Parse a topology document.

    Format::

        {"nodes": [{"id": 0, "x": 0.1, "y": 0.2}, ...],
         "edges": [{"u": 0, "v": 1, "cap_mbps": 11}, ...]}

    Each edge entry denotes both directed links.

    Raises:
        ParseError: If the document is not valid JSON or misses required fields
        InvariantError: If the links break symmetry, self-loop or duplicate rules
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"Topology is not valid JSON: {e}") from e

    if not isinstance(doc, dict) or "nodes" not in doc or "edges" not in doc:
        raise ParseError("Topology must be an object with 'nodes' and 'edges'")
    if not isinstance(doc["nodes"], list) or not isinstance(doc["edges"], list):
        raise ParseError("'nodes' and 'edges' must be lists")

    positions: Dict[int, Tuple[float, float]] = {}
    for entry in doc["nodes"]:
        try:
            node_id = entry["id"]
            x, y = float(entry.get("x", 0.0)), float(entry.get("y", 0.0))
        except (TypeError, KeyError, ValueError) as e:
            raise ParseError(f"Malformed node entry {entry!r}") from e
        if not isinstance(node_id, int) or isinstance(node_id, bool):
            raise ParseError(f"Node id must be an integer, got {node_id!r}")
        if node_id in positions:
            raise ParseError(f"Node {node_id} declared twice")
        positions[node_id] = (x, y)

    node_count = len(positions)
    if sorted(positions) != list(range(node_count)):
        raise ParseError("Node ids must be exactly 0..n-1")
    if node_count == 0:
        raise ParseError("Topology declares no nodes")

    edges = []
    for entry in doc["edges"]:
        try:
            u, v, raw_cap = entry["u"], entry["v"], entry["cap_mbps"]
        except (TypeError, KeyError) as e:
            raise ParseError(f"Malformed edge entry {entry!r}") from e
        if not all(isinstance(n, int) and not isinstance(n, bool) for n in (u, v)):
            raise ParseError(f"Edge endpoints must be integers in {entry!r}")
        if u not in positions or v not in positions:
            raise ParseError(f"Edge ({u}, {v}) references an undeclared node")
        try:
            cap = as_fraction(raw_cap)
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise ParseError(f"Bad capacity {raw_cap!r} on edge ({u}, {v})") from e
        edges.append((u, v, cap))

    return ConnectivityGraph(node_count, edges, [positions[i] for i in range(node_count)])


def _capacity_to_json(cap: Fraction):
    return cap.numerator if cap.denominator == 1 else f"{cap.numerator}/{cap.denominator}"


def dump_topology(graph: ConnectivityGraph) -> str:
    """Serialize a graph to the topology format, byte-stable for equal graphs."""
    positions = graph.positions or tuple((0.0, 0.0) for _ in range(graph.node_count))
    doc = {
        "nodes": [
            {"id": i, "x": round(x, 12), "y": round(y, 12)} for i, (x, y) in enumerate(positions)
        ],
        "edges": [
            {"u": u, "v": v, "cap_mbps": _capacity_to_json(c)}
            for u, v, c in graph.undirected_edges()
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
