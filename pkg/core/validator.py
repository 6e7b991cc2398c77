"""
Feasibility checks for multipath solutions.

This module re-derives every constraint from the raw slots and allocations of
a Solution: interference within each slot, per-link capacity, flow
conservation at relays, source/destination balance, per-link airtime and the
reported throughput.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from fractions import Fraction
from typing import Dict, List

from core.topology import ConnectivityGraph
from models import ZERO, LinkKey, Solution, TimeSlot, Violation
from models import ViolationKind as Kind

logger = logging.getLogger(__name__)


class SolutionValidator:
    """
    Checks a Solution against a physical graph.

    With ``literal=True`` receivers are only required to hear a single sender
    and not to transmit themselves; otherwise the protocol interference model
    applies, which forbids any other transmitter in a receiver's range.
    """

    def __init__(self, graph: ConnectivityGraph, literal: bool = False) -> None:
        """
        Initialize the validator.

        Args:
            graph: Physical graph the solution was built on
            literal: Use the relaxed receiver rule
        """
        self.graph = graph
        self.literal = literal

    def validate(self, sol: Solution) -> List[Violation]:
        """
        Run every check.

        Returns:
            Violations found; an empty list means the solution is feasible
        """
        violations: List[Violation] = []
        violations.extend(self.check_paths(sol))
        for slot in sol.schedule.slots:
            violations.extend(self.check_slot(slot))
        violations.extend(self.check_conservation(sol))
        violations.extend(self.check_link_time(sol))
        violations.extend(self.check_throughput(sol))
        if violations:
            logger.info(f"Validation found {len(violations)} violation(s)")
        return violations

    def check_paths(self, sol: Solution) -> List[Violation]:
        out = []
        for index, path in enumerate(sol.paths, start=1):
            name = f"p({path.id})"
            if path.id != index:
                out.append(Violation(Kind.PATH, f"Path {index} carries id {path.id}"))
            if not path.links:
                out.append(Violation(Kind.PATH, f"{name} has no links"))
                continue
            nodes = path.nodes
            if nodes[0] != sol.source or nodes[-1] != sol.destination:
                out.append(Violation(Kind.PATH, f"{name} does not join source and destination"))
            if any(a.dst != b.src for a, b in zip(path.links, path.links[1:])):
                out.append(Violation(Kind.PATH, f"{name} is disconnected"))
            if len(set(nodes)) != len(nodes):
                out.append(Violation(Kind.PATH, f"{name} revisits a node"))
            if path.bottleneck != min(link.capacity for link in path.links):
                out.append(
                    Violation(Kind.PATH, f"{name} bottleneck {path.bottleneck} is not its minimum")
                )
        return out

    def check_slot(self, slot: TimeSlot) -> List[Violation]:
        """Interference, capacity and topology checks for one slot."""
        out = []
        sid = slot.id
        if slot.duration <= 0:
            out.append(Violation(Kind.CAPACITY, "Non-positive duration", slot_id=sid))

        for alloc in slot.allocations:
            link = alloc.link
            if (
                not self.graph.has_link(link.src, link.dst)
                or self.graph.capacity(link.src, link.dst) != link.capacity
            ):
                out.append(Violation(Kind.TOPOLOGY, f"Link {link} is not in the graph", slot_id=sid))
            limit = link.capacity * slot.duration
            if alloc.flow < 0 or alloc.flow > limit:
                out.append(
                    Violation(Kind.CAPACITY, f"Flow {alloc.flow} on {link} exceeds {limit}", slot_id=sid)
                )

        sends: Dict[int, int] = defaultdict(int)
        receives: Dict[int, int] = defaultdict(int)
        for link in slot.links:
            sends[link.src] += 1
            receives[link.dst] += 1

        for node in sorted(set(sends) | set(receives)):
            if sends[node] and receives[node]:
                out.append(
                    Violation(Kind.PRIMARY, "Sends and receives in one slot", slot_id=sid, node=node)
                )
            elif not self.literal and sends[node] + receives[node] > 1:
                out.append(
                    Violation(Kind.PRIMARY, "Takes part in several transmissions", slot_id=sid, node=node)
                )
            if receives[node] > 1:
                out.append(
                    Violation(Kind.RECEIVER, "Receives from several senders", slot_id=sid, node=node)
                )

        if not self.literal:
            senders = {link.src for link in slot.links}
            for link in slot.links:
                heard = (self.graph.neighbors(link.dst) & senders) - {link.src}
                for other in sorted(heard):
                    out.append(
                        Violation(
                            Kind.RECEIVER,
                            f"Receiver of {link} hears sender {other}",
                            slot_id=sid,
                            node=link.dst,
                        )
                    )
        return out

    def _net_flows(self, sol: Solution) -> Dict[int, Fraction]:
        net: Dict[int, Fraction] = defaultdict(Fraction)
        for slot in sol.schedule.slots:
            for alloc in slot.allocations:
                net[alloc.link.src] -= alloc.flow
                net[alloc.link.dst] += alloc.flow
        return net

    def check_conservation(self, sol: Solution) -> List[Violation]:
        """Relays forward what they receive; the destination gets what the source sends."""
        out = []
        net = self._net_flows(sol)
        for node in sorted(net):
            if node in (sol.source, sol.destination):
                continue
            if net[node] != 0:
                out.append(Violation(Kind.CONSERVATION, f"Net inflow {net[node]} Mb", node=node))

        sent = -net.get(sol.source, ZERO)
        received = net.get(sol.destination, ZERO)
        if sent != received:
            out.append(
                Violation(
                    Kind.SOURCE_DESTINATION,
                    f"Source sends {sent} Mb, destination receives {received} Mb",
                )
            )
        if received != sol.total_flow:
            out.append(
                Violation(
                    Kind.SOURCE_DESTINATION,
                    f"Destination receives {received} Mb per frame, paths carry {sol.total_flow} Mb",
                )
            )
        return out

    def check_link_time(self, sol: Solution) -> List[Violation]:
        """Each link gets exactly the airtime its paths need."""
        wanted: Dict[LinkKey, Fraction] = defaultdict(Fraction)
        for path in sol.paths:
            for link in path.links:
                wanted[link.key] += path.bottleneck / link.capacity
        scheduled: Dict[LinkKey, Fraction] = defaultdict(Fraction)
        for slot in sol.schedule.slots:
            for link in slot.links:
                scheduled[link.key] += slot.duration

        out = []
        for key in sorted(set(wanted) | set(scheduled)):
            if wanted[key] != scheduled[key]:
                out.append(
                    Violation(
                        Kind.LINK_TIME,
                        f"Link {key[0]}->{key[1]} has {scheduled[key]} s, needs {wanted[key]} s",
                    )
                )
        return out

    def check_throughput(self, sol: Solution) -> List[Violation]:
        frame = sum((s.duration for s in sol.schedule.slots), ZERO)
        expected = sol.total_flow / frame if frame > 0 else ZERO
        if sol.throughput != expected:
            return [
                Violation(Kind.THROUGHPUT, f"Reported {sol.throughput} Mbps, frame gives {expected}")
            ]
        return []


def validate(sol: Solution, graph: ConnectivityGraph, literal: bool = False) -> List[Violation]:
    """Validate a solution; see SolutionValidator."""
    return SolutionValidator(graph, literal).validate(sol)
