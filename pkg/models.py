"""
Data models for meshflow.

This module defines the value types shared by the topology, scheduling,
optimization and reporting layers. Rates are megabits per second, durations are
seconds and flows are megabits; all three are exact ``Fraction`` values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple

from core.errors import ConfigError

LinkKey = Tuple[int, int]

ZERO = Fraction(0)


def as_fraction(value) -> Fraction:
    """Coerce ints, floats, decimal strings and fraction strings to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        # repr() round-trips the shortest decimal, so 5.5 -> 11/2 and 0.1 -> 1/10
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True, order=True)
class Link:
    """
    A directed wireless link.

    Attributes:
        src: Transmitting node id
        dst: Receiving node id
        capacity: Link rate in Mbps
    """

    src: int
    dst: int
    capacity: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "capacity", as_fraction(self.capacity))

    @property
    def key(self) -> LinkKey:
        return (self.src, self.dst)

    def reversed(self) -> Link:
        return Link(self.dst, self.src, self.capacity)

    def __str__(self) -> str:
        return f"{self.src}->{self.dst}@{self.capacity}"


@dataclass(frozen=True)
class Allocation:
    """Useful data carried by one link during one whole slot (megabits)."""

    link: Link
    flow: Fraction


@dataclass(frozen=True)
class TimeSlot:
    """
    One variable-duration slot of the frame.

    Attributes:
        id: Slot id; ids grow in creation order
        duration: Slot length in seconds
        allocations: Concurrent transmissions, in the order they were added
    """

    id: int
    duration: Fraction
    allocations: Tuple[Allocation, ...] = ()

    @property
    def links(self) -> Tuple[Link, ...]:
        return tuple(a.link for a in self.allocations)

    def has_link(self, key: LinkKey) -> bool:
        return any(a.link.key == key for a in self.allocations)


@dataclass(frozen=True)
class Schedule:
    """
    The frame: slots in creation order.

    ``revision`` counts applied plans and lets stale plans be detected.
    """

    slots: Tuple[TimeSlot, ...] = ()
    revision: int = 0

    def slot(self, slot_id: int) -> Optional[TimeSlot]:
        for slot in self.slots:
            if slot.id == slot_id:
                return slot
        return None

    def next_slot_id(self) -> int:
        return max((s.id for s in self.slots), default=-1) + 1

    def link_time(self, key: LinkKey) -> Fraction:
        """Total time allocated to a directed link across the frame."""
        return sum((s.duration for s in self.slots if s.has_link(key)), ZERO)


@dataclass(frozen=True)
class AllocationPlan:
    """
    Result of a SpatialReuse scan for one link request.

    Attributes:
        link: Directed link the plan allocates
        needed: Requested transmission time
        reused: (slot id, time used) for existing slots, after any split
        splits: (slot id, cut point, new slot id); the slot keeps ``cut`` seconds
        created: (new slot id, duration) for freshly created slots
        delta: Newly created frame time (splits contribute nothing)
        basis: Schedule revision the plan was computed against
    """

    link: LinkKey
    needed: Fraction
    reused: Tuple[Tuple[int, Fraction], ...] = ()
    splits: Tuple[Tuple[int, Fraction, int], ...] = ()
    created: Tuple[Tuple[int, Fraction], ...] = ()
    delta: Fraction = ZERO
    basis: int = 0

    @property
    def allocated(self) -> Fraction:
        return sum((d for _, d in self.reused), ZERO) + sum((d for _, d in self.created), ZERO)


@dataclass(frozen=True)
class PathFlow:
    """
    An accepted (or candidate) source-to-destination path.

    Attributes:
        id: 1-based acceptance order; 0 for an unaccepted candidate
        links: Ordered directed links from source to destination
        bottleneck: Minimum link capacity along the path
    """

    id: int
    links: Tuple[Link, ...]
    bottleneck: Fraction

    @property
    def nodes(self) -> Tuple[int, ...]:
        if not self.links:
            return ()
        return (self.links[0].src,) + tuple(link.dst for link in self.links)

    @property
    def hops(self) -> int:
        return len(self.links)


@dataclass(frozen=True)
class Solution:
    """
    State of a multipath solve.

    Attributes:
        source: Source node
        destination: Destination node
        paths: Accepted path flows in acceptance order
        schedule: Committed frame
        deleted_routing_links: Directions removed from routing by path commits
        throughput: Total bottleneck flow divided by frame duration
    """

    source: int
    destination: int
    paths: Tuple[PathFlow, ...] = ()
    schedule: Schedule = field(default_factory=Schedule)
    deleted_routing_links: FrozenSet[LinkKey] = frozenset()
    throughput: Fraction = ZERO

    @property
    def total_flow(self) -> Fraction:
        return sum((p.bottleneck for p in self.paths), ZERO)


@dataclass(frozen=True)
class Candidate:
    """
    A scheduled but not yet committed path.

    Attributes:
        path: The candidate path (id 0)
        plans: One AllocationPlan per link, in path order
        delta: Sum of plan deltas
        new_throughput: Throughput the solution would have after commit
        schedule: Tentatively extended frame
    """

    path: PathFlow
    plans: Tuple[AllocationPlan, ...]
    delta: Fraction
    new_throughput: Fraction
    schedule: Schedule = field(default_factory=Schedule, repr=False)


@dataclass(frozen=True)
class MtmResult:
    """
    Single-path medium-time-metric baseline.

    Attributes:
        path: The chosen route
        medium_time_per_bit: Sum of 1/c over the route (seconds per megabit)
        throughput: Throughput of the route under the shared scheduler
    """

    path: PathFlow
    medium_time_per_bit: Fraction
    throughput: Fraction


# 802.11b rate set in Mbps
IEEE80211B_RATES: Tuple[Fraction, ...] = (
    Fraction(1),
    Fraction(2),
    Fraction(11, 2),
    Fraction(11),
)


@dataclass(frozen=True)
class TopologySpec:
    """
    Parameters of the random unit-disk instance generator.

    Attributes:
        node_count: Number of nodes placed in the unit square
        target_directed_link_count: Wanted number of directed links (±5%)
        cap_min: Smallest capacity in Mbps
        cap_max: Largest capacity in Mbps
        cap_step: Capacity grid step in Mbps
        seed: 64-bit master seed
        rates: Optional explicit rate set; overrides the cap grid when given
        bridge_components: Join leftover components instead of failing
    """

    node_count: int
    target_directed_link_count: int
    cap_min: int = 5
    cap_max: int = 15
    cap_step: int = 1
    seed: int = 0
    rates: Optional[Tuple[Fraction, ...]] = None
    bridge_components: bool = True

    def __post_init__(self) -> None:
        if self.node_count < 2:
            raise ConfigError(f"node_count must be at least 2, got {self.node_count}")
        if self.target_directed_link_count < 2:
            raise ConfigError("target_directed_link_count must be at least 2")
        max_links = self.node_count * (self.node_count - 1)
        if self.target_directed_link_count > max_links:
            raise ConfigError(
                f"target_directed_link_count {self.target_directed_link_count} exceeds "
                f"the complete graph ({max_links})"
            )
        if self.rates is not None:
            if not self.rates or any(as_fraction(r) <= 0 for r in self.rates):
                raise ConfigError("rates must be a non-empty set of positive values")
            return
        if self.cap_min <= 0:
            raise ConfigError("cap_min must be positive")
        if self.cap_min > self.cap_max:
            raise ConfigError(f"cap_min {self.cap_min} exceeds cap_max {self.cap_max}")
        if self.cap_step <= 0 or (self.cap_max - self.cap_min) % self.cap_step != 0:
            raise ConfigError("cap_step must divide cap_max - cap_min")

    def capacity_levels(self) -> List[Fraction]:
        """All capacities the generator may assign, ascending."""
        if self.rates is not None:
            return sorted({as_fraction(r) for r in self.rates})
        return [Fraction(c) for c in range(self.cap_min, self.cap_max + 1, self.cap_step)]


@dataclass(frozen=True)
class OracleBudget:
    """Limits for the brute-force oracle."""

    max_nodes: int = 12
    max_paths_considered: int = 3
    max_hops: int = 8
    max_sequences: int = 100_000

    def __post_init__(self) -> None:
        for name in ("max_nodes", "max_paths_considered", "max_hops", "max_sequences"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")


class ViolationKind(Enum):
    """Constraint family a violation belongs to."""

    PRIMARY = "primary"  # a node in two transmissions, or sending while receiving
    RECEIVER = "receiver"  # another neighbour of the receiver transmits
    CAPACITY = "capacity"  # flow above capacity x duration
    CONSERVATION = "conservation"  # relay in-flow differs from out-flow
    SOURCE_DESTINATION = "source-destination"  # source out differs from destination in
    THROUGHPUT = "throughput"  # reported throughput differs from the frame
    LINK_TIME = "link-time"  # link airtime differs from what its paths need
    PATH = "path"  # malformed path flow
    TOPOLOGY = "topology"  # allocation on a link the graph does not have


@dataclass(frozen=True)
class Violation:
    """One failed constraint check."""

    kind: ViolationKind
    message: str
    slot_id: Optional[int] = None
    node: Optional[int] = None

    def __str__(self) -> str:
        where = []
        if self.slot_id is not None:
            where.append(f"slot {self.slot_id}")
        if self.node is not None:
            where.append(f"node {self.node}")
        suffix = f" ({', '.join(where)})" if where else ""
        return f"[{self.kind.value}] {self.message}{suffix}"


@dataclass
class ExperimentConfig:
    """
    Parameters of the hop-distance sweep.

    Attributes:
        node_count: Nodes per generated instance
        target_links: Directed link target per instance
        cap_min: Smallest capacity in Mbps
        cap_max: Largest capacity in Mbps
        cap_step: Capacity grid step
        trials: Trials per hop bucket
        hop_min: Smallest source-destination hop distance
        hop_max: Largest source-destination hop distance
        seed: Master seed
        output: CSV path, or None for stdout
        workers: Worker processes (1 runs inline)
        timing: Record wall-clock runtime per trial
        reuse_baseline: Let the MTM baseline use spatial reuse
    """

    node_count: int = 100
    target_links: int = 320
    cap_min: int = 5
    cap_max: int = 15
    cap_step: int = 1
    trials: int = 10
    hop_min: int = 1
    hop_max: int = 5
    seed: int = 1
    output: Optional[str] = None
    workers: int = 1
    timing: bool = False
    reuse_baseline: bool = True

    def validate(self) -> None:
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if not 1 <= self.hop_min <= self.hop_max <= self.node_count - 1:
            raise ConfigError(
                f"hop range {self.hop_min}..{self.hop_max} must lie within 1..{self.node_count - 1}"
            )
        # Delegates capacity and size checks
        self.topology_spec(self.seed)

    def topology_spec(self, seed: int) -> TopologySpec:
        return TopologySpec(
            node_count=self.node_count,
            target_directed_link_count=self.target_links,
            cap_min=self.cap_min,
            cap_max=self.cap_max,
            cap_step=self.cap_step,
            seed=seed,
        )

    @classmethod
    def from_dict(cls, data: Dict) -> ExperimentConfig:
        """Build from a mapping (e.g. a YAML document), rejecting unknown keys and bad types."""
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"Unknown experiment settings: {', '.join(unknown)}")
        for name, value in data.items():
            default = cls.__dataclass_fields__[name].default
            if name == "output":
                ok, kind = value is None or isinstance(value, str), "a path"
            elif isinstance(default, bool):
                ok, kind = isinstance(value, bool), "true or false"
            else:
                ok, kind = isinstance(value, int) and not isinstance(value, bool), "an integer"
            if not ok:
                raise ConfigError(f"Experiment setting {name} must be {kind}, got {value!r}")
        return cls(**data)


@dataclass(frozen=True)
class ExperimentRow:
    """One trial of the hop-distance sweep."""

    hop: int
    trial: int
    seed: int
    source: int
    destination: int
    multipath: Fraction
    mtm: Fraction
    paths: int
    slots: int
    runtime_ms: Optional[float] = None

    @property
    def ratio(self) -> Fraction:
        return self.multipath / self.mtm if self.mtm else ZERO
