"""
Frame model, link-conflict predicate and the SpatialReuse allocator.

Conflicts follow the protocol interference model with transmission range equal
to interference range: two links cannot share a slot when they share a node or
when either sender is a neighbour of the other link's receiver.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Dict, List, Tuple

from core.errors import MissingLink, StalePlan
from core.topology import ConnectivityGraph
from models import ZERO, Allocation, AllocationPlan, Link, Schedule, TimeSlot

logger = logging.getLogger(__name__)


def _clash(graph: ConnectivityGraph, a: Link, b: Link) -> bool:
    m, n = a.src, a.dst
    p, q = b.src, b.dst
    if m in (p, q) or n in (p, q):
        return True
    return p in graph.neighbors(n) or m in graph.neighbors(q)


def conflicts(graph: ConnectivityGraph, a: Link, b: Link) -> bool:
    """
    Whether two directed links cannot transmit in the same slot.

    Symmetric; a link always conflicts with itself.

    Raises:
        MissingLink: If either link is absent from the physical graph
    """
    for link in (a, b):
        if not graph.has_link(link.src, link.dst):
            raise MissingLink(link.src, link.dst)
    return _clash(graph, a, b)


def slot_feasible(graph: ConnectivityGraph, slot: TimeSlot, link: Link) -> bool:
    """True when ``link`` conflicts with nothing already in ``slot``."""
    return not any(_clash(graph, link, alloc.link) for alloc in slot.allocations)


def total_duration(schedule: Schedule) -> Fraction:
    """Exact frame length."""
    return sum((slot.duration for slot in schedule.slots), ZERO)


def spatial_reuse(
    schedule: Schedule, graph: ConnectivityGraph, link: Link, needed: Fraction
) -> AllocationPlan:
    """
    Plan ``needed`` seconds of airtime for ``link`` (pure; nothing is mutated).

    Slots are scanned in creation order and feasible ones collected until
    their total reaches ``needed``. Then:

    - nothing feasible: one new slot of ``needed``;
    - collected more than needed: the last collected slot is split so the
      allocation totals exactly ``needed``;
    - collected at most needed: all collected slots plus a new slot for any
      shortfall.

    Args:
        schedule: Frame to plan against
        graph: Physical graph for the conflict predicate
        link: Requesting link
        needed: Required airtime, > 0

    Returns:
        AllocationPlan whose ``delta`` is the newly created time
    """
    if needed <= 0:
        raise ValueError(f"needed must be positive, got {needed}")

    available: List[TimeSlot] = []
    gathered = ZERO
    for slot in schedule.slots:
        if slot_feasible(graph, slot, link):
            available.append(slot)
            gathered += slot.duration
            if gathered >= needed:
                break

    next_id = schedule.next_slot_id()
    basis = schedule.revision

    if not available:
        return AllocationPlan(
            link=link.key,
            needed=needed,
            created=((next_id, needed),),
            delta=needed,
            basis=basis,
        )

    if gathered > needed:
        last = available[-1]
        cut = needed - (gathered - last.duration)
        reused = tuple((s.id, s.duration) for s in available[:-1]) + ((last.id, cut),)
        return AllocationPlan(
            link=link.key,
            needed=needed,
            reused=reused,
            splits=((last.id, cut, next_id),),
            delta=ZERO,
            basis=basis,
        )

    shortfall = needed - gathered
    created = ((next_id, shortfall),) if shortfall > 0 else ()
    return AllocationPlan(
        link=link.key,
        needed=needed,
        reused=tuple((s.id, s.duration) for s in available),
        created=created,
        delta=shortfall,
        basis=basis,
    )


def _reflow(slot: TimeSlot, duration: Fraction, slot_id: int) -> TimeSlot:
    return TimeSlot(
        id=slot_id,
        duration=duration,
        allocations=tuple(Allocation(a.link, a.link.capacity * duration) for a in slot.allocations),
    )


def apply_plan(schedule: Schedule, plan: AllocationPlan, link: Link) -> Schedule:
    """
    Execute a plan: split, extend and create slots, then record ``link``.

    Every allocation carries ``capacity x slot duration``; links already on a
    split slot are carried onto both fragments.

    Returns:
        New Schedule with revision + 1; total duration grows by ``plan.delta``

    Raises:
        StalePlan: If the schedule changed since the plan was computed
    """
    if plan.basis != schedule.revision:
        raise StalePlan(
            f"Plan for {link} was made against revision {plan.basis}, "
            f"schedule is at revision {schedule.revision}"
        )
    if plan.link != link.key:
        raise StalePlan(f"Plan is for link {plan.link}, not {link.key}")

    slots: Dict[int, TimeSlot] = {s.id: s for s in schedule.slots}
    order = [s.id for s in schedule.slots]

    for slot_id, cut, new_id in plan.splits:
        slot = slots.get(slot_id)
        if slot is None or not 0 < cut < slot.duration or new_id in slots:
            raise StalePlan(f"Cannot split slot {slot_id} at {cut}")
        slots[slot_id] = _reflow(slot, cut, slot_id)
        slots[new_id] = _reflow(slot, slot.duration - cut, new_id)
        order.append(new_id)

    for slot_id, used in plan.reused:
        slot = slots.get(slot_id)
        if slot is None or slot.duration != used or slot.has_link(link.key):
            raise StalePlan(f"Slot {slot_id} no longer offers {used} s to {link}")
        slots[slot_id] = TimeSlot(
            slot.id, slot.duration, slot.allocations + (Allocation(link, link.capacity * used),)
        )

    for slot_id, duration in plan.created:
        if slot_id in slots:
            raise StalePlan(f"Slot id {slot_id} already exists")
        slots[slot_id] = TimeSlot(slot_id, duration, (Allocation(link, link.capacity * duration),))
        order.append(slot_id)

    return Schedule(slots=tuple(slots[i] for i in order), revision=schedule.revision + 1)


def allocate(
    schedule: Schedule, graph: ConnectivityGraph, link: Link, needed: Fraction
) -> Tuple[AllocationPlan, Schedule]:
    """Plan and apply in one step."""
    plan = spatial_reuse(schedule, graph, link, needed)
    return plan, apply_plan(schedule, plan, link)
