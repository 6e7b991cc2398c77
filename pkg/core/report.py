"""
Text rendering of solutions and schedules, and the parser that reads a
solution dump back for verification.

Dump layout::

    p(1): 0->1->3 bottleneck=5
    slot 0 1/1 : 0->1@5
    slot 1 2/11 : 1->3@5 0->2@11
    throughput=7/2 (3.500 Mbps)
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import List, Optional

from core.errors import MissingLink, ParseError
from core.topology import ConnectivityGraph
from models import (
    Allocation,
    Link,
    MtmResult,
    PathFlow,
    Schedule,
    Solution,
    TimeSlot,
    as_fraction,
)

PATH_LINE = re.compile(r"^p\((\d+)\):\s+(\d+(?:->\d+)+)\s+bottleneck=(\S+)$")
SLOT_LINE = re.compile(r"^slot\s+(\d+)\s+(\d+/\d+)\s+:(.*)$")
ALLOC_TOKEN = re.compile(r"^(\d+)->(\d+)@(\d+(?:/\d+)?)$")
THROUGHPUT_LINE = re.compile(r"^throughput=(\S+)(?:\s+\(.*\))?$")


def format_fraction(value: Fraction) -> str:
    """Exact value: ``7`` or ``7/2``."""
    return str(as_fraction(value))


def format_rate(value) -> str:
    """Three decimals, rounding halves away from zero on the exact value."""
    x = as_fraction(value)
    sign = "-" if x < 0 else ""
    milli = math.floor(abs(x) * 1000 + Fraction(1, 2))
    return f"{sign}{milli // 1000}.{milli % 1000:03d}"


def format_path(path: PathFlow) -> str:
    nodes = "->".join(str(n) for n in path.nodes)
    return f"p({path.id}): {nodes} bottleneck={format_fraction(path.bottleneck)}"


def format_schedule(schedule: Schedule) -> List[str]:
    """One line per slot in creation order, durations always as ``p/q``."""
    lines = []
    for slot in schedule.slots:
        d = slot.duration
        links = " ".join(str(link) for link in slot.links)
        lines.append(f"slot {slot.id} {d.numerator}/{d.denominator} : {links}".rstrip())
    return lines


def format_throughput(value: Fraction) -> str:
    return f"throughput={format_fraction(value)} ({format_rate(value)} Mbps)"


def format_solution(sol: Solution, include_schedule: bool = False) -> str:
    lines = [format_path(p) for p in sol.paths]
    if include_schedule:
        lines.extend(format_schedule(sol.schedule))
    lines.append(format_throughput(sol.throughput))
    return "\n".join(lines) + "\n"


def format_mtm(result: MtmResult) -> str:
    nodes = "->".join(str(n) for n in result.path.nodes)
    return (
        f"mtm: {nodes} bottleneck={format_fraction(result.path.bottleneck)} "
        f"medium_time={format_fraction(result.medium_time_per_bit)}\n"
        f"{format_throughput(result.throughput)}\n"
    )


def format_comparison(sol: Solution, baseline: MtmResult) -> str:
    ratio = sol.throughput / baseline.throughput if baseline.throughput else Fraction(0)
    return (
        f"multipath={format_rate(sol.throughput)} mtm={format_rate(baseline.throughput)} "
        f"ratio={format_rate(ratio)}\n"
        f"paths={len(sol.paths)} slots={len(sol.schedule.slots)} "
        f"mtm_hops={baseline.path.hops}\n"
    )


def _parse_fraction(text: str, line_no: int) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"Line {line_no}: bad number {text!r}") from e


def parse_solution_dump(text: str, graph: ConnectivityGraph) -> Solution:
    """
    Rebuild a Solution from a dump written with the schedule included.

    Path links take their capacity from ``graph``; slot allocations keep the
    capacity written in the dump and carry ``capacity x duration``, so a
    tampered dump shows up as a validation failure rather than being repaired.

    Raises:
        ParseError: On malformed lines or paths over links the graph lacks
    """
    paths: List[PathFlow] = []
    slots: List[TimeSlot] = []
    reported: Optional[Fraction] = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if m := PATH_LINE.match(line):
            nodes = [int(n) for n in m.group(2).split("->")]
            try:
                links = tuple(graph.link(u, v) for u, v in zip(nodes, nodes[1:]))
            except MissingLink as e:
                raise ParseError(f"Line {line_no}: {e}") from e
            bottleneck = _parse_fraction(m.group(3), line_no)
            paths.append(PathFlow(int(m.group(1)), links, bottleneck))
        elif m := SLOT_LINE.match(line):
            duration = _parse_fraction(m.group(2), line_no)
            allocations = []
            for token in m.group(3).split():
                tm = ALLOC_TOKEN.match(token)
                if tm is None:
                    raise ParseError(f"Line {line_no}: bad allocation {token!r}")
                link = Link(int(tm.group(1)), int(tm.group(2)), _parse_fraction(tm.group(3), line_no))
                allocations.append(Allocation(link, link.capacity * duration))
            slots.append(TimeSlot(int(m.group(1)), duration, tuple(allocations)))
        elif m := THROUGHPUT_LINE.match(line):
            reported = _parse_fraction(m.group(1), line_no)
        else:
            raise ParseError(f"Line {line_no}: unrecognised {line!r}")

    if not paths:
        raise ParseError("Dump lists no paths")
    if reported is None:
        raise ParseError("Dump has no throughput line")

    deleted = frozenset((link.dst, link.src) for p in paths for link in p.links)
    return Solution(
        source=paths[0].nodes[0],
        destination=paths[0].nodes[-1],
        paths=tuple(paths),
        schedule=Schedule(tuple(slots)),
        deleted_routing_links=deleted,
        throughput=reported,
    )
