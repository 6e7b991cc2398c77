"""Tests for the conflict predicate and the SpatialReuse allocator."""

from fractions import Fraction

import pytest

from core.errors import MissingLink, StalePlan
from core.schedule import allocate, apply_plan, conflicts, slot_feasible, spatial_reuse, total_duration
from models import Allocation, Link, Schedule, TimeSlot


def _slot(slot_id, duration, *links):
    return TimeSlot(slot_id, duration, tuple(Allocation(link, link.capacity * duration) for link in links))


class TestConflicts:
    """Test the protocol-model conflict predicate."""

    def test_self_conflict(self, chain):
        """Test that a link conflicts with itself."""
        graph = chain(4)
        assert conflicts(graph, graph.link(0, 1), graph.link(0, 1))

    def test_shared_node(self, chain):
        """Test adjacent hops conflict."""
        graph = chain(4)
        assert conflicts(graph, graph.link(0, 1), graph.link(1, 2))
        assert conflicts(graph, graph.link(0, 1), graph.link(2, 1))

    def test_sender_near_receiver(self, chain):
        """Test that 2->3 corrupts reception at 1."""
        graph = chain(4)
        assert conflicts(graph, graph.link(0, 1), graph.link(2, 3))
        assert conflicts(graph, graph.link(2, 3), graph.link(0, 1))

    def test_far_links_do_not_conflict(self, chain):
        """Test three-hop separation allows reuse."""
        graph = chain(4)
        assert not conflicts(graph, graph.link(0, 1), graph.link(3, 4))

    def test_facing_away_links_do_not_conflict(self, chain):
        """Test 0->1 and 3->2 are compatible: neither sender reaches the other receiver."""
        graph = chain(3)
        assert not conflicts(graph, graph.link(0, 1), graph.link(3, 2))

    def test_missing_link(self, chain):
        """Test that a link absent from the graph raises MissingLink."""
        graph = chain(3)
        with pytest.raises(MissingLink):
            conflicts(graph, graph.link(0, 1), Link(0, 3, 5))


class TestSpatialReuse:
    """Test allocation planning."""

    def test_split_example(self, chain):
        """Test 0.6 s against feasible 0.4 s and 0.3 s slots: split, no new time."""
        graph = chain(9, 10)
        far_a, far_b = graph.link(5, 6), graph.link(7, 8)
        schedule = Schedule(
            (_slot(6, Fraction(2, 5), far_a), _slot(4, Fraction(3, 10), far_b)), revision=3
        )
        link = graph.link(0, 1)

        plan = spatial_reuse(schedule, graph, link, Fraction(3, 5))
        assert plan.reused == ((6, Fraction(2, 5)), (4, Fraction(1, 5)))
        assert plan.splits == ((4, Fraction(1, 5), 7),)
        assert plan.created == ()
        assert plan.delta == 0
        assert plan.basis == 3

        after = apply_plan(schedule, plan, link)
        assert [s.id for s in after.slots] == [6, 4, 7]
        assert after.slot(4).duration == Fraction(1, 5)
        assert after.slot(7).duration == Fraction(1, 10)
        assert after.slot(4).links == (far_b, link)
        assert after.slot(7).links == (far_b,)
        # Prior links are re-flowed onto both fragments
        assert after.slot(4).allocations[0].flow == 2
        assert after.slot(7).allocations[0].flow == 1
        assert after.link_time(link.key) == Fraction(3, 5)
        assert total_duration(after) == total_duration(schedule)
        assert after.revision == 4

    def test_empty_schedule_creates_slot(self, chain):
        """Test case with nothing to reuse."""
        graph = chain(2)
        plan, after = allocate(Schedule(), graph, graph.link(0, 1), Fraction(1, 2))
        assert plan.created == ((0, Fraction(1, 2)),)
        assert plan.delta == Fraction(1, 2)
        assert total_duration(after) == Fraction(1, 2)

    def test_shortfall_creates_remainder(self, chain):
        """Test that feasible time below the request is topped up with a new slot."""
        graph = chain(6)
        schedule = Schedule((_slot(0, Fraction(1, 4), graph.link(4, 5)),))
        plan = spatial_reuse(schedule, graph, graph.link(0, 1), Fraction(1))
        assert plan.reused == ((0, Fraction(1, 4)),)
        assert plan.created == ((1, Fraction(3, 4)),)
        assert plan.delta == Fraction(3, 4)

    def test_exact_fit(self, chain):
        """Test that exactly enough feasible time needs no split and no new slot."""
        graph = chain(6)
        schedule = Schedule((_slot(0, Fraction(1, 2), graph.link(4, 5)),))
        plan = spatial_reuse(schedule, graph, graph.link(0, 1), Fraction(1, 2))
        assert plan.splits == () and plan.created == ()
        assert plan.delta == 0

    def test_conflicting_slots_skipped(self, chain):
        """Test that infeasible slots are passed over in creation order."""
        graph = chain(6)
        schedule = Schedule(
            (_slot(0, Fraction(1), graph.link(1, 2)), _slot(1, Fraction(1), graph.link(4, 5)))
        )
        link = graph.link(0, 1)
        assert not slot_feasible(graph, schedule.slots[0], link)
        plan = spatial_reuse(schedule, graph, link, Fraction(1))
        assert plan.reused == ((1, Fraction(1)),)

    def test_non_positive_request(self, chain):
        """Test that a zero request is rejected."""
        graph = chain(2)
        with pytest.raises(ValueError):
            spatial_reuse(Schedule(), graph, graph.link(0, 1), Fraction(0))

    def test_new_ids_follow_max(self, chain):
        """Test that new slot ids are max + 1, not count."""
        graph = chain(2)
        schedule = Schedule((_slot(9, Fraction(1), graph.link(0, 1)),))
        plan = spatial_reuse(schedule, graph, graph.link(1, 2), Fraction(1))
        assert plan.created == ((10, Fraction(1)),)


class TestApplyPlan:
    """Test plan execution."""

    def test_stale_revision(self, chain):
        """Test that a plan applied to a newer schedule is refused."""
        graph = chain(3)
        plan, after = allocate(Schedule(), graph, graph.link(0, 1), Fraction(1))
        with pytest.raises(StalePlan, match="revision"):
            apply_plan(after, plan, graph.link(0, 1))

    def test_wrong_link(self, chain):
        """Test that a plan cannot be applied for another link."""
        graph = chain(3)
        plan = spatial_reuse(Schedule(), graph, graph.link(0, 1), Fraction(1))
        with pytest.raises(StalePlan):
            apply_plan(Schedule(), plan, graph.link(1, 2))

    def test_mismatched_duration(self, chain):
        """Test that a reused slot whose length changed is detected."""
        graph = chain(6)
        original = Schedule((_slot(0, Fraction(1), graph.link(4, 5)),))
        plan = spatial_reuse(original, graph, graph.link(0, 1), Fraction(1))
        changed = Schedule((_slot(0, Fraction(1, 2), graph.link(4, 5)),))
        with pytest.raises(StalePlan, match="Slot 0"):
            apply_plan(changed, plan, graph.link(0, 1))

    def test_chain_mod_three_reuse(self, chain):
        """Test that a 6-hop chain packs into three 1 s slots."""
        graph = chain(6)
        schedule = Schedule()
        for i in range(6):
            _, schedule = allocate(schedule, graph, graph.link(i, i + 1), Fraction(1))
        assert [[link.key for link in s.links] for s in schedule.slots] == [
            [(0, 1), (3, 4)],
            [(1, 2), (4, 5)],
            [(2, 3), (5, 6)],
        ]
        assert total_duration(schedule) == 3

    def test_duration_grows_by_delta(self, chain):
        """Test that every applied plan grows the frame by exactly its delta."""
        graph = chain(8, Fraction(11, 2))
        schedule = Schedule()
        for i, needed in enumerate([Fraction(1, 3), Fraction(1), Fraction(1, 7)] * 2 + [Fraction(2)] * 2):
            plan = spatial_reuse(schedule, graph, graph.link(i, i + 1), needed)
            after = apply_plan(schedule, plan, graph.link(i, i + 1))
            assert total_duration(after) - total_duration(schedule) == plan.delta
            assert after.link_time((i, i + 1)) == needed
            schedule = after
