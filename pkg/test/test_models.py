"""
Tests for data models: links, slots, schedules, paths and settings.

Tests exact-rate coercion, derived properties and validation.
"""

from fractions import Fraction

import pytest

from core.errors import ConfigError
from models import (
    IEEE80211B_RATES,
    Allocation,
    AllocationPlan,
    ExperimentConfig,
    ExperimentRow,
    Link,
    PathFlow,
    Schedule,
    Solution,
    TimeSlot,
    TopologySpec,
    as_fraction,
)


class TestAsFraction:
    """Tests for exact rate coercion."""

    @pytest.mark.parametrize(
        "value, expected",
        [
            (5.5, Fraction(11, 2)),
            (0.1, Fraction(1, 10)),
            ("11/2", Fraction(11, 2)),
            ("5.5", Fraction(11, 2)),
            (7, Fraction(7)),
        ],
    )
    def test_values(self, value, expected):
        """Test floats keep their shortest decimal."""
        assert as_fraction(value) == expected


class TestLink:
    """Tests for Link."""

    def test_capacity_coerced(self):
        """Test float capacities become fractions."""
        link = Link(0, 1, 5.5)
        assert link.capacity == Fraction(11, 2)
        assert str(link) == "0->1@11/2"

    def test_reversed(self):
        """Test the reverse direction keeps its capacity."""
        assert Link(0, 1, 11).reversed() == Link(1, 0, 11)
        assert Link(0, 1, 11).key == (0, 1)


class TestSchedule:
    """Tests for Schedule lookups."""

    def test_link_time_and_ids(self):
        """Test per-link time sums and next id."""
        a, b = Link(0, 1, 10), Link(3, 4, 10)
        schedule = Schedule(
            (
                TimeSlot(2, Fraction(1, 2), (Allocation(a, Fraction(5)),)),
                TimeSlot(5, Fraction(1, 4), (Allocation(a, Fraction(5, 2)), Allocation(b, Fraction(5, 2)))),
            )
        )
        assert schedule.link_time((0, 1)) == Fraction(3, 4)
        assert schedule.link_time((3, 4)) == Fraction(1, 4)
        assert schedule.link_time((1, 2)) == 0
        assert schedule.next_slot_id() == 6
        assert schedule.slot(5).links == (a, b)
        assert schedule.slot(9) is None

    def test_empty(self):
        """Test an empty frame starts ids at zero."""
        assert Schedule().next_slot_id() == 0


class TestPathFlow:
    """Tests for PathFlow and Solution."""

    def test_nodes(self):
        """Test nodes and hop count."""
        path = PathFlow(1, (Link(0, 2, 5), Link(2, 7, 11)), Fraction(5))
        assert path.nodes == (0, 2, 7)
        assert path.hops == 2
        assert PathFlow(0, (), Fraction(0)).nodes == ()

    def test_total_flow(self):
        """Test the sum of bottlenecks."""
        paths = (PathFlow(1, (Link(0, 1, 5),), Fraction(5)), PathFlow(2, (Link(0, 1, 2),), Fraction(2)))
        assert Solution(0, 1, paths).total_flow == 7

    def test_plan_allocated(self):
        """Test reused plus created time."""
        plan = AllocationPlan(
            (0, 1), Fraction(1), reused=((0, Fraction(1, 4)),), created=((1, Fraction(3, 4)),)
        )
        assert plan.allocated == 1


class TestTopologySpec:
    """Tests for generator settings."""

    def test_capacity_levels(self):
        """Test the default 5..15 grid."""
        spec = TopologySpec(node_count=10, target_directed_link_count=20)
        assert spec.capacity_levels() == [Fraction(c) for c in range(5, 16)]

    def test_rates_override_grid(self):
        """Test an explicit rate set."""
        spec = TopologySpec(node_count=10, target_directed_link_count=20, rates=IEEE80211B_RATES)
        assert spec.capacity_levels() == [1, 2, Fraction(11, 2), 11]

    @pytest.mark.parametrize(
        "kwargs, message",
        [
            ({"node_count": 1, "target_directed_link_count": 2}, "node_count"),
            ({"node_count": 3, "target_directed_link_count": 7}, "complete graph"),
            ({"node_count": 5, "target_directed_link_count": 8, "cap_min": 9, "cap_max": 5}, "exceeds"),
            ({"node_count": 5, "target_directed_link_count": 8, "cap_step": 3}, "cap_step"),
            ({"node_count": 5, "target_directed_link_count": 8, "rates": ()}, "rates"),
        ],
    )
    def test_invalid(self, kwargs, message):
        """Test rejected generator settings."""
        with pytest.raises(ConfigError, match=message):
            TopologySpec(**kwargs)


class TestExperimentConfig:
    """Tests for sweep settings and rows."""

    def test_from_dict(self):
        """Test known keys load and defaults fill the rest."""
        config = ExperimentConfig.from_dict({"trials": 4, "workers": 2})
        assert config.trials == 4 and config.workers == 2
        assert config.node_count == 100 and config.target_links == 320

    def test_unknown_key(self):
        """Test unknown keys are refused."""
        with pytest.raises(ConfigError, match="hops"):
            ExperimentConfig.from_dict({"hops": 3})

    @pytest.mark.parametrize(
        "data, message",
        [
            ({"trials": "3"}, "trials must be an integer"),
            ({"seed": 1.5}, "seed must be an integer"),
            ({"workers": True}, "workers must be an integer"),
            ({"timing": "yes"}, "timing must be true or false"),
            ({"output": 7}, "output must be a path"),
        ],
    )
    def test_wrong_types(self, data, message):
        """Test mistyped values are refused before validation."""
        with pytest.raises(ConfigError, match=message):
            ExperimentConfig.from_dict(data)

    def test_null_output(self):
        """Test that output may be null."""
        assert ExperimentConfig.from_dict({"output": None, "timing": True}).output is None

    def test_ratio(self):
        """Test the multipath over MTM ratio."""
        row = ExperimentRow(1, 0, 9, 0, 1, Fraction(6), Fraction(4), 2, 4)
        assert row.ratio == Fraction(3, 2)
        assert ExperimentRow(1, 0, 9, 0, 1, Fraction(6), Fraction(0), 2, 4).ratio == 0
