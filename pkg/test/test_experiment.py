"""Tests for the hop-distance experiment sweep."""

import io
from dataclasses import replace

import pytest

from conftest import make_chain, make_random
from core.errors import ConfigError
from core.experiment import (
    CSV_COLUMNS,
    draw_pair,
    load_experiment_config,
    run_experiment,
    run_trial,
    save_csv,
    summarize,
    trial_seed,
    write_csv,
)
from core.topology import min_hop_distance
from models import ExperimentConfig


@pytest.fixture
def small_config():
    """Two trials of hops 1 and 2 on 12-node instances."""
    return ExperimentConfig(node_count=12, target_links=30, trials=2, hop_min=1, hop_max=2, seed=7)


def _csv(rows):
    stream = io.StringIO()
    write_csv(rows, stream)
    return stream.getvalue()


class TestExperimentConfig:
    """Test sweep configuration."""

    def test_load_yaml(self, tmp_path):
        """Test reading settings from YAML."""
        path = tmp_path / "sweep.yaml"
        path.write_text("node_count: 30\ntarget_links: 100\ntrials: 3\nhop_max: 4\n")
        config = load_experiment_config(str(path))
        assert (config.node_count, config.target_links, config.trials) == (30, 100, 3)
        assert config.hop_min == 1 and config.hop_max == 4

    def test_unknown_key(self, tmp_path):
        """Test that a misspelt setting is refused."""
        path = tmp_path / "sweep.yaml"
        path.write_text("node_cout: 30\n")
        with pytest.raises(ConfigError, match="node_cout"):
            load_experiment_config(str(path))

    def test_not_a_mapping(self, tmp_path):
        """Test that a YAML list is refused."""
        path = tmp_path / "sweep.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigError, match="mapping"):
            load_experiment_config(str(path))

    def test_missing_file(self, tmp_path):
        """Test an unreadable path."""
        with pytest.raises(ConfigError, match="Cannot read"):
            load_experiment_config(str(tmp_path / "absent.yaml"))

    @pytest.mark.parametrize(
        "changes, message",
        [
            ({"trials": 0}, "trials"),
            ({"workers": 0}, "workers"),
            ({"hop_min": 3, "hop_max": 2}, "hop range"),
        ],
    )
    def test_validate(self, small_config, changes, message):
        """Test rejected sweep settings."""
        with pytest.raises(ConfigError, match=message):
            replace(small_config, **changes).validate()


class TestDrawPair:
    """Test source/destination sampling."""

    @pytest.mark.parametrize("hop", [1, 2, 3])
    def test_exact_distance(self, hop):
        """Test the drawn pair is exactly hop hops apart."""
        graph = make_random(3)
        pair = draw_pair(graph, hop, seed=11)
        assert pair is not None
        s, d = pair
        assert s != d
        assert min_hop_distance(graph, s, d) == hop

    def test_deterministic(self):
        """Test equal seeds draw equal pairs."""
        graph = make_random(5)
        assert draw_pair(graph, 2, seed=1) == draw_pair(graph, 2, seed=1)

    def test_no_pair_at_distance(self):
        """Test None when the graph is too small for the distance."""
        assert draw_pair(make_chain(3), 4, seed=1) is None


class TestRunExperiment:
    """Test the sweep and its CSV."""

    def test_trial_seed_is_stable(self):
        """Test sub-seeds differ per trial and repeat per call."""
        assert trial_seed(1, 2, 0) == trial_seed(1, 2, 0)
        assert trial_seed(1, 2, 0) != trial_seed(1, 2, 1)
        assert trial_seed(1, 2, 0) != trial_seed(1, 3, 0)

    def test_run_trial(self, small_config):
        """Test one trial yields a row at the requested distance."""
        row = run_trial(small_config, 1, 0)
        assert row is not None
        assert row.hop == 1
        assert row.multipath >= row.mtm > 0
        assert row.runtime_ms is None

    def test_rows_sorted(self, small_config):
        """Test rows come back ordered by hop then trial."""
        rows = run_experiment(small_config)
        keys = [(r.hop, r.trial) for r in rows]
        assert keys == sorted(keys)
        assert [r.trial for r in rows if r.hop == 1] == [0, 1]

    def test_csv_layout(self, small_config):
        """Test the header, a mean row per hop and NA runtimes."""
        rows = run_experiment(small_config)
        lines = _csv(rows).splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        means = [line for line in lines if line.split(",")[1] == "mean"]
        assert len(means) == len({r.hop for r in rows})
        assert means[0].startswith("1,mean,,")
        assert all(line.endswith(",NA") for line in lines[1:])

    def test_timing(self, small_config):
        """Test that timing fills the runtime column."""
        rows = run_experiment(replace(small_config, hop_max=1, timing=True))
        assert all(r.runtime_ms is not None and r.runtime_ms >= 0 for r in rows)
        assert "NA" not in _csv(rows)

    def test_deterministic(self, small_config):
        """Test that equal configs write byte-identical CSV apart from runtimes."""
        assert _csv(run_experiment(small_config)) == _csv(run_experiment(small_config))

    def test_workers_match_inline(self, small_config):
        """Test a process pool gives the same rows."""
        inline = run_experiment(small_config)
        pooled = run_experiment(replace(small_config, workers=2))
        assert _csv(pooled) == _csv(inline)

    def test_summarize(self, small_config):
        """Test per-hop means."""
        rows = run_experiment(small_config)
        stats = summarize(rows)
        hop_one = [r for r in rows if r.hop == 1]
        assert stats[1]["multipath"] == sum(r.multipath for r in hop_one) / len(hop_one)
        assert stats[1]["ratio"] >= 1

    def test_save_csv(self, small_config, tmp_path):
        """Test writing into a new directory."""
        rows = run_experiment(replace(small_config, hop_max=1))
        out = tmp_path / "results" / "sweep.csv"
        save_csv(rows, str(out))
        assert out.read_text().splitlines()[0] == ",".join(CSV_COLUMNS)
