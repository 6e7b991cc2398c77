"""
Hop-distance experiment sweep.

For every hop bucket and trial a fresh instance is generated from a derived
sub-seed, a source/destination pair at exactly that hop distance is drawn, and
the multipath optimizer is compared with the MTM baseline.
"""

from __future__ import annotations

import csv
import logging
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from fractions import Fraction
from pathlib import Path
from typing import IO, Dict, Iterable, List, Optional, Tuple

import networkx as nx
import yaml

from core.config import SolverConfig
from core.errors import ConfigError
from core.generator import generate_random_topology
from core.mtm import mtm_path
from core.optimizer import solve_multipath
from core.report import format_rate
from core.rng import Xoshiro256StarStar, derive_seed
from core.topology import ConnectivityGraph
from models import ExperimentConfig, ExperimentRow

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "hop",
    "trial",
    "seed",
    "multipath_mbps",
    "mtm_mbps",
    "ratio",
    "paths",
    "slots",
    "runtime_ms",
]

MAX_PAIR_DRAWS = 10_000


def load_experiment_config(path: str) -> ExperimentConfig:
    """
    Read an ExperimentConfig from a YAML file.

    Raises:
        ConfigError: If the file cannot be read or holds unknown settings
    """
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except (OSError, UnicodeDecodeError, yaml.YAMLError) as e:
        raise ConfigError(f"Cannot read experiment config {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"Experiment config {path} must be a mapping")
    return ExperimentConfig.from_dict(data)


def trial_seed(master: int, hop: int, trial: int) -> int:
    return derive_seed(derive_seed(master, hop), trial)


def draw_pair(
    graph: ConnectivityGraph, hop: int, seed: int
) -> Optional[Tuple[int, int]]:
    """
    Uniform random node pair at exactly ``hop`` hops, by rejection sampling.

    Returns:
        (source, destination), or None after MAX_PAIR_DRAWS misses
    """
    distances = dict(nx.all_pairs_shortest_path_length(graph.nx_graph))
    if not any(hop in row.values() for row in distances.values()):
        return None
    rng = Xoshiro256StarStar(seed)
    n = graph.node_count
    for _ in range(MAX_PAIR_DRAWS):
        s, d = rng.below(n), rng.below(n)
        if s != d and distances[s].get(d) == hop:
            return s, d
    return None


def run_trial(
    config: ExperimentConfig, hop: int, trial: int, solver: Optional[SolverConfig] = None
) -> Optional[ExperimentRow]:
    """One instance of one hop bucket; None when no pair at that distance exists."""
    seed = trial_seed(config.seed, hop, trial)
    graph = generate_random_topology(config.topology_spec(seed))
    pair = draw_pair(graph, hop, derive_seed(seed, 1))
    if pair is None:
        logger.warning(f"hop={hop} trial={trial}: no node pair at that distance")
        return None
    source, destination = pair

    started = time.perf_counter()
    sol = solve_multipath(graph, source, destination, solver)
    elapsed = (time.perf_counter() - started) * 1000
    baseline = mtm_path(graph, source, destination, reuse=config.reuse_baseline)

    logger.info(
        f"hop={hop} trial={trial} {source}->{destination}: "
        f"multipath {format_rate(sol.throughput)} mtm {format_rate(baseline.throughput)}"
    )
    return ExperimentRow(
        hop=hop,
        trial=trial,
        seed=seed,
        source=source,
        destination=destination,
        multipath=sol.throughput,
        mtm=baseline.throughput,
        paths=len(sol.paths),
        slots=len(sol.schedule.slots),
        runtime_ms=elapsed if config.timing else None,
    )


def run_experiment(
    config: ExperimentConfig, solver: Optional[SolverConfig] = None
) -> List[ExperimentRow]:
    """
    Run every (hop, trial) and return rows sorted by (hop, trial).

    Trials run in a process pool when ``config.workers > 1``.
    """
    config.validate()
    tasks = [
        (hop, trial)
        for hop in range(config.hop_min, config.hop_max + 1)
        for trial in range(config.trials)
    ]
    rows: List[ExperimentRow] = []

    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            futures = {
                executor.submit(run_trial, config, hop, trial, solver): (hop, trial)
                for hop, trial in tasks
            }
            for future in as_completed(futures):
                row = future.result()
                if row is not None:
                    rows.append(row)
    else:
        for hop, trial in tasks:
            row = run_trial(config, hop, trial, solver)
            if row is not None:
                rows.append(row)

    rows.sort(key=lambda r: (r.hop, r.trial))
    return rows


def _mean(values: Iterable[Fraction]) -> Fraction:
    values = list(values)
    return sum(values, Fraction(0)) / len(values)


def summarize(rows: List[ExperimentRow]) -> Dict[int, Dict[str, Fraction]]:
    """Per-hop means of throughput, ratio, path and slot counts."""
    by_hop: Dict[int, List[ExperimentRow]] = {}
    for row in rows:
        by_hop.setdefault(row.hop, []).append(row)
    return {
        hop: {
            "multipath": _mean(r.multipath for r in group),
            "mtm": _mean(r.mtm for r in group),
            "ratio": _mean(r.ratio for r in group),
            "paths": _mean(Fraction(r.paths) for r in group),
            "slots": _mean(Fraction(r.slots) for r in group),
        }
        for hop, group in sorted(by_hop.items())
    }


def _runtime(value: Optional[float]) -> str:
    return "NA" if value is None else f"{value:.3f}"


def write_csv(rows: List[ExperimentRow], stream: IO[str]) -> None:
    """Trial rows for each hop followed by that hop's mean row."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    means = summarize(rows)
    for hop, stats in means.items():
        group = [r for r in rows if r.hop == hop]
        for r in group:
            writer.writerow(
                [
                    r.hop,
                    r.trial,
                    r.seed,
                    format_rate(r.multipath),
                    format_rate(r.mtm),
                    format_rate(r.ratio),
                    r.paths,
                    r.slots,
                    _runtime(r.runtime_ms),
                ]
            )
        timed = [r.runtime_ms for r in group if r.runtime_ms is not None]
        writer.writerow(
            [
                hop,
                "mean",
                "",
                format_rate(stats["multipath"]),
                format_rate(stats["mtm"]),
                format_rate(stats["ratio"]),
                format_rate(stats["paths"]),
                format_rate(stats["slots"]),
                _runtime(sum(timed) / len(timed) if timed else None),
            ]
        )


def save_csv(rows: List[ExperimentRow], output: str) -> None:
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        write_csv(rows, f)
    logger.info(f"Wrote {len(rows)} trial rows to {path}")
