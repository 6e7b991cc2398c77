"""Benchmark suite for meshflow.

Run benchmarks with:
    pytest benchmark/bench.py --benchmark-only

Save results with:
    pytest benchmark/bench.py --benchmark-only --benchmark-json=benchmark/results.json
"""
