#!/usr/bin/env python3
"""
Acceptance-sized runs of the verify suites and the tally merge
"""

import math
import time

import numpy as np

from analytic import solve_type1, solve_type2
from commands import RunConfig, VerifyStats, cmd_verify
from constants import Defaults
from gates import SetLabel, canonical_points
from oracle import hull_distances
from qubit import random_state


def _verify(suite: str, samples: int, seed: int = 42) -> dict:
    return cmd_verify(RunConfig("verify", samples=samples, seed=seed, suite=suite).validate())


def test_analytic_matches_oracle_on_ten_thousand_states():
    rng = np.random.default_rng(2024)
    count = 10_000
    started = time.perf_counter()

    states = [random_state(rng) for _ in range(count)]
    thetas = 0.5 * math.pi * (1.0 - rng.random(count))
    varthetas = math.pi * (1.0 - rng.random(count))
    targets = np.array([state.bloch for state in states])

    for label, angles, solve in ((SetLabel.SPRIME, thetas, solve_type1),
                                 (SetLabel.SDOUBLEPRIME, varthetas, solve_type2)):
        points = canonical_points(label, angles)
        oracle = hull_distances(targets, points)
        results = [solve(state, float(angle)) for state, angle in zip(states, angles)]
        analytic = np.array([result.distance for result in results])
        weights = np.array([result.weights.representative for result in results])
        achieved = np.linalg.norm(np.einsum("mn,mnk->mk", weights, points) - targets, axis=1)
        assert np.max(np.abs(analytic - oracle)) <= 1e-9
        assert np.max(np.abs(achieved - oracle)) <= 1e-9

    assert time.perf_counter() - started < 30.0


def test_core_suite():
    summary = _verify("core", 2000)
    assert summary["passed"], summary["failures"]
    assert summary["samples"] == 2000
    assert summary["max_distance_discrepancy"] <= 1e-9
    assert summary["max_weight_violation"] <= 1e-12
    assert summary["max_family_spread"] <= 1e-10
    assert summary["max_theta_spread"] <= 1e-12
    assert summary["identity_checks"] > 0


def test_uncertainty_suite_at_scale():
    summary = _verify("uncertainty", 100_000)
    assert summary["passed"], summary["failures"]
    assert summary["triple_violations"] == 0


def test_decomposition_suite_at_scale():
    summary = _verify("decomposition", 1000, seed=11)
    assert summary["passed"], summary["failures"]
    assert summary["decomposition_disagreements"] == 0
    assert summary["star_checks"] > 0


def test_merge_combines_tallies():
    left = VerifyStats(samples=3, max_distance_discrepancy=1e-12, boundary_checks=2)
    right = VerifyStats(samples=4, max_distance_discrepancy=5e-13, boundary_checks=1)
    left.fail("oracle_distance", 1.0, {"a": 0.1})
    merged = left.merge(right)
    assert merged.samples == 7
    assert merged.max_distance_discrepancy == 1e-12
    assert merged.boundary_checks == 3
    assert merged.violations == 1
    assert merged.failures == [{"check": "oracle_distance", "value": 1.0, "a": 0.1}]


def test_reported_failures_are_capped():
    stats = VerifyStats()
    for i in range(Defaults.REPORTED_FAILURES + 5):
        stats.fail("variance_sum", float(i), {})
    other = VerifyStats()
    other.fail("variance_sum", -1.0, {})
    stats.merge(other)
    assert stats.violations == Defaults.REPORTED_FAILURES + 6
    assert len(stats.failures) == Defaults.REPORTED_FAILURES
