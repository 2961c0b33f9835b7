#!/usr/bin/env python3
"""
Tests for the exact hull-projection oracle and the KKT checker
"""

import math

import numpy as np
import pytest

from errors import ArityError, BasisSizeError, EmptyBasisError
from gates import SetLabel, canonical_points, conjugate_state, isometry, sprime, striple
from oracle import (
    SimplexQP, distance_direct, hull_distances, oracle_distance, project_onto_hull,
    verify_kkt,
)
from qubit import make_state, random_state, state_from_bloch

TETRAHEDRON = np.array([
    [1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0],
]) / math.sqrt(3.0)


def _unit_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    vectors = rng.normal(size=(n, 3))
    return vectors / np.linalg.norm(vectors, axis=1, keepdims=True)


# ============================================================================
# SMALL GEOMETRIES
# ============================================================================

def test_single_point():
    solution = project_onto_hull(SimplexQP([0.0, 0.0, 0.5], [[0.0, 0.0, -1.0]]))
    assert solution.distance == pytest.approx(1.5)
    np.testing.assert_allclose(solution.weights, [1.0])
    assert solution.active_support == (0,)


def test_segment():
    points = [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]
    solution = project_onto_hull(SimplexQP([0.5, 0.0, 0.5], points))
    assert solution.distance == pytest.approx(0.5)
    np.testing.assert_allclose(solution.weights, [0.75, 0.25], atol=1e-12)
    assert solution.kkt_residual <= 1e-12


def test_point_on_segment():
    points = [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]
    solution = project_onto_hull(SimplexQP([0.0, 0.0, 0.9], points))
    assert solution.distance == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(solution.weights, [0.95, 0.05], atol=1e-12)


def test_interior_point_has_zero_distance():
    target = 0.5 * TETRAHEDRON.mean(axis=0) + 0.1 * TETRAHEDRON[0]
    solution = project_onto_hull(SimplexQP(target, TETRAHEDRON))
    assert solution.distance == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(solution.weights @ TETRAHEDRON, target, atol=1e-12)
    assert len(solution.active_support) == 4


def test_outside_point_projects_to_face():
    # the face opposite vertex 0 lies in the plane (-v0) . x = 1/3, centroid -v0/3
    normal = -TETRAHEDRON[0]
    target = normal * 0.9
    solution = project_onto_hull(SimplexQP(target, TETRAHEDRON))
    assert solution.distance == pytest.approx(0.9 - 1.0 / 3.0, abs=1e-12)
    assert solution.active_support == (1, 2, 3)
    np.testing.assert_allclose(solution.weights[1:], [1.0 / 3.0] * 3, atol=1e-12)


def test_analytic_example_distance():
    state = make_state(0.5, 1.0, 0.0)
    assert oracle_distance(state, sprime(math.pi / 3.0)) == pytest.approx(0.3660254037844386, abs=1e-9)


# ============================================================================
# CONTRACTS
# ============================================================================

def test_empty_basis():
    with pytest.raises(EmptyBasisError):
        project_onto_hull(SimplexQP([0.0, 0.0, 0.0], np.zeros((0, 3))))


def test_oversized_basis():
    points = _unit_vectors(np.random.default_rng(0), 17)
    with pytest.raises(BasisSizeError):
        project_onto_hull(SimplexQP([0.0, 0.0, 0.0], points))


def test_points_outside_ball_rejected():
    with pytest.raises(ValueError):
        SimplexQP([0.0, 0.0, 0.0], [[2.0, 0.0, 0.0]])


def test_weight_arity_checked():
    state = make_state(0.3, 0.5, 0.2)
    with pytest.raises(ArityError):
        verify_kkt(state, sprime(0.4), [0.5, 0.5])
    with pytest.raises(ArityError):
        distance_direct(state, sprime(0.4), [1.0])


# ============================================================================
# OPTIMALITY
# ============================================================================

def test_kkt_separates_optimal_from_suboptimal():
    state = make_state(0.5, 1.0, 0.0)
    basis = sprime(math.pi / 3.0)
    solution = project_onto_hull(SimplexQP.from_state(state, basis))
    assert verify_kkt(state, basis, solution.weights) <= 1e-8
    assert verify_kkt(state, basis, np.full(4, 0.25)) > 1e-3


def test_direct_distance_matches_bloch_distance():
    state = make_state(0.35, 0.8, 1.1)
    basis = striple(0.6)
    solution = project_onto_hull(SimplexQP.from_state(state, basis))
    assert distance_direct(state, basis, solution.weights) == pytest.approx(solution.distance, abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_random_hulls_are_optimal(seed):
    rng = np.random.default_rng(seed)
    for _ in range(40):
        n = int(rng.integers(1, 9))
        points = _unit_vectors(rng, n)
        target = _unit_vectors(rng, 1)[0] * rng.uniform(0.0, 1.0)
        solution = project_onto_hull(SimplexQP(target, points))

        assert solution.weights.min() >= 0.0
        assert solution.weights.sum() == pytest.approx(1.0, abs=1e-12)
        assert solution.kkt_residual <= 1e-8
        for weights in rng.dirichlet(np.ones(n), size=20):
            assert np.linalg.norm(weights @ points - target) >= solution.distance - 1e-12
        assert np.min(np.linalg.norm(points - target, axis=1)) >= solution.distance - 1e-12


@pytest.mark.parametrize("alpha", [0.4, 1.1, -2.3])
def test_distance_is_invariant_under_isometry(alpha):
    rng = np.random.default_rng(7)
    U = isometry(alpha)
    for _ in range(30):
        n = int(rng.integers(2, 7))
        points = _unit_vectors(rng, n)
        state = random_state(rng)
        rotated_points = np.array([conjugate_state(state_from_bloch(p), U).bloch for p in points])
        rotated_state = conjugate_state(state, U)
        before = project_onto_hull(SimplexQP(state.bloch, points)).distance
        after = project_onto_hull(SimplexQP(rotated_state.bloch, rotated_points)).distance
        assert after == pytest.approx(before, abs=1e-9)


# ============================================================================
# BATCHED DISTANCES
# ============================================================================

def test_batched_distances_match_projection():
    rng = np.random.default_rng(3)
    sets = np.stack([_unit_vectors(rng, 5) for _ in range(50)])
    targets = _unit_vectors(rng, 50) * rng.uniform(0.0, 1.0, size=(50, 1))
    distances = hull_distances(targets, sets)
    assert distances.shape == (50,)
    for distance, target, points in zip(distances, targets, sets):
        assert distance == pytest.approx(project_onto_hull(SimplexQP(target, points)).distance, abs=1e-9)


def test_batched_distances_over_canonical_angles():
    state = make_state(0.2, 0.75, 0.0)
    thetas = np.array([0.2, 0.25 * math.pi, 1.4])
    distances = hull_distances(state.bloch, canonical_points(SetLabel.STRIPLEPRIME, thetas))
    for distance, theta in zip(distances, thetas):
        assert distance == pytest.approx(oracle_distance(state, striple(theta)), abs=1e-9)


def test_batched_distances_reject_bad_shapes():
    with pytest.raises(ValueError):
        hull_distances(np.zeros(3), np.zeros((4, 3)))
    with pytest.raises(EmptyBasisError):
        hull_distances(np.zeros(3), np.zeros((2, 0, 3)))
    with pytest.raises(BasisSizeError):
        hull_distances(np.zeros(3), np.tile(TETRAHEDRON, (1, 5, 1)))
    with pytest.raises(ValueError):
        hull_distances(np.zeros(3), 2.0 * TETRAHEDRON[None])
