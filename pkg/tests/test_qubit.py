#!/usr/bin/env python3
"""
Tests for qubit states, Bloch vectors and trace norms
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import ContractViolation, DomainError
from gates import reflection
from qubit import (
    SIGMA_X, SIGMA_Y, SIGMA_Z, QubitState, bloch_distance, expectation,
    hermitian_eigenvalues, make_state, pure_state, random_state, state_from_bloch,
    trace_norm, traceless_norm_via_det, wrap_angle,
)

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
angle = st.floats(min_value=0.0, max_value=2.0 * math.pi, allow_nan=False, exclude_max=True)
states = st.builds(make_state, unit, unit, angle)


# ============================================================================
# STATE CONSTRUCTION
# ============================================================================

def test_make_state_density_matrix():
    state = make_state(0.5, 1.0, 0.0)
    np.testing.assert_allclose(state.rho, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)
    np.testing.assert_allclose(state.bloch, [1.0, 0.0, 0.0], atol=1e-15)


def test_make_state_bloch_from_parameters():
    state = make_state(0.2, 0.5, 0.25 * math.pi)
    coherence = 0.5 * math.sqrt(0.2 * 0.8)
    assert state.sx == pytest.approx(2.0 * coherence * math.cos(0.25 * math.pi))
    assert state.sy == pytest.approx(2.0 * coherence * math.sin(0.25 * math.pi))
    assert state.sz == pytest.approx(0.6)


@pytest.mark.parametrize("a, k", [(-0.1, 0.5), (1.5, 0.5), (0.3, -0.2), (0.3, 1.01)])
def test_make_state_rejects_out_of_range(a, k):
    with pytest.raises(DomainError):
        make_state(a, k, 0.0)


@pytest.mark.parametrize("phi", [math.inf, -math.inf, math.nan])
def test_make_state_rejects_non_finite_phi(phi):
    with pytest.raises(DomainError) as excinfo:
        make_state(0.3, 0.5, phi)
    assert excinfo.value.name == "phi"


def test_phi_is_wrapped():
    assert make_state(0.3, 0.5, 2.0 * math.pi + 0.1).phi == pytest.approx(0.1)
    assert make_state(0.3, 0.5, -0.5 * math.pi).phi == pytest.approx(1.5 * math.pi)
    assert 0.0 <= wrap_angle(-1e-300) < 2.0 * math.pi


def test_state_is_immutable():
    state = make_state(0.3, 0.5, 0.2)
    with pytest.raises(ValueError):
        state.bloch[0] = 1.0
    with pytest.raises(AttributeError):
        state.a = 0.1


@given(states)
def test_density_matrix_is_a_state(state: QubitState):
    low, high = hermitian_eigenvalues(state.rho)
    assert np.trace(state.rho).real == pytest.approx(1.0)
    assert low >= -1e-12
    assert high <= 1.0 + 1e-12
    assert np.linalg.norm(state.bloch) <= 1.0 + 1e-12


def test_canonical_region():
    assert make_state(0.3, 0.5, 0.2).is_canonical()
    assert make_state(0.5, 0.5, 0.5 * math.pi).is_canonical()
    assert not make_state(0.7, 0.5, 0.2).is_canonical()
    assert not make_state(0.3, 0.5, 3.0).is_canonical()
    # phi is irrelevant without coherence
    assert make_state(0.3, 0.0, 3.0).is_canonical()


def test_random_state_respects_region():
    rng = np.random.default_rng(3)
    assert all(random_state(rng).is_canonical() for _ in range(200))


@given(states)
def test_state_from_bloch_recovers_vector(state: QubitState):
    rebuilt = state_from_bloch(state.bloch)
    np.testing.assert_allclose(rebuilt.bloch, state.bloch, atol=1e-12)


def test_state_from_bloch_rejects_outside_ball():
    with pytest.raises(DomainError):
        state_from_bloch([1.0, 1.0, 0.0])


# ============================================================================
# NORMS AND EXPECTATIONS
# ============================================================================

def test_trace_norm_examples():
    assert trace_norm(SIGMA_Z) == pytest.approx(2.0)
    assert trace_norm(np.zeros((2, 2))) == 0.0
    assert trace_norm(np.diag([0.3, -0.3])) == pytest.approx(0.6)


@given(states, states)
@settings(max_examples=200)
def test_trace_norm_is_bloch_distance(first: QubitState, second: QubitState):
    difference = first.rho - second.rho
    expected = bloch_distance(first.bloch, second.bloch)
    assert trace_norm(difference) == pytest.approx(expected, abs=1e-10)
    assert traceless_norm_via_det(difference) == pytest.approx(expected, abs=1e-10)


def test_traceless_norm_contract():
    with pytest.raises(ContractViolation):
        traceless_norm_via_det(np.eye(2))
    with pytest.raises(ContractViolation):
        traceless_norm_via_det(np.array([[0, 1], [0, 0]], dtype=complex))


def test_hermitian_eigenvalues():
    assert hermitian_eigenvalues(SIGMA_X) == pytest.approx((-1.0, 1.0))
    assert hermitian_eigenvalues(np.diag([0.2, 0.7]).astype(complex)) == pytest.approx((0.2, 0.7))


@given(states)
def test_expectations_match_bloch(state: QubitState):
    for pauli, component in zip((SIGMA_X, SIGMA_Y, SIGMA_Z), state.bloch):
        assert expectation(state, pauli) == pytest.approx(component, abs=1e-12)


@given(states, st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False))
def test_reflection_expectation_mixes_z_and_x(state: QubitState, alpha):
    expected = math.cos(alpha) * state.sz + math.sin(alpha) * state.sx
    assert expectation(state, reflection(alpha).matrix) == pytest.approx(expected, abs=1e-12)


def test_hadamard_expectation_example():
    state = make_state(0.2, 0.75, 0.0)
    assert state.sx == pytest.approx(0.6)
    assert state.sz == pytest.approx(0.6)
    assert expectation(state, reflection(0.25 * math.pi).matrix) == pytest.approx(0.6 * math.sqrt(2.0))


def test_expectation_needs_hermitian():
    with pytest.raises(ContractViolation):
        expectation(make_state(0.3, 0.5, 0.2), np.array([[0, 1], [0, 0]], dtype=complex))


# ============================================================================
# PURE STATES
# ============================================================================

def test_pure_state_bloch_vector():
    plus = pure_state(1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0))
    np.testing.assert_allclose(plus.bloch, [1.0, 0.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(plus.projector(), [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)


def test_pure_state_needs_unit_norm():
    with pytest.raises(ContractViolation):
        pure_state(1.0, 1.0)
