#!/usr/bin/env python3
"""
Real quantum logic gates, their eigenbases and the available basis sets

Gates:
  Reflection(alpha) = [[cos a, sin a], [sin a, -cos a]]   (Z at 0, Hadamard at pi/4, X at pi/2)
  Rotation(gamma)   = [[cos g, -sin g], [sin g, cos g]]

Basis sets built from the eigenvectors Psi1..Psi6:
  S1(alpha, beta) = {Psi1, Psi2, Psi3, Psi4}      two reflection gates
  S2(beta)        = {Psi3, Psi4, Psi5, Psi6}      reflection + rotation
  S3(alpha)       = {Psi1, Psi2, Psi5, Psi6}
  S(alpha, beta)  = {Psi1, ..., Psi6}             three gates
and their canonical forms SPrime(theta), SDoublePrime(vartheta),
STriplePrime(theta) reached through the isometry U(alpha).
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from constants import Tolerance
from errors import DegenerateGateError, OrderingError
from qubit import (
    KET_0, KET_1, KET_MINUS_I, KET_PLUS_I, PAULIS, ComplexMatrix2, PureState,
    QubitState, state_from_bloch,
)

logger = logging.getLogger(__name__)


# ============================================================================
# GATES
# ============================================================================

class GateKind(Enum):
    REFLECTION = "reflection"
    ROTATION = "rotation"


@dataclass(frozen=True)
class RealGate:
    kind: GateKind
    angle: float

    @property
    def matrix(self) -> ComplexMatrix2:
        c, s = math.cos(self.angle), math.sin(self.angle)
        if self.kind is GateKind.REFLECTION:
            return np.array([[c, s], [s, -c]], dtype=complex)
        return np.array([[c, -s], [s, c]], dtype=complex)


def reflection(alpha: float) -> RealGate:
    return RealGate(GateKind.REFLECTION, float(alpha))


def rotation(gamma: float) -> RealGate:
    return RealGate(GateKind.ROTATION, float(gamma))


def z_gate() -> RealGate:
    return reflection(0.0)


def hadamard() -> RealGate:
    return reflection(math.pi / 4.0)


def x_gate() -> RealGate:
    return reflection(math.pi / 2.0)


def y_rotation() -> RealGate:
    """Rotation whose eigenpair is the sigma_y eigenbasis"""
    return rotation(math.pi / 2.0)


def reflection_eigenvectors(alpha: float) -> tuple[PureState, PureState]:
    half = 0.5 * alpha
    c, s = math.cos(half), math.sin(half)
    return PureState(c, s), PureState(s, -c)


def eigenbasis(gate: RealGate) -> tuple[PureState, PureState]:
    """
    Eigenvectors of a real gate

    Reflection(alpha): (cos(a/2)|0> + sin(a/2)|1>, sin(a/2)|0> - cos(a/2)|1>),
    eigenvalues +1 and -1. Rotation(gamma): ((|0> + i|1>)/sqrt2, (|0> - i|1>)/sqrt2),
    eigenvalues e^{-i gamma} and e^{i gamma}.
    """
    if gate.kind is GateKind.REFLECTION:
        return reflection_eigenvectors(gate.angle)
    reduced = gate.angle % (2.0 * math.pi)
    if min(abs(reduced), abs(reduced - math.pi), abs(reduced - 2.0 * math.pi)) <= Tolerance.UNIT_NORM:
        raise DegenerateGateError(
            f"Rotation({gate.angle!r}) is +-identity and has no distinguished eigenbasis")
    return KET_PLUS_I, KET_MINUS_I


def isometry(alpha: float) -> ComplexMatrix2:
    """Rotation taking the eigenbasis of Reflection(alpha) to the computational basis"""
    c, s = math.cos(0.5 * alpha), math.sin(0.5 * alpha)
    return np.array([[c, s], [-s, c]], dtype=complex)


# ============================================================================
# BASIS SETS
# ============================================================================

class SetLabel(Enum):
    S1 = "s1"
    S2 = "s2"
    S3 = "s3"
    S = "s"
    SPRIME = "sprime"
    SDOUBLEPRIME = "sdoubleprime"
    STRIPLEPRIME = "striple"


@dataclass(frozen=True)
class BasisSet:
    label: SetLabel
    states: tuple[PureState, ...]
    names: tuple[str, ...]
    angles: dict = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def bloch_points(self) -> np.ndarray:
        return np.array([state.bloch for state in self.states])

    def projectors(self) -> list[ComplexMatrix2]:
        return [state.projector() for state in self.states]

    def as_dict(self) -> dict:
        return {"label": self.label.value, "states": list(self.names),
                "angles": dict(self.angles)}


def _superposition(angle: float) -> tuple[PureState, PureState]:
    c, s = math.cos(angle), math.sin(angle)
    return PureState(c, s), PureState(s, -c)


def s1(alpha: float, beta: float) -> BasisSet:
    if not beta > alpha:
        raise OrderingError(f"S1 needs beta > alpha, got alpha={alpha!r}, beta={beta!r}")
    psi1, psi2 = reflection_eigenvectors(alpha)
    psi3, psi4 = reflection_eigenvectors(beta)
    return BasisSet(SetLabel.S1, (psi1, psi2, psi3, psi4),
                    ("Psi1", "Psi2", "Psi3", "Psi4"), {"alpha": alpha, "beta": beta})


def s2(beta: float) -> BasisSet:
    psi3, psi4 = reflection_eigenvectors(beta)
    return BasisSet(SetLabel.S2, (psi3, psi4, KET_PLUS_I, KET_MINUS_I),
                    ("Psi3", "Psi4", "Psi5", "Psi6"), {"beta": beta})


def s3(alpha: float) -> BasisSet:
    psi1, psi2 = reflection_eigenvectors(alpha)
    return BasisSet(SetLabel.S3, (psi1, psi2, KET_PLUS_I, KET_MINUS_I),
                    ("Psi1", "Psi2", "Psi5", "Psi6"), {"alpha": alpha})


def three_gate_set(alpha: float, beta: float) -> BasisSet:
    if not beta > alpha:
        raise OrderingError(f"S needs beta > alpha, got alpha={alpha!r}, beta={beta!r}")
    psi1, psi2 = reflection_eigenvectors(alpha)
    psi3, psi4 = reflection_eigenvectors(beta)
    return BasisSet(SetLabel.S, (psi1, psi2, psi3, psi4, KET_PLUS_I, KET_MINUS_I),
                    ("Psi1", "Psi2", "Psi3", "Psi4", "Psi5", "Psi6"),
                    {"alpha": alpha, "beta": beta})


def sprime(theta: float) -> BasisSet:
    ket2, ket3 = _superposition(theta)
    return BasisSet(SetLabel.SPRIME, (KET_0, KET_1, ket2, ket3),
                    ("|0>", "|1>", "|2>", "|3>"), {"theta": theta})


def sdoubleprime(vartheta: float) -> BasisSet:
    psi3, psi4 = _superposition(vartheta)
    return BasisSet(SetLabel.SDOUBLEPRIME, (psi3, psi4, KET_PLUS_I, KET_MINUS_I),
                    ("Psi3", "Psi4", "Psi5", "Psi6"), {"vartheta": vartheta})


def striple(theta: float) -> BasisSet:
    ket2, ket3 = _superposition(theta)
    return BasisSet(SetLabel.STRIPLEPRIME, (KET_0, KET_1, ket2, ket3, KET_PLUS_I, KET_MINUS_I),
                    ("|0>", "|1>", "|2>", "|3>", "|4>", "|5>"), {"theta": theta})


def canonical_points(label: SetLabel, angles) -> np.ndarray:
    """
    Bloch points of a canonical set at many angles, shape (m, n, 3)

    Rows follow the order of sprime / sdoubleprime / striple.
    """
    angles = np.asarray(angles, dtype=float).reshape(-1)
    m = len(angles)
    tilted = np.stack([np.sin(2.0 * angles), np.zeros(m), np.cos(2.0 * angles)], axis=1)
    z_axis = np.broadcast_to([0.0, 0.0, 1.0], (m, 3))
    y_axis = np.broadcast_to([0.0, 1.0, 0.0], (m, 3))
    rows = {
        SetLabel.SPRIME: (z_axis, -z_axis, tilted, -tilted),
        SetLabel.SDOUBLEPRIME: (tilted, -tilted, y_axis, -y_axis),
        SetLabel.STRIPLEPRIME: (z_axis, -z_axis, tilted, -tilted, y_axis, -y_axis),
    }
    if label not in rows:
        raise ValueError(f"{label.value} is not a canonical set")
    return np.stack(rows[label], axis=1)


# ============================================================================
# ISOMETRIC REDUCTION
# ============================================================================

def conjugate_state(state: QubitState, U: ComplexMatrix2) -> QubitState:
    """U rho U^dagger, re-parameterized"""
    rotated = U @ state.rho @ U.conj().T
    bloch = [float(np.trace(rotated @ pauli).real) for pauli in PAULIS]
    return state_from_bloch(bloch)


def _pair_angle(alpha: float, beta: float) -> float:
    raw = 0.5 * (beta - alpha)
    theta = raw % math.pi
    if theta <= Tolerance.UNIT_NORM or math.pi - theta <= Tolerance.UNIT_NORM:
        raise DegenerateGateError(
            f"alpha={alpha!r} and beta={beta!r} describe the same gate; the set collapses")
    if theta != raw:
        logger.debug(f"Reduced theta {raw!r} modulo pi to {theta!r}")
    return theta


def reduce_problem(state: QubitState, basis: BasisSet) -> tuple[QubitState, BasisSet]:
    """
    Map (state, basis) to an equivalent problem against a canonical set

    Distances to the convex hull are unchanged. Sets that are already
    canonical are returned as given.
    """
    label = basis.label
    if label in (SetLabel.S1, SetLabel.S):
        alpha, beta = basis.angles["alpha"], basis.angles["beta"]
        if not beta > alpha:
            raise OrderingError(f"{label.value} needs beta > alpha, got alpha={alpha!r}, beta={beta!r}")
        theta = _pair_angle(alpha, beta)
        reduced_state = conjugate_state(state, isometry(alpha))
        canonical = sprime(theta) if label is SetLabel.S1 else striple(theta)
        canonical = replace(canonical, angles={**canonical.angles, "theta_raw": 0.5 * (beta - alpha)})
        return reduced_state, canonical
    if label is SetLabel.S2:
        return state, sdoubleprime((0.5 * basis.angles["beta"]) % math.pi)
    if label is SetLabel.S3:
        return state, sdoubleprime((0.5 * basis.angles["alpha"]) % math.pi)
    return state, basis
