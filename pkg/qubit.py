#!/usr/bin/env python3
"""
Qubit core: 2x2 complex matrix algebra, qubit states and trace norms

States are parameterized as

    rho = [[1 - a,                 k sqrt(a(1-a)) e^{-i phi}],
           [k sqrt(a(1-a)) e^{i phi},  a                     ]]

with a, k in [0, 1] and phi in [0, 2 pi). The Bloch vector is
(<sigma_x>, <sigma_y>, <sigma_z>). For a difference of two states the trace
norm equals the Euclidean distance of their Bloch vectors.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from constants import Tolerance
from errors import ContractViolation, DomainError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

# A ComplexMatrix2 is a (2, 2) complex numpy array
ComplexMatrix2 = np.ndarray

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def wrap_angle(phi: float) -> float:
    """Reduce an angle to [0, 2 pi)"""
    wrapped = float(phi) % TWO_PI
    # x % 2pi can round up to exactly 2pi for tiny negative x
    return 0.0 if wrapped >= TWO_PI else wrapped


# ============================================================================
# MATRIX PREDICATES AND NORMS
# ============================================================================

def is_hermitian(A: ComplexMatrix2, tol: float = Tolerance.HERMITICITY) -> bool:
    return bool(np.max(np.abs(A - A.conj().T)) <= tol)


def is_unitary(A: ComplexMatrix2, tol: float = Tolerance.UNIT_NORM) -> bool:
    return bool(np.max(np.abs(A @ A.conj().T - IDENTITY)) <= tol)


def hermitian_eigenvalues(A: ComplexMatrix2) -> tuple[float, float]:
    """
    Eigenvalues of a 2x2 Hermitian matrix by the quadratic formula
    Returns (smaller, larger)
    """
    if not is_hermitian(A):
        raise ContractViolation("hermitian_eigenvalues needs a Hermitian matrix")
    p, s = A[0, 0].real, A[1, 1].real
    mean = 0.5 * (p + s)
    radius = math.hypot(0.5 * (p - s), abs(A[0, 1]))
    return mean - radius, mean + radius


def trace_norm(A: ComplexMatrix2) -> float:
    """Tr sqrt(A^dagger A), the sum of singular values"""
    return float(np.sum(np.linalg.svd(np.asarray(A, dtype=complex), compute_uv=False)))


def traceless_norm_via_det(A: ComplexMatrix2) -> float:
    """
    Trace norm of a Hermitian traceless 2x2 matrix as 2 sqrt(|Det A|)

    The eigenvalues of such a matrix are +-sqrt(|Det A|).
    """
    if not is_hermitian(A):
        raise ContractViolation("traceless_norm_via_det needs a Hermitian matrix")
    if abs(np.trace(A)) > Tolerance.TRACELESS:
        raise ContractViolation(f"traceless_norm_via_det needs Tr A = 0, got {np.trace(A)!r}")
    det = A[0, 0].real * A[1, 1].real - abs(A[0, 1]) ** 2
    return 2.0 * math.sqrt(abs(det))


def bloch_distance(u, v) -> float:
    return float(np.linalg.norm(np.asarray(u, dtype=float) - np.asarray(v, dtype=float)))


# ============================================================================
# STATES
# ============================================================================

@dataclass(frozen=True)
class QubitState:
    """Mixed qubit state in the (a, k, phi) parameterization"""
    a: float
    k: float
    phi: float
    rho: ComplexMatrix2 = field(init=False, repr=False, compare=False)
    bloch: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.a <= 1.0:
            raise DomainError("a", self.a, "0-1")
        if not 0.0 <= self.k <= 1.0:
            raise DomainError("k", self.k, "0-1")
        if not math.isfinite(self.phi):
            raise DomainError("phi", self.phi, "finite")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "phi", wrap_angle(self.phi))

        coherence = self.k * math.sqrt(self.a * (1.0 - self.a))
        off = coherence * complex(math.cos(self.phi), -math.sin(self.phi))
        rho = np.array([[1.0 - self.a, off], [off.conjugate(), self.a]], dtype=complex)
        bloch = np.array([
            2.0 * coherence * math.cos(self.phi),
            2.0 * coherence * math.sin(self.phi),
            1.0 - 2.0 * self.a,
        ])
        object.__setattr__(self, "rho", _frozen(rho))
        object.__setattr__(self, "bloch", _frozen(bloch))

    @property
    def sx(self) -> float:
        return float(self.bloch[0])

    @property
    def sy(self) -> float:
        return float(self.bloch[1])

    @property
    def sz(self) -> float:
        return float(self.bloch[2])

    def is_canonical(self, tol: float = Tolerance.CANONICAL) -> bool:
        """
        a in [0, 1/2] and phi in [0, pi/2], read off the Bloch vector so that an
        undefined phi (k sqrt(a(1-a)) = 0) does not matter
        """
        return bool(np.all(self.bloch >= -tol))

    def as_dict(self) -> dict:
        return {"a": self.a, "k": self.k, "phi": self.phi,
                "bloch": [float(c) for c in self.bloch]}


def make_state(a: float, k: float, phi: float) -> QubitState:
    return QubitState(a, k, phi)


def state_from_bloch(vector) -> QubitState:
    """Inverse parameterization from a Bloch vector with norm <= 1"""
    x, y, z = (float(c) for c in vector)
    if math.sqrt(x * x + y * y + z * z) > 1.0 + Tolerance.UNIT_NORM:
        raise DomainError("bloch", (x, y, z), "norm <= 1")
    a = min(1.0, max(0.0, 0.5 * (1.0 - z)))
    scale = 2.0 * math.sqrt(a * (1.0 - a))
    transverse = math.hypot(x, y)
    k = 0.0 if scale == 0.0 else min(1.0, transverse / scale)
    phi = math.atan2(y, x) if transverse > 0.0 else 0.0
    return QubitState(a, k, phi)


def random_state(rng: np.random.Generator, canonical: bool = True) -> QubitState:
    """Uniform draw of (a, k, phi), restricted to the canonical region by default"""
    if canonical:
        return QubitState(rng.uniform(0.0, 0.5), rng.uniform(0.0, 1.0),
                          rng.uniform(0.0, 0.5 * math.pi))
    return QubitState(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), rng.uniform(0.0, TWO_PI))


def expectation(state: QubitState, G: ComplexMatrix2) -> float:
    """Tr(rho G) for Hermitian G"""
    if not is_hermitian(G):
        raise ContractViolation("expectation needs a Hermitian observable")
    return float(np.trace(state.rho @ G).real)


@dataclass(frozen=True)
class PureState:
    """Pure state z1|0> + z2|1>"""
    z1: complex
    z2: complex
    bloch: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        norm = abs(self.z1) ** 2 + abs(self.z2) ** 2
        if abs(norm - 1.0) > Tolerance.UNIT_NORM:
            raise ContractViolation(f"Amplitudes must have unit norm, got |z1|^2 + |z2|^2 = {norm!r}")
        object.__setattr__(self, "z1", complex(self.z1))
        object.__setattr__(self, "z2", complex(self.z2))
        overlap = self.z1.conjugate() * self.z2
        bloch = np.array([2.0 * overlap.real, 2.0 * overlap.imag,
                          abs(self.z1) ** 2 - abs(self.z2) ** 2])
        object.__setattr__(self, "bloch", _frozen(bloch))

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.z1, self.z2], dtype=complex)

    def projector(self) -> ComplexMatrix2:
        v = self.amplitudes
        return np.outer(v, v.conj())


def pure_state(z1: complex, z2: complex) -> PureState:
    return PureState(z1, z2)


KET_0 = PureState(1.0, 0.0)
KET_1 = PureState(0.0, 1.0)
# Eigenvectors of sigma_y (and of every proper rotation gate)
KET_PLUS_I = PureState(1.0 / math.sqrt(2.0), 1j / math.sqrt(2.0))
KET_MINUS_I = PureState(1.0 / math.sqrt(2.0), -1j / math.sqrt(2.0))
