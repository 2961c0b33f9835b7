#!/usr/bin/env python3
"""
Closed-form optimal convex approximations

  solve_type1            state vs SPrime(theta) = {|0>, |1>, |2>, |3>}
  solve_type2            state vs SDoublePrime(vartheta) = {Psi3, Psi4, Psi5, Psi6}
  decompose_three_gates  decomposability over STriplePrime(theta) and its weight family

All solvers work in the canonical region a in [0, 1/2], phi in [0, pi/2]
(Bloch vector in the nonnegative octant). Case conditions are evaluated in
multiplied-out form, never dividing by <sigma_x> or cos(theta), so that
<sigma_x> = 0 behaves as the limit of the conditions.

Conventions for the printed formulas:
  - Type I case iii weights are the projection onto the |2>-|1> edge:
    p1 = 1/2 - <z>/2 - <x>tan(theta)/2, p2 = 1/2 + <z>/2 + <x>tan(theta)/2.
  - Type II case i: t in [0, min(mu - nu, 1 - mu - nu)].
  - Ties at case boundaries resolve to case i.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from constants import Tolerance
from errors import CanonicalizationError, UnsupportedAngleError
from gates import BasisSet, sdoubleprime, sprime, striple
from qubit import QubitState

logger = logging.getLogger(__name__)


class CaseLabel(str, Enum):
    I_i = "I_i"
    I_ii = "I_ii"
    I_iii = "I_iii"
    II_i = "II_i"
    II_ii = "II_ii"
    II_iii = "II_iii"
    ORACLE = "oracle"


class Family(Enum):
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"


# ============================================================================
# WEIGHT FAMILIES
# ============================================================================

@dataclass(frozen=True)
class FreeParam:
    name: str
    lower: float
    upper: float

    def as_dict(self) -> dict:
        return {"name": self.name, "min": self.lower, "max": self.upper}


@dataclass(frozen=True)
class WeightFamily:
    """
    Affine family of optimal weight vectors

    weights = base + sum_j value_j * directions[j], each value in its box and,
    when joint_upper is set, sum_j value_j <= joint_upper.
    """
    names: tuple[str, ...]
    base: np.ndarray
    free_params: tuple[FreeParam, ...] = ()
    directions: tuple[np.ndarray, ...] = ()
    joint_upper: Optional[float] = None

    @property
    def representative(self) -> np.ndarray:
        return self.base.copy()

    def evaluate(self, *values: float) -> np.ndarray:
        if len(values) != len(self.free_params):
            raise ValueError(f"Expected {len(self.free_params)} free parameter values, got {len(values)}")
        weights = self.base.copy()
        for value, direction in zip(values, self.directions):
            weights = weights + value * direction
        return weights

    def is_admissible(self, *values: float, tol: float = Tolerance.SIMPLEX_FEASIBILITY) -> bool:
        for value, param in zip(values, self.free_params):
            if not param.lower - tol <= value <= param.upper + tol:
                return False
        if self.joint_upper is not None and sum(values) > self.joint_upper + tol:
            return False
        weights = self.evaluate(*values)
        return bool(weights.min() >= -tol and abs(weights.sum() - 1.0) <= tol)

    def sample(self, rng: np.random.Generator) -> tuple[float, ...]:
        """A uniformly drawn admissible assignment of the free parameters"""
        values = [rng.uniform(p.lower, p.upper) for p in self.free_params]
        if self.joint_upper is not None and sum(values) > self.joint_upper:
            # boxes are [0, M] with M = joint_upper: reflect the excess corner back
            values = [p.upper - v for p, v in zip(self.free_params, values)]
        return tuple(values)

    @property
    def fixed(self) -> list[tuple[int, float, dict]]:
        """Per state: (index, constant term, {free parameter: coefficient})"""
        rows = []
        for i, constant in enumerate(self.base):
            coefficients = {p.name: float(d[i]) for p, d in zip(self.free_params, self.directions) if d[i]}
            rows.append((i, float(constant), coefficients))
        return rows

    def as_dict(self) -> dict:
        return {
            "states": list(self.names),
            "weights": [float(w) for w in self.base],
            "free_params": [p.as_dict() for p in self.free_params],
            "affine": [{"index": i, "constant": c, "coefficients": coeffs}
                       for i, c, coeffs in self.fixed],
            "joint_upper": self.joint_upper,
        }


@dataclass(frozen=True)
class ApproxResult:
    distance: float
    case: CaseLabel
    weights: WeightFamily
    basis: BasisSet
    mu: Optional[float] = None
    nu: Optional[float] = None

    def as_dict(self) -> dict:
        result = {
            "case": self.case.value,
            "distance": self.distance,
            "weights": [float(w) for w in self.weights.representative],
            "free_params": [p.as_dict() for p in self.weights.free_params],
            "basis": self.basis.as_dict(),
        }
        if self.mu is not None:
            result["mu"] = self.mu
            result["nu"] = self.nu
        return result


@dataclass(frozen=True)
class DecompResult:
    decomposable: bool
    criterion_lhs: float
    criterion_rhs: float
    tan_interval: Optional[tuple[float, float]]
    theta: Optional[float] = None
    angle_admissible: Optional[bool] = None
    weights: Optional[WeightFamily] = None

    @property
    def theta_interval(self) -> Optional[tuple[float, float]]:
        if self.tan_interval is None:
            return None
        low, high = self.tan_interval
        return math.atan(low), math.atan(high)

    def as_dict(self) -> dict:
        return {
            "decomposable": self.decomposable,
            "criterion_lhs": self.criterion_lhs,
            "criterion_rhs": self.criterion_rhs,
            "theta_interval": list(self.theta_interval) if self.tan_interval else None,
            "theta": self.theta,
            "angle_admissible": self.angle_admissible,
            "weights": self.weights.as_dict() if self.weights else None,
        }


# ============================================================================
# PRECONDITIONS
# ============================================================================

def _require_canonical(state: QubitState):
    if not state.is_canonical():
        raise CanonicalizationError(
            f"State (a={state.a!r}, k={state.k!r}, phi={state.phi!r}) is outside "
            "a in [0, 1/2], phi in [0, pi/2]; use the oracle")


def _require_theta(theta: float):
    if not 0.0 < theta <= 0.5 * math.pi:
        raise UnsupportedAngleError(f"theta={theta!r} outside (0, pi/2]; use the oracle")


def _require_vartheta(vartheta: float):
    if not 0.0 < vartheta < math.pi:
        raise UnsupportedAngleError(f"vartheta={vartheta!r} outside (0, pi); use the oracle")


def _ratio(numerator: float, denominator: float, cap: float) -> float:
    """
    numerator / denominator clipped to [0, cap]

    Inside a case the exact ratio already lies in [0, cap]; the clip only
    removes rounding (e.g. x tan(theta) at theta = pi/2 with x ~ 1e-17).
    """
    cap = max(0.0, cap)
    if numerator <= 0.0:
        return 0.0
    if denominator <= 0.0:
        return cap
    return min(numerator / denominator, cap)


# ============================================================================
# TYPE I: SPrime(theta)
# ============================================================================

def type1_margins(state: QubitState, theta: float) -> tuple[float, float]:
    """
    (upper, lower): upper >= 0 iff tan(theta) <= (1 - <z>)/<x>,
    lower >= 0 iff tan(theta) >= <x>/(1 + <z>)
    """
    x, _, z = state.bloch
    c, s = math.cos(theta), math.sin(theta)
    return float((1.0 - z) * c - x * s), float((1.0 + z) * s - x * c)


def _classify_type1(state: QubitState, theta: float) -> CaseLabel:
    upper, lower = type1_margins(state, theta)
    if upper >= -Tolerance.CASE_BOUNDARY and lower >= -Tolerance.CASE_BOUNDARY:
        return CaseLabel.I_i
    if upper < -Tolerance.CASE_BOUNDARY:
        return CaseLabel.I_ii
    return CaseLabel.I_iii


def type1_case_distance(state: QubitState, theta: float, case: CaseLabel) -> float:
    """Distance formula of one Type I case, whether or not its condition holds"""
    x, y, z = state.bloch
    c, s = math.cos(theta), math.sin(theta)
    if case is CaseLabel.I_i:
        return abs(float(y))
    if case is CaseLabel.I_ii:
        return math.hypot(x * s - (1.0 - z) * c, y)
    if case is CaseLabel.I_iii:
        return math.hypot(x * c - (1.0 + z) * s, y)
    raise ValueError(f"Not a Type I case: {case!r}")


def _type1_weights(state: QubitState, theta: float, case: CaseLabel, names) -> WeightFamily:
    x, _, z = state.bloch
    c, s = math.cos(theta), math.sin(theta)
    if case is CaseLabel.I_i:
        x_cot = _ratio(x * c, s, 1.0 + z)
        x_tan = _ratio(x * s, c, 1.0 - z)
        base = np.array([0.5 * (1.0 + z - x_cot), 0.5 * (1.0 - z - x_tan), 0.5 * (x_cot + x_tan), 0.0])
        t_max = max(0.0, min(base[0], base[1]))
        return WeightFamily(names, base, (FreeParam("t", 0.0, t_max),),
                            (np.array([-1.0, -1.0, 1.0, 1.0]),))
    if case is CaseLabel.I_ii:
        x_cot = _ratio(x * c, s, 1.0 + z)
        return WeightFamily(names, np.array([0.5 * (1.0 + z - x_cot), 0.0, 0.5 * (1.0 - z + x_cot), 0.0]))
    x_tan = _ratio(x * s, c, 1.0 - z)
    return WeightFamily(names, np.array([0.0, 0.5 * (1.0 - z - x_tan), 0.5 * (1.0 + z + x_tan), 0.0]))


def solve_type1(state: QubitState, theta: float) -> ApproxResult:
    """Optimal approximation of a canonical state by SPrime(theta), theta in (0, pi/2]"""
    _require_canonical(state)
    _require_theta(theta)
    basis = sprime(theta)
    case = _classify_type1(state, theta)
    weights = _type1_weights(state, theta, case, basis.names)
    distance = type1_case_distance(state, theta, case)
    logger.debug(f"Type I: theta={theta!r} -> {case.value}, D={distance!r}")
    return ApproxResult(distance, case, weights, basis)


# ============================================================================
# TYPE II: SDoublePrime(vartheta)
# ============================================================================

def mu_nu(state: QubitState, vartheta: float) -> tuple[float, float]:
    coherence = state.k * math.sqrt(state.a * (1.0 - state.a))
    mu = (state.a + math.cos(vartheta) ** 2 * (1.0 - 2.0 * state.a)
          + coherence * math.cos(state.phi) * math.sin(2.0 * vartheta))
    nu = coherence * math.sin(state.phi)
    return mu, nu


def gate_expectation(state: QubitState, angle: float) -> float:
    """<U_angle> = cos(angle) <z> + sin(angle) <x>"""
    x, _, z = state.bloch
    return float(math.cos(angle) * z + math.sin(angle) * x)


def _classify_type2(mu: float, nu: float) -> CaseLabel:
    if 1.0 - nu - mu >= -Tolerance.CASE_BOUNDARY and mu - nu >= -Tolerance.CASE_BOUNDARY:
        return CaseLabel.II_i
    if mu > 1.0 - nu:
        return CaseLabel.II_ii
    return CaseLabel.II_iii


def type2_case_distance(state: QubitState, vartheta: float, case: CaseLabel) -> float:
    """
    Distance formula of one Type II case

    <x>^2 + <z>^2 - <U_2vartheta>^2 is evaluated as the squared component of
    (<x>, <z>) orthogonal to the gate axis, which avoids cancellation.
    """
    x, y, z = state.bloch
    c2, s2 = math.cos(2.0 * vartheta), math.sin(2.0 * vartheta)
    u = c2 * z + s2 * x
    off_plane = x * c2 - z * s2
    if case is CaseLabel.II_i:
        return abs(float(off_plane))
    if case is CaseLabel.II_ii:
        return math.hypot(off_plane, (u + y - 1.0) / math.sqrt(2.0))
    if case is CaseLabel.II_iii:
        return math.hypot(off_plane, (y - u - 1.0) / math.sqrt(2.0))
    raise ValueError(f"Not a Type II case: {case!r}")


def _type2_weights(mu: float, nu: float, case: CaseLabel, names) -> WeightFamily:
    if case is CaseLabel.II_i:
        base = np.array([mu - nu, 1.0 - mu - nu, 2.0 * nu, 0.0])
        t_max = max(0.0, min(mu - nu, 1.0 - mu - nu))
        return WeightFamily(names, base, (FreeParam("t", 0.0, t_max),),
                            (np.array([-1.0, -1.0, 1.0, 1.0]),))
    if case is CaseLabel.II_ii:
        return WeightFamily(names, np.array([mu - nu, 0.0, 1.0 - mu + nu, 0.0]))
    return WeightFamily(names, np.array([0.0, 1.0 - mu - nu, mu + nu, 0.0]))


def solve_type2(state: QubitState, vartheta: float) -> ApproxResult:
    """Optimal approximation of a canonical state by SDoublePrime(vartheta), vartheta in (0, pi)"""
    _require_canonical(state)
    _require_vartheta(vartheta)
    basis = sdoubleprime(vartheta)
    mu, nu = mu_nu(state, vartheta)
    case = _classify_type2(mu, nu)
    weights = _type2_weights(mu, nu, case, basis.names)
    distance = type2_case_distance(state, vartheta, case)
    logger.debug(f"Type II: vartheta={vartheta!r} -> {case.value}, mu={mu!r}, nu={nu!r}")
    return ApproxResult(distance, case, weights, basis, mu, nu)


def classify_region(state: QubitState, theta: float, family: Family) -> CaseLabel:
    """Case label only; same preconditions as the solvers"""
    _require_canonical(state)
    if family is Family.TYPE_I:
        _require_theta(theta)
        return _classify_type1(state, theta)
    _require_vartheta(theta)
    return _classify_type2(*mu_nu(state, theta))


# ============================================================================
# THREE GATES: STriplePrime(theta)
# ============================================================================

def decomposition_criterion(state: QubitState) -> tuple[float, float]:
    """((1 - <y>)^2, <x>^2 + <z>^2)"""
    x, y, z = state.bloch
    return float((1.0 - y) ** 2), float(x * x + z * z)


def _tan_interval(state: QubitState) -> tuple[float, float]:
    x, y, z = state.bloch
    if x <= Tolerance.CASE_BOUNDARY:
        return 0.0, math.inf
    low_den = 1.0 + z - y
    low = x / low_den if low_den > Tolerance.CASE_BOUNDARY else math.inf
    high = (1.0 - z - y) / x
    if low > high:
        # criterion met within tolerance: a single admissible angle
        low = high = 0.5 * (low + high)
    return float(low), float(high)


def _three_gate_weights(state: QubitState, theta: float, names) -> WeightFamily:
    x, y, z = state.bloch
    c, s = math.cos(theta), math.sin(theta)
    x_cot = _ratio(x * c, s, 1.0 + z - y)
    x_tan = _ratio(x * s, c, 1.0 - z - y)
    base = np.array([0.5 * (1.0 + z - y - x_cot), 0.5 * (1.0 - z - y - x_tan),
                     0.5 * (x_cot + x_tan), 0.0, float(y), 0.0])
    bound = max(0.0, min(base[0], base[1]))
    return WeightFamily(
        names, base,
        (FreeParam("c1", 0.0, bound), FreeParam("c2", 0.0, bound)),
        (np.array([-1.0, -1.0, 0.0, 0.0, 1.0, 1.0]), np.array([-1.0, -1.0, 1.0, 1.0, 0.0, 0.0])),
        joint_upper=bound,
    )


def decompose_three_gates(state: QubitState, theta: Optional[float] = None) -> DecompResult:
    """
    Decomposability over the eigenstates of three gates

    decomposable iff (1 - <y>)^2 >= <x>^2 + <z>^2. With theta given, also
    reports whether that angle admits a decomposition and, if so, the family
    over c1, c2 >= 0.
    """
    _require_canonical(state)
    if theta is not None:
        _require_theta(theta)
    lhs, rhs = decomposition_criterion(state)
    decomposable = lhs >= rhs - Tolerance.CASE_BOUNDARY
    interval = _tan_interval(state) if decomposable else None
    if theta is None:
        return DecompResult(decomposable, lhs, rhs, interval)

    x, y, z = state.bloch
    c, s = math.cos(theta), math.sin(theta)
    admissible = ((1.0 + z - y) * s - x * c >= -Tolerance.CASE_BOUNDARY
                  and (1.0 - z - y) * c - x * s >= -Tolerance.CASE_BOUNDARY)
    if not admissible:
        logger.debug(f"theta={theta!r} admits no decomposition")
        return DecompResult(decomposable, lhs, rhs, interval, theta, False)
    weights = _three_gate_weights(state, theta, striple(theta).names)
    return DecompResult(decomposable, lhs, rhs, interval, theta, True, weights)


def star_condition(state: QubitState) -> bool:
    """1 - <y> >= <x> + <z>, decomposability over the X, Y, Z eigenstates"""
    x, y, z = state.bloch
    return bool(1.0 - y >= x + z - Tolerance.CASE_BOUNDARY)
