#!/usr/bin/env python3
"""
Spin variances and the triple uncertainty relations

With S_i = sigma_i / 2:
  (dSx)^2 + (dSy)^2 + (dSz)^2 = (3 - f1(k, a)) / 4
  |<Sx>| + |<Sy>| + |<Sz>| <= f2(k, a)
  lambda = max 4 f2 / (3 - f1) = sqrt(3) over k in [0, 1], a in [0, 1/2]
so that
  sum (dS_i)^2 >= (tau / 2) sum |<S_i>|,  tau = 2 / sqrt(3)       (triple inequality)
and, where Type I case i and Type II case i both hold,
  M0^2 + M1^2 + M2^2 = (tau / 2) sum |<S_i>|                     (equality relation)
at the equality state (a, k, phi) = (1/2 - sqrt(3)/6, 1, pi/4).
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq, minimize

from analytic import (
    CaseLabel, Family, classify_region, gate_expectation, mu_nu, solve_type1,
    solve_type2, type1_margins,
)
from constants import Limits, Reference, Tolerance
from errors import BlochApproxError, DomainError
from qubit import QubitState

logger = logging.getLogger(__name__)

TAU = Reference.TRIPLE_CONSTANT


@dataclass(frozen=True)
class UncertaintyReport:
    dSx: float
    dSy: float
    dSz: float
    absSx: float
    absSy: float
    absSz: float
    triple_lhs: float
    triple_rhs: float
    f1: float
    f2: float
    theta: Optional[float] = None
    vartheta: Optional[float] = None
    applicable: Optional[bool] = None
    m0: Optional[float] = None
    m1: Optional[float] = None
    m2: Optional[float] = None
    equality_lhs: Optional[float] = None
    equality_rhs: Optional[float] = None

    @property
    def triple_holds(self) -> bool:
        return self.triple_lhs >= self.triple_rhs - Tolerance.SIMPLEX_FEASIBILITY

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class LambdaScan:
    value: float
    k: float
    a: float


@dataclass(frozen=True)
class ValidityRanges:
    theta_intervals: list[tuple[float, float]]
    vartheta_intervals: list[tuple[float, float]]

    def as_dict(self) -> dict:
        return {"theta_intervals": [list(i) for i in self.theta_intervals],
                "vartheta_intervals": [list(i) for i in self.vartheta_intervals]}


def f1(k, a):
    """<x>^2 + <y>^2 + <z>^2 as a function of (k, a)"""
    return 4.0 * k ** 2 * a * (1.0 - a) + (1.0 - 2.0 * a) ** 2


def f2(k, a):
    """Upper bound of |<Sx>| + |<Sy>| + |<Sz>| over phi, for a in [0, 1/2]"""
    return 0.5 - a + k * np.sqrt(2.0 * a * (1.0 - a))


def _ratio(k, a):
    return 4.0 * f2(k, a) / (3.0 - f1(k, a))


def report(state: QubitState) -> UncertaintyReport:
    sigmas = state.bloch
    deviations = [0.5 * math.sqrt(max(0.0, 1.0 - s * s)) for s in sigmas]
    magnitudes = [0.5 * abs(float(s)) for s in sigmas]
    return UncertaintyReport(
        *deviations, *magnitudes,
        triple_lhs=sum(d * d for d in deviations),
        triple_rhs=0.5 * TAU * sum(magnitudes),
        f1=float(f1(state.k, state.a)),
        f2=float(f2(state.k, state.a)),
    )


def lambda_scan(grid_k: int = 512, grid_a: int = 512, k_fixed: Optional[float] = None) -> LambdaScan:
    """
    Maximize 4 f2 / (3 - f1) over k in [0, 1], a in [0, 1/2]

    Coarse grid, then a Nelder-Mead polish of the best grid point. With
    k_fixed only the a-slice is scanned.
    """
    if grid_k < Limits.MIN_LAMBDA_GRID:
        raise DomainError("grid_k", grid_k, f">= {Limits.MIN_LAMBDA_GRID}")
    if grid_a < Limits.MIN_LAMBDA_GRID:
        raise DomainError("grid_a", grid_a, f">= {Limits.MIN_LAMBDA_GRID}")

    ks = np.array([k_fixed]) if k_fixed is not None else np.linspace(0.0, 1.0, grid_k)
    a_values = np.linspace(0.0, 0.5, grid_a)
    K, A = np.meshgrid(ks, a_values, indexing="ij")
    values = _ratio(K, A)
    i, j = np.unravel_index(np.argmax(values), values.shape)
    best = LambdaScan(float(values[i, j]), float(ks[i]), float(a_values[j]))
    logger.debug(f"lambda grid {len(ks)}x{grid_a}: {best}")

    if k_fixed is None:
        def objective(p):
            return -float(_ratio(np.clip(p[0], 0.0, 1.0), np.clip(p[1], 0.0, 0.5)))
        x0 = [best.k, best.a]
    else:
        def objective(p):
            return -float(_ratio(k_fixed, np.clip(p[0], 0.0, 0.5)))
        x0 = [best.a]

    polished = minimize(objective, x0, method="Nelder-Mead",
                        options={"xatol": Tolerance.NELDER_MEAD_XATOL, "fatol": 1e-15, "maxiter": 20000})
    if -polished.fun > best.value:
        if k_fixed is None:
            k, a = float(np.clip(polished.x[0], 0.0, 1.0)), float(np.clip(polished.x[1], 0.0, 0.5))
        else:
            k, a = float(k_fixed), float(np.clip(polished.x[0], 0.0, 0.5))
        best = LambdaScan(float(_ratio(k, a)), k, a)
    return best


def identity_residual(state: QubitState, theta: float, vartheta: float) -> float:
    """|r|^2 - <U_2vartheta>^2 - D_S'^2 - D_S''^2"""
    d1 = solve_type1(state, theta).distance
    d2 = solve_type2(state, vartheta).distance
    u = gate_expectation(state, 2.0 * vartheta)
    return float(np.dot(state.bloch, state.bloch) - u * u - d1 * d1 - d2 * d2)


def equality_relation(state: QubitState, theta: float, vartheta: float) -> UncertaintyReport:
    """
    Report with M0, M1, M2 filled in when Type I case i holds at theta and
    Type II case i holds at vartheta; otherwise flagged not applicable
    """
    base = report(state)
    try:
        applicable = (classify_region(state, theta, Family.TYPE_I) is CaseLabel.I_i
                      and classify_region(state, vartheta, Family.TYPE_II) is CaseLabel.II_i)
    except BlochApproxError as e:
        logger.debug(f"Equality relation not applicable: {e}")
        applicable = False
    if not applicable:
        return _with(base, theta=theta, vartheta=vartheta, applicable=False)

    d1 = solve_type1(state, theta).distance
    d2 = solve_type2(state, vartheta).distance
    u = gate_expectation(state, 2.0 * vartheta)
    m0 = 0.5 * math.sqrt(max(0.0, 1.0 - u * u))
    m1 = 0.5 * math.sqrt(max(0.0, 1.0 - d1 * d1))
    m2 = 0.5 * math.sqrt(max(0.0, 1.0 - d2 * d2))
    return _with(base, theta=theta, vartheta=vartheta, applicable=True,
                 m0=m0, m1=m1, m2=m2, equality_lhs=m0 * m0 + m1 * m1 + m2 * m2, equality_rhs=base.triple_rhs)


def _with(report_: UncertaintyReport, **changes) -> UncertaintyReport:
    return UncertaintyReport(**{**asdict(report_), **changes})


# ============================================================================
# VALIDITY RANGES
# ============================================================================

def _intervals(margin: Callable[[float], float], points: np.ndarray,
               lower: float, upper: float) -> list[tuple[float, float]]:
    """
    Closed intervals where margin >= -tol, from a grid scan with each
    transition refined by brentq
    """
    def shifted(p):
        return margin(p) + Tolerance.CASE_BOUNDARY

    inside = np.array([shifted(p) >= 0.0 for p in points])
    intervals = []
    start = lower if inside[0] else None
    for i in range(1, len(points)):
        if inside[i] == inside[i - 1]:
            continue
        edge = brentq(shifted, points[i - 1], points[i], xtol=Tolerance.BRENTQ_XTOL)
        if inside[i]:
            start = edge
        else:
            intervals.append((float(start), float(edge)))
            start = None
    if start is not None:
        intervals.append((float(start), float(upper)))
    return intervals


def validity_ranges(state: QubitState, grid: int = 2000) -> ValidityRanges:
    """Angles where Type I case i (theta in (0, pi/2]) and Type II case i (vartheta in (0, pi)) hold"""
    if grid < Limits.MIN_VALIDITY_GRID:
        raise DomainError("grid", grid, f">= {Limits.MIN_VALIDITY_GRID}")

    def theta_margin(theta):
        return min(type1_margins(state, theta))

    def vartheta_margin(vartheta):
        mu, nu = mu_nu(state, vartheta)
        return min(1.0 - nu - mu, mu - nu)

    thetas = np.linspace(0.0, 0.5 * math.pi, grid + 1)[1:]
    varthetas = np.linspace(0.0, math.pi, grid + 2)[1:-1]
    return ValidityRanges(
        _intervals(theta_margin, thetas, 0.0, 0.5 * math.pi),
        _intervals(vartheta_margin, varthetas, 0.0, math.pi),
    )
