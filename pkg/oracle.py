#!/usr/bin/env python3
"""
Exact oracle: distance from a state to the convex hull of a basis set

In Bloch coordinates the trace-norm distance is Euclidean, so the problem is
the quadratic program

    min |target - sum_i w_i point_i|^2   over the probability simplex

solved by enumerating supports. For every support the affine least-squares
problem is the bordered linear system

    [[G_SS, 1], [1^T, 0]] [w; lam] = [P_S target; 1],   G = P P^T

and a support is accepted when its weights are nonnegative and no excluded
point has a smaller gradient. Supports larger than four points are affinely
dependent in three dimensions and are skipped.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from constants import Limits, Tolerance
from errors import ArityError, BasisSizeError, EmptyBasisError
from gates import BasisSet
from qubit import QubitState, trace_norm

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimplexQP:
    target: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        target = np.asarray(self.target, dtype=float).reshape(3)
        points = np.asarray(self.points, dtype=float).reshape(-1, 3)
        if points.size and np.max(np.linalg.norm(points, axis=1)) > 1.0 + Tolerance.UNIT_NORM:
            raise ValueError("Every basis point must lie in the Bloch ball")
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "points", points)

    @classmethod
    def from_state(cls, state: QubitState, basis: BasisSet) -> "SimplexQP":
        return cls(state.bloch, basis.bloch_points)


@dataclass(frozen=True)
class OracleSolution:
    distance: float
    weights: np.ndarray
    active_support: tuple[int, ...]
    kkt_residual: float

    def as_dict(self) -> dict:
        return {
            "distance": self.distance,
            "weights": [float(w) for w in self.weights],
            "active_support": list(self.active_support),
            "kkt_residual": self.kkt_residual,
        }


@lru_cache(maxsize=None)
def _supports(n: int, size: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(n), size)), dtype=int)


def _kkt_residual(points: np.ndarray, target: np.ndarray, weights: np.ndarray) -> float:
    """
    Smallest stationarity residual of F = -Det(rho - sum p_i rho_i) = |r|^2 / 4
    over the multipliers (lam, lam_i >= 0) with lam_i p_i = 0

    The residual is piecewise quadratic in lam, so its minimizer is found
    exactly by walking the breakpoints.
    """
    gradient = 0.5 * points @ (weights @ points - target)
    support = weights > Tolerance.SIMPLEX_FEASIBILITY
    inside = gradient[support]
    outside = np.sort(gradient[~support])

    lam = float(np.mean(inside))
    for count in range(len(outside) + 1):
        pool = np.concatenate([inside, outside[:count]])
        lam = float(np.mean(pool))
        low_ok = count == 0 or outside[count - 1] <= lam
        high_ok = count == len(outside) or lam <= outside[count]
        if low_ok and high_ok:
            break

    stationarity = np.sum((inside - lam) ** 2)
    dual = np.sum(np.maximum(0.0, lam - outside) ** 2)
    return float(np.sqrt(stationarity + dual))


def project_onto_hull(problem: SimplexQP) -> OracleSolution:
    """Global minimizer of the Bloch distance over the simplex, by support enumeration"""
    points, target = problem.points, problem.target
    n = len(points)
    if n == 0:
        raise EmptyBasisError("Cannot project onto the hull of an empty basis")
    if n > Limits.MAX_BASIS:
        raise BasisSizeError(f"Basis has {n} states; enumeration is bounded at {Limits.MAX_BASIS}")

    gram = points @ points.T
    projections = points @ target

    found = {}  # "accepted" / "feasible" -> (distance, support, weights)
    for size in range(1, min(n, Limits.MAX_SUPPORT) + 1):
        idx = _supports(n, size)
        count = len(idx)
        system = np.zeros((count, size + 1, size + 1))
        system[:, :size, :size] = gram[idx[:, :, None], idx[:, None, :]]
        system[:, :size, size] = 1.0
        system[:, size, :size] = 1.0
        rhs = np.zeros((count, size + 1))
        rhs[:, :size] = projections[idx]
        rhs[:, size] = 1.0

        solution = np.einsum("cij,cj->ci",
                             np.linalg.pinv(system, rcond=Tolerance.PINV_CUTOFF, hermitian=True), rhs)
        w = solution[:, :size]
        approx = np.einsum("cm,cmk->ck", w, points[idx])
        distance = np.linalg.norm(approx - target, axis=1)

        feasible = (w.min(axis=1) >= -Tolerance.SIMPLEX_FEASIBILITY) \
            & (np.abs(w.sum(axis=1) - 1.0) <= Tolerance.IDENTITY)
        gradient = approx @ points.T - projections
        on_support = np.take_along_axis(gradient, idx, axis=1).mean(axis=1)
        kkt_ok = gradient.min(axis=1) >= on_support - Tolerance.KKT_RESIDUAL
        accepted = feasible & kkt_ok

        for key, mask in (("accepted", accepted), ("feasible", feasible)):
            if not mask.any():
                continue
            local = np.flatnonzero(mask)
            pick = local[np.argmin(distance[local])]
            # smaller supports win ties
            if key not in found or distance[pick] < found[key][0] - 1e-15:
                found[key] = (float(distance[pick]), idx[pick], w[pick])

    if "accepted" not in found:
        logger.warning("No support passed the KKT test; using the best feasible support")
    _, support, w = found.get("accepted") or found["feasible"]
    weights = np.zeros(n)
    weights[support] = np.clip(w, 0.0, None)
    weights /= weights.sum()
    distance = float(np.linalg.norm(weights @ points - target))
    active = tuple(int(i) for i in np.flatnonzero(weights > Tolerance.SIMPLEX_FEASIBILITY))
    logger.debug(f"Oracle: n={n}, support={active}, distance={distance!r}")
    return OracleSolution(distance, weights, active, _kkt_residual(points, target, weights))


def oracle_distance(state: QubitState, basis: BasisSet) -> float:
    return project_onto_hull(SimplexQP.from_state(state, basis)).distance


def hull_distances(targets, point_sets) -> np.ndarray:
    """
    Distances from targets (shape (3,) or (m, 3)) to the hulls of m point
    sets of equal size (shape (m, n, 3)), all in one batch

    Every feasible support yields a point of the hull, and some optimal
    support has affinely independent points, so the minimum over feasible
    supports is the exact distance. Weights and KKT data are not formed;
    use project_onto_hull for those.
    """
    sets = np.asarray(point_sets, dtype=float)
    if sets.ndim != 3 or sets.shape[2] != 3:
        raise ValueError(f"Expected point sets of shape (m, n, 3), got {sets.shape}")
    m, n, _ = sets.shape
    if n == 0:
        raise EmptyBasisError("Cannot project onto the hull of an empty basis")
    if n > Limits.MAX_BASIS:
        raise BasisSizeError(f"Basis has {n} states; enumeration is bounded at {Limits.MAX_BASIS}")
    if np.max(np.linalg.norm(sets, axis=2)) > 1.0 + Tolerance.UNIT_NORM:
        raise ValueError("Every basis point must lie in the Bloch ball")
    targets = np.broadcast_to(np.asarray(targets, dtype=float), (m, 3))

    gram = np.einsum("mik,mjk->mij", sets, sets)
    projections = np.einsum("mik,mk->mi", sets, targets)
    best = np.full(m, np.inf)
    for size in range(1, min(n, Limits.MAX_SUPPORT) + 1):
        idx = _supports(n, size)
        count = len(idx)
        system = np.zeros((m, count, size + 1, size + 1))
        system[:, :, :size, :size] = gram[:, idx[:, :, None], idx[:, None, :]]
        system[:, :, :size, size] = 1.0
        system[:, :, size, :size] = 1.0
        rhs = np.zeros((m, count, size + 1))
        rhs[:, :, :size] = projections[:, idx]
        rhs[:, :, size] = 1.0

        solution = np.einsum("mcij,mcj->mci",
                             np.linalg.pinv(system, rcond=Tolerance.PINV_CUTOFF, hermitian=True), rhs)
        w = solution[:, :, :size]
        approx = np.einsum("mcs,mcsk->mck", w, sets[:, idx])
        distance = np.linalg.norm(approx - targets[:, None, :], axis=2)
        feasible = (w.min(axis=2) >= -Tolerance.SIMPLEX_FEASIBILITY) \
            & (np.abs(w.sum(axis=2) - 1.0) <= Tolerance.IDENTITY)
        best = np.minimum(best, np.where(feasible, distance, np.inf).min(axis=1))
    logger.debug(f"Batched oracle: {m} sets of {n} points")
    return best


def _checked_weights(basis: BasisSet, weights) -> np.ndarray:
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(basis),):
        raise ArityError(f"Expected {len(basis)} weights for {basis.label.value}, got {weights.shape}")
    return weights


def verify_kkt(state: QubitState, basis: BasisSet, weights) -> float:
    """KKT residual of a weight vector; ~0 iff it is optimal"""
    weights = _checked_weights(basis, weights)
    return _kkt_residual(basis.bloch_points, state.bloch, weights)


def distance_direct(state: QubitState, basis: BasisSet, weights) -> float:
    """||rho - sum_i w_i |Psi_i><Psi_i| ||_1 from explicit matrices"""
    weights = _checked_weights(basis, weights)
    mixture = sum(w * projector for w, projector in zip(weights, basis.projectors()))
    return trace_norm(state.rho - mixture)
