#!/usr/bin/env python3
"""
Command implementations shared by the command line and the tool server

Every command takes a validated RunConfig and returns a plain dictionary
with stable field names; serialization lives in to_json / format_csv so both
front ends print the same bytes for the same configuration.

Commands:
  approx       analytic solver (with reduction of S1/S2/S3) + oracle cross-check
  oracle       exact projection onto the hull of any basis set
  decompose    three-gate decomposability and weight family
  uncertainty  spin variances, triple inequality, equality relation, validity ranges
  verify       seeded analytic-vs-oracle property suites
  sweep        two-axis region map (case, distance, oracle distance)
"""

import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Optional

import numpy as np

from analytic import (
    ApproxResult, CaseLabel, Family, WeightFamily, classify_region,
    decompose_three_gates, solve_type1, solve_type2, star_condition,
    type1_case_distance, type2_case_distance,
)
from constants import Defaults, Limits, Tolerance
from errors import CanonicalizationError, UnsupportedAngleError, ValidationError
from gates import (
    BasisSet, SetLabel, canonical_points, reduce_problem, s1, s2, s3, sdoubleprime, sprime,
    striple, three_gate_set,
)
from oracle import (
    SimplexQP, distance_direct, hull_distances, oracle_distance, project_onto_hull,
)
from parameter_map import SWEEP_AXES, sweep_points, validate_parameter
from qubit import QubitState, bloch_distance, make_state, random_state
from uncertainty import (
    equality_relation, identity_residual, lambda_scan, report, validity_ranges,
)

logger = logging.getLogger(__name__)

COMMANDS = ("approx", "oracle", "decompose", "uncertainty", "verify", "sweep")
SUITES = ("core", "uncertainty", "decomposition", "all")
OUTPUTS = ("json", "csv")

STATE_PARAMS = ("a", "k", "phi")
ANGLE_PARAMS = ("alpha", "beta", "theta", "vartheta")

# Gate angles each basis set is built from
SET_ANGLES = {
    "sprime": ("theta",),
    "sdoubleprime": ("vartheta",),
    "striple": ("theta",),
    "s1": ("alpha", "beta"),
    "s2": ("beta",),
    "s3": ("alpha",),
    "s": ("alpha", "beta"),
}
ANALYTIC_SETS = ("sprime", "sdoubleprime", "s1", "s2", "s3")
DECOMPOSITION_SETS = ("striple", "s")
SWEEP_SETS = ("sprime", "sdoubleprime")

UNSUPPORTED = (CanonicalizationError, UnsupportedAngleError)


# ============================================================================
# RUN CONFIGURATION
# ============================================================================

@dataclass
class RunConfig:
    """One command invocation; angles in radians"""
    command: str
    a: Optional[float] = None
    k: Optional[float] = None
    phi: Optional[float] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    theta: Optional[float] = None
    vartheta: Optional[float] = None
    basis_set: Optional[str] = None
    output: Optional[str] = None
    seed: int = Defaults.SEED
    samples: int = Defaults.VERIFY_SAMPLES
    grid: Optional[int] = None
    suite: str = "all"
    axes: Optional[tuple[str, str]] = None
    oracle_fallback: bool = False
    validity: bool = False
    scan_lambda: bool = False

    def validate(self) -> "RunConfig":
        """Check every parameter the command needs; raises ValidationError listing all problems"""
        if self.command not in COMMANDS:
            raise ValidationError(f"Unknown command '{self.command}'. Available: {', '.join(COMMANDS)}")
        if self.output is None:
            self.output = "csv" if self.command == "sweep" else "json"
        if self.basis_set is None:
            self.basis_set = "striple" if self.command == "decompose" else "sprime"

        problems = []
        if self.output not in OUTPUTS:
            problems.append(f"Unknown output '{self.output}'. Available: {', '.join(OUTPUTS)}")
        elif self.output == "csv" and self.command != "sweep":
            problems.append("CSV output is only available for sweep")
        if self.basis_set not in SET_ANGLES:
            problems.append(f"Unknown set '{self.basis_set}'. Available: {', '.join(SET_ANGLES)}")

        for name in STATE_PARAMS + ANGLE_PARAMS:
            value = getattr(self, name)
            if value is not None:
                valid, message = validate_parameter(name, value)
                if not valid:
                    problems.append(message)
        for name in ("seed", "samples"):
            valid, message = validate_parameter(name, getattr(self, name))
            if not valid:
                problems.append(message)
        if self.grid is not None:
            valid, message = validate_parameter("grid", self.grid)
            if not valid:
                problems.append(message)

        if not problems:
            problems.extend(self._missing())
        if problems:
            raise ValidationError("; ".join(problems))
        return self

    def _missing(self) -> list[str]:
        required = []
        command = self.command
        if command in ("approx", "oracle", "decompose", "uncertainty"):
            required.extend(STATE_PARAMS)

        problems = []
        if command == "approx":
            if self.basis_set not in ANALYTIC_SETS:
                problems.append(f"approx needs one of the sets {', '.join(ANALYTIC_SETS)}")
            required.extend(SET_ANGLES[self.basis_set])
        elif command == "oracle":
            required.extend(SET_ANGLES[self.basis_set])
        elif command == "decompose":
            if self.basis_set not in DECOMPOSITION_SETS:
                problems.append(f"decompose needs one of the sets {', '.join(DECOMPOSITION_SETS)}")
            elif self.basis_set == "s":
                required.extend(SET_ANGLES["s"])
        elif command == "uncertainty":
            if (self.theta is None) != (self.vartheta is None):
                problems.append("The equality relation needs both theta and vartheta")
        elif command == "verify":
            if self.suite not in SUITES:
                problems.append(f"Unknown suite '{self.suite}'. Available: {', '.join(SUITES)}")
        elif command == "sweep":
            problems.extend(self._sweep_problems())
            if not problems:
                required.extend(name for name in STATE_PARAMS if name not in self.axes)
                angle = "theta" if sweep_family(self) is Family.TYPE_I else "vartheta"
                if angle not in self.axes:
                    required.append(angle)

        problems.extend(f"Missing required parameter '{name}' for {command}"
                        for name in required if getattr(self, name) is None)
        return problems

    def _sweep_problems(self) -> list[str]:
        if self.axes is None or len(self.axes) != 2:
            return ["sweep needs exactly two axes"]
        unknown = [axis for axis in self.axes if axis not in SWEEP_AXES]
        if unknown:
            return [f"Unknown axis '{axis}'. Available: {', '.join(SWEEP_AXES)}" for axis in unknown]
        if self.axes[0] == self.axes[1]:
            return [f"Sweep axes must differ, got {self.axes[0]} twice"]
        if self.basis_set not in SWEEP_SETS:
            return [f"sweep needs one of the sets {', '.join(SWEEP_SETS)}"]
        if self.grid is not None and self.grid < Limits.MIN_SWEEP_GRID:
            return [f"sweep needs grid >= {Limits.MIN_SWEEP_GRID}"]
        return []

    def input_dict(self) -> dict:
        """Parameters that were supplied, echoed into every JSON result"""
        echoed = {name: getattr(self, name) for name in STATE_PARAMS + ANGLE_PARAMS
                  if getattr(self, name) is not None}
        echoed["set"] = self.basis_set
        return echoed


def worker_count() -> int:
    """CPU count, capped by BLOCHAPPROX_THREADS when set"""
    workers = os.cpu_count() or 1
    raw = os.environ.get(Defaults.THREADS_ENV)
    if raw is None:
        return workers
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap < 1:
        raise ValidationError(f"{Defaults.THREADS_ENV} must be a positive integer, got {raw!r}")
    return min(workers, cap)


def build_basis(config: RunConfig) -> BasisSet:
    builders = {
        "sprime": lambda c: sprime(c.theta),
        "sdoubleprime": lambda c: sdoubleprime(c.vartheta),
        "striple": lambda c: striple(c.theta),
        "s1": lambda c: s1(c.alpha, c.beta),
        "s2": lambda c: s2(c.beta),
        "s3": lambda c: s3(c.alpha),
        "s": lambda c: three_gate_set(c.alpha, c.beta),
    }
    return builders[config.basis_set](config)


def _state(config: RunConfig) -> QubitState:
    return make_state(config.a, config.k, config.phi)


def _solve(state: QubitState, basis: BasisSet) -> ApproxResult:
    if basis.label is SetLabel.SPRIME:
        return solve_type1(state, basis.angles["theta"])
    return solve_type2(state, basis.angles["vartheta"])


# ============================================================================
# SINGLE-STATE COMMANDS
# ============================================================================

def cmd_approx(config: RunConfig) -> dict:
    """Analytic approximation with an oracle cross-check on the unreduced problem"""
    state = _state(config)
    basis = build_basis(config)
    oracle = project_onto_hull(SimplexQP.from_state(state, basis))
    reduced, canonical = reduce_problem(state, basis)
    try:
        result = _solve(reduced, canonical)
    except UNSUPPORTED as e:
        if not config.oracle_fallback:
            raise
        logger.warning(f"Analytic path unsupported, using the oracle: {e}")
        return {
            "input": config.input_dict(),
            "case": CaseLabel.ORACLE.value,
            "distance": oracle.distance,
            "oracle_distance": oracle.distance,
            "weights": [float(w) for w in oracle.weights],
            "free_params": [],
            "basis": basis.as_dict(),
        }

    delta = abs(result.distance - oracle.distance)
    if delta > Tolerance.ORACLE_VS_ANALYTIC:
        logger.warning(f"Analytic and oracle distances differ by {delta!r}")
    solved = result.as_dict()
    payload = {
        "input": config.input_dict(),
        "case": solved["case"],
        "distance": solved["distance"],
        "oracle_distance": oracle.distance,
        "weights": solved["weights"],
        "free_params": solved["free_params"],
        "basis": solved["basis"],
    }
    if result.mu is not None:
        payload["mu"] = result.mu
        payload["nu"] = result.nu
    if canonical is not basis:
        payload["reduced_state"] = reduced.as_dict()
    return payload


def cmd_oracle(config: RunConfig) -> dict:
    state = _state(config)
    basis = build_basis(config)
    solution = project_onto_hull(SimplexQP.from_state(state, basis))
    return {
        "input": config.input_dict(),
        **solution.as_dict(),
        "direct_distance": distance_direct(state, basis, solution.weights),
        "basis": basis.as_dict(),
    }


def cmd_decompose(config: RunConfig) -> dict:
    """
    Decomposability over three gates

    With set s the (alpha, beta) pair is first reduced to its canonical angle;
    with set striple theta is optional.
    """
    state = _state(config)
    theta = config.theta
    reduced = state
    if config.basis_set == "s":
        basis = build_basis(config)
        reduced, canonical = reduce_problem(state, basis)
        theta = canonical.angles["theta"]
    else:
        basis = striple(theta) if theta is not None else None

    try:
        result = decompose_three_gates(reduced, theta)
    except UNSUPPORTED as e:
        if not config.oracle_fallback or basis is None:
            raise
        logger.warning(f"Analytic path unsupported, using the oracle: {e}")
        distance = oracle_distance(state, basis)
        return {
            "input": config.input_dict(),
            "case": CaseLabel.ORACLE.value,
            "decomposable": distance <= Tolerance.DECOMPOSABLE,
            "oracle_distance": distance,
        }

    payload = {"input": config.input_dict(), **result.as_dict(), "star": star_condition(reduced)}
    if basis is not None:
        payload["oracle_distance"] = oracle_distance(state, basis)
    if reduced is not state:
        payload["reduced_state"] = reduced.as_dict()
    return payload


def cmd_uncertainty(config: RunConfig) -> dict:
    state = _state(config)
    payload = {"input": config.input_dict()}
    if config.theta is not None:
        relation = equality_relation(state, config.theta, config.vartheta)
        payload["report"] = relation.as_dict()
        payload["triple_holds"] = relation.triple_holds
        if relation.applicable:
            payload["identity_residual"] = identity_residual(state, config.theta, config.vartheta)
    else:
        base = report(state)
        payload["report"] = base.as_dict()
        payload["triple_holds"] = base.triple_holds
    if config.validity:
        payload["validity"] = validity_ranges(state, config.grid or Defaults.VALIDITY_GRID).as_dict()
    if config.scan_lambda:
        scan = lambda_scan(Defaults.LAMBDA_GRID, Defaults.LAMBDA_GRID)
        payload["lambda"] = {"value": scan.value, "k": scan.k, "a": scan.a}
    return payload


# ============================================================================
# VERIFY
# ============================================================================

@dataclass
class VerifyStats:
    """Per-chunk tallies; max_* fields combine by max, integers by sum"""
    samples: int = 0
    max_distance_discrepancy: float = 0.0
    max_weight_violation: float = 0.0
    max_family_spread: float = 0.0
    max_theta_spread: float = 0.0
    max_identity_residual: float = 0.0
    max_boundary_gap: float = 0.0
    max_variance_residual: float = 0.0
    identity_checks: int = 0
    boundary_checks: int = 0
    triple_violations: int = 0
    decomposition_checks: int = 0
    decomposition_disagreements: int = 0
    star_checks: int = 0
    skipped_near_boundary: int = 0
    violations: int = 0
    failures: list = field(default_factory=list)

    def merge(self, other: "VerifyStats") -> "VerifyStats":
        for f in fields(self):
            mine, theirs = getattr(self, f.name), getattr(other, f.name)
            if f.name == "failures":
                merged = (mine + theirs)[:Defaults.REPORTED_FAILURES]
            elif f.name.startswith("max_"):
                merged = max(mine, theirs)
            else:
                merged = mine + theirs
            setattr(self, f.name, merged)
        return self

    def fail(self, check: str, value: float, record: dict):
        self.violations += 1
        if len(self.failures) < Defaults.REPORTED_FAILURES:
            self.failures.append({"check": check, "value": value, **record})


def _open_angle(rng: np.random.Generator, upper: float, closed: bool = False) -> float:
    """Uniform angle in (0, upper), or (0, upper] when closed"""
    if closed:
        return upper * (1.0 - rng.random())
    angle = 0.0
    while angle == 0.0:
        angle = rng.uniform(0.0, upper)
    return angle


def _weight_violation(weights: np.ndarray) -> float:
    return max(0.0, -float(weights.min()), abs(float(weights.sum()) - 1.0))


def _achieved(state: QubitState, basis: BasisSet, weights: np.ndarray) -> float:
    return bloch_distance(weights @ basis.bloch_points, state.bloch)


def _check_family(stats: VerifyStats, state: QubitState, basis: BasisSet, family: WeightFamily,
                  reference: float, rng: np.random.Generator, record: dict):
    stats.max_weight_violation = max(stats.max_weight_violation, _weight_violation(family.representative))
    if not family.free_params:
        return
    member = family.evaluate(*family.sample(rng))
    violation = _weight_violation(member)
    spread = abs(_achieved(state, basis, member) - reference)
    stats.max_weight_violation = max(stats.max_weight_violation, violation)
    stats.max_family_spread = max(stats.max_family_spread, spread)
    if violation > Tolerance.SIMPLEX_FEASIBILITY:
        stats.fail("family_feasibility", violation, record)
    if spread > Tolerance.FAMILY_DISTANCE:
        stats.fail("family_distance", spread, record)


def _check_against_oracle(stats: VerifyStats, state: QubitState, result: ApproxResult,
                          rng: np.random.Generator, record: dict):
    oracle = oracle_distance(state, result.basis)
    representative = result.weights.representative
    discrepancy = max(abs(result.distance - oracle),
                      abs(_achieved(state, result.basis, representative) - oracle))
    stats.max_distance_discrepancy = max(stats.max_distance_discrepancy, discrepancy)
    if discrepancy > Tolerance.ORACLE_VS_ANALYTIC:
        stats.fail("oracle_distance", discrepancy, {**record, "case": result.case.value})
    if _weight_violation(representative) > Tolerance.SIMPLEX_FEASIBILITY:
        stats.fail("weight_feasibility", _weight_violation(representative), record)
    _check_family(stats, state, result.basis, result.weights, result.distance, rng, record)


def _boundary(stats: VerifyStats, gap: float, record: dict):
    stats.boundary_checks += 1
    stats.max_boundary_gap = max(stats.max_boundary_gap, gap)
    if gap > Tolerance.IDENTITY:
        stats.fail("case_boundary", gap, record)


def _check_boundaries(stats: VerifyStats, state: QubitState, record: dict):
    """Case formulas agree where the case conditions switch"""
    x, y, z = state.bloch
    if x > Tolerance.CASE_BOUNDARY:
        for theta, other in ((math.atan2(1.0 - z, x), CaseLabel.I_ii),
                             (math.atan2(x, 1.0 + z), CaseLabel.I_iii)):
            if 0.0 < theta <= 0.5 * math.pi:
                gap = abs(type1_case_distance(state, theta, CaseLabel.I_i)
                          - type1_case_distance(state, theta, other))
                _boundary(stats, gap, {**record, "theta": theta})

    # <U_2vartheta> = R cos(2 vartheta - delta)
    radius, delta = math.hypot(x, z), math.atan2(x, z)
    if radius <= Tolerance.CASE_BOUNDARY:
        return
    for level, other in ((1.0 - y, CaseLabel.II_ii), (y - 1.0, CaseLabel.II_iii)):
        if abs(level) > radius:
            continue
        for sign in (1.0, -1.0):
            vartheta = (0.5 * (delta + sign * math.acos(level / radius))) % math.pi
            if vartheta <= 0.0:
                continue
            gap = abs(type2_case_distance(state, vartheta, CaseLabel.II_i)
                      - type2_case_distance(state, vartheta, other))
            _boundary(stats, gap, {**record, "vartheta": vartheta})


def _core_sample(stats: VerifyStats, rng: np.random.Generator, record: dict):
    state = random_state(rng)
    theta = _open_angle(rng, 0.5 * math.pi, closed=True)
    vartheta = _open_angle(rng, math.pi)
    record = {**record, **state.as_dict(), "theta": theta, "vartheta": vartheta}
    record.pop("bloch")

    type1 = solve_type1(state, theta)
    type2 = solve_type2(state, vartheta)
    _check_against_oracle(stats, state, type1, rng, record)
    _check_against_oracle(stats, state, type2, rng, record)
    _check_boundaries(stats, state, record)

    thetas = [theta] + [_open_angle(rng, 0.5 * math.pi, closed=True) for _ in range(3)]
    inside = [solve_type1(state, t).distance for t in thetas
              if classify_region(state, t, Family.TYPE_I) is CaseLabel.I_i]
    if len(inside) > 1:
        spread = float(np.std(inside))
        stats.max_theta_spread = max(stats.max_theta_spread, spread)
        if spread > Tolerance.THETA_INVARIANCE:
            stats.fail("theta_invariance", spread, record)

    if type1.case is CaseLabel.I_i and type2.case is CaseLabel.II_i:
        residual = abs(identity_residual(state, theta, vartheta))
        stats.identity_checks += 1
        stats.max_identity_residual = max(stats.max_identity_residual, residual)
        if residual > Tolerance.IDENTITY:
            stats.fail("distance_identity", residual, record)


def _uncertainty_sample(stats: VerifyStats, rng: np.random.Generator, record: dict):
    state = random_state(rng)
    record = {**record, "a": state.a, "k": state.k, "phi": state.phi}
    result = report(state)
    if not result.triple_holds:
        stats.triple_violations += 1
        stats.fail("triple_inequality", result.triple_rhs - result.triple_lhs, record)
    residual = abs(result.triple_lhs - 0.25 * (3.0 - result.f1))
    stats.max_variance_residual = max(stats.max_variance_residual, residual)
    if residual > Tolerance.IDENTITY:
        stats.fail("variance_sum", residual, record)
    excess = (result.absSx + result.absSy + result.absSz) - result.f2
    if excess > Tolerance.SIMPLEX_FEASIBILITY:
        stats.fail("expectation_bound", excess, record)


def _decomposition_sample(stats: VerifyStats, rng: np.random.Generator, record: dict):
    state = random_state(rng)
    record = {**record, "a": state.a, "k": state.k, "phi": state.phi}
    result = decompose_three_gates(state)
    gap = math.sqrt(result.criterion_lhs) - math.sqrt(result.criterion_rhs)

    if star_condition(state):
        stats.star_checks += 1
        distance = oracle_distance(state, striple(0.25 * math.pi))
        if not result.decomposable or distance > Tolerance.ORACLE_VS_ANALYTIC:
            stats.fail("star_condition", distance, {**record, "theta": 0.25 * math.pi})

    if abs(gap) < Tolerance.NEAR_BOUNDARY:
        stats.skipped_near_boundary += 1
        return
    stats.decomposition_checks += 1

    if result.decomposable:
        low, high = result.theta_interval
        theta = 0.5 * (low + high)
        if not 0.0 < theta <= 0.5 * math.pi:
            stats.skipped_near_boundary += 1
            return
        fixed = decompose_three_gates(state, theta)
        basis = striple(theta)
        distance = oracle_distance(state, basis)
        if not fixed.angle_admissible or distance > Tolerance.DECOMPOSABLE:
            stats.decomposition_disagreements += 1
            stats.fail("decomposable", distance, {**record, "theta": theta})
            return
        _check_family(stats, state, basis, fixed.weights, 0.0, rng, {**record, "theta": theta})
        return

    thetas = decomposition_thetas()
    distances = hull_distances(state.bloch, canonical_points(SetLabel.STRIPLEPRIME, thetas))
    closest = int(np.argmin(distances))
    if distances[closest] <= Tolerance.DECOMPOSABLE:
        stats.decomposition_disagreements += 1
        stats.fail("not_decomposable", float(distances[closest]),
                   {**record, "theta": float(thetas[closest])})


def decomposition_thetas(grid: int = Defaults.DECOMPOSITION_THETA_GRID) -> np.ndarray:
    """Angles in (0, pi/2] at which a non-decomposable verdict is confirmed"""
    return 0.5 * np.pi * np.arange(1, grid + 1) / grid


SUITE_SAMPLERS = {
    "core": _core_sample,
    "uncertainty": _uncertainty_sample,
    "decomposition": _decomposition_sample,
}


def _verify_chunk(suite: str, seed: int, chunk: int, count: int) -> VerifyStats:
    """One deterministic chunk; its stream depends only on (seed, chunk)"""
    rng = np.random.default_rng([seed, chunk])
    stats = VerifyStats(samples=count)
    samplers = list(SUITE_SAMPLERS.values()) if suite == "all" else [SUITE_SAMPLERS[suite]]
    for i in range(count):
        record = {"seed": seed, "chunk": chunk, "index": i}
        for sampler in samplers:
            sampler(stats, rng, record)
    return stats


def cmd_verify(config: RunConfig) -> dict:
    """Run the seeded property suites; summary['passed'] is False on any violation"""
    workers = worker_count()
    size = Defaults.CHUNK_SIZE
    chunks = [(c, min(size, config.samples - c * size))
              for c in range(math.ceil(config.samples / size))]
    logger.info(f"verify suite={config.suite} samples={config.samples} chunks={len(chunks)} workers={workers}")

    total = VerifyStats()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for stats in pool.map(lambda chunk: _verify_chunk(config.suite, config.seed, *chunk), chunks):
            total.merge(stats)

    summary = {"suite": config.suite, "seed": config.seed}
    summary.update({f.name: getattr(total, f.name) for f in fields(total) if f.name != "failures"})
    summary["passed"] = total.violations == 0
    summary["failures"] = total.failures
    if not summary["passed"]:
        logger.warning(f"verify found {total.violations} violation(s)")
    return summary


# ============================================================================
# SWEEP
# ============================================================================

def sweep_family(config: RunConfig) -> Family:
    """A single angle axis decides the family; otherwise the set does"""
    axes = config.axes or ()
    if "theta" in axes and "vartheta" not in axes:
        return Family.TYPE_I
    if "vartheta" in axes and "theta" not in axes:
        return Family.TYPE_II
    return Family.TYPE_II if config.basis_set == "sdoubleprime" else Family.TYPE_I


def _sweep_point(config: RunConfig, family: Family, values: dict) -> tuple[str, float, float]:
    params = {name: getattr(config, name) for name in STATE_PARAMS + ("theta", "vartheta")}
    params.update(values)
    state = make_state(params["a"], params["k"], params["phi"])
    if family is Family.TYPE_I:
        basis = sprime(params["theta"])
    else:
        basis = sdoubleprime(params["vartheta"])
    oracle = oracle_distance(state, basis)
    try:
        result = _solve(state, basis)
        case = result.case.value
        if "theta" in values and "vartheta" in values:
            labels = (classify_region(state, params["theta"], Family.TYPE_I),
                      classify_region(state, params["vartheta"], Family.TYPE_II))
            case = "/".join(label.value for label in labels)
        return case, result.distance, oracle
    except UNSUPPORTED:
        if not config.oracle_fallback:
            raise
        return CaseLabel.ORACLE.value, oracle, oracle


def cmd_sweep(config: RunConfig) -> dict:
    """
    Region map over two axes, axis1 major

    All rows are computed before anything is returned, so a failure never
    leaves a partial table behind.
    """
    grid = config.grid or Defaults.SWEEP_GRID
    first, second = config.axes
    family = sweep_family(config)
    outer, inner = sweep_points(first, grid), sweep_points(second, grid)
    workers = worker_count()
    logger.info(f"sweep {first} x {second}: {grid}x{grid} points, {family.value}, workers={workers}")

    def row_block(u: float) -> list[dict]:
        block = []
        for v in inner:
            case, distance, oracle = _sweep_point(config, family, {first: u, second: v})
            block.append({first: u, second: v, "case": case,
                          "distance": distance, "oracle_distance": oracle})
        return block

    with ThreadPoolExecutor(max_workers=workers) as pool:
        blocks = list(pool.map(row_block, outer))
    return {"input": config.input_dict(), "axes": [first, second],
            "family": family.value, "rows": [row for block in blocks for row in block]}


# ============================================================================
# SERIALIZATION
# ============================================================================

def _plain(value):
    """numpy scalars and arrays to Python values; non-finite floats to None"""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def to_json(payload: dict, indent: Optional[int] = None) -> str:
    """Shortest round-trip float representation, insertion-ordered keys"""
    return json.dumps(_plain(payload), indent=indent)


def format_csv(sweep: dict) -> str:
    first, second = sweep["axes"]
    lines = [f"{first},{second},case,distance,oracle_distance"]
    for row in sweep["rows"]:
        lines.append(f"{row[first]:.17g},{row[second]:.17g},{row['case']},"
                     f"{row['distance']:.17g},{row['oracle_distance']:.17g}")
    return "\n".join(lines) + "\n"


COMMAND_TABLE = {
    "approx": cmd_approx,
    "oracle": cmd_oracle,
    "decompose": cmd_decompose,
    "uncertainty": cmd_uncertainty,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


def run(config: RunConfig) -> dict:
    """Validate and dispatch"""
    config.validate()
    return COMMAND_TABLE[config.command](config)
