#!/usr/bin/env python3
"""
Numerical constants for bloch-approx

Every tolerance used by the library, the verify suites and the tests lives
here, so acceptance checks and solver code agree on what "equal" means.

Structure:
  Tolerance  = comparison slack for each kind of check
  Limits     = hard bounds on problem sizes
  Defaults   = default grid sizes, sample counts and seeds
  Reference  = named reference values (triple constant, equality state)
"""

import math

# ============================================================================
# TOLERANCES
# ============================================================================

class Tolerance:
    """Absolute tolerances, grouped by the check that uses them"""
    SIMPLEX_FEASIBILITY = 1e-12   # weights >= -tol, sum within tol of 1
    HERMITICITY = 1e-10           # entry-wise |A - A^dagger|
    TRACELESS = 1e-10
    UNIT_NORM = 1e-12             # pure-state amplitudes, Bloch length
    CASE_BOUNDARY = 1e-12         # slack on multiplied-out case conditions
    CANONICAL = 1e-12             # slack on x, y, z >= 0
    KKT_RESIDUAL = 1e-8
    ORACLE_VS_ANALYTIC = 1e-9
    FAMILY_DISTANCE = 1e-10       # spread of distance across a weight family
    IDENTITY = 1e-10              # exact algebraic identities, trace-norm identities
    DECOMPOSABLE = 1e-8           # oracle distance treated as zero
    PINV_CUTOFF = 1e-12           # relative singular-value cutoff
    BRENTQ_XTOL = 1e-9
    NELDER_MEAD_XATOL = 1e-10
    NEAR_BOUNDARY = 1e-6          # verify skips decomposition verdicts this close to the criterion
    THETA_INVARIANCE = 1e-12      # spread of case-i distances across angles


# ============================================================================
# LIMITS
# ============================================================================

class Limits:
    """Size bounds"""
    MAX_BASIS = 16          # support enumeration bound
    MAX_SUPPORT = 4         # Caratheodory in three dimensions
    MIN_LAMBDA_GRID = 100
    MIN_VALIDITY_GRID = 1000
    MIN_SWEEP_GRID = 2


# ============================================================================
# DEFAULTS
# ============================================================================

class Defaults:
    """Defaults for scans, sweeps and verify suites"""
    LAMBDA_GRID = 512
    VALIDITY_GRID = 2000
    SWEEP_GRID = 50
    VERIFY_SAMPLES = 1000
    SEED = 42
    CHUNK_SIZE = 256        # samples per deterministic work chunk
    THREADS_ENV = "BLOCHAPPROX_THREADS"
    DECOMPOSITION_THETA_GRID = 1000  # angles tried before a state is called non-decomposable
    REPORTED_FAILURES = 10


# ============================================================================
# REFERENCE VALUES
# ============================================================================

class Reference:
    """Named values the solvers are checked against"""
    TRIPLE_CONSTANT = 2.0 / math.sqrt(3.0)        # tau
    LAMBDA_MAX = math.sqrt(3.0)
    # State at which the triple inequality is tight, as (a, k, phi)
    EQUALITY_A = 0.5 - math.sqrt(3.0) / 6.0
    EQUALITY_K = 1.0
    EQUALITY_PHI = math.pi / 4.0
    EQUALITY_STATE = (EQUALITY_A, EQUALITY_K, EQUALITY_PHI)


def as_dict() -> dict:
    """All tolerances and limits as plain JSON-ready dictionaries"""
    def _public(cls):
        return {name: value for name, value in vars(cls).items()
                if name.isupper()}
    return {
        "tolerance": _public(Tolerance),
        "limits": _public(Limits),
        "defaults": _public(Defaults),
    }
