#!/usr/bin/env python3
"""
Exception hierarchy for bloch-approx

All errors derive from ValueError so callers that only expect bad-argument
failures keep working.
"""


class BlochApproxError(ValueError):
    """Base class for every error raised by the library"""


class DomainError(BlochApproxError):
    """A state parameter is outside its admissible range"""

    def __init__(self, name: str, value: float, valid: str):
        super().__init__(f"Parameter '{name}' = {value!r} out of range (valid range: {valid})")
        self.name = name
        self.value = value


class ContractViolation(BlochApproxError):
    """An input breaks a documented precondition (Hermitian, traceless, ...)"""


class DegenerateGateError(BlochApproxError):
    """The gate has no distinguished eigenbasis"""


class OrderingError(BlochApproxError):
    """Two-gate sets need beta > alpha"""


class CanonicalizationError(BlochApproxError):
    """The analytic solvers only accept states in the canonical region"""


class UnsupportedAngleError(BlochApproxError):
    """The analytic formulas do not cover this angle; use the oracle"""


class EmptyBasisError(BlochApproxError):
    """The basis set has no states"""


class BasisSizeError(BlochApproxError):
    """The basis set exceeds the enumeration bound"""


class ArityError(BlochApproxError):
    """Weight vector length does not match the basis set"""


class ValidationError(BlochApproxError):
    """A run configuration is missing or has out-of-range parameters"""
