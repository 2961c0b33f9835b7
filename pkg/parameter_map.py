#!/usr/bin/env python3
"""
Parameter registry for the command line and the tool server
Maps user-facing parameter names to their category, admissible range and
default sweep span
"""

import math

# name -> {category, range: (min, max), open: ends excluded, sweep: (min, max) or None}
PARAMETER_MAP = {
    # STATE PARAMETERS
    "a": {"category": "State", "range": (0.0, 1.0), "open": False, "sweep": (0.0, 0.5),
          "description": "population of |1>, <sigma_z> = 1 - 2a"},
    "k": {"category": "State", "range": (0.0, 1.0), "open": False, "sweep": (0.0, 1.0),
          "description": "coherence fraction"},
    "phi": {"category": "State", "range": (-math.inf, math.inf), "open": False,
            "sweep": (0.0, 0.5 * math.pi), "description": "coherence phase (radians, wrapped)"},

    # GATE ANGLES
    "alpha": {"category": "Gate", "range": (-math.inf, math.inf), "open": False, "sweep": None,
              "description": "angle of the first reflection gate U_alpha"},
    "beta": {"category": "Gate", "range": (-math.inf, math.inf), "open": False, "sweep": None,
             "description": "angle of the second reflection gate U_beta"},
    "theta": {"category": "Gate", "range": (0.0, math.pi), "open": True,
              "sweep": (0.0, 0.5 * math.pi), "description": "half angle between two reflection gates"},
    "vartheta": {"category": "Gate", "range": (0.0, math.pi), "open": True, "sweep": (0.0, math.pi),
                 "description": "half angle of the reflection gate paired with the y eigenbasis"},

    # RUN CONTROL
    "samples": {"category": "Run", "range": (1, math.inf), "open": False, "sweep": None,
                "description": "number of random samples in verify"},
    "grid": {"category": "Run", "range": (2, math.inf), "open": False, "sweep": None,
             "description": "grid points per axis"},
    "seed": {"category": "Run", "range": (0, 2 ** 64 - 1), "open": False, "sweep": None,
             "description": "unsigned 64-bit random seed"},
}

SWEEP_AXES = tuple(name for name, info in PARAMETER_MAP.items() if info["sweep"])


def validate_parameter(param_name: str, value) -> tuple[bool, str]:
    """
    Validate a parameter name and value
    Returns: (is_valid, error_message)
    """
    if param_name not in PARAMETER_MAP:
        available = ", ".join(sorted(PARAMETER_MAP.keys()))
        return False, f"Unknown parameter '{param_name}'. Available parameters: {available}"

    info = PARAMETER_MAP[param_name]
    min_val, max_val = info["range"]
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return False, f"Missing value for '{param_name}'"
    if math.isinf(min_val) and math.isinf(max_val) and not math.isfinite(value):
        return False, f"Value {value} for '{param_name}' must be finite"

    inside = min_val < value < max_val if info["open"] else min_val <= value <= max_val
    if not inside:
        brackets = "()" if info["open"] else "[]"
        return False, (f"Value {value} out of range for '{param_name}' "
                       f"(valid range: {brackets[0]}{min_val}, {max_val}{brackets[1]})")

    return True, ""


def get_parameter_info(param_name: str) -> dict:
    """Get parameter registry entry"""
    return PARAMETER_MAP.get(param_name)


def get_all_parameters() -> list[str]:
    """Get list of all parameter names"""
    return sorted(PARAMETER_MAP.keys())


def get_parameters_by_category() -> dict:
    """Get parameters organized by category"""
    categories = {}
    for name, info in PARAMETER_MAP.items():
        categories.setdefault(info["category"], []).append(name)
    return {k: sorted(v) for k, v in categories.items()}


def sweep_points(axis: str, grid: int) -> list[float]:
    """Grid over an axis' sweep span; open ends of the admissible range are skipped"""
    lo, hi = PARAMETER_MAP[axis]["sweep"]
    if not PARAMETER_MAP[axis]["open"]:
        return [lo + (hi - lo) * i / (grid - 1) for i in range(grid)]
    if hi < PARAMETER_MAP[axis]["range"][1]:
        # right end is admissible (theta up to pi/2)
        return [lo + (hi - lo) * (i + 1) / grid for i in range(grid)]
    return [lo + (hi - lo) * (i + 1) / (grid + 1) for i in range(grid)]
