#!/usr/bin/env python3
"""
Tests for the bloch-approx command line: outputs, exit codes and determinism
"""

import json
import math

import pytest

from cli import EXIT_OK, EXIT_UNSUPPORTED, EXIT_VALIDATION, EXIT_VIOLATION, main
from commands import RunConfig, cmd_verify
from constants import Reference
from qubit import make_state
from uncertainty import validity_ranges

EQUALITY_ARGS = ["--a", "0.2113248654", "--k", "1", "--phi", "0.7853981634"]


def _run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _error_line(err: str) -> dict:
    lines = [line for line in err.splitlines() if line.startswith("{")]
    return json.loads(lines[-1])


# ============================================================================
# APPROX / ORACLE / DECOMPOSE / UNCERTAINTY
# ============================================================================

def test_approx_case_ii(capsys):
    code, out, _ = _run(capsys, "approx", "--a", "0.5", "--k", "1", "--phi", "0",
                        "--theta", "1.0471975512", "--set", "sprime", "--out", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["case"] == "I_ii"
    assert payload["distance"] == pytest.approx(0.3660254, abs=1e-7)
    assert abs(payload["distance"] - payload["oracle_distance"]) <= 1e-9
    assert list(payload)[:6] == ["input", "case", "distance", "oracle_distance", "weights", "free_params"]
    assert payload["input"] == {"a": 0.5, "k": 1.0, "phi": 0.0, "theta": 1.0471975512, "set": "sprime"}


def test_approx_maximally_mixed(capsys):
    code, out, _ = _run(capsys, "approx", "--a", "0.5", "--k", "0", "--phi", "0",
                        "--theta", "0.7853981634", "--set", "sprime")
    assert code == EXIT_OK
    assert json.loads(out)["distance"] == 0.0


def test_approx_type2(capsys):
    code, out, _ = _run(capsys, "approx", *EQUALITY_ARGS, "--vartheta", "1.2", "--set", "sdoubleprime")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["case"] == "II_i"
    assert abs(payload["distance"] - payload["oracle_distance"]) <= 1e-9
    assert payload["free_params"][0]["name"] == "t"
    assert "mu" in payload and "nu" in payload


def test_approx_reduces_two_reflections(capsys):
    code, out, _ = _run(capsys, "approx", "--a", "0.5", "--k", "1", "--phi", "0",
                        "--alpha", "0", "--beta", "120", "--deg", "--set", "s1")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["case"] == "I_ii"
    assert payload["distance"] == pytest.approx(0.3660254037844386, abs=1e-9)
    assert payload["basis"]["angles"]["theta"] == pytest.approx(math.pi / 3.0)
    assert "reduced_state" in payload


def test_degrees_match_radians(capsys):
    _, radians, _ = _run(capsys, "approx", "--a", "0.3", "--k", "0.5", "--phi", "0.2",
                         "--theta", str(math.radians(40.0)))
    _, degrees, _ = _run(capsys, "approx", "--a", "0.3", "--k", "0.5", "--phi", str(math.degrees(0.2)),
                         "--theta", "40", "--deg")
    assert json.loads(radians)["distance"] == pytest.approx(json.loads(degrees)["distance"], abs=1e-12)


def test_output_round_trips(capsys):
    _, out, _ = _run(capsys, "approx", *EQUALITY_ARGS, "--vartheta", "1.2", "--set", "sdoubleprime")
    payload = json.loads(out)
    assert json.loads(json.dumps(payload)) == payload


def test_oracle_command(capsys):
    code, out, _ = _run(capsys, "oracle", "--a", "0.3", "--k", "0.5", "--phi", "2.0",
                        "--alpha", "0", "--beta", "1", "--set", "s")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert len(payload["weights"]) == 6
    assert payload["direct_distance"] == pytest.approx(payload["distance"], abs=1e-12)
    assert payload["kkt_residual"] <= 1e-8


def test_decompose_command(capsys):
    code, out, _ = _run(capsys, "decompose", "--a", "0.2", "--k", "0.75", "--phi", "0",
                        "--theta", str(math.pi / 4.0))
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["decomposable"] is True
    assert payload["angle_admissible"] is False
    assert payload["star"] is False
    assert payload["oracle_distance"] > 1e-3

    code, out, _ = _run(capsys, "decompose", "--a", "0.2", "--k", "0.75", "--phi", "0",
                        "--theta", str(math.pi / 8.0))
    payload = json.loads(out)
    assert payload["angle_admissible"] is True
    assert [p["name"] for p in payload["weights"]["free_params"]] == ["c1", "c2"]
    assert payload["oracle_distance"] <= 1e-10


def test_uncertainty_command(capsys):
    code, out, _ = _run(capsys, "uncertainty", *EQUALITY_ARGS, "--theta", "0.5", "--vartheta", "1.2",
                        "--validity", "--grid", "1000")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["triple_holds"] is True
    assert payload["report"]["applicable"] is True
    assert payload["report"]["equality_lhs"] == pytest.approx(0.5, abs=1e-9)
    assert abs(payload["identity_residual"]) <= 1e-10
    assert payload["validity"]["theta_intervals"][0] == pytest.approx([0.3509, 0.6319], abs=5e-4)


# ============================================================================
# ERRORS AND EXIT CODES
# ============================================================================

@pytest.mark.parametrize("argv", [
    ["approx", "--a", "0.5", "--k", "1", "--phi", "0", "--set", "sprime"],
    ["approx", "--a", "1.5", "--k", "1", "--phi", "0", "--theta", "0.5"],
    ["approx", "--a", "0.5", "--k", "1", "--phi", "0", "--theta", "0.5", "--set", "striple"],
    ["approx", "--a", "0.5", "--k", "1", "--phi", "0", "--alpha", "1", "--beta", "0.5", "--set", "s1"],
    ["uncertainty", "--a", "0.5", "--k", "1", "--phi", "0", "--theta", "0.5"],
    ["verify", "--samples", "0"],
    ["frobnicate"],
    ["approx", "--set", "nonsense"],
])
def test_validation_errors(capsys, argv):
    code, out, err = _run(capsys, *argv)
    assert code == EXIT_VALIDATION
    assert out == ""
    assert _error_line(err)["error"] == "validation"


def test_non_canonical_state_is_unsupported(capsys):
    argv = ["approx", "--a", "0.8", "--k", "0.5", "--phi", "0.3", "--theta", "0.5"]
    code, out, err = _run(capsys, *argv)
    assert code == EXIT_UNSUPPORTED
    assert out == ""
    assert _error_line(err)["error"] == "unsupported"

    code, out, _ = _run(capsys, *argv, "--oracle-fallback")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["case"] == "oracle"
    assert payload["distance"] == payload["oracle_distance"]
    assert payload["free_params"] == []


def test_unsupported_theta_falls_back(capsys):
    argv = ["approx", "--a", "0.3", "--k", "0.5", "--phi", "0.3", "--theta", "2.0"]
    assert _run(capsys, *argv)[0] == EXIT_UNSUPPORTED
    code, out, _ = _run(capsys, *argv, "--oracle-fallback")
    assert code == EXIT_OK
    assert json.loads(out)["case"] == "oracle"


# ============================================================================
# VERIFY
# ============================================================================

def test_verify_single_sample(capsys):
    code, out, _ = _run(capsys, "verify", "--samples", "1", "--seed", "7")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["passed"] is True
    assert payload["samples"] == 1
    assert payload["failures"] == []


def test_verify_core_suite(capsys):
    code, out, _ = _run(capsys, "verify", "--samples", "300", "--seed", "42", "--suite", "core")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["max_distance_discrepancy"] <= 1e-9
    assert payload["max_weight_violation"] <= 1e-12
    assert payload["max_family_spread"] <= 1e-10
    assert payload["boundary_checks"] > 0
    assert payload["identity_checks"] > 0


def test_verify_uncertainty_suite(capsys):
    code, out, _ = _run(capsys, "verify", "--samples", "2000", "--seed", "42", "--suite", "uncertainty")
    assert code == EXIT_OK
    assert json.loads(out)["triple_violations"] == 0


def test_verify_decomposition_suite():
    summary = cmd_verify(RunConfig("verify", samples=60, seed=3, suite="decomposition").validate())
    assert summary["passed"]
    assert summary["decomposition_disagreements"] == 0
    assert summary["decomposition_checks"] + summary["skipped_near_boundary"] >= 60


def test_verify_is_deterministic_across_worker_counts(capsys, monkeypatch):
    argv = ["verify", "--samples", "600", "--seed", "9", "--suite", "core"]
    monkeypatch.setenv("BLOCHAPPROX_THREADS", "1")
    _, single, _ = _run(capsys, *argv)
    monkeypatch.setenv("BLOCHAPPROX_THREADS", "4")
    _, pooled, _ = _run(capsys, *argv)
    _, again, _ = _run(capsys, *argv)
    assert single == pooled == again


@pytest.mark.parametrize("value", ["0", "-2", "many"])
def test_invalid_thread_cap(capsys, monkeypatch, value):
    monkeypatch.setenv("BLOCHAPPROX_THREADS", value)
    code, out, err = _run(capsys, "verify", "--samples", "1")
    assert code == EXIT_VALIDATION
    assert out == ""
    assert _error_line(err)["error"] == "validation"


def test_verify_failure_exit_code(capsys, monkeypatch):
    # every sampled family member now counts as a violation
    monkeypatch.setattr("constants.Tolerance.FAMILY_DISTANCE", -1.0)
    code, out, _ = _run(capsys, "verify", "--samples", "20", "--seed", "1", "--suite", "core")
    assert code == EXIT_VIOLATION
    payload = json.loads(out)
    assert payload["passed"] is False
    failure = payload["failures"][0]
    assert {"a", "k", "phi", "seed", "check"} <= set(failure)


# ============================================================================
# SWEEP
# ============================================================================

def test_sweep_csv(capsys):
    code, out, _ = _run(capsys, "sweep", "--axes", "a", "k", "--phi", "0", "--theta",
                        str(math.pi / 4.0), "--grid", "5")
    assert code == EXIT_OK
    lines = out.split("\n")
    assert lines[0] == "a,k,case,distance,oracle_distance"
    assert lines[-1] == ""
    rows = [line.split(",") for line in lines[1:-1]]
    assert len(rows) == 25
    assert [float(r[0]) for r in rows[:5]] == [0.0] * 5
    for a, k, case, distance, oracle in rows:
        assert float(distance) >= 0.0
        assert abs(float(distance) - float(oracle)) <= 1e-9


def test_sweep_y_axis_states_are_all_case_i(capsys):
    code, out, _ = _run(capsys, "sweep", "--axes", "a", "k", "--phi", str(math.pi / 2.0),
                        "--theta", str(math.pi / 4.0), "--grid", "6")
    assert code == EXIT_OK
    for line in out.splitlines()[1:]:
        a, k, case, distance, _ = line.split(",")
        a, k = float(a), float(k)
        assert case == "I_i"
        assert float(distance) == pytest.approx(2.0 * k * math.sqrt(a * (1.0 - a)), abs=1e-12)


def test_sweep_region_matches_validity_ranges(capsys):
    grid = 40
    code, out, _ = _run(capsys, "sweep", "--axes", "theta", "vartheta", *EQUALITY_ARGS, "--grid", str(grid))
    assert code == EXIT_OK
    ranges = validity_ranges(make_state(*Reference.EQUALITY_STATE), 2000)
    theta_cell, vartheta_cell = 0.5 * math.pi / grid, math.pi / (grid + 1)

    def inside(value, intervals, cell):
        hit = any(low <= value <= high for low, high in intervals)
        near = any(min(abs(value - low), abs(value - high)) <= cell for low, high in intervals)
        return hit, near

    for line in out.splitlines()[1:]:
        theta, vartheta, case, _, _ = line.split(",")
        in_theta, near_theta = inside(float(theta), ranges.theta_intervals, theta_cell)
        in_vartheta, near_vartheta = inside(float(vartheta), ranges.vartheta_intervals, vartheta_cell)
        if near_theta or near_vartheta:
            continue
        assert (case == "I_i/II_i") == (in_theta and in_vartheta)


def test_sweep_json_output(capsys):
    code, out, _ = _run(capsys, "sweep", "--axes", "phi", "k", "--a", "0.3", "--vartheta", "1.0",
                        "--set", "sdoubleprime", "--grid", "3", "--out", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["family"] == "TypeII"
    assert len(payload["rows"]) == 9
    assert all(row["case"].startswith("II_") for row in payload["rows"])


@pytest.mark.parametrize("axes", [["a", "mu"], ["a", "a"]])
def test_sweep_bad_axes(capsys, axes):
    code, out, err = _run(capsys, "sweep", "--axes", *axes, "--phi", "0", "--k", "1",
                          "--theta", "0.5", "--grid", "4")
    assert code == EXIT_VALIDATION
    assert out == ""
    assert _error_line(err)["error"] == "validation"


def test_sweep_without_fallback_leaves_no_partial_output(capsys):
    code, out, _ = _run(capsys, "sweep", "--axes", "a", "k", "--phi", "3.0", "--theta", "0.5", "--grid", "4")
    assert code == EXIT_UNSUPPORTED
    assert out == ""
