#!/usr/bin/env python3
"""
MCP Server for bloch-approx
Exposes the convex-approximation solvers, the exact oracle and the
uncertainty reports as tools over stdio
"""

import asyncio
import logging

import mcp.server.stdio
from mcp.server import Server
from mcp.types import Resource, TextContent, Tool

import constants
from commands import SET_ANGLES, RunConfig, run, to_json
from constants import Defaults, Limits, Reference
from parameter_map import (
    PARAMETER_MAP, get_all_parameters, get_parameter_info, get_parameters_by_category,
    validate_parameter,
)
from qubit import make_state
from uncertainty import lambda_scan, report

logger = logging.getLogger("bloch-approx-server")

# Create server instance
server = Server("bloch-approx-server")


def _number(name: str, **extra) -> dict:
    info = get_parameter_info(name)
    return {"type": "number", "description": info["description"], **extra}


STATE_PROPERTIES = {
    "a": _number("a", minimum=0.0, maximum=1.0),
    "k": _number("k", minimum=0.0, maximum=1.0),
    "phi": _number("phi"),
}
STATE_REQUIRED = ["a", "k", "phi"]

ANGLE_PROPERTIES = {name: _number(name) for name in ("alpha", "beta", "theta", "vartheta")}

SET_PROPERTY = {
    "type": "string",
    "enum": list(SET_ANGLES),
    "description": "Basis set: sprime (theta), sdoubleprime (vartheta), striple (theta), "
                   "s1 (alpha, beta), s2 (beta), s3 (alpha), s (alpha, beta)",
}

FALLBACK_PROPERTY = {
    "type": "boolean",
    "description": "Route inputs the analytic formulas do not cover to the oracle. Default is false.",
    "default": False,
}


@server.list_tools()
async def list_tools() -> list[Tool]:
    """List available solver tools"""
    return [
        Tool(
            name="approximate_state",
            description="Closed-form optimal convex approximation of a qubit state by the eigenstates of two real gates. "
                        "Sets s1/s2/s3 are reduced to sprime/sdoubleprime first. Returns case, distance, "
                        "representative weights, free parameters and the oracle cross-check.",
            inputSchema={
                "type": "object",
                "properties": {**STATE_PROPERTIES, **ANGLE_PROPERTIES, "set": SET_PROPERTY,
                               "oracle_fallback": FALLBACK_PROPERTY},
                "required": STATE_REQUIRED + ["set"],
            },
        ),
        Tool(
            name="project_onto_hull",
            description="Exact distance from a qubit state to the convex hull of any basis set, "
                        "with optimal weights, active support and KKT residual.",
            inputSchema={
                "type": "object",
                "properties": {**STATE_PROPERTIES, **ANGLE_PROPERTIES, "set": SET_PROPERTY},
                "required": STATE_REQUIRED + ["set"],
            },
        ),
        Tool(
            name="decompose_three_gates",
            description="Whether a state is a mixture of the eigenstates of three gates "
                        "((1 - <y>)^2 >= <x>^2 + <z>^2), the admissible theta interval and, for a given "
                        "theta, the two-parameter weight family.",
            inputSchema={
                "type": "object",
                "properties": {**STATE_PROPERTIES, **ANGLE_PROPERTIES,
                               "set": {"type": "string", "enum": ["striple", "s"],
                                       "description": "striple (optional theta) or s (alpha, beta). Default is striple."},
                               "oracle_fallback": FALLBACK_PROPERTY},
                "required": STATE_REQUIRED,
            },
        ),
        Tool(
            name="uncertainty_report",
            description="Spin variances and the triple uncertainty inequality for a state. "
                        "With theta and vartheta, also the equality relation built from the two optimal distances.",
            inputSchema={
                "type": "object",
                "properties": {**STATE_PROPERTIES, "theta": ANGLE_PROPERTIES["theta"],
                               "vartheta": ANGLE_PROPERTIES["vartheta"]},
                "required": STATE_REQUIRED,
            },
        ),
        Tool(
            name="validity_ranges",
            description="Intervals of theta in (0, pi/2] and vartheta in (0, pi) where the case-i conditions of "
                        "both two-gate solvers hold for a state.",
            inputSchema={
                "type": "object",
                "properties": {
                    **STATE_PROPERTIES,
                    "grid": {"type": "integer", "minimum": Limits.MIN_VALIDITY_GRID,
                             "default": Defaults.VALIDITY_GRID,
                             "description": "Grid points before root refinement"},
                },
                "required": STATE_REQUIRED,
            },
        ),
        Tool(
            name="lambda_scan",
            description="Maximize 4 f2(k, a) / (3 - f1(k, a)) over k in [0, 1], a in [0, 1/2]; "
                        "the maximum fixes the triple uncertainty constant.",
            inputSchema={
                "type": "object",
                "properties": {
                    "grid": {"type": "integer", "minimum": Limits.MIN_LAMBDA_GRID,
                             "default": Defaults.LAMBDA_GRID, "description": "Grid points per axis"},
                    "k": {"type": "number", "minimum": 0.0, "maximum": 1.0,
                          "description": "Optional: scan only the slice at this k"},
                },
            },
        ),
        Tool(
            name="list_parameters",
            description="List all parameters with their admissible ranges, organized by category (State, Gate, Run).",
            inputSchema={
                "type": "object",
                "properties": {
                    "category": {
                        "type": "string",
                        "description": "Optional: filter by category name. If not specified, shows all categories."
                    }
                }
            }
        ),
    ]


def _config(command: str, arguments: dict, **overrides) -> RunConfig:
    known = {name: arguments.get(name) for name in ("a", "k", "phi", "alpha", "beta", "theta", "vartheta")}
    return RunConfig(
        command=command,
        **known,
        basis_set=arguments.get("set"),
        oracle_fallback=bool(arguments.get("oracle_fallback", False)),
        **overrides,
    )


def _text(payload) -> list[TextContent]:
    return [TextContent(type="text", text=to_json(payload, indent=2))]


@server.call_tool()
async def call_tool(name: str, arguments: dict) -> list[TextContent]:
    """Execute a solver tool"""
    arguments = arguments or {}
    try:
        if name == "approximate_state":
            return _text(run(_config("approx", arguments)))

        elif name == "project_onto_hull":
            return _text(run(_config("oracle", arguments)))

        elif name == "decompose_three_gates":
            return _text(run(_config("decompose", arguments)))

        elif name == "uncertainty_report":
            return _text(run(_config("uncertainty", arguments)))

        elif name == "validity_ranges":
            grid = int(arguments.get("grid", Defaults.VALIDITY_GRID))
            payload = run(_config("uncertainty", arguments, validity=True, grid=grid))
            return _text({"input": payload["input"], **payload["validity"]})

        elif name == "lambda_scan":
            grid = int(arguments.get("grid", Defaults.LAMBDA_GRID))
            k_fixed = arguments.get("k")
            if k_fixed is not None:
                is_valid, error_msg = validate_parameter("k", k_fixed)
                if not is_valid:
                    return [TextContent(type="text", text=f"Error: {error_msg}")]
            scan = lambda_scan(grid, grid, k_fixed=k_fixed)
            return _text({"lambda": scan.value, "k": scan.k, "a": scan.a,
                          "expected": Reference.LAMBDA_MAX})

        elif name == "list_parameters":
            category_filter = arguments.get("category")
            categories = get_parameters_by_category()

            if category_filter:
                if category_filter in categories:
                    params = categories[category_filter]
                    result = f"Parameters in category '{category_filter}' ({len(params)}):\n\n"
                    for param in params:
                        result += f"- {param}: {_describe(param)}\n"
                else:
                    result = f"Error: Unknown category '{category_filter}'\n"
                    result += f"Available categories: {', '.join(categories.keys())}"
            else:
                result = "Available parameters by category:\n\n"
                for cat_name, params in categories.items():
                    result += f"{cat_name} ({len(params)}):\n"
                    for param in params:
                        result += f"  - {param}: {_describe(param)}\n"
                    result += "\n"

                result += f"Total: {len(get_all_parameters())} parameters\n"
                result += "\nUse 'category' parameter to filter by category."

            return [TextContent(type="text", text=result)]

        else:
            return [TextContent(
                type="text",
                text=f"Unknown tool: {name}"
            )]

    except Exception as e:
        logger.error(f"Error executing tool {name}: {e}")
        return [TextContent(
            type="text",
            text=f"Error: {str(e)}"
        )]


def _describe(param: str) -> str:
    info = PARAMETER_MAP[param]
    low, high = info["range"]
    brackets = "()" if info["open"] else "[]"
    return f"{info['description']} {brackets[0]}{low}, {high}{brackets[1]}"


@server.list_resources()
async def list_resources() -> list[Resource]:
    """List available resources"""
    return [
        Resource(
            uri="bloch://tolerances",
            name="Tolerances",
            mimeType="application/json",
            description="Every tolerance, limit and default the solvers and verify suites use"
        ),
        Resource(
            uri="bloch://reference-state",
            name="Equality State",
            mimeType="application/json",
            description="The state at which the triple uncertainty inequality is tight, with its report"
        )
    ]


@server.read_resource()
async def read_resource(uri) -> str:
    """Read a resource"""
    uri = str(uri).rstrip("/")
    if uri == "bloch://tolerances":
        return to_json(constants.as_dict(), indent=2)

    elif uri == "bloch://reference-state":
        state = make_state(*Reference.EQUALITY_STATE)
        return to_json({"state": state.as_dict(),
                        "triple_constant": Reference.TRIPLE_CONSTANT,
                        "report": report(state).as_dict()}, indent=2)

    return f"Unknown resource: {uri}"


async def main():
    """Main entry point"""
    async with mcp.server.stdio.stdio_server() as (read_stream, write_stream):
        await server.run(
            read_stream,
            write_stream,
            server.create_initialization_options()
        )


def run_server():
    logging.basicConfig(level=logging.INFO)
    asyncio.run(main())


if __name__ == "__main__":
    run_server()
