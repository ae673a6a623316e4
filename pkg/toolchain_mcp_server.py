#!/usr/bin/env python
"""
dualdata MCP Server

This server exposes the typechecker, evaluator and de/refunctionalizer as
MCP tools over stdio.
"""
import logging

from mcp.server.fastmcp import FastMCP

from app.lang.errors import DiagnosticError, TransformError, XfuncVerificationError
from app.models.program import RunStatus
from app.services.toolchain import toolchain

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger("toolchain_mcp_server")

# Initialize FastMCP server
mcp = FastMCP("dualdata")


def format_diagnostics(e: DiagnosticError) -> str:
    lines = [d.render() for d in e.diagnostics]
    return "Program rejected:\n" + "\n".join(lines)


@mcp.tool()
async def check_program(source: str, prelude: bool = True) -> str:
    """Typecheck a dualdata program.

    Args:
        source: Program text
        prelude: Put the bundled Fun and Π declarations in scope
    """
    result = toolchain.check_result(source, None, prelude)
    if not result.ok:
        return "Program rejected:\n" + "\n".join(d.render() for d in result.diagnostics)
    text = f"Program typechecks ({result.declarations} declarations)."
    if result.generated:
        text += f"\nLifted: {', '.join(result.generated)}"
    return text


@mcp.tool()
async def run_program(source: str, expr: str, fuel: int = 100000, prelude: bool = True) -> str:
    """Evaluate a closed expression against a dualdata program.

    Args:
        source: Program text
        expr: Expression to evaluate, e.g. S(Z).plus(S(Z))
        fuel: Maximum number of evaluation steps
        prelude: Put the bundled Fun and Π declarations in scope
    """
    try:
        result = toolchain.run(source, expr, None, prelude, fuel)
    except DiagnosticError as e:
        return format_diagnostics(e)
    if result.status == RunStatus.VALUE:
        return f"{result.value}\n({result.steps} steps)"
    if result.status == RunStatus.STUCK:
        return f"Evaluation is stuck: {result.reason}\nAt: {result.term}"
    return f"No value after {result.steps} steps.\nAt: {result.term}"


@mcp.tool()
async def transpose_type(source: str, type_name: str, prelude: bool = True) -> str:
    """Defunctionalize a codata type or refunctionalize a data type.

    Args:
        source: Program text
        type_name: The type whose producers and consumers are swapped
        prelude: Put the bundled Fun and Π declarations in scope
    """
    try:
        text, report = toolchain.xfunc(source, type_name, None, prelude)
    except DiagnosticError as e:
        return format_diagnostics(e)
    except TransformError as e:
        return f"Cannot transform {type_name}: {e}"
    except XfuncVerificationError as e:
        logger.error(f"Transformation of {type_name} failed verification: {e}")
        return "Transformed program does not typecheck:\n" + "\n".join(d.render() for d in e.diagnostics)
    return f"-- {report.direction.value} {type_name}\n{text}"


@mcp.tool()
async def format_program(source: str, prelude: bool = True) -> str:
    """Pretty-print a dualdata program.

    Args:
        source: Program text
        prelude: Put the bundled Fun and Π declarations in scope
    """
    try:
        return toolchain.fmt(source, None, prelude)
    except DiagnosticError as e:
        return format_diagnostics(e)


if __name__ == "__main__":
    logger.info("Starting dualdata MCP server")
    mcp.run(transport='stdio')
