"""
MCP Service Implementation for the toolchain

Async wrappers that run the toolchain off the event loop and wrap results
and failures in MCP envelopes.
"""
import asyncio
import time
import uuid
import logging
from typing import Dict, Any, Optional, Union

from app.lang.errors import DiagnosticError, TransformError, XfuncVerificationError
from app.mcp.protocol import (
    MCPContext,
    MCPMetadata,
    MCPResponse,
    MCPErrorResponse,
    MCPError,
    MCPErrorCode
)
from app.models.program import (
    ProgramRequest,
    RunRequest,
    RunStatus,
    SourceResult,
    XfuncRequest,
    XfuncResult,
)
from app.services.toolchain import toolchain

logger = logging.getLogger(__name__)

SERVICE_NAME = "dualdata.toolchain"


def create_context(request_id: Optional[str] = None) -> MCPContext:
    """
    Create a new MCP context

    Args:
        request_id: Optional request ID, will generate one if not provided

    Returns:
        MCPContext object
    """
    return MCPContext(
        request_id=request_id or str(uuid.uuid4()),
        timestamp=int(time.time() * 1000)
    )


def create_metadata(prelude: bool = True) -> MCPMetadata:
    return MCPMetadata(
        service=SERVICE_NAME,
        prelude=toolchain.prelude_path.name if prelude else None
    )


def create_response(data: Any, request_id: Optional[str] = None, prelude: bool = True) -> MCPResponse:
    return MCPResponse(
        context=create_context(request_id),
        metadata=create_metadata(prelude),
        data=data
    )


def create_error_response(
    error_code: MCPErrorCode,
    message: str,
    details: Optional[Dict[str, Any]] = None,
    request_id: Optional[str] = None
) -> MCPErrorResponse:
    """
    Create an MCP error response

    Args:
        error_code: Error code
        message: Error message
        details: Optional error details
        request_id: Optional request ID

    Returns:
        MCPErrorResponse object
    """
    return MCPErrorResponse(
        context=create_context(request_id),
        metadata=create_metadata(),
        error=MCPError(
            code=error_code,
            message=message,
            details=details
        )
    )


def _rejected(e: DiagnosticError, request_id: Optional[str]) -> MCPErrorResponse:
    return create_error_response(
        MCPErrorCode.PROGRAM_REJECTED,
        f"Program rejected with {len(e.diagnostics)} diagnostic(s)",
        details={"diagnostics": [d.model_dump(mode="json") for d in e.diagnostics]},
        request_id=request_id
    )


def _failed(action: str, e: Exception, request_id: Optional[str]) -> MCPErrorResponse:
    logger.error(f"Error in {action}: {e}")
    return create_error_response(
        MCPErrorCode.UNKNOWN_ERROR,
        f"Error in {action}: {str(e)}",
        request_id=request_id
    )


async def program_check(
    request: ProgramRequest,
    request_id: Optional[str] = None
) -> Union[MCPResponse, MCPErrorResponse]:
    """
    Typecheck a program

    Args:
        request: Program source and options
        request_id: Optional request ID

    Returns:
        MCPResponse with a CheckResult, or PROGRAM_REJECTED with diagnostics
    """
    try:
        result = await asyncio.to_thread(
            toolchain.check_result, request.source, request.file, request.prelude, request.fuel
        )
    except Exception as e:
        return _failed("program.check", e, request_id)
    if not result.ok:
        return create_error_response(
            MCPErrorCode.PROGRAM_REJECTED,
            f"Program rejected with {len(result.diagnostics)} diagnostic(s)",
            details=result.model_dump(mode="json"),
            request_id=request_id
        )
    return create_response(result, request_id, request.prelude)


async def program_run(
    request: RunRequest,
    request_id: Optional[str] = None
) -> Union[MCPResponse, MCPErrorResponse]:
    """
    Evaluate an expression in a program

    Returns:
        MCPResponse with a RunResult, EVALUATION_FAILED when evaluation is
        stuck or out of fuel, or PROGRAM_REJECTED
    """
    try:
        result = await asyncio.to_thread(
            toolchain.run, request.source, request.expr, request.file, request.prelude, request.fuel
        )
    except DiagnosticError as e:
        return _rejected(e, request_id)
    except Exception as e:
        return _failed("program.run", e, request_id)
    if result.status != RunStatus.VALUE:
        return create_error_response(
            MCPErrorCode.EVALUATION_FAILED,
            f"Evaluation of {request.expr} ended with {result.status.value}",
            details=result.model_dump(mode="json"),
            request_id=request_id
        )
    return create_response(result, request_id, request.prelude)


async def program_lift(
    request: ProgramRequest,
    request_id: Optional[str] = None
) -> Union[MCPResponse, MCPErrorResponse]:
    try:
        source = await asyncio.to_thread(toolchain.lift, request.source, request.file, request.prelude)
    except DiagnosticError as e:
        return _rejected(e, request_id)
    except Exception as e:
        return _failed("program.lift", e, request_id)
    return create_response(SourceResult(source=source), request_id, request.prelude)


async def program_xfunc(
    request: XfuncRequest,
    request_id: Optional[str] = None
) -> Union[MCPResponse, MCPErrorResponse]:
    """
    De- or refunctionalize a type of a program

    Returns:
        MCPResponse with an XfuncResult; INVALID_PARAMETER for a type that
        cannot be transformed, TRANSFORM_FAILED if the output is ill-typed
    """
    try:
        source, report = await asyncio.to_thread(
            toolchain.xfunc, request.source, request.type_name, request.file, request.prelude, request.fuel
        )
    except DiagnosticError as e:
        return _rejected(e, request_id)
    except TransformError as e:
        logger.error(f"Cannot transform {request.type_name}: {e}")
        return create_error_response(MCPErrorCode.INVALID_PARAMETER, str(e), request_id=request_id)
    except XfuncVerificationError as e:
        logger.error(f"Transformation of {request.type_name} failed verification: {e}")
        return create_error_response(
            MCPErrorCode.TRANSFORM_FAILED,
            str(e),
            details={
                "diagnostics": [d.model_dump(mode="json") for d in e.diagnostics],
                "report": e.report.model_dump(mode="json") if e.report else None,
            },
            request_id=request_id
        )
    except Exception as e:
        return _failed("program.xfunc", e, request_id)
    return create_response(XfuncResult(source=source, report=report), request_id, request.prelude)


async def program_fmt(
    request: ProgramRequest,
    request_id: Optional[str] = None
) -> Union[MCPResponse, MCPErrorResponse]:
    try:
        source = await asyncio.to_thread(toolchain.fmt, request.source, request.file, request.prelude)
    except DiagnosticError as e:
        return _rejected(e, request_id)
    except Exception as e:
        return _failed("program.fmt", e, request_id)
    return create_response(SourceResult(source=source), request_id, request.prelude)
