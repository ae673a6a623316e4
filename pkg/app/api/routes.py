"""
API routes for the toolchain service
"""
import logging
from typing import Optional, Union
from fastapi import APIRouter, Depends, Header
from pydantic import ValidationError

from app.mcp.protocol import MCPAction, MCPError, MCPErrorCode, MCPErrorResponse, MCPRequest, MCPResponse
from app.mcp.service import program_check, program_fmt, program_lift, program_run, program_xfunc
from app.models.program import ProgramRequest, RunRequest, XfuncRequest

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/v1")

ProgramResponse = Union[MCPResponse, MCPErrorResponse]

# action -> (request model, handler)
ACTIONS = {
    MCPAction.CHECK: (ProgramRequest, program_check),
    MCPAction.RUN: (RunRequest, program_run),
    MCPAction.LIFT: (ProgramRequest, program_lift),
    MCPAction.XFUNC: (XfuncRequest, program_xfunc),
    MCPAction.FMT: (ProgramRequest, program_fmt),
}


def extract_request_id(x_request_id: Optional[str] = Header(None)) -> Optional[str]:
    """
    Extract request ID from header if available
    """
    return x_request_id


@router.post(
    "/program/check",
    response_model=ProgramResponse,
    summary="Typecheck a program",
    description="Parse, lift and typecheck a program; diagnostics are returned on rejection"
)
async def check(
    request: ProgramRequest,
    request_id: Optional[str] = Depends(extract_request_id)
) -> ProgramResponse:
    logger.info(f"Checking {request.file or '<request>'}")
    return await program_check(request, request_id)


@router.post(
    "/program/run",
    response_model=ProgramResponse,
    summary="Evaluate an expression",
    description="Evaluate a closed expression call-by-value against a checked program"
)
async def run(
    request: RunRequest,
    request_id: Optional[str] = Depends(extract_request_id)
) -> ProgramResponse:
    logger.info(f"Evaluating {request.expr} in {request.file or '<request>'}")
    return await program_run(request, request_id)


@router.post(
    "/program/lift",
    response_model=ProgramResponse,
    summary="Lift local matches and comatches",
    description="Return the program with every local (co)match replaced by a top-level declaration"
)
async def lift(
    request: ProgramRequest,
    request_id: Optional[str] = Depends(extract_request_id)
) -> ProgramResponse:
    return await program_lift(request, request_id)


@router.post(
    "/program/xfunc",
    response_model=ProgramResponse,
    summary="Defunctionalize or refunctionalize a type",
    description="Transpose the producer/consumer matrix of a type and return the checked result"
)
async def xfunc(
    request: XfuncRequest,
    request_id: Optional[str] = Depends(extract_request_id)
) -> ProgramResponse:
    logger.info(f"Transposing {request.type_name} in {request.file or '<request>'}")
    return await program_xfunc(request, request_id)


@router.post(
    "/program/fmt",
    response_model=ProgramResponse,
    summary="Pretty-print a program",
)
async def fmt(
    request: ProgramRequest,
    request_id: Optional[str] = Depends(extract_request_id)
) -> ProgramResponse:
    return await program_fmt(request, request_id)


@router.post(
    "/mcp",
    response_model=ProgramResponse,
    summary="MCP protocol endpoint",
    description="General purpose MCP protocol endpoint for all program operations"
)
async def mcp_endpoint(
    request: MCPRequest,
    request_id: Optional[str] = Depends(extract_request_id)
) -> ProgramResponse:
    """
    Process an MCP protocol request
    """
    # Use the request_id from the MCP request if available
    req_id = request.context.request_id if request.context and request.context.request_id else request_id

    if request.action not in ACTIONS:
        logger.error(f"Unknown action: {request.action}")
        return MCPErrorResponse(
            context=request.context,
            metadata=request.metadata,
            error=MCPError(code=MCPErrorCode.INVALID_REQUEST, message=f"Unknown action: {request.action}")
        )

    model, handler = ACTIONS[request.action]
    try:
        params = model(**request.parameters)
    except ValidationError as e:
        missing = ", ".join(".".join(str(p) for p in err["loc"]) for err in e.errors())
        logger.error(f"Invalid parameters for {request.action}: {missing}")
        return MCPErrorResponse(
            context=request.context,
            metadata=request.metadata,
            error=MCPError(code=MCPErrorCode.INVALID_PARAMETER, message=f"Invalid or missing parameters: {missing}")
        )
    return await handler(params, req_id)
