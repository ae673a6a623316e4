"""
MCP-specific API endpoints
"""
import logging
from fastapi import APIRouter, Depends
from typing import Optional

from app.mcp.protocol import MCPRequest
from app.api.routes import ProgramResponse, extract_request_id, mcp_endpoint

logger = logging.getLogger(__name__)

router = APIRouter()


@router.post(
    "/mcp",
    response_model=ProgramResponse,
    summary="MCP standard endpoint",
    description="Root-level MCP endpoint dispatching program.* actions"
)
async def standard_mcp_endpoint(
    request: MCPRequest,
    request_id: Optional[str] = Depends(extract_request_id)
) -> ProgramResponse:
    logger.info(f"Received MCP request: {request.action}")
    return await mcp_endpoint(request, request_id)
