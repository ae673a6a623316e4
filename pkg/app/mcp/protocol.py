"""
MCP protocol envelopes for the toolchain service

Requests name a `program.*` action; responses carry a CheckResult,
RunResult, XfuncResult or SourceResult, and errors carry the diagnostics
or the partial evaluation result in `details`.
"""
from typing import Dict, Any, Optional
from enum import Enum
from pydantic import BaseModel, Field

PROTOCOL_VERSION = "1.0"


class MCPMessageType(str, Enum):
    REQUEST = "request"
    RESPONSE = "response"
    ERROR = "error"


class MCPAction(str, Enum):
    """Actions the dispatcher routes"""
    CHECK = "program.check"
    RUN = "program.run"
    LIFT = "program.lift"
    XFUNC = "program.xfunc"
    FMT = "program.fmt"


class MCPErrorCode(int, Enum):
    """Error codes for MCP Protocol"""
    UNKNOWN_ERROR = 1000
    INVALID_REQUEST = 1001  # unknown action
    PROGRAM_REJECTED = 1002  # details.diagnostics
    EVALUATION_FAILED = 1003  # stuck or out of fuel; details is the RunResult
    TRANSFORM_FAILED = 1004  # xfunc output did not typecheck
    INVALID_PARAMETER = 1005


class MCPContext(BaseModel):
    """Context information for MCP messages"""
    request_id: str = Field(..., description="Unique identifier for the request")
    timestamp: int = Field(..., description="Unix timestamp in milliseconds")


class MCPError(BaseModel):
    code: int = Field(..., description="Error code")
    message: str = Field(..., description="Error message")
    details: Optional[Dict[str, Any]] = Field(None, description="Diagnostics or the partial result")


class MCPMetadata(BaseModel):
    """Metadata for MCP messages"""
    version: str = Field(default=PROTOCOL_VERSION, description="MCP protocol version")
    service: str = Field(..., description="Service identifier")
    prelude: Optional[str] = Field(None, description="Prelude the program was checked against")


class MCPBaseMessage(BaseModel):
    type: MCPMessageType = Field(..., description="Message type")
    context: MCPContext = Field(..., description="Message context")
    metadata: MCPMetadata = Field(..., description="Message metadata")


class MCPRequest(MCPBaseMessage):
    """MCP Request message; `action` stays a string so unknown actions get an MCP error"""
    type: MCPMessageType = MCPMessageType.REQUEST
    action: str = Field(..., description="Requested action, e.g. program.check")
    parameters: Dict[str, Any] = Field(default_factory=dict, description="Request parameters")


class MCPResponse(MCPBaseMessage):
    type: MCPMessageType = MCPMessageType.RESPONSE
    data: Any = Field(..., description="CheckResult, RunResult, XfuncResult or SourceResult")


class MCPErrorResponse(MCPBaseMessage):
    type: MCPMessageType = MCPMessageType.ERROR
    error: MCPError = Field(..., description="Error information")
