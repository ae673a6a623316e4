"""
HTTP server for the toolchain
"""
import logging
import logging.config
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware

from app.config import (
    API_TITLE,
    API_DESCRIPTION,
    API_VERSION,
    API_PREFIX,
    HOST,
    PORT,
    LOGGING_CONFIG
)
from app.api.routes import router as api_router
from app.api.mcp_endpoints import router as mcp_router
from app.lang.errors import DiagnosticError
from app.mcp.protocol import MCPAction
from app.services.toolchain import toolchain

logging.config.dictConfig(LOGGING_CONFIG)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    # A broken prelude is reported by /health rather than stopping the server.
    try:
        decls = toolchain.load_prelude()
        logger.info(f"Prelude ready with {len(decls)} declarations")
    except (DiagnosticError, OSError) as e:
        logger.error(f"Prelude failed to load at startup: {e}")
    yield


app = FastAPI(
    title=API_TITLE,
    description=API_DESCRIPTION,
    version=API_VERSION,
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# /api/v1/program/* and /api/v1/mcp
app.include_router(api_router, prefix=API_PREFIX)

# Root-level /mcp for MCP clients
app.include_router(mcp_router)


@app.middleware("http")
async def add_request_id_header(request: Request, call_next):
    """
    Echo the request ID header on responses
    """
    response = await call_next(request)
    if "X-Request-ID" not in response.headers and "x-request-id" in request.headers:
        response.headers["X-Request-ID"] = request.headers["x-request-id"]
    return response


@app.get("/health")
async def health_check():
    """
    Health check endpoint; also reports whether the prelude loads
    """
    try:
        prelude = [d.name for d in toolchain.load_prelude()]
    except Exception as e:
        logger.error(f"Prelude failed to load: {e}")
        return {"status": "degraded", "service": API_TITLE, "version": API_VERSION, "error": str(e)}
    return {"status": "ok", "service": API_TITLE, "version": API_VERSION, "prelude": prelude}


@app.get("/")
async def root():
    return {
        "service": API_TITLE,
        "version": API_VERSION,
        "description": API_DESCRIPTION,
        "actions": [action.value for action in MCPAction],
        "endpoints": [f"{API_PREFIX}/v1/program/{action.value.split('.')[1]}" for action in MCPAction],
        "docs_url": "/docs"
    }


def run_server():
    """
    Console-script entry point: serve the app with uvicorn
    """
    import uvicorn

    logger.info(f"Starting {API_TITLE} v{API_VERSION} on {HOST}:{PORT}")
    uvicorn.run("app.main:app", host=HOST, port=PORT, log_level="info")


if __name__ == "__main__":
    run_server()
