#!/usr/bin/env python
"""
Development server: reloads when the app package or the prelude changes
"""
from app.config import HOST, PORT

if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        "app.main:app",
        host=HOST,
        port=PORT,
        reload=True,
        reload_dirs=["app"],
        reload_includes=["*.py", "*.dd"],
        log_level="debug"
    )
