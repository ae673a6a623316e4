"""
Application configuration
"""
import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Server configuration
PORT = int(os.getenv("PORT", "8000"))
HOST = os.getenv("HOST", "0.0.0.0")

# API configuration
API_PREFIX = "/api"
API_TITLE = "dualdata toolchain"
API_DESCRIPTION = "Typechecking, evaluation and de/refunctionalization for a dependent language with data and codata"
API_VERSION = "1.0.0"

# Language configuration
DEFAULT_FUEL = int(os.getenv("DUALDATA_FUEL", "1000000"))  # evaluation steps
CONVERSION_FUEL = int(os.getenv("DUALDATA_CONVERSION_FUEL", "100000"))  # per conversion check
PRELUDE_PATH = Path(os.getenv("DUALDATA_PRELUDE", str(Path(__file__).parent / "lang" / "prelude.dd")))
CORPUS_WORKERS = int(os.getenv("DUALDATA_CORPUS_WORKERS", "4"))
LOG_LEVEL = os.getenv("DUALDATA_LOG_LEVEL", "INFO").upper()

# Logging configuration
LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "default": {
            "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "level": LOG_LEVEL,
            "formatter": "default",
            "stream": "ext://sys.stderr",
        },
    },
    "root": {"handlers": ["console"], "level": LOG_LEVEL},
    "loggers": {
        "app": {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False},
        "uvicorn": {"handlers": ["console"], "level": "INFO", "propagate": False},
    },
}
