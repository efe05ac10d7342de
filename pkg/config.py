"""
Configuration settings for the precategory kernel

This module reads every tunable from the environment:
- Safety bounds (dimension, enumeration sizes)
- Fixture location and logging destination
- Parallelism for plex enumeration
- HTTP service port
"""
import os
import logging

LOG_LEVEL = os.getenv("PRECAT_LOG_LEVEL", "INFO").upper()
LOG_FILE = os.getenv("PRECAT_LOG_FILE", None)

# Configure logging; stdout is reserved for command output
handlers = [logging.StreamHandler()]
if LOG_FILE:
    handlers.append(logging.FileHandler(LOG_FILE))
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL, logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=handlers,
)
logger = logging.getLogger(__name__)

BASE_DIR = os.path.dirname(os.path.abspath(__file__))

# Largest polygraph dimension accepted from input
MAX_DIM = int(os.getenv("PRECAT_MAX_DIM", "6"))

FIXTURES_DIR = os.getenv("PRECAT_FIXTURES_DIR", os.path.join(BASE_DIR, "fixtures"))

# Enumeration and search bounds
MAX_CELLS = int(os.getenv("PRECAT_MAX_CELLS", "200000"))
DEFAULT_WEIGHT = int(os.getenv("PRECAT_DEFAULT_WEIGHT", "9"))
RANDOM_RETRIES = int(os.getenv("PRECAT_RANDOM_RETRIES", "50"))

# joblib workers for plex enumeration
N_JOBS = int(os.getenv("PRECAT_N_JOBS", "1"))

# Server settings
PORT = int(os.getenv("PORT", 10000))
DEBUG = os.getenv("PRECAT_DEBUG", "False").lower() in ["true", "1", "yes"]

VERSION = "1.0.0"

logger.info(f"Using FIXTURES_DIR: {FIXTURES_DIR}")
logger.info(f"Bounds: MAX_DIM={MAX_DIM}, MAX_CELLS={MAX_CELLS}, DEFAULT_WEIGHT={DEFAULT_WEIGHT}")
logger.info(f"Parallel plex enumeration with N_JOBS={N_JOBS}")
