"""Application constants."""

import math
import os
from pathlib import Path

APP_NAME = "SLE Rough Domain Lab"
APP_SLUG = "sle-lab"
APP_VERSION = "0.3.0"
LOGGER_PREFIX = "sle_lab"

# Paths
# src/const.py -> src/ -> root
BASE_DIR = Path(__file__).parent.parent.absolute()
LOG_DIR = BASE_DIR / "logs"
LOG_FILE = str(LOG_DIR / "sle_lab.log")
CONFIG_DIR = BASE_DIR / "config"
DEFAULT_CONFIG = str(CONFIG_DIR / "config.yaml")
DEFAULT_OUTPUT_DIR = str(BASE_DIR / "runs")

# Output formatting
FLOAT_DIGITS = 17

# Loewner discretisation
TIP_HEIGHT_FACTOR = 0.1  # h = factor * sqrt(dt)
DEFAULT_EVAL_POINTS = 200
GEOMETRIC_GRID_START = 1e-3  # first positive eval time, relative to the horizon

# Conformal engine
NEAR_BOUNDARY_TOL = 1e-12
MAX_SNOWFLAKE_DEPTH = 8
ZIPPER_MIN_VERTICES = 256
ZIPPER_MAX_VERTICES = 4096

# Dyadic sieve
DEFAULT_QUADRATURE_ORDER = 16
MAX_QUADRATURE_ORDER = 64
DEFAULT_N_MAX = 14
MAX_SQUARES = 1_000_000
DISC_COVER_FACTOR = math.pi + 1.0
JOHN_PROBES = 1000
JOHN_GRID = 128

# Spectrum
SPECTRUM_J_RANGE = (4, 12)
MIN_CIRCLE_POINTS = 4096
R_SQUARED_MIN = 0.9
UNIVERSAL_BOUND_TOL = 0.1
DEFAULT_C_JM = 0.01
DEFAULT_ALPHA = 0.1

# Boundary statistics
HITTING_DELTA = 0.5
HITTING_HORIZON = 3.0
CANTOR_STAGE = 8

# Ensure directories exist
os.makedirs(LOG_DIR, exist_ok=True)
