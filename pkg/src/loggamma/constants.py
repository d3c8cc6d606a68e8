"""Numeric defaults and guards for the log-gamma polymer tools."""

import math
import sys

# Euler-Mascheroni constant, -digamma(1)
EULER_GAMMA = 0.57721566490153286061

# Solver defaults
ROOT_TOL = 1e-12
OPT_TOL = 1e-10
MAX_ITER = 200
BRACKET_MARGIN = 1e-9
# Closest approach to a pole of digamma when expanding a bracket
MIN_POLE_OFFSET = 1e-300

# Special-function kernel
ASYMPTOTIC_THRESHOLD = 10.0
INV_DIGAMMA_MAX_ITER = 100
# Below this y the pole asymptotic -1/(y + gamma) starts Newton
INV_DIGAMMA_SWITCH = -2.22
# Largest y with exp(y) finite
MAX_LOG_FLOAT = math.log(sys.float_info.max)

# Lattice guards
MAX_DIMENSION = 4
# d-dimensional grids; the 2-d sweep is bounded by MAX_SIDE alone
MAX_LATTICE_POINTS = 10_000_000
MAX_SIDE = 4096

# Monte Carlo
KS_MIN_SAMPLES = 50
ESS_THRESHOLD = 100
TAIL_Z = 1.959963984540054  # two-sided 95% normal quantile for Wilson bounds

# Exit codes
EXIT_OK = 0
EXIT_TEST_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

INF = math.inf
