"""
Constants
"""
import math

from enum import Enum

HALF_PI = 0.5 * math.pi
PI_SQUARED = math.pi * math.pi

# Closed form of xi is used for |t| <= pi/2 - SERIES_SWITCH, the endpoint
# Taylor series beyond that.
SERIES_SWITCH = 0.1
SERIES_ORDER = 32

XI_AT_ZERO = 1.0 - PI_SQUARED / 4.0
XI_D1_AT_END = 2.0 * math.pi / 3.0
XI_D2_AT_END = 2.0
XI_D2_AT_ZERO = 2.0 * (3.0 - PI_SQUARED / 4.0)
XI_D3_AT_END = 8.0 * math.pi / 15.0
XI_D1_OVER_T_MAX = 4.0 / 3.0

# Tags naming the estimate each check or property belongs to
EQ_REILLY = "reilly_bound"
EQ_MAIN = "ling_bound"
EQ_GRADIENT = "gradient_estimate"
EQ_Z_BOUND = "z_at_most_one"
EQ_DELTA_RANGE = "delta_range"
EQ_BARRIER = "barrier_inequality"
EQ_DOMINATION = "z_dominated_by_barrier"
EQ_CHAIN = "integral_chain"
EQ_XI_ODE = "xi_ode"
EQ_XI_IDENTITY = "xi_identity"
EQ_XI_DEF = "xi_definition"
EQ_Q_ODE = "q_ode"
EQ_Q1_ODE = "q1_ode"
EQ_Q2_ODE = "q2_ode"
EQ_XI_PROPERTIES = "xi_properties"

DEFAULT_GRID_POINTS = 4096
DEFAULT_TOLERANCE = 1e-10
DEFAULT_POLE_OFFSET = 1e-8
DEFAULT_BUCKETS = 64
DEFAULT_B_SEQUENCE = (1.01, 1.001, 1.0001)
DEFAULT_XI_GRID = 10001
DEFAULT_XI_TOLERANCE = 1e-9

CHECK_PASS = "pass"
CHECK_FAIL = "fail"
CHECK_SKIP = "skip"

SOLUTION_COLUMNS = ["r", "v", "v_prime"]

REPORT_COLUMNS = [
    "check_id",
    "equation_tag",
    "margin",
    "threshold",
    "passed",
    "skipped",
    "out_of_hypothesis",
    "detail",
]

XI_REPORT_COLUMNS = [
    "property_id",
    "equation_tag",
    "max_residual",
    "threshold",
    "grid_size",
    "passed",
]

SWEEP_COLUMNS = [
    "row",
    "variant",
    "n",
    "K",
    "R",
    "d_tilde",
    "lambda_shooting",
    "lambda_fd",
    "method_agreement",
    "reilly",
    "zhong_yang",
    "yang",
    "ling",
    "best_name",
    "best_value",
    "margin_reilly",
    "margin_yang",
    "margin_ling",
    "ricci_lower",
    "mean_curvature",
    "positive_K",
    "nonnegative_mean_curvature",
    "check_lichnerowicz",
    "check_gradient",
    "check_z_bound",
    "check_barrier",
    "check_chain",
    "check_main_theorem",
    "all_passed",
    "error",
]

CSV_FLOAT_FORMAT = "%.17g"


class Method(str, Enum):
    SHOOTING = "shooting"
    FINITE_DIFFERENCE = "finite_difference"


class Variant(str, Enum):
    SPHERICAL_CAP = "spherical_cap"
    EUCLIDEAN_BALL = "euclidean_ball"
    WARPED_BALL = "warped_ball"
    INTERVAL = "interval"


class OutputFormat(str, Enum):
    CSV = "csv"
    REPORT = "report"
