"""
Application-wide constants.
"""

import math

# Geometry
HALF_SPAN = math.pi  # beam occupies (-pi, pi)
TOTAL_MASS = 2.0 * math.pi  # integral of an admissible density
MASS_TOLERANCE = 1e-12
INDICATOR_LENGTH_TOLERANCE = 1e-9  # heavy-set length slack accepted by from_indicator
BREAKPOINT_MERGE_TOLERANCE = 1e-12  # nodes closer than this are treated as one

# Material grids
LIGHT_DENSITIES = (5.0 / 6.0, 2.0 / 3.0, 1.0 / 2.0, 1.0 / 3.0)  # alpha candidates
HEAVY_DENSITIES = (3.0 / 2.0, 2.0, 5.0 / 2.0, 3.0)  # beta candidates
PIER_GRID = (0.10, 0.20, 0.30, 0.35, 0.40, 0.45, 0.50, 0.55, 0.60, 0.65, 0.70, 0.80, 0.90)

# Spectrum
DEFAULT_MODE_COUNT = 12  # modes entering the threshold
DEFAULT_GALERKIN_ORDER = 14  # basis functions per parity
MIN_GALERKIN_ORDER = 12
DEFAULT_SCAN_STEP = 0.01  # uniform step in mu for bracketing
MAX_SCAN_MU = 50.0
SCAN_CHUNK = 2.0  # mu-width evaluated per batched determinant call
ROOT_TOLERANCE = 1e-12
SIMPLICITY_GAP = 1e-8
NULL_SPACE_RATIO = 1e-9  # second-smallest / largest singular value below this means 2-D kernel
CASE_TOLERANCE = 1e-12  # |rho - a| below this selects the scalar relation
ORIENTATION_TOLERANCE = 1e-8  # relative size below which the sign falls back to the largest sample
ORIENTATION_SAMPLES = 257
MAX_BISECTIONS = 200
DETERMINANT_GLUING = "gluing"
DETERMINANT_REDUCED = "reduced"

# Parities and cases
PARITY_EVEN = "even"
PARITY_ODD = "odd"
CASE_RHO_EQ_A = "rho_eq_a"
CASE_RHO_GT_A = "rho_gt_a"
CASE_RHO_LT_A = "rho_lt_a"
CENTER_HEAVY = "heavy"
CENTER_LIGHT = "light"

# Stability
MARGINAL_BAND = 1e-6
MONODROMY_STEPS = 4096
MONODROMY_TOLERANCE = 1e-8
MONODROMY_MAX_REFINEMENTS = 6
ORBIT_RTOL = 1e-12
ORBIT_DRIFT_TOLERANCE = 1e-10
ENERGY_CONSISTENCY_TOLERANCE = 1e-12
NEAR_TIE_FRACTION = 0.01  # pairs whose E differ by less than this are logged together
STABLE = "stable"
UNSTABLE = "unstable"
MARGINAL = "marginal"

# Optimizer
OPTIMIZER_ITERATIONS = 10
PROFILE_SAMPLES = 4096
LEVEL_TOLERANCE = 1e-11
LEVEL_MAX_BISECTIONS = 200
FIXED_POINT_TOLERANCE = 1e-4
PROFILE_BOUNDARY_TOLERANCE = 1e-6
SEED_CONSTANT = "constant"
SEED_HEAVY = "two_step_heavy"
SEED_LIGHT = "two_step_light"

# Evolution
STEPS_PER_PERIOD = 512
DRIFT_TOLERANCE = 1e-6
RECORD_EVERY = 8
MAX_TRANSFER_PERIODS = 200
TRANSFER_GROWTH_TARGET = 10.0
MAX_RESIDUAL_RATIO = 1e-3  # z0 <= this * zeta
MAX_EVOLUTION_MODES = 12

# Sweep modes
MODE_HOMOGENEOUS = "homogeneous"
MODE_TWO_STEP_HEAVY = "two-step-heavy"
MODE_TWO_STEP_LIGHT = "two-step-light"
MODE_OPTIMIZE = "optimize"
SWEEP_BACKEND_LOCAL = "local"
SWEEP_BACKEND_CELERY = "celery"

# Output
SIGNIFICANT_DIGITS = 12
DEFAULT_OUTPUT_DIR = "results"
TABLE_IDS = ("T1", "T2", "T3", "T4", "T5")
REFERENCE_FILE = "reference_tables.yaml"
ENERGY_SCALE = 100.0  # tables quote thresholds in units of 10^2

# Exit codes
EXIT_OK = 0
EXIT_NUMERICAL_FAILURE = 1
EXIT_CONFIG_ERROR = 2

# Celery Queues
CELERY_DEFAULT_QUEUE = "default"

# Reference comparison
RHO_TOLERANCE = 0.005  # published rho values carry two decimals
PIER_MATCH_TOLERANCE = 1e-9
SCOPE_OPTIMUM = "optimum"
SCOPE_PER_PIER = "per_pier"
BASELINE_TABLE_ID = "H"
