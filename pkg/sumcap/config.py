"""
Configuration - Numeric tolerances and search settings shared by all modules
Plain module-level constants; nothing is read from the environment.
"""


# --- Certificate Tolerances ---
# Slack on the useful-genie inequality |h*eta| <= sqrt(1 - rho^2)
USEFUL_SLACK = 1e-12

# Relative tolerance on the smart-genie equation eta*rho = 1 + h^2 P
SMART_RTOL = 1e-12

# Absolute tolerance (bits) when comparing lower against upper bounds
ORDER_TOL = 1e-9

# Covariance sanity checks
SYMMETRY_TOL = 1e-12
PSD_EIG_TOL = -1e-10
MAX_CONDITION = 1e12


# --- Tangent Search ---
TANGENT_GRID_POINTS = 4096
TANGENT_THETA_TOL = 1e-12
LOCAL_MAX_TOL = 1e-9


# --- Monte Carlo ---
MC_FOLDS = 10
CSV_SIGNIFICANT_DIGITS = 17


# --- Reporting ---
REPORT_SIGNIFICANT_DIGITS = 10


# --- Verification Defaults ---
VERIFY_DEFAULTS = {
    "seed": 20080201,
    "trials": 1000,
    "regime_draws_per_trial": 10,
    "brute_force_grid": 200,
    "mc_samples": 1_000_000,
    "mc_sigma_band": 3.0,
    "moment_sigma_band": 5.0,
    "tangent_oracle_points": 1_000_000,
}
