## Numerical tolerances shared by the analysis modules

# fmt: off
SYMMETRY_TOL                = 1e-12
LAPLACIAN_ROW_SUM_TOL       = 1e-10
RECONSTRUCTION_TOL          = 1e-9
ORTHONORMALITY_TOL          = 1e-10
RELATIVE_ZERO_TOL           = 1e-9
PINV_ROUTE_TOL              = 1e-8
OMEGA_ROUTE_TOL             = 1e-10
SIMPLEX_TOL                 = 1e-8
BLOCK_IDENTITY_TOL          = 1e-7
TAU_ROUTE_TOL               = 1e-8
METRIC_SLACK_TOL            = 1e-10
MONOTONICITY_TOL            = 1e-9
BOUND_TOL                   = 1e-9
LLY_COMPARISON_TOL          = 1e-7
MARGINAL_TOL                = 1e-10
DISTRIBUTION_SUM_TOL        = 1e-12
DUALITY_GAP_TOL             = 1e-8
# fmt: on


# fmt: off
JACOBI_MAX_SWEEPS           = 100
CONSENSUS_BISECTION_TOL     = 1e-8
CONSENSUS_MAX_DOUBLINGS     = 60
CONSENSUS_CURVE_SAMPLES     = 11
LLY_STABILIZATION_TOL       = 1e-9
LLY_ALPHA_MIN               = 1e-6
HEAT_T_SEQUENCE             = (0.1, 0.05, 0.025)
# fmt: on


## Output formatting
REPORT_SIGNIFICANT_DIGITS = 12
REPORT_SCHEMA_VERSION = "1.0"
