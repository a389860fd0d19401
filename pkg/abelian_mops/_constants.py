# -*- coding: utf-8 -*-
"""
_constants.py — shared numerical constants for all abelian_mops modules.
Single source of truth for tolerances, node counts and iteration limits.
"""

# ============================================================
# Polynomial algebra
# ============================================================
TRIM_REL_TOL          = 1e-13    # |c| < TRIM_REL_TOL * max|c| -> trailing zero
FIT_MIN_EXTRA_SAMPLES = 1        # least squares must be over-determined by this much

# ============================================================
# Quadrature node counts
# ============================================================
MIN_NODE_COUNT        = 8
DEFAULT_SEGMENT_NODES = 200
DEFAULT_RAY_NODES     = 200
DEFAULT_CIRCLE_NODES  = 256
ORTHOGONALITY_NODES   = 400      # half-line matrix orthogonality checks
PARALLEL_MIN_NODES    = 512      # below this, node evaluation stays on one thread

# ============================================================
# Linear algebra thresholds
# ============================================================
DEGENERACY_REL_TOL    = 1e-12    # |D_n| against |D_{n-1}| times the size of row n-1
RANK_REL_TOL          = 1e-9     # singular values above RANK_REL_TOL * sigma_max
BASIS_DET_TOL         = 1e-12

# ============================================================
# Genus one
# ============================================================
THETA_TAIL_BUDGET     = 40.0     # N = ceil(sqrt(BUDGET / (pi Im tau))) + 2
THETA_DIVISOR_TOL     = 1e-10    # |theta1(X)| / |theta1'(0)|
LATTICE_POLE_TOL      = 1e-14
NEWTON_MAX_ITER       = 50
NEWTON_TOL            = 1e-14
SEED_GRID_SIZE        = 24
CAUCHY_RADIUS_SCALE   = 0.1      # radius = 0.1 * min(1, Im tau)
PERIOD_NODES          = 200
PAIRING_RADIUS_SCALE  = 0.25     # eps = 0.25 * distance to nearest other pole

# ============================================================
# Command line
# ============================================================
MIN_TOLERANCE = 1e-14

EMIT_FORMATS = ('json', 'csv', 'pretty')

COMMANDS = ('classical', 'biortho', 'elliptic', 'torsion', 'verify-cd', 'pade')

# check name -> default tolerance (relative unless the name says otherwise)
DEFAULT_TOLERANCES = {
    'printed_matrices':      1e-10,
    'projection_agreement':  1e-10,
    'matrix_orthogonality':  1e-8,
    'norms':                 1e-8,
    'weight_closed_form':    1e-10,
    'phi_phi_constant':      1e-12,
    'biorthogonality':       1e-8,
    'determinant_norms':     1e-8,
    'heine_collinearity':    1e-6,
    'band_structure':        1e-8,
    'cd_identity':           1e-8,
    'pade_orthogonality':    1e-8,
    'pade_nodes':            1e-8,
    'theta_quasiperiod':     1e-12,
    'wp_ode':                1e-8,
    'half_periods':          1e-8,
    'szego_monodromy':       1e-10,
    'phi_identities':        1e-8,
    'fay':                   1e-8,
    'torsion_count':         0.5,
    'torsion_values':        1e-8,
    'torsion_condition':     1e-6,
    'sqrtw_det':             1e-10,
    'sqrtw_single_valued':   1e-9,
    'polynomial_fit':        1e-7,
    'finite_orthogonality':  1e-8,
    'pairing_rank':          0.5,
    'pairing_kernel':        1e-9,
    'second_sheet':          1e-10,
    'dk_det':                1e-12,
    'dk_charpoly':           1e-10,
    'dk_order':              0.05,
}
