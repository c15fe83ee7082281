# Constants used across the modules are stored here.

import os
import tempfile

PACKAGE_NAME = 'tcoulomb'

# Config specific constants.
DEFAULT_PROFILE = 'default'
DEFAULT_CONFIG_DIR = 'tcoulomb'
DEFAULT_CONFIG = {
    'frobenius': {
        'max_order': 40,
        'tol': 1e-12,
    },
    'oracle': {
        'grid_size': 2000,
        'tol': 1e-8,
        'max_refinements': 4,
        'max_domain_doublings': 5,
    },
    'spectrum': {
        'n_max': 20,
        'dense_samples': 200,
        'quadrature_tol': 1e-10,
    },
    'output': {
        'format': 'csv',
    },
    'log': {
        'console': {
            'level': 'warning',
            'format': '%(name)s - %(levelname)s - %(message)s',
        },
    },
    'debug': {
        'log': {
            'enabled': False,
            'filepath': '%s%stcoulomb-debug.log' % (tempfile.gettempdir(), os.path.sep),
            'level': 'debug',
            'format': '%(name)s - %(asctime)s - %(levelname)s - %(message)s',
        },
    },
}

# Frobenius specific constants.
MAX_ORDER = 40
NEWTON_POLISH_STEPS = 3
EXACT_ALPHA_BITS = 200
ROOT_SEPARATION = 1e-9

# Oracle specific constants.
MIN_GRID_SIZE = 100
MIN_ORACLE_TOL = 1e-12
MAX_ORACLE_TOL = 1e-4
THRESHOLD_ALPHA = 1e-3
TAIL_RATIO = 1e-12
FINITE_DIFFERENCE_STEP = 1e-4

# Output specific constants.
OUTPUT_FORMATS = ('csv', 'json')
CSV_SCHEMA_VERSION = 1
SIGNIFICANT_DIGITS = 17
CURVE_COLUMNS = ['curve_id', 'beta', 'alpha', 'source']

# Exit codes.
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTEGRITY = 2
EXIT_CONVERGENCE = 3
