'''
Numerical Configuration

This file contains the constants that define the discretization, the on-disk format
and the verification profiles. Acceptance tolerances are NOT kept here; they live in
the versioned table tolerances.yaml next to this file.
'''

from pathlib import Path

# Algebra
MAX_DIMENSION = 8  # 2^8 = 256 blade channels per sample
BLADE_ORDER = 'bitmask-v1'  # blade T stored at index sum_{j in T} 2^(j-1)

# CFLD1 file format
FIELD_MAGIC = b'CFLD1'

# scipy.fft worker threads for the per-channel transforms (-1 = all cores)
FFT_WORKERS = -1

# Generator defaults, as fractions of the per-axis Nyquist frequency d/(2L)
GENERATOR_DEFAULTS = {
    'ring_radius_fraction': 0.25,  # ring centre
    'ring_width_fraction': 0.05,  # Gaussian width of the ring
    'band_fraction': 0.5,  # random-bandlimited keeps |m_k| <= band * d/2 (Nyquist excluded)
}

# Ball quadrature for the mean-value defect
BALL_QUADRATURE_ORDER = 10  # Gauss points per radial / polar factor
BALL_INTERPOLATION = 'cubic'

# Bergman x0 quadrature
BERGMAN_X0_NODES = 400
BERGMAN_TAIL = 1e-12  # relative size of e^{-2 pi x0_max xi_min} at the cutoff

# Verification profiles: grid sizes per dimension
PROFILES = {
    'quick': {'dimensions': [1, 2], 'points': {1: 32, 2: 32}},
    'full': {'dimensions': [1, 2, 3], 'points': {1: 64, 2: 64, 3: 32}},
}

TOLERANCES_PATH = Path(__file__).parent / 'tolerances.yaml'

# Verification data, in lattice units of a box with L = 1
ROUTE_POINTS = 64  # the Cauchy route needs room for a localized ring and x0 up to 8h
RING_RADIUS_MODES = 8.0
RING_WIDTH_MODES = 1.5
CONVERGENCE_MODES = {
    1: [(1,), (-2,), (3,)],
    2: [(1, 0), (0, -1), (2, 1), (-1, 2)],
}
CONVERGENCE_HEIGHT = 0.1
MEAN_VALUE_MODES = [(1, 0), (0, 1), (1, 1), (1, -1)]
MEAN_VALUE_HEIGHT = 0.3
