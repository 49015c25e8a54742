# Unit conversions
import numpy

SQUARE_METERS_PER_SQUARE_KM = 1.0e6
KM2_TO_M2 = 1.0 / SQUARE_METERS_PER_SQUARE_KM
NATS_PER_BIT = numpy.log(2.0)

# Default association shape of the Voronoi cell-size approximation
CELL_SIZE_SHAPE = 3.5

# Confidence level of reported half-widths (normal quantile at 97.5%)
CI_LEVEL = 0.95
CI_Z = 1.959963984540054

# Grids
POINTS_PER_DECADE = 40

# Monte Carlo defaults
DEFAULT_RATE_CEILING = 30.0
WINDOW_SCALE = 20.0
MAX_WINDOW_GROWTH = 8.0
EDGE_TAIL_FRACTION = 0.005
MIN_BS_PER_TIER = 10

# Optimizer defaults
DEFAULT_RHO_MIN = 0.05
DEFAULT_BETA_MAX = 0.95
VERIFICATION_GRID = 50
