"""Global numeric tolerances.

All values can be overridden per call through keyword arguments; these are the
package-wide defaults. Geometry here is unit scale (bodies have inradius and
circumradius within a few orders of magnitude of 1), so absolute and relative
tolerances are used interchangeably where noted.
"""

# Points accepted as lying on a body boundary (gauge == 1).
BOUNDARY_TOL = 1e-6

# Generic LP / arithmetic comparison tolerance.
NUMERIC_TOL = 1e-9

# Two translates are considered touching when |gauge - 2| <= TOUCH_TOL.
TOUCH_TOL = 1e-7

# Relative accuracy of bisection-based gauge evaluation.
GAUGE_REL_TOL = 1e-10

# Vector equality (antipodality, functional coincidence) tolerance.
VECTOR_EQ_TOL = 1e-7

# Relative tolerance of hyperplane certificate verification.
HYPERPLANE_REL_TOL = 1e-8

# Margin used by LP feasibility / interiority decisions.
LP_MARGIN = 1e-9

# Hard cap on ambient dimension (brute-force subroutines are exponential in d).
MAX_DIM = 8

# Maximum pair count of a pair system accepted by subset enumeration.
MAX_SYSTEM_SIZE = 24
