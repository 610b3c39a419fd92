"""Tolerance constants shared by the library, the CLI manifest and the tests."""

#: relative accuracy target for spectral quantities (eigenvalues, singular values)
SPECTRAL_RTOL = 1e-8

#: tolerance for residual-type checks (hermiticity, Dieudonne residual, factors)
RESIDUAL_TOL = 1e-10

#: eigenvalues of a hermitian matrix below this fraction of its 2-norm count as
#: non-positive
POSITIVITY_RTOL = 1e-12

#: eigenvalue pairs closer than this are treated as degenerate
SIMPLE_GAP = 1e-6

#: eigenvector-matrix condition numbers above this flag a non-diagonalizable input
DIAGONALIZABLE_COND = 1e12

#: parameter-space tolerance for boundary bisection
BOUNDARY_TOL = 1e-4

#: the CLI refuses to write pseudometrics whose residual exceeds this
EMIT_RESIDUAL_TOL = 1e-8


def as_dict():
    return {
        "SPECTRAL_RTOL": SPECTRAL_RTOL,
        "RESIDUAL_TOL": RESIDUAL_TOL,
        "POSITIVITY_RTOL": POSITIVITY_RTOL,
        "SIMPLE_GAP": SIMPLE_GAP,
        "DIAGONALIZABLE_COND": DIAGONALIZABLE_COND,
        "BOUNDARY_TOL": BOUNDARY_TOL,
        "EMIT_RESIDUAL_TOL": EMIT_RESIDUAL_TOL,
    }
