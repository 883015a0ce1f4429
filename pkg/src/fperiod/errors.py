"""Exception types shared across the package."""


class DegeneracyError(ValueError):
    """Numerical degeneracy: a required quantity is (near) singular.

    Raised when a statistic cannot be formed from the data at hand, e.g. a
    residual covariance without a positive leading eigenvalue, a whitening
    root requested for a singular covariance, or an eigenvalue gap too small
    for the centering sequence.
    """
