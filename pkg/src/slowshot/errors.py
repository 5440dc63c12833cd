"""Exception types shared across the package."""


class NumericError(RuntimeError):
    """A numeric procedure failed to converge or exceeded its safety cap
    (quadrature refinement, bisection budget, walk step cap, arrival cap).
    """
