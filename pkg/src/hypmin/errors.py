"""Exception types shared across the package.

Two broad families matter at the process boundary: bad input (CLI exit
code 1) and numerical failure (exit code 2).  Every exception carries a
stable machine-readable ``code`` string.
"""


class InputError(ValueError):
    """Invalid user input: malformed data, violated preconditions."""

    default_code = "invalid-input"

    def __init__(self, message, code=None):
        super().__init__(message)
        self.code = code or self.default_code


class SolveError(RuntimeError):
    """A numerical procedure failed on admissible input."""

    default_code = "solver-failure"

    def __init__(self, message, code=None):
        super().__init__(message)
        self.code = code or self.default_code


class NewtonError(SolveError):
    """Newton iteration for the closing constraint did not converge."""

    default_code = "newton-no-convergence"


class NonConvexError(SolveError):
    """A constructed polygon failed the convexity/embeddedness checks."""

    default_code = "non-convex"


class TangencyError(SolveError):
    """A fault meets the reference segment at a near-tangent angle."""

    default_code = "tangency"


class DegenerateError(SolveError):
    """Indeterminate projective configuration (0/0 cross-ratio etc.)."""

    default_code = "degenerate-configuration"


class BranchJumpError(SolveError):
    """Curve continuation could not separate root branches."""

    default_code = "branch-collision"
