"""Shared exception types."""


class GfalgError(Exception):
    """Base class for package errors."""


class SaturationError(GfalgError):
    """Associated-function query needs a larger p_max.

    Carries the largest t at which the evaluation is still reliable.
    """

    def __init__(self, message, t_max_reliable):
        super().__init__(message)
        self.t_max_reliable = t_max_reliable


class AliasingError(GfalgError):
    """Scaled mollifier spectrum does not vanish before the Nyquist frequency.

    Carries the minimal admissible epsilon for the offending grid.
    """

    def __init__(self, message, eps_min_admissible):
        super().__init__(message)
        self.eps_min_admissible = eps_min_admissible


class ResolutionError(GfalgError):
    """Requested feature is too small for the grid spacing."""


class GridMismatchError(GfalgError):
    """Operands live on different grids or epsilon ladders."""
