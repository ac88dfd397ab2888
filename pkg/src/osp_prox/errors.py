"""Exception types raised across the package."""


class OspError(Exception):
    """Base class for all package errors."""


class DimensionError(OspError, ValueError):
    """A point does not match the dimension of the set it is used with."""


class SaddleNotInteriorError(OspError, ValueError):
    """The closed-form minimax value is only valid for interior saddles."""

    code = "saddle-not-interior"


class InnerSolveError(OspError, RuntimeError):
    """An iterative prox solve hit its iteration cap above tolerance."""

    code = "inner-solve-diverged"


class NegativeDeltaError(OspError, RuntimeError):
    """An optimistic correction term came out negative.

    This can only happen when the payoff passed to ``observe`` is not the
    one used at ``emit`` time, or when an inner solve is inexact.
    """

    code = "negative-delta"


class HedgeError(OspError, RuntimeError):
    """The expert weights or the Hedge learning rate became invalid."""


class InvariantViolation(OspError, RuntimeError):
    """A runtime invariant check failed."""

    def __init__(self, name, round_index, detail=""):
        self.name = name
        self.round_index = round_index
        msg = f"invariant '{name}' violated at round {round_index}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class ConfigError(OspError, ValueError):
    """Invalid experiment configuration."""
