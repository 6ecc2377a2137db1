"""Exception hierarchy for the flow library.

Every failure mode that callers are expected to handle gets its own class;
all of them derive from FlowError so a driver can catch the lot.
"""


class FlowError(Exception):
    """Base class for all gaussflow errors."""


class DegenerateRho(FlowError):
    """Radial values left the guard range where sinh/cosh are trustworthy."""


class NonStarShaped(FlowError):
    """Support function u <= 0 somewhere: the graph lost star-shapedness."""


class NonPositiveCurvature(FlowError):
    """Speed function evaluated at K <= 0 (convexity lost upstream)."""


class ConvexityLost(FlowError):
    """A principal curvature dropped to <= 0 during the flow."""


class StepRejected(FlowError):
    """Time step produced NaN/overflow; dt too large or state degenerate."""


class RecursionMismatch(FlowError):
    """The two average-curvature formulas disagree: discretization failure."""


class NonConvexShape(FlowError):
    """Initial shape construction produced a nonconvex graph."""

    def __init__(self, message, kappa_min=None):
        super().__init__(message)
        self.kappa_min = kappa_min


class NoConvergence(FlowError):
    """An iterative procedure (sphere fitting) failed to converge."""


class InsufficientDecay(FlowError):
    """Trajectory does not span the decay window needed for a rate fit."""


class ConfigError(FlowError):
    """Run configuration is malformed or violates an invariant."""
