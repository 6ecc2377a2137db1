"""Volume-preserving Gauss curvature flow of convex radial graphs in
hyperbolic space: geometry, flow engine, diagnostics and I/O."""

from .diagnostics import (
    DiagnosticsRecord,
    RatePrediction,
    SphereFit,
    fit_rate,
    fit_sphere,
    predicted_rate,
    record,
)
from .engine import (
    EngineParams,
    FlowState,
    RunResult,
    global_term,
    rhs,
    run,
    run_flow,
    stable_dt,
    step,
)
from .errors import (
    ConfigError,
    ConvexityLost,
    DegenerateRho,
    FlowError,
    InsufficientDecay,
    NoConvergence,
    NonConvexShape,
    NonPositiveCurvature,
    NonStarShaped,
    RecursionMismatch,
    StepRejected,
)
from .geometry import (
    GeometryFields,
    RadialGraph,
    circle_grid,
    compute_geometry,
    convexity_class,
    polar_grid,
    sphere_graph,
)
from .quermass import (
    QuermassVector,
    ball_radius,
    ball_volume,
    enclosed_volume,
    quermassintegrals,
)
from .shapes import make_shape
from .speeds import (
    SpeedFunction,
    exp_minus_one,
    log1p_control,
    power,
    power_log,
    power_sum,
    validate_assumption,
)

__version__ = "0.1.0"
