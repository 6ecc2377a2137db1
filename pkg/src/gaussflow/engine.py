"""Time integration of the volume-preserving Gauss curvature flow.

The radial function evolves by

    d rho / dt = (phi(t) - f(K)) * sqrt(1 + |grad rho|^2 / sinh^2 rho),

where phi(t) is the area average of f(K) over the hypersurface, making
the enclosed volume a first integral of the continuum flow. Time stepping
is classical 4-stage explicit Runge-Kutta with a curvature-informed step
size; phi is recomputed at every stage (freezing it per step was measured
to cost two orders of magnitude in volume drift). The radical equals
sinh(rho)/u, so it is taken from the support function instead of
re-differentiating.

Discretization makes the volume drift at the integrator's order; an
optional projection (a uniform radial shift found by a scalar Newton
solve) restores the initial volume after every step. The uniform shift is
the lowest-order correction and cannot create new extrema or destroy
convexity for the tiny shifts involved.

Convexity loss aborts the run instead of being clamped: the continuum
flow preserves convexity, so a discrete violation means under-resolution
and must surface loudly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import diagnostics as diag
from .errors import (
    ConvexityLost,
    DegenerateRho,
    FlowError,
    NonPositiveCurvature,
    StepRejected,
)
from .geometry import GeometryFields, RadialGraph, compute_geometry
from .quermass import enclosed_volume, monotone_quermass, volume_of_shifted
from .speeds import SpeedFunction

#: relative volume tolerance enforced after every projected step
VOL_TOL = 1e-9


@dataclass
class EngineParams:
    """Stepping controls; defaults match the CLI config schema."""

    cfl: float = 0.4
    projection: bool = True
    t_max: float = 10.0
    conv_tol: float = 1e-9
    record_every: int = 50

    def __post_init__(self):
        if self.cfl <= 0 or self.t_max <= 0 or self.record_every < 1:
            raise ValueError("cfl, t_max must be positive; record_every >= 1")
        if self.conv_tol < 0:
            raise ValueError("conv_tol must be >= 0 (0 disables the check)")


@dataclass
class FlowState:
    """Graph plus cached geometry, current global term and volume target."""

    graph: RadialGraph
    t: float
    fields: GeometryFields
    phi: float
    V0: float
    step_count: int = 0
    dt_last: float = 0.0

    @classmethod
    def initial(cls, graph: RadialGraph, f: SpeedFunction) -> "FlowState":
        fields = compute_geometry(graph)
        if fields.kappa.min() <= 0.0:
            raise ConvexityLost(
                f"initial hypersurface not convex: min kappa = {fields.kappa.min():.6g}"
            )
        return cls(
            graph=graph,
            t=0.0,
            fields=fields,
            phi=global_term(fields, f),
            V0=enclosed_volume(graph),
        )


def global_term(fields: GeometryFields, f: SpeedFunction) -> float:
    """Area average of f(K): the nonlocal term keeping volume fixed."""
    fK, _, _ = f.eval(fields.K)
    aw = fields.area_weight
    return float(aw @ fK) / float(aw.sum())


def _rhs_fields(
    fields: GeometryFields, rho: np.ndarray, f: SpeedFunction, phi: float | None
) -> np.ndarray:
    if fields.kappa.min() <= 0.0:
        raise ConvexityLost(
            f"principal curvature dropped to {fields.kappa.min():.6g}"
        )
    fK, _, _ = f.eval(fields.K)
    if phi is None:
        aw = fields.area_weight
        phi = float(aw @ fK) / float(aw.sum())
    return (phi - fK) * np.sinh(rho) / fields.u


def rhs(state: FlowState, f: SpeedFunction, phi: float | None = None) -> np.ndarray:
    """Per-node d rho/dt at the current state.

    phi overrides the global term when given (phi = 0 turns the flow into
    the pure contracting one, used by comparison tests).
    """
    return _rhs_fields(state.fields, state.graph.rho, f, phi)


def stable_dt(state: FlowState, f: SpeedFunction, cfl: float = 0.4) -> float:
    """Parabolic step bound dt = cfl h^2 / (2 n D_max).

    The linearization of the speed about the current state acts like an
    anisotropic diffusion with largest eigenvalue f'(K) K / (kappa_min
    sinh^2 rho) per node; D_max bounds it over the grid.
    """
    fields = state.fields
    _, fp, _ = f.eval(fields.K)
    kmin = fields.kappa.min(axis=1)
    D = fp * fields.K / (kmin * np.sinh(state.graph.rho) ** 2)
    Dmax = float(np.max(D))
    h = state.graph.spacing
    return cfl * h**2 / (2.0 * state.graph.n * Dmax)


def _project_volume(graph: RadialGraph, V0: float) -> tuple[RadialGraph, float]:
    """Uniform radial shift restoring the target volume (scalar Newton)."""
    c = 0.0
    v = enclosed_volume(graph)
    for _ in range(3):
        if abs(v - V0) <= 1e-13 * max(V0, 1.0):
            break
        v, dv = volume_of_shifted(graph, c)
        c -= (v - V0) / dv
        v, _ = volume_of_shifted(graph, c)
    if abs(v - V0) > VOL_TOL * V0:
        raise StepRejected(
            f"volume projection failed: residual {abs(v - V0) / V0:.3e} relative"
        )
    if c != 0.0:
        graph = graph.with_rho(graph.rho + c)
    return graph, c


def step(
    state: FlowState,
    f: SpeedFunction,
    *,
    cfl: float = 0.4,
    projection: bool = True,
    dt: float | None = None,
    phi_override: float | None = None,
) -> FlowState:
    """One RK4 step (plus optional volume projection) from the state.

    dt defaults to the stability bound; a fixed dt is accepted for
    refinement studies. NaN/overflow mid-step raises StepRejected, loss of
    convexity raises ConvexityLost.
    """
    if dt is None:
        dt = stable_dt(state, f, cfl)
    rho0 = state.graph.rho
    graph0 = state.graph

    def stage(rho: np.ndarray) -> np.ndarray:
        g = graph0.with_rho(rho)
        try:
            flds = compute_geometry(g)
        except DegenerateRho as exc:
            raise StepRejected(f"stage left guard range: {exc}") from exc
        return _rhs_fields(flds, rho, f, phi_override)

    k1 = _rhs_fields(state.fields, rho0, f, phi_override)
    k2 = stage(rho0 + 0.5 * dt * k1)
    k3 = stage(rho0 + 0.5 * dt * k2)
    k4 = stage(rho0 + dt * k3)
    rho_new = rho0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    if not np.all(np.isfinite(rho_new)):
        raise StepRejected("non-finite rho after RK4 stages")

    graph_new = graph0.with_rho(rho_new)
    if projection:
        graph_new, _ = _project_volume(graph_new, state.V0)

    try:
        fields_new = compute_geometry(graph_new)
    except DegenerateRho as exc:
        raise StepRejected(f"accepted state left guard range: {exc}") from exc
    if fields_new.kappa.min() <= 0.0:
        raise ConvexityLost(
            f"convexity lost at t = {state.t + dt:.6g}: "
            f"min kappa = {fields_new.kappa.min():.6g}"
        )

    phi_new = (
        phi_override
        if phi_override is not None
        else global_term(fields_new, f)
    )
    return FlowState(
        graph=graph_new,
        t=state.t + dt,
        fields=fields_new,
        phi=phi_new,
        V0=state.V0,
        step_count=state.step_count + 1,
        dt_last=dt,
    )


@dataclass
class RunResult:
    """Trajectory summary: exit status, records and the final state."""

    status: str  # 'converged' | 't_max' | 'aborted'
    reason: str
    records: list
    final_state: FlowState
    max_A_step_increase: float = 0.0

    @property
    def converged(self) -> bool:
        return self.status == "converged"


def run_flow(
    state: FlowState,
    f: SpeedFunction,
    params: EngineParams,
    observer=None,
) -> RunResult:
    """Advance the flow until convergence, t_max, or an abort.

    Convergence means the oscillation of rho about the fitted center
    dropped below conv_tol; the check runs at the record cadence, as does
    the observer callback (which receives each fresh DiagnosticsRecord).
    The quantity A_{n-1}, monotone along the continuum flow, is tracked
    every step and its worst per-step increase reported.

    Precondition violations at t = 0 raise; mid-run failures return an
    'aborted' result so the trajectory gathered so far is not lost.
    """
    if f.validator_only:
        raise ValueError(f"{f.label} is a validator-only family")

    rec0 = diag.record(state, f)
    records = [rec0]
    if observer is not None:
        observer(rec0)
    if params.conv_tol > 0.0 and rec0.osc_rho < params.conv_tol:
        return RunResult("converged", "initial state already spherical",
                         records, state)

    A_prev = monotone_quermass(state.graph, state.fields)
    max_inc = 0.0
    status, reason = "t_max", f"reached t_max = {params.t_max}"

    while state.t < params.t_max:
        try:
            state = step(
                state, f, cfl=params.cfl, projection=params.projection
            )
        except FlowError as exc:
            status, reason = "aborted", f"{type(exc).__name__}: {exc}"
            break
        A_cur = monotone_quermass(state.graph, state.fields)
        max_inc = max(max_inc, A_cur - A_prev)
        A_prev = A_cur

        if state.step_count % params.record_every == 0:
            rec = diag.record(state, f)
            records.append(rec)
            if observer is not None:
                observer(rec)
            if params.conv_tol > 0.0 and rec.osc_rho < params.conv_tol:
                status = "converged"
                reason = f"osc_rho = {rec.osc_rho:.3e} < {params.conv_tol:g}"
                break

    if records[-1].t != state.t and status != "aborted":
        rec = diag.record(state, f)
        records.append(rec)
        if observer is not None:
            observer(rec)

    return RunResult(status, reason, records, state, max_inc)


def run(config) -> RunResult:
    """Run the flow described by a RunConfig (see gaussflow.config)."""
    from .config import build_run  # local import to avoid a cycle

    state, f, params = build_run(config)
    return run_flow(state, f, params)
