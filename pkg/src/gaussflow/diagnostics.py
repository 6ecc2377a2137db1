"""Theorem-level observables measured along the flow.

Everything the convergence theory predicts is recorded here: the monotone
quermassintegral and its predicted dissipation rate, the L^1 oscillation
of the Gauss curvature about its average, curvature bounds, the best-fit
geodesic sphere with a Hausdorff-distance proxy, and the exponential
decay rate of the radial oscillation compared against the linearized
operator.

The center of the best-fit sphere is located by driving the first
spherical-harmonic content of the recentered radial field to zero (the
l = 1 mode is the neutral translation mode of the linearization, so its
root is the natural center); the Hausdorff proxy is the maximal radial
deviation about that center, which bounds the true Hausdorff distance
for star-shaped bodies since radial segments are geodesics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDecay, NoConvergence
from .geometry import RadialGraph
from .hyperboloid import boost_matrix, frame_origin_in_ambient, recenter_rho
from .quermass import quermassintegrals, sphere_quadrature_weights
from .speeds import SpeedFunction

#: osc_rho window used for exponential rate fits
RATE_WINDOW = (1e-8, 1e-3)


@dataclass
class SphereFit:
    """Best-fit geodesic sphere of a star-shaped graph.

    center is in ambient hyperboloid (Minkowski) coordinates;
    rho_centered is the radial field about that center on the canonical
    grid.
    """

    center: np.ndarray
    r_fit: float
    hausdorff_proxy: float
    rho_centered: np.ndarray
    iterations: int


def _l1_amplitude(graph: RadialGraph, rho_c: np.ndarray):
    """First-harmonic content of the centered field and its direction."""
    if graph.n == 1:
        ac = 2.0 * float(np.mean(rho_c * np.cos(graph.theta)))
        as_ = 2.0 * float(np.mean(rho_c * np.sin(graph.theta)))
        return math.hypot(ac, as_), math.atan2(as_, ac)
    w = sphere_quadrature_weights(graph)
    c1 = 3.0 * float(w @ (rho_c * np.cos(graph.theta))) / float(w.sum())
    return abs(c1), math.copysign(1.0, c1)


def fit_sphere(graph: RadialGraph, damping: float = 0.9, max_iter: int = 100) -> SphereFit:
    """Locate the center killing the l = 1 mode; fit radius and proxy.

    Damped iteration: each pass moves the trial center along the geodesic
    indicated by the measured first-harmonic vector, then recenters the
    graph exactly in the hyperboloid model. Stops once the amplitude falls
    below 1e-10 of its initial value (or an absolute floor for fields with
    no first-harmonic content to begin with).
    """
    rho_c = graph.rho.copy()
    amp0, _ = _l1_amplitude(graph, rho_c)
    floor = 1e-14 * max(1.0, float(np.mean(rho_c)))
    target = max(1e-10 * amp0, floor)

    if graph.n == 1:
        M = np.eye(3)
    else:
        b_total = 0.0

    amp, direction = amp0, 0.0
    iterations = 0
    while amp > target:
        if iterations >= max_iter:
            raise NoConvergence(
                f"sphere fit stalled: l=1 amplitude {amp:.3e} after {max_iter} iterations"
            )
        amp, direction = _l1_amplitude(graph, rho_c)
        if amp <= target:
            break
        step_len = damping * min(amp, 0.25 * float(rho_c.min()))
        if graph.n == 1:
            M = boost_matrix(direction, step_len) @ M
            rho_c = recenter_rho(graph, M)
        else:
            b_total += math.copysign(step_len, direction)
            rho_c = recenter_rho(graph, b_total)
        iterations += 1

    if graph.n == 1:
        center = frame_origin_in_ambient(M)
        w = np.full(graph.N, 1.0 / graph.N)
    else:
        center = np.array([math.cosh(b_total), math.sinh(b_total), 0.0])
        wq = sphere_quadrature_weights(graph)
        w = wq / wq.sum()

    r_fit = float(w @ rho_c)
    proxy = float(np.max(np.abs(rho_c - r_fit)))
    return SphereFit(center, r_fit, proxy, rho_c, iterations)


@dataclass
class DiagnosticsRecord:
    """Time-stamped observables; A is indexed A[0] = A_{-1} .. A[n+1] = A_n."""

    t: float
    n: int
    volume: float
    A: np.ndarray
    Kbar: float
    osc_K_L1: float
    kappa_min: float
    K_max: float
    b_max: float
    r_fit: float
    hausdorff_proxy: float
    osc_rho: float
    dA_pred: float
    sphere_center: np.ndarray


def record(state, f: SpeedFunction) -> DiagnosticsRecord:
    """Measure every observable on a flow state."""
    graph, fields = state.graph, state.fields
    qv = quermassintegrals(graph, fields)
    aw = fields.area_weight
    K = fields.K

    fK, _, _ = f.eval(K)
    fKbar, _, _ = f.eval(qv.Kbar)
    dA_pred = -graph.n * float(aw @ ((fK - fKbar) * (K - qv.Kbar)))
    osc_K = float(aw @ np.abs(K - qv.Kbar))

    fit = fit_sphere(graph)
    osc_rho = float(fit.rho_centered.max() - fit.rho_centered.min())

    return DiagnosticsRecord(
        t=state.t,
        n=graph.n,
        volume=qv[-1],
        A=qv.A,
        Kbar=qv.Kbar,
        osc_K_L1=osc_K,
        kappa_min=float(fields.kappa.min()),
        K_max=float(K.max()),
        b_max=float(1.0 / fields.kappa.min()),
        r_fit=fit.r_fit,
        hausdorff_proxy=fit.hausdorff_proxy,
        osc_rho=osc_rho,
        dA_pred=dA_pred,
        sphere_center=fit.center,
    )


def predicted_rate(rho_inf: float, f: SpeedFunction, n: int) -> float:
    """Decay rate of the slowest stable mode about the limit sphere.

    The linearized flow acts on the l-th spherical harmonic with rate
    c (l (l + n - 1) - n), c = coth(rho)^{n-1} f'(coth^n rho)/sinh^2 rho;
    l = 0 and l = 1 are neutral (volume constraint and translations), so
    the observable rate is the l = 2 value c (n + 2).
    """
    if rho_inf <= 0:
        raise ValueError("rho_inf must be positive")
    coth = 1.0 / math.tanh(rho_inf)
    _, fp, _ = f.eval(coth**n)
    c = coth ** (n - 1) * fp / math.sinh(rho_inf) ** 2
    return c * (n + 2)


@dataclass
class RatePrediction:
    """Fitted vs predicted exponential decay of the radial oscillation."""

    rho_inf: float
    lambda_star: float | None
    lambda_fit: float
    window: tuple[float, float]
    residual: float


def fit_rate(records, f: SpeedFunction | None = None, n: int | None = None) -> RatePrediction:
    """Least-squares exponential rate of osc_rho over the decay window.

    Only records with osc_rho inside RATE_WINDOW enter the fit; raises
    InsufficientDecay when fewer than two do. lambda_star is filled in
    when the speed function and dimension are supplied, evaluated at the
    radius fitted on the final record.
    """
    pts = [(r.t, r.osc_rho) for r in records if RATE_WINDOW[0] <= r.osc_rho <= RATE_WINDOW[1]]
    if len(pts) < 2:
        raise InsufficientDecay(
            f"no records with osc_rho in [{RATE_WINDOW[0]:g}, {RATE_WINDOW[1]:g}]"
        )
    t = np.array([p[0] for p in pts])
    y = np.log(np.array([p[1] for p in pts]))
    slope, intercept = np.polyfit(t, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * t + intercept)) ** 2)))

    rho_inf = records[-1].r_fit
    lam_star = predicted_rate(rho_inf, f, n) if f is not None and n is not None else None
    return RatePrediction(
        rho_inf=rho_inf,
        lambda_star=lam_star,
        lambda_fit=float(-slope),
        window=(float(t[0]), float(t[-1])),
        residual=resid,
    )


def monotone_identity_gap(state, f: SpeedFunction, dt: float | None = None):
    """Finite-difference rate of A_{n-1} vs its predicted dissipation.

    Steps the unprojected flow by +-dt and +-dt/2 around the state,
    Richardson-extrapolates the centered differences, and returns the
    pair (fd_rate, dA_pred). Along the continuum flow the two coincide;
    the gap measures the time discretization error.
    """
    from .engine import stable_dt, step  # local import to avoid a cycle

    from .quermass import monotone_quermass

    if dt is None:
        dt = stable_dt(state, f)

    def centered(delta: float) -> float:
        plus = step(state, f, dt=delta, projection=False)
        minus = step(state, f, dt=-delta, projection=False)
        A_p = monotone_quermass(plus.graph, plus.fields)
        A_m = monotone_quermass(minus.graph, minus.fields)
        return (A_p - A_m) / (2.0 * delta)

    d1 = centered(dt)
    d2 = centered(dt / 2.0)
    fd_rate = (4.0 * d2 - d1) / 3.0

    rec = record(state, f)
    return fd_rate, rec.dA_pred
