"""Enclosed volume, quermassintegrals and the average Gauss curvature.

The quermassintegrals A_{-1}..A_n of the convex domain bounded by the
graph are computed through the smooth-case curvature-integral recursions

    A_1 = int sigma_1 dmu - n A_{-1},
    A_k = int sigma_k dmu - (n - k + 1)/(k - 1) A_{k-2},   2 <= k <= n,

never through the integral-geometric definition (a measure over geodesic
planes, out of numerical reach). The top value A_n equals |S^n| for every
domain with sphere topology (the Gauss-Bonnet consistency of the chain),
which serves as the validation of the recursion.

The enclosed volume uses the closed-form radial fibre integral
int_0^r sinh^n(s) ds: cosh(r) - 1 for n = 1, (sinh r cosh r - r)/2 for
n = 2, integrated over S^n with quadrature matched to the grid (uniform
trapezoid on the circle, Fejer weights in cos(theta) on the polar grid).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import RecursionMismatch
from .geometry import GeometryFields, RadialGraph, _check_guard, fejer1_weights

#: area of the unit n-sphere
OMEGA = {1: 2.0 * math.pi, 2: 4.0 * math.pi}


def radial_volume_kernel(n: int, r):
    """int_0^r sinh(s)^n ds in closed form."""
    r = np.asarray(r, dtype=float)
    if n == 1:
        out = np.cosh(r) - 1.0
    else:
        out = (np.sinh(r) * np.cosh(r) - r) / 2.0
    return float(out) if out.ndim == 0 else out


def radial_volume_kernel_deriv(n: int, r):
    """d/dr of the radial kernel: sinh(r)^n."""
    r = np.asarray(r, dtype=float)
    out = np.sinh(r) ** n
    return float(out) if out.ndim == 0 else out


def ball_volume(n: int, r: float) -> float:
    """Volume of the geodesic ball of radius r in H^{n+1}."""
    return OMEGA[n] * radial_volume_kernel(n, r)


def ball_radius(n: int, volume: float) -> float:
    """Radius of the geodesic ball enclosing the given volume."""
    if volume <= 0.0:
        raise ValueError("volume must be positive")
    if n == 1:
        return math.acosh(1.0 + volume / (2.0 * math.pi))
    return brentq(lambda r: ball_volume(n, r) - volume, 1e-12, 60.0)


def sphere_quadrature_weights(graph: RadialGraph) -> np.ndarray:
    """Per-node weights for int_{S^n} (.) dsigma on the graph's grid."""
    if graph.n == 1:
        return np.full(graph.N, 2.0 * np.pi / graph.N)
    return 2.0 * np.pi * fejer1_weights(graph.N)


def enclosed_volume(graph: RadialGraph) -> float:
    """Hyperbolic volume enclosed by the graph: int_{S^n} V_n(rho) dsigma."""
    _check_guard(graph.rho)
    w = sphere_quadrature_weights(graph)
    return float(w @ radial_volume_kernel(graph.n, graph.rho))


def volume_of_shifted(graph: RadialGraph, shift: float) -> tuple[float, float]:
    """Enclosed volume of rho + shift and its derivative d/dshift.

    Used by the Newton solve of the discrete volume projection.
    """
    w = sphere_quadrature_weights(graph)
    r = graph.rho + shift
    v = float(w @ radial_volume_kernel(graph.n, r))
    dv = float(w @ radial_volume_kernel_deriv(graph.n, r))
    return v, dv


@dataclass
class QuermassVector:
    """Quermassintegrals A_{-1}..A_n and the average Gauss curvature.

    A is indexed so that A[0] = A_{-1} (enclosed volume), A[1] = A_0
    (surface area), ..., A[n + 1] = A_n.
    """

    n: int
    A: np.ndarray
    Kbar: float

    def __getitem__(self, k: int) -> float:
        """A_k for k in -1..n."""
        return float(self.A[k + 1])


def quermassintegrals(graph: RadialGraph, fields: GeometryFields) -> QuermassVector:
    """Quermassintegrals via the curvature-integral recursions.

    The average Gauss curvature is computed directly as the area average
    of K and cross-checked against the recursion form (A_n plus the
    appropriately weighted A_{n-2}, divided by A_0); a disagreement beyond
    1e-6 relative signals a discretization failure.
    """
    n = graph.n
    aw = fields.area_weight
    A = np.empty(n + 2)
    A[0] = enclosed_volume(graph)
    A[1] = float(aw.sum())

    sigma_int = [float(aw @ fields.sigma[:, k]) for k in range(n)]
    A[2] = sigma_int[0] - n * A[0]
    for k in range(2, n + 1):
        A[k + 1] = sigma_int[k - 1] - (n - k + 1) / (k - 1) * A[k - 1]

    Kbar = float(aw @ fields.K) / A[1]
    # recursion form of the same average: for n = 1 the chain ends at
    # A_{-1} with coefficient n, for n >= 2 at A_{n-2}/(n-1)
    coeff = float(n) if n == 1 else 1.0 / (n - 1)
    Kbar_rec = (A[n + 1] + coeff * A[n - 1]) / A[1]
    denom = max(abs(Kbar), abs(Kbar_rec), 1e-300)
    if abs(Kbar - Kbar_rec) > 1e-6 * denom:
        raise RecursionMismatch(
            f"average curvature mismatch: direct {Kbar!r} vs recursion {Kbar_rec!r}"
        )
    return QuermassVector(n=n, A=A, Kbar=Kbar)


def monotone_quermass(graph: RadialGraph, fields: GeometryFields) -> float:
    """The flow's monotone functional A_{n-1}, cheap enough for every step.

    For curves this is the boundary length A_0; for surfaces it is
    A_1 = int sigma_1 dmu - 2 A_{-1}.
    """
    if graph.n == 1:
        return float(fields.area_weight.sum())
    s1 = float(fields.area_weight @ fields.sigma[:, 0])
    return s1 - 2.0 * enclosed_volume(graph)
