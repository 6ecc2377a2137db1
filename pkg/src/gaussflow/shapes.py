"""Initial-shape construction for flow runs.

Three families: geodesic spheres, single-harmonic perturbations of a
sphere (cos(l theta) on the circle, Legendre P_l(cos theta) in the
axisymmetric case), and a Gaussian bump, periodized over the circle and
even-symmetrized across the poles so it lives on the sphere. Construction
verifies convexity and rejects shapes the flow could not start from.
"""

from __future__ import annotations

import numpy as np

from .errors import NonConvexShape
from .geometry import (
    RadialGraph,
    circle_grid,
    compute_geometry,
    convexity_class,
    polar_grid,
)


def _legendre(l: int, x: np.ndarray) -> np.ndarray:
    coeffs = np.zeros(l + 1)
    coeffs[l] = 1.0
    return np.polynomial.legendre.legval(x, coeffs)


def _periodized_gaussian(theta, theta0, width, images: int = 3) -> np.ndarray:
    out = np.zeros_like(theta)
    for k in range(-images, images + 1):
        out += np.exp(-((theta - theta0 + 2.0 * np.pi * k) ** 2) / width**2)
    return out


def make_shape(n: int, N: int, kind: str, *, r: float, eps: float = 0.0,
               l: int = 2, width: float = 0.0) -> RadialGraph:
    """Build an initial graph and verify it is convex.

    kind is one of 'sphere', 'perturbed', 'bump'. Raises NonConvexShape
    (carrying the offending minimal principal curvature) when the
    construction is not convex.
    """
    theta = circle_grid(N) if n == 1 else polar_grid(N)
    if kind == "sphere":
        rho = np.full(N, float(r))
    elif kind == "perturbed":
        if n == 1:
            rho = r + eps * np.cos(l * theta)
        else:
            rho = r + eps * _legendre(l, np.cos(theta))
    elif kind == "bump":
        if n == 1:
            rho = r + eps * _periodized_gaussian(theta, np.pi, width)
        else:
            # even pair of images keeps the field smooth across both poles
            bump = _periodized_gaussian(theta, np.pi / 2, width) + _periodized_gaussian(
                theta, -np.pi / 2, width
            )
            rho = r + eps * bump
    else:
        raise ValueError(f"unknown shape kind {kind!r}")

    graph = RadialGraph(n=n, theta=theta, rho=rho)
    fields = compute_geometry(graph)
    if convexity_class(fields) == "nonconvex":
        kmin = float(fields.kappa.min())
        raise NonConvexShape(
            f"shape {kind!r} is not convex: min principal curvature = {kmin:.6g}",
            kappa_min=kmin,
        )
    return graph
