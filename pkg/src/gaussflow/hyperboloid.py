"""Hyperboloid-model embedding and recentering of radial graphs.

Points of H^{m} live on the upper sheet of <X, X> = -1 in Minkowski space
R^{m,1} with <X, Y> = -X0 Y0 + sum Xi Yi. A radial graph about the model
origin embeds as X = (cosh rho, sinh rho * v(theta)) with v the unit
direction on S^n. Changing the star center is a Lorentz boost; the graph
is then resampled onto the canonical grid by periodic (n = 1) or
even-reflected (n = 2 axisymmetric) cubic-spline interpolation of rho as
a function of the new angle.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

from .geometry import RadialGraph, circle_grid, polar_grid


def minkowski_dot(X, Y) -> np.ndarray:
    """Bilinear form of signature (-,+,...,+) on the last axis."""
    X, Y = np.asarray(X), np.asarray(Y)
    return -X[..., 0] * Y[..., 0] + np.sum(X[..., 1:] * Y[..., 1:], axis=-1)


def embed_graph(graph: RadialGraph) -> np.ndarray:
    """Node positions on the hyperboloid, shape (N, 3).

    For n = 1 the columns are (X0, x, y). For axisymmetric n = 2 the
    orbit of each node under the rotational symmetry is a circle; the
    representative in the meridian half-plane is returned, with columns
    (X0, x_axis, x_perp >= 0).
    """
    ch, sh = np.cosh(graph.rho), np.sinh(graph.rho)
    return np.stack([ch, sh * np.cos(graph.theta), sh * np.sin(graph.theta)], axis=1)


def boost_matrix(direction_angle: float, distance: float) -> np.ndarray:
    """Frame change to coordinates centered at the translated point.

    The new origin is the point at the given hyperbolic distance from the
    model origin in the spatial direction (cos a, sin a); applying the
    returned matrix to that point yields (1, 0, 0).
    """
    a, d = float(direction_angle), float(distance)
    c, s = np.cos(a), np.sin(a)
    rot = np.array([[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]])
    chd, shd = np.cosh(d), np.sinh(d)
    boost = np.array([[chd, -shd, 0.0], [-shd, chd, 0.0], [0.0, 0.0, 1.0]])
    return rot.T @ boost @ rot


def frame_origin_in_ambient(M: np.ndarray) -> np.ndarray:
    """Ambient coordinates of the frame's center: M^{-1} (1, 0, 0)."""
    return np.linalg.solve(M, np.array([1.0, 0.0, 0.0]))


def hyperbolic_distance(P, Q) -> float:
    """Geodesic distance between two hyperboloid points.

    Uses 2 asinh(|P - Q|_M / 2) with the (spacelike) Minkowski norm of the
    chord, which stays accurate for nearly coincident points where
    arccosh(-<P,Q>) would lose half the digits.
    """
    diff = np.asarray(P, dtype=float) - np.asarray(Q, dtype=float)
    chord_sq = max(float(minkowski_dot(diff, diff)), 0.0)
    return 2.0 * float(np.arcsinh(0.5 * np.sqrt(chord_sq)))


def sphere_about(n: int, N: int, r: float, offset: float) -> RadialGraph:
    """Radial graph (about the origin) of a geodesic sphere with shifted
    center: radius r, center translated by the given offset distance
    (along theta = 0 for n = 1, along the symmetry axis for n = 2).

    Solves cosh(rho) cosh(b) - sinh(rho) sinh(b) cos(theta) = cosh(r) in
    closed form; the exact construction makes it the oracle for the
    sphere-fitting recovery tests.
    """
    theta = circle_grid(N) if n == 1 else polar_grid(N)
    A = np.cosh(offset)
    B = np.sinh(offset) * np.cos(theta)
    s = np.sqrt(A**2 - B**2)
    rho = np.arctanh(B / A) + np.arccosh(np.cosh(r) / s)
    return RadialGraph(n=n, theta=theta, rho=rho)


def _resample_periodic(angles, values, target) -> np.ndarray:
    order = np.argsort(angles)
    a = angles[order]
    v = values[order]
    a = np.append(a, a[0] + 2.0 * np.pi)
    v = np.append(v, v[0])
    spline = CubicSpline(a, v, bc_type="periodic")
    return spline(a[0] + np.mod(target - a[0], 2.0 * np.pi))


def _resample_polar(angles, values, target) -> np.ndarray:
    # even reflection across both poles supplies the boundary behaviour
    order = np.argsort(angles)
    a = angles[order]
    v = values[order]
    a_ext = np.concatenate([-a[::-1], a, 2.0 * np.pi - a[::-1]])
    v_ext = np.concatenate([v[::-1], v, v[::-1]])
    spline = CubicSpline(a_ext, v_ext)
    return spline(target)


def recenter_rho(graph: RadialGraph, transform) -> np.ndarray:
    """Radial values of the graph about a new center, on the canonical grid.

    transform is the 3x3 Lorentz frame change (n = 1) or the scalar axial
    offset b (n = 2 axisymmetric, boosting along the symmetry axis).
    """
    X = embed_graph(graph)
    if graph.n == 1:
        Xc = X @ np.asarray(transform).T
    else:
        b = float(transform)
        chb, shb = np.cosh(b), np.sinh(b)
        Xc = np.empty_like(X)
        Xc[:, 0] = chb * X[:, 0] - shb * X[:, 1]
        Xc[:, 1] = -shb * X[:, 0] + chb * X[:, 1]
        Xc[:, 2] = X[:, 2]
    rho_c = np.arccosh(np.maximum(Xc[:, 0], 1.0))
    ang = np.arctan2(Xc[:, 2], Xc[:, 1])
    if graph.n == 1:
        return _resample_periodic(np.mod(ang, 2.0 * np.pi), rho_c, graph.theta)
    return _resample_polar(ang, rho_c, graph.theta)
