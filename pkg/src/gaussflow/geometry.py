"""Pointwise extrinsic geometry of radial graphs over S^n in hyperbolic space.

A star-shaped hypersurface in H^{n+1} is written as {(rho(theta), theta)}
over the unit sphere, with the ambient metric d rho^2 + sinh^2(rho) g_{S^n}.
From rho and its covariant derivatives on the round sphere this module
computes the induced metric, second fundamental form, support function,
principal curvatures and the Gauss curvature

    K = det(-sinh(rho) rho_ij + 2 cosh(rho) rho_i rho_j
            + sinh^2(rho) cosh(rho) sigma_ij) / det(g_ij),

where sigma_ij is the round metric and rho_ij the covariant Hessian.

Two grid flavours are supported:

* n = 1: N uniform angles on the periodic circle, differentiated spectrally
  (machine accurate for smooth rho).
* n = 2, axisymmetric: N polar angles on a staggered grid avoiding the
  poles, theta_j = (j + 1/2) pi / N, differentiated with 4th-order central
  differences using even-reflection ghost values across both poles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateRho, NonStarShaped

# Guard range keeping sinh/cosh well inside double range with headroom.
RHO_MIN = 1e-6
RHO_MAX = 50.0

MIN_NODES = 16


def circle_grid(N: int) -> np.ndarray:
    """Uniform periodic grid on S^1: theta_j = 2 pi j / N."""
    return 2.0 * np.pi * np.arange(N) / N


def polar_grid(N: int) -> np.ndarray:
    """Staggered polar grid on (0, pi): theta_j = (j + 1/2) pi / N.

    The half-cell offset keeps both poles off the grid so that even
    reflection (rho' -> 0 at the poles) is representable with ghost nodes.
    """
    return (np.arange(N) + 0.5) * np.pi / N


def fejer1_weights(N: int) -> np.ndarray:
    """Quadrature weights for int_{-1}^{1} p(x) dx at x_j = cos(theta_j).

    The staggered polar grid is exactly the Chebyshev point set of the
    first kind, so Fejer's first rule applies: spectrally accurate for
    integrands smooth in x = cos(theta), and exact for constants
    (sum of weights = 2).
    """
    theta = polar_grid(N)
    m = np.arange(1, N // 2 + 1)
    corr = np.cos(2.0 * np.outer(theta, m)) / (4.0 * m**2 - 1.0)
    return (2.0 / N) * (1.0 - 2.0 * corr.sum(axis=1))


@dataclass
class RadialGraph:
    """Discretized star-shaped hypersurface: rho on a grid over S^n.

    n = 1 uses the full periodic circle; n = 2 is axisymmetric, rho being a
    function of the polar angle alone. rho is the geodesic distance from
    the star center (hyperbolic length units) and must stay positive.
    """

    n: int
    theta: np.ndarray
    rho: np.ndarray
    center_tag: str = "origin"

    def __post_init__(self):
        if self.n not in (1, 2):
            raise ValueError(f"n must be 1 or 2, got {self.n}")
        self.theta = np.asarray(self.theta, dtype=float)
        self.rho = np.asarray(self.rho, dtype=float)
        if self.theta.shape != self.rho.shape or self.theta.ndim != 1:
            raise ValueError("theta and rho must be 1-d arrays of equal length")
        if self.N < MIN_NODES:
            raise ValueError(f"need at least {MIN_NODES} nodes, got {self.N}")
        expected = circle_grid(self.N) if self.n == 1 else polar_grid(self.N)
        if not np.allclose(self.theta, expected, rtol=0.0, atol=1e-12):
            raise ValueError("theta must be the canonical uniform grid for n")
        if not np.all(np.isfinite(self.rho)) or np.any(self.rho <= 0.0):
            raise ValueError("rho must be finite and strictly positive")

    @property
    def N(self) -> int:
        return self.theta.size

    @property
    def spacing(self) -> float:
        return (2.0 * np.pi if self.n == 1 else np.pi) / self.N

    def with_rho(self, rho: np.ndarray) -> "RadialGraph":
        """New graph on the same grid with replaced radial values.

        Skips constructor validation (hot path inside RK stages); the
        radial guard is re-checked by compute_geometry instead.
        """
        g = object.__new__(RadialGraph)
        g.n = self.n
        g.theta = self.theta
        g.rho = np.asarray(rho, dtype=float)
        g.center_tag = self.center_tag
        return g


def sphere_graph(n: int, N: int, r: float) -> RadialGraph:
    """Geodesic sphere of radius r: rho identically r."""
    theta = circle_grid(N) if n == 1 else polar_grid(N)
    return RadialGraph(n=n, theta=theta, rho=np.full(N, float(r)))


@dataclass
class GeometryFields:
    """Per-node extrinsic geometry of a radial graph.

    Metric and second fundamental form are diagonal in these coordinates
    (for n = 2 the axisymmetry kills the off-diagonal terms), so g and h
    hold the diagonal components, shape (N, n). kappa holds the principal
    curvatures, sigma the elementary symmetric functions sigma_1..sigma_n.
    K is the Gauss curvature from the determinant formula; sigma_n aliases
    K and sigma_1 aliases H by construction.
    """

    n: int
    g: np.ndarray
    h: np.ndarray
    weingarten: np.ndarray
    kappa: np.ndarray
    sigma: np.ndarray
    K: np.ndarray
    H: np.ndarray
    u: np.ndarray
    area_weight: np.ndarray
    grad_rho_norm: np.ndarray
    # squared norm of the round-sphere gradient, kept for identity checks
    grad_rho_sq: np.ndarray = field(repr=False, default=None)


def spectral_d1_d2(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """First and second derivative on the uniform periodic grid via FFT.

    The Nyquist mode is zeroed in the first derivative (standard choice
    keeping the result real and odd-symmetric); it is kept in the second.
    """
    N = values.size
    vhat = np.fft.rfft(values)
    k = np.arange(vhat.size, dtype=float)
    d1hat = 1j * k * vhat
    if N % 2 == 0:
        d1hat[-1] = 0.0
    d2hat = -(k**2) * vhat
    return np.fft.irfft(d1hat, n=N), np.fft.irfft(d2hat, n=N)


def reflect_pad(values: np.ndarray, width: int = 2) -> np.ndarray:
    """Even reflection of a staggered polar field across both poles."""
    return np.concatenate(
        [values[width - 1 :: -1], values, values[: -width - 1 : -1]]
    )


def fd4_d1_d2(values: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """4th-order central differences on the staggered polar grid.

    Ghost values are the even reflection across theta = 0 and theta = pi,
    exact for fields that are smooth on the axisymmetric sphere.
    """
    p = reflect_pad(values, 2)
    d1 = (p[:-4] - 8.0 * p[1:-3] + 8.0 * p[3:-1] - p[4:]) / (12.0 * h)
    d2 = (-p[:-4] + 16.0 * p[1:-3] - 30.0 * p[2:-2] + 16.0 * p[3:-1] - p[4:]) / (
        12.0 * h**2
    )
    return d1, d2


def _check_guard(rho: np.ndarray) -> None:
    # NaN propagates into min/max and fails the comparisons below
    rmin, rmax = float(rho.min()), float(rho.max())
    if not (rmin >= RHO_MIN and rmax <= RHO_MAX):
        raise DegenerateRho(
            f"rho left guard range [{RHO_MIN}, {RHO_MAX}]: "
            f"min={rmin:.3e}, max={rmax:.3e}"
        )


def _geometry_n1(graph: RadialGraph) -> GeometryFields:
    rho = graph.rho
    d1, d2 = spectral_d1_d2(rho)

    sh, ch = np.sinh(rho), np.cosh(rho)
    grad_sq = d1**2
    wt = np.sqrt(sh**2 + grad_sq)  # sqrt(sinh^2 rho + |grad rho|^2)

    g11 = grad_sq + sh**2
    # numerator of the curvature expression; h_11 = num / wt
    num = -sh * d2 + 2.0 * ch * d1**2 + sh**2 * ch
    h11 = num / wt

    K = num / wt**3  # det h / det g for a curve
    wein = h11 / g11
    kappa = wein[:, None]
    sigma = K[:, None]  # sigma_1 = K = H for n = 1
    H = sigma[:, 0]

    u = sh**2 / wt
    area_weight = np.sqrt(g11) * graph.spacing

    return GeometryFields(
        n=1,
        g=g11[:, None],
        h=h11[:, None],
        weingarten=wein[:, None],
        kappa=kappa,
        sigma=sigma,
        K=K,
        H=H,
        u=u,
        area_weight=area_weight,
        grad_rho_norm=np.abs(d1),
        grad_rho_sq=grad_sq,
    )


def _geometry_n2(graph: RadialGraph) -> GeometryFields:
    rho, theta = graph.rho, graph.theta
    d1, d2 = fd4_d1_d2(rho, graph.spacing)

    sh, ch = np.sinh(rho), np.cosh(rho)
    st, ct = np.sin(theta), np.cos(theta)
    grad_sq = d1**2
    wt = np.sqrt(sh**2 + grad_sq)

    # covariant Hessian on the round S^2 for an axisymmetric field:
    #   rho_;tt = rho'',  rho_;tp = 0,  rho_;pp = sin(t) cos(t) rho'
    # (the phi-phi Christoffel term; dropping it is the classic silent bug)
    hess_tt = d2
    hess_pp = st * ct * d1

    g_tt = grad_sq + sh**2
    g_pp = sh**2 * st**2

    num_tt = -sh * hess_tt + 2.0 * ch * d1**2 + sh**2 * ch
    num_pp = -sh * hess_pp + sh**2 * ch * st**2
    h_tt = num_tt / wt
    h_pp = num_pp / wt

    # Weingarten map g^{jk} h_{ki} is diagonal here, so its eigenvalues are
    # the diagonal entries; no general eigensolver needed.
    k_t = h_tt / g_tt
    k_p = h_pp / g_pp

    K = (num_tt * num_pp) / (wt**4 * sh**2 * st**2)  # det h / det g
    kappa = np.stack([k_t, k_p], axis=1)
    H = k_t + k_p
    sigma = np.stack([H, K], axis=1)  # sigma_2 aliases the determinant K

    u = sh**2 / wt
    area_weight = 2.0 * np.pi * fejer1_weights(graph.N) * wt * sh

    return GeometryFields(
        n=2,
        g=np.stack([g_tt, g_pp], axis=1),
        h=np.stack([h_tt, h_pp], axis=1),
        weingarten=np.stack([k_t, k_p], axis=1),
        kappa=kappa,
        sigma=sigma,
        K=K,
        H=H,
        u=u,
        area_weight=area_weight,
        grad_rho_norm=np.abs(d1),
        grad_rho_sq=grad_sq,
    )


def compute_geometry(graph: RadialGraph) -> GeometryFields:
    """All pointwise extrinsic geometry of the graph.

    Raises DegenerateRho if rho left the guard range and NonStarShaped if
    the support function fails to be positive (which for finite inputs can
    only happen through numerical degeneracy).
    """
    _check_guard(graph.rho)
    fields = _geometry_n1(graph) if graph.n == 1 else _geometry_n2(graph)
    if not fields.u.min() > 0.0:
        raise NonStarShaped("support function u <= 0 at some node")
    return fields


def convexity_class(fields: GeometryFields) -> str:
    """Strongest convexity class that holds everywhere.

    convex: all principal curvatures positive; positive-sectional: all
    pairwise products kappa_i kappa_j exceed 1 (for a curve the square of
    the single curvature is used); h-convex: all kappa_i >= 1. Classes are
    nested except on the h-convex boundary kappa = 1.
    """
    kappa_min = float(fields.kappa.min())
    if kappa_min <= 0.0:
        return "nonconvex"
    if fields.n == 1:
        pair_min = float((fields.kappa[:, 0] ** 2).min())
    else:
        pair_min = float((fields.kappa[:, 0] * fields.kappa[:, 1]).min())
    if kappa_min >= 1.0:
        return "h-convex"
    if pair_min > 1.0:
        return "positive-sectional"
    return "convex"
