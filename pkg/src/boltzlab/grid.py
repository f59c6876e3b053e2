"""Velocity grids, smooth analytic test functions, and mollification tools.

The grid is cell centered: node j sits at -L + (j + 1/2) * dv along each
axis, with N nodes per axis (N even).  Midpoint quadrature over the box is
then exact for trigonometric polynomials below the Nyquist scale, which keeps
the spectral Sobolev norms in norms.py consistent with plain vector sums.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from scipy.optimize import brentq


@dataclass(frozen=True)
class VelocityGrid:
    """Uniform cell-centered cubic grid on [-L, L]^3."""

    n: int
    length: float

    def __post_init__(self) -> None:
        if self.n < 4 or self.n % 2 != 0:
            raise ValueError("grid size must be even and >= 4")
        if self.length <= 0:
            raise ValueError("grid half length must be positive")

    @property
    def dv(self) -> float:
        return 2.0 * self.length / self.n

    @property
    def cell_volume(self) -> float:
        return self.dv**3

    def axis(self) -> np.ndarray:
        return -self.length + (np.arange(self.n) + 0.5) * self.dv

    def nodes(self) -> np.ndarray:
        """(n, n, n, 3) array of node coordinates."""
        a = self.axis()
        vx, vy, vz = np.meshgrid(a, a, a, indexing="ij")
        return np.stack([vx, vy, vz], axis=-1)

    def index_coords(self, v: np.ndarray) -> np.ndarray:
        """Fractional index coordinates of points v for interpolation."""
        return (np.asarray(v, dtype=float) + self.length) / self.dv - 0.5


class AnalyticFunction:
    """Smooth rapidly decaying function on R^3 with metadata used by the
    adaptive quadratures: a pointwise decay envelope and a Hessian bound."""

    def __call__(self, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def decay(self) -> tuple[float, float]:
        """(A, m) such that |f(v)| <= A * (1 + |v|^2)^(-m/2)."""
        raise NotImplementedError

    def support_radius(self, tiny: float = 1e-14) -> float:
        """Radius beyond which |f| <= tiny * amplitude."""
        a, m = self.decay()
        if m <= 0:
            return np.inf
        return float(np.sqrt(max(tiny ** (-2.0 / m) - 1.0, 0.0)))

    def grad(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        h = 1e-5
        out = np.empty(v.shape)
        for i in range(3):
            e = np.zeros(3)
            e[i] = h
            out[..., i] = (self(v + e) - self(v - e)) / (2 * h)
        return out

    def hess_bound(self) -> float:
        """Crude global bound on the spectral norm of the Hessian."""
        raise NotImplementedError


class Gaussian(AnalyticFunction):
    """amplitude * exp(-inv_width * |v - center|^2)."""

    def __init__(self, amplitude: float = 1.0, inv_width: float = 1.0,
                 center: np.ndarray | None = None):
        self.amplitude = float(amplitude)
        self.inv_width = float(inv_width)
        self.center = np.zeros(3) if center is None else np.asarray(center, dtype=float)

    def __call__(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        r2 = np.sum((v - self.center) ** 2, axis=-1)
        return self.amplitude * np.exp(-self.inv_width * r2)

    def grad(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        d = v - self.center
        return (-2.0 * self.inv_width) * d * self(v)[..., None]

    def decay(self) -> tuple[float, float]:
        # Gaussians beat any polynomial; report a steep effective exponent.
        return abs(self.amplitude), 40.0

    def support_radius(self, tiny: float = 1e-14) -> float:
        return float(np.sqrt(-np.log(tiny) / self.inv_width))

    def hess_bound(self) -> float:
        return abs(self.amplitude) * 2.0 * self.inv_width * max(1.0, 2.0 * np.e ** -1)

    def mass(self) -> float:
        return self.amplitude * (np.pi / self.inv_width) ** 1.5


def maxwellian(temperature: float = 1.0, density: float = 1.0,
               mean: np.ndarray | None = None) -> Gaussian:
    """Maxwellian equilibrium with the standard normalization."""
    amp = density / (2 * np.pi * temperature) ** 1.5
    return Gaussian(amplitude=amp, inv_width=1.0 / (2 * temperature), center=mean)


class PolyDecay(AnalyticFunction):
    """(1 + |v - center|^2)^(-exponent / 2), smooth with slow tails."""

    def __init__(self, exponent: float, center: np.ndarray | None = None,
                 amplitude: float = 1.0):
        self.exponent = float(exponent)
        self.amplitude = float(amplitude)
        self.center = np.zeros(3) if center is None else np.asarray(center, dtype=float)

    def __call__(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        r2 = np.sum((v - self.center) ** 2, axis=-1)
        return self.amplitude * (1.0 + r2) ** (-self.exponent / 2.0)

    def grad(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        d = v - self.center
        r2 = np.sum(d * d, axis=-1)
        pref = -self.exponent * self.amplitude * (1.0 + r2) ** (-self.exponent / 2.0 - 1.0)
        return pref[..., None] * d

    def decay(self) -> tuple[float, float]:
        return abs(self.amplitude), self.exponent

    def hess_bound(self) -> float:
        return abs(self.amplitude) * self.exponent * (self.exponent + 2.0)


class Bump(AnalyticFunction):
    """Compactly supported smooth bump, = amplitude at center, 0 outside radius."""

    def __init__(self, radius: float = 1.0, center: np.ndarray | None = None,
                 amplitude: float = 1.0):
        self.radius = float(radius)
        self.amplitude = float(amplitude)
        self.center = np.zeros(3) if center is None else np.asarray(center, dtype=float)

    def __call__(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        r2 = np.sum((v - self.center) ** 2, axis=-1) / self.radius**2
        out = np.zeros(np.shape(r2))
        inside = r2 < 1.0
        ri = np.clip(np.where(inside, r2, 0.0), 0.0, 1.0 - 1e-16)
        vals = self.amplitude * np.exp(1.0 - 1.0 / (1.0 - ri))
        return np.where(inside, vals, out)

    def decay(self) -> tuple[float, float]:
        return abs(self.amplitude), 60.0

    def support_radius(self, tiny: float = 1e-14) -> float:
        return self.radius + np.linalg.norm(self.center) * 0.0

    def hess_bound(self) -> float:
        # numerically sampled once; the exact sup is near 9.9 * A / r^2
        return 12.0 * abs(self.amplitude) / self.radius**2


class LinearCombination(AnalyticFunction):
    def __init__(self, terms: list[tuple[float, AnalyticFunction]]):
        self.terms = [(float(c), f) for c, f in terms]

    def __call__(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        out = np.zeros(v.shape[:-1])
        for c, f in self.terms:
            out = out + c * f(v)
        return out

    def grad(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        out = np.zeros(v.shape)
        for c, f in self.terms:
            out = out + c * f.grad(v)
        return out

    def decay(self) -> tuple[float, float]:
        pairs = [f.decay() for _, f in self.terms]
        a = sum(abs(c) * p[0] for (c, _), p in zip(self.terms, pairs))
        m = min(p[1] for p in pairs)
        return a, m

    def support_radius(self, tiny: float = 1e-14) -> float:
        return max(f.support_radius(tiny) + np.linalg.norm(f.center)
                   for _, f in self.terms)

    def hess_bound(self) -> float:
        return sum(abs(c) * f.hess_bound() for c, f in self.terms)


@dataclass
class Distribution:
    """Gridded velocity distribution with cubic-spline point evaluation."""

    grid: VelocityGrid
    values: np.ndarray
    _coeffs: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        expected = (self.grid.n,) * 3
        if self.values.shape != expected:
            raise ValueError(f"values shape {self.values.shape} != {expected}")

    @classmethod
    def from_function(cls, grid: VelocityGrid, f) -> "Distribution":
        return cls(grid, f(grid.nodes()))

    def spline_coeffs(self) -> np.ndarray:
        if self._coeffs is None:
            self._coeffs = ndimage.spline_filter(self.values, order=3,
                                                 mode="constant")
        return self._coeffs

    def __call__(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        coords = self.grid.index_coords(v)
        flat = coords.reshape(-1, 3).T
        vals = ndimage.map_coordinates(self.spline_coeffs(), flat, order=3,
                                       mode="constant", cval=0.0,
                                       prefilter=False)
        return vals.reshape(v.shape[:-1])

    def moments(self) -> dict[str, float]:
        w = self.grid.cell_volume
        nodes = self.grid.nodes()
        f = self.values
        mass = float(np.sum(f) * w)
        mom = np.sum(f[..., None] * nodes, axis=(0, 1, 2)) * w
        energy = float(np.sum(f * np.sum(nodes**2, axis=-1)) * w)
        return {"mass": mass, "momentum_x": float(mom[0]),
                "momentum_y": float(mom[1]), "momentum_z": float(mom[2]),
                "energy": energy}


# ----------------------------------------------------------------------------
# mollifier


def _smooth_step(u: np.ndarray) -> np.ndarray:
    """Smooth transition h: 1 at u=0, 0 at u=1 (classical exp(-1/x) glue)."""
    u = np.clip(u, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", under="ignore"):
        g = lambda x: np.where(x > 0, np.exp(-1.0 / np.maximum(x, 1e-300)), 0.0)
        num = g(1.0 - u)
        return num / (num + g(u))


def _psi_profile(t: np.ndarray, p: float) -> np.ndarray:
    """Radial profile: 1 on [0, 1/2], smooth decay to 0 at t >= 1."""
    t = np.asarray(t, dtype=float)
    u = np.clip(2.0 * (t - 0.5), 0.0, 1.0)
    vals = _smooth_step(u) ** p
    return np.where(t <= 0.5, 1.0, np.where(t >= 1.0, 0.0, vals))


def _solve_mollifier_power() -> float:
    """Pick p so the radial profile has unit integral against 4*pi*t^2 dt."""
    target = 1.0 / (4.0 * np.pi) - 1.0 / 24.0
    tt = np.linspace(0.5, 1.0, 4001)

    trapezoid = getattr(np, "trapezoid", np.trapz)

    def shell(p: float) -> float:
        vals = _psi_profile(tt, p) * tt**2
        return float(trapezoid(vals, tt)) - target

    return brentq(shell, 1e-3, 200.0, xtol=1e-12)


_MOLLIFIER_POWER: float | None = None


def mollifier_power() -> float:
    global _MOLLIFIER_POWER
    if _MOLLIFIER_POWER is None:
        _MOLLIFIER_POWER = _solve_mollifier_power()
    return _MOLLIFIER_POWER


class Mollifier(AnalyticFunction):
    """Smooth radial kernel psi_eps: supported in |v| <= eps, = eps^-3 psi(|v|/eps),
    with unit integral; psi equals its max on |v| <= eps/2."""

    def __init__(self, eps: float = 1.0):
        self.eps = float(eps)
        self.center = np.zeros(3)

    def __call__(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        t = np.sqrt(np.sum(v * v, axis=-1)) / self.eps
        return _psi_profile(t, mollifier_power()) / self.eps**3

    def decay(self) -> tuple[float, float]:
        return 1.0 / self.eps**3, 60.0

    def support_radius(self, tiny: float = 1e-14) -> float:
        return self.eps

    def hess_bound(self) -> float:
        p = mollifier_power()
        return 40.0 * (1.0 + p) ** 2 / self.eps**5


def chi(x: np.ndarray) -> np.ndarray:
    """Smooth cutoff: 1 on |x| <= 1/2, 0 on |x| >= 1, radial in between."""
    x = np.asarray(x, dtype=float)
    t = np.abs(x) if x.ndim == 0 or x.shape[-1:] != (3,) else np.sqrt(np.sum(x * x, axis=-1))
    return _psi_profile(t, 1.0)


def mollify(dist: Distribution, eps: float) -> Distribution:
    """Convolve a gridded distribution with the mollifier at scale eps.

    Uses a normalized discrete stencil so the gridded mass is exactly
    preserved regardless of resolution.
    """
    grid = dist.grid
    half = max(int(np.ceil(eps / grid.dv)), 1)
    offs = np.arange(-half, half + 1) * grid.dv
    ox, oy, oz = np.meshgrid(offs, offs, offs, indexing="ij")
    pts = np.stack([ox, oy, oz], axis=-1)
    stencil = Mollifier(eps)(pts)
    s = stencil.sum()
    if s <= 0:
        return Distribution(grid, dist.values.copy())
    stencil = stencil / s
    smoothed = ndimage.convolve(dist.values, stencil, mode="constant", cval=0.0)
    return Distribution(grid, smoothed)


def build_velocity_grid(n: int, length: float) -> VelocityGrid:
    """Construct a uniform cell-centered velocity grid on [-length, length]^3."""
    return VelocityGrid(n, length)


def eval_analytic(f: AnalyticFunction, grid: VelocityGrid) -> Distribution:
    """Sample an analytic function on a grid as a Distribution."""
    return Distribution.from_function(grid, f)
