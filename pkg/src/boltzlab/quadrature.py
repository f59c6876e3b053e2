"""Shared quadrature building blocks: Gauss-Legendre panels, product sphere
rules, and orthonormal frames for plane integrals.

All rules here are deterministic; node/weight arrays are cached where cheap.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=64)
def gl_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def panel_rule(edges: np.ndarray, n_per_panel: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule over consecutive panels [edges[i], edges[i+1]]."""
    edges = np.asarray(edges, dtype=float)
    x, w = gl_rule(n_per_panel)
    a = edges[:-1][:, None]
    b = edges[1:][:, None]
    nodes = 0.5 * (a + b) + 0.5 * (b - a) * x[None, :]
    weights = 0.5 * (b - a) * w[None, :]
    return nodes.ravel(), weights.ravel()


def geometric_edges(r_min: float, r_max: float, ratio: float = 2.0) -> np.ndarray:
    """Panel edges r_min, r_min*ratio, ... capped at r_max."""
    if r_min <= 0 or r_max <= r_min:
        raise ValueError("need 0 < r_min < r_max")
    n = int(np.ceil(np.log(r_max / r_min) / np.log(ratio)))
    edges = r_min * ratio ** np.arange(n + 1)
    edges[-1] = r_max
    return edges


def graded_edges(a: float, b: float, n_panels: int, grade_left: bool = True,
                 grade_right: bool = False, strength: float = 2.0) -> np.ndarray:
    """Panel edges on [a, b], geometrically clustered toward the graded ends."""
    t = np.linspace(0.0, 1.0, n_panels + 1)
    if grade_left and grade_right:
        # symmetric clustering via a smooth warp
        t = 0.5 * (1 - np.cos(np.pi * t))
    elif grade_left:
        t = t ** strength
    elif grade_right:
        t = 1 - (1 - t) ** strength
    return a + (b - a) * t


def sphere_rule(n_polar: int, n_azimuth: int) -> tuple[np.ndarray, np.ndarray]:
    """Product rule on S^2: Gauss-Legendre in cos(polar) x uniform azimuth.

    Weights sum to 4*pi.  With even n_azimuth the node set is exactly
    antipodally symmetric (GL nodes are symmetric in cos, azimuth nodes come
    in phi, phi+pi pairs), which downstream symmetrized integrands rely on.
    """
    if n_azimuth % 2 != 0:
        raise ValueError("n_azimuth must be even for antipodal symmetry")
    mu, wmu = gl_rule(n_polar)
    phi = (np.arange(n_azimuth) + 0.5) * (2 * np.pi / n_azimuth)
    wphi = 2 * np.pi / n_azimuth
    smu = np.sqrt(np.clip(1 - mu**2, 0.0, None))
    nodes = np.empty((n_polar, n_azimuth, 3))
    nodes[..., 0] = smu[:, None] * np.cos(phi)[None, :]
    nodes[..., 1] = smu[:, None] * np.sin(phi)[None, :]
    nodes[..., 2] = mu[:, None] * np.ones_like(phi)[None, :]
    weights = (wmu[:, None] * wphi) * np.ones_like(phi)[None, :]
    return nodes.reshape(-1, 3), weights.ravel()


def half_sphere_rule(n_polar: int, n_azimuth: int) -> tuple[np.ndarray, np.ndarray]:
    """Antipodal-pair representatives of sphere_rule; weights still sum to 4*pi.

    Summing f(omega) over these nodes equals summing (f(omega)+f(-omega))/2
    over the full rule.
    """
    nodes, weights = sphere_rule(n_polar, n_azimuth)
    key = np.round(nodes, 12)
    keep = (key[:, 2] > 0) | ((key[:, 2] == 0) & (key[:, 1] > 0)) | \
           ((key[:, 2] == 0) & (key[:, 1] == 0) & (key[:, 0] > 0))
    return nodes[keep], 2.0 * weights[keep]


def plane_frame(omega: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic orthonormal frame (e1, e2) of the plane orthogonal to omega.

    The frame depends only on the line {omega, -omega}: a canonical sign is
    chosen first, so integrals over the plane computed through this frame are
    exactly identical for omega and -omega (the kernel reflection identity
    holds to round-off).
    """
    w = np.asarray(omega, dtype=float)
    w = w / np.linalg.norm(w)
    for c in w:
        if c != 0.0:
            if c < 0:
                w = -w
            break
    k = int(np.argmin(np.abs(w)))
    a = np.zeros(3)
    a[k] = 1.0
    e1 = np.cross(w, a)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(w, e1)
    return e1, e2


def plane_frames(omegas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized plane_frame for an (M, 3) array of directions."""
    omegas = np.asarray(omegas, dtype=float)
    out1 = np.empty_like(omegas)
    out2 = np.empty_like(omegas)
    for i, w in enumerate(omegas):
        out1[i], out2[i] = plane_frame(w)
    return out1, out2
