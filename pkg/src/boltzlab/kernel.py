"""Collision kernel: physical parameters, angular cross sections, and the
cancellation constant C_S.

Two angular forms are exposed.  `eval_B` is the nominal model kernel
r^gamma * theta^(-2-2s) * btilde(cos theta); `eval_B_sigma` is the
trigonometrically exact cross section

    B(r, theta) = (1/4) r^gamma sin(theta/2)^(-2-2s)
                  * cos(theta/2)^(gamma+2s+1) * btilde(cos theta)

whose Carleman kernel is exactly |v-v'|^(-3-2s) * integral over the plane
(v'-v)^perp of f(v+w) |w|^(gamma+2s+1) btilde, with
cos(theta/2) = |w| / sqrt(|v-v'|^2 + |w|^2).  The sigma and Carleman
evaluators both use `eval_B_sigma`, which is what makes the cross
representation checks meaningful; both forms share the theta^(-2-2s)
grazing singularity and the btilde hook.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .quadrature import graded_edges, panel_rule, sphere_rule


@dataclass(frozen=True)
class KernelParams:
    """Physical parameters (gamma, s), angular profile, quadrature knobs."""

    gamma: float
    s: float
    btilde: Callable[[np.ndarray], np.ndarray] | None = None
    theta_min: float = 1e-4
    tol: float = 1e-6

    def __post_init__(self) -> None:
        lower = max(-3.0, -1.5 - 2.0 * self.s)
        if not (lower < self.gamma < 0.0):
            raise ValueError(
                f"gamma must satisfy max(-3, -3/2-2s) < gamma < 0; "
                f"got gamma={self.gamma}, s={self.s}")
        if not (0.0 < self.s < 1.0):
            raise ValueError(f"s must lie in (0,1); got {self.s}")
        if not (0.0 < self.theta_min < np.pi / 4):
            raise ValueError("theta_min must lie in (0, pi/4)")

    def b(self, cos_theta: np.ndarray) -> np.ndarray:
        if self.btilde is None:
            return np.ones_like(np.asarray(cos_theta, dtype=float))
        return self.btilde(np.asarray(cos_theta, dtype=float))


def eval_B(r: np.ndarray, theta: np.ndarray, params: KernelParams) -> np.ndarray:
    """Nominal kernel r^gamma * theta^(-2-2s) * btilde(cos theta)."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(r <= 0):
        raise ValueError("relative speed r must be positive")
    if np.any(theta <= 0) or np.any(theta > np.pi):
        raise ValueError("theta must lie in (0, pi]")
    return r**params.gamma * theta ** (-2 - 2 * params.s) * params.b(np.cos(theta))


def angular_cross_section(theta: np.ndarray, params: KernelParams) -> np.ndarray:
    """Angular factor of the sigma-form cross section (B without r^gamma)."""
    theta = np.asarray(theta, dtype=float)
    half = 0.5 * theta
    return (0.25 * np.sin(half) ** (-2 - 2 * params.s)
            * np.cos(half) ** (params.gamma + 2 * params.s + 1)
            * params.b(np.cos(theta)))


def eval_B_sigma(r: np.ndarray, theta: np.ndarray, params: KernelParams) -> np.ndarray:
    """Carleman-consistent cross section used by both Q evaluators."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(r <= 0):
        raise ValueError("relative speed r must be positive")
    if np.any(theta <= 0) or np.any(theta >= np.pi):
        raise ValueError("theta must lie in (0, pi)")
    return r**params.gamma * angular_cross_section(theta, params)


@dataclass(frozen=True)
class CancellationConstant:
    """C_S with a provenance record of how it was computed and checked."""

    value: float
    provenance: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not (self.value > 0 and np.isfinite(self.value)):
            raise ValueError("C_S must be positive and finite")


def cs_closed_form(params: KernelParams) -> float:
    """Closed form of the cancellation constant for btilde == 1.

    Substituting u = cos(theta/2) in the 1D angular integral turns it into
    a difference of Beta integrals whose analytic continuation gives

        C_S = -pi * Gamma(-s) * Gamma((gamma+2s+3)/2) / Gamma((gamma+3)/2),

    positive for s in (0,1) since Gamma(-s) < 0 there.  Agrees with
    adaptive quadrature of the integral to 1e-10 across the admissible
    range.
    """
    from scipy.special import gamma as gamma_fn

    if params.btilde is not None:
        raise ValueError("closed form only valid for the default profile")
    g, s = params.gamma, params.s
    return float(-np.pi * gamma_fn(-s) * gamma_fn((g + 2 * s + 3) / 2)
                 / gamma_fn((g + 3) / 2))


def cs_formula(params: KernelParams, n_panels: int = 40, n_gl: int = 12) -> float:
    """1D angular formula for C_S.

    C_S = 2 pi * int_0^pi sin(theta) b_sigma(theta)
          * [cos(theta/2)^(-(3+gamma)) - 1] d theta,

    with b_sigma the angular factor of the sigma cross section.  The
    integrand behaves like theta^(1-2s) near 0 and like
    cos(theta/2)^(2s-1) near pi, so panels are graded toward both ends.
    Despite the classical statement that the constant depends only on s,
    this expression (and its 5D oracle) varies with gamma as well; the
    provenance record keeps both parameters.

    Integrated by adaptive quadrature: the integrand has algebraic endpoint
    singularities (theta^(1-2s) at 0, cos(theta/2)^(2s-1) at pi) that defeat
    fixed panel rules at the 1e-3 level.
    """
    import warnings

    from scipy.integrate import IntegrationWarning, quad

    def integrand(theta: float) -> float:
        bracket = np.cos(0.5 * theta) ** (-(3.0 + params.gamma)) - 1.0
        return float(np.sin(theta) * angular_cross_section(theta, params)
                     * bracket)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, _ = quad(integrand, 0.0, np.pi, limit=400, epsabs=1e-12,
                      epsrel=1e-12)
    return float(2 * np.pi * val)


def _cs_oracle_5d(params: KernelParams, f1, sample_points: np.ndarray,
                  n_r: int = 30, n_sphere: tuple[int, int] = (12, 12),
                  n_theta_panels: int = 14, r_max: float | None = None
                  ) -> tuple[np.ndarray, np.ndarray]:
    """Direct 5D integral of int int (f1(vstar') - f1(vstar)) B dsigma dvstar
    at each sample v, together with the convolution (|.|^gamma * f1)(v).

    Returns (lhs_values, conv_values); their ratio should be the constant.
    """
    from .sigma import collision_bracket_integral  # local import, no cycle

    lhs = np.array([collision_bracket_integral(
        f1, v, params, n_r=n_r, n_sphere=n_sphere,
        n_theta_panels=n_theta_panels, r_max=r_max) for v in sample_points])
    conv = np.array([gamma_convolution(f1, v, params.gamma)
                     for v in sample_points])
    return lhs, conv


def gamma_convolution(f1, v: np.ndarray, gamma: float,
                      n_r: int = 48, n_sphere: tuple[int, int] = (16, 16),
                      r_max: float | None = None) -> float:
    """(|.|^gamma * f1)(v) by polar quadrature centered at the singularity."""
    v = np.asarray(v, dtype=float)
    if r_max is None:
        r_max = f1.support_radius(1e-14) + float(np.linalg.norm(
            v - getattr(f1, "center", np.zeros(3)))) + 1.0
    omegas, w_om = sphere_rule(*n_sphere)
    edges = graded_edges(0.0, r_max, n_r, grade_left=True, strength=2.0)
    r, w_r = panel_rule(edges, 8)
    pts = v[None, None, :] + r[:, None, None] * omegas[None, :, :]
    vals = f1(pts) * (r ** (2.0 + gamma))[:, None]
    return float(np.einsum("ro,r,o->", vals, w_r, w_om))


def compute_CS(params: KernelParams, validate: bool = True,
               rel_tol: float = 1e-3) -> CancellationConstant:
    """Cancellation constant via the 1D formula, cross-validated against the
    direct 5D integral on a Gaussian when `validate` is set."""
    from .grid import Gaussian

    c1 = cs_formula(params)
    prov: dict = {
        "formula": "2*pi*int sin(theta) b_sigma(theta) "
                   "[cos(theta/2)^-(3+gamma) - 1] dtheta",
        "formula_value": c1,
        "gamma": params.gamma,
        "s": params.s,
        "depends_on_gamma": True,
        "note": "value varies with gamma as well as s; both retained",
    }
    if params.btilde is None:
        closed = cs_closed_form(params)
        prov["closed_form"] = closed
        prov["closed_form_rel_gap"] = abs(closed - c1) / abs(closed)
        c1 = closed
    if validate:
        samples = np.array([[0.0, 0.0, 0.0], [0.5, 0.0, 0.0],
                            [0.0, -0.7, 0.3], [1.0, 1.0, 0.0],
                            [-0.4, 0.2, 0.9]])
        lhs, conv = _cs_oracle_5d(params, Gaussian(1.0, 1.0), samples)
        ratios = lhs / conv
        spread = float(np.max(ratios) - np.min(ratios)) / abs(c1)
        err = float(np.max(np.abs(ratios - c1))) / abs(c1)
        prov.update({
            "oracle": "5D quadrature of int int (f1(vstar')-f1(vstar)) B",
            "oracle_ratios": [float(x) for x in ratios],
            "oracle_rel_error": err,
            "oracle_ratio_spread": spread,
            "oracle_tolerance": rel_tol,
        })
        if err > rel_tol:
            raise ValueError(
                f"C_S oracle disagreement {err:.2e} exceeds {rel_tol:.1e}; "
                f"formula={c1:.6g}, oracle ratios={ratios}")
    return CancellationConstant(value=c1, provenance=prov)
