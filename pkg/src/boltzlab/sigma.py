"""Direct sigma-sphere evaluation of the collision operator.

Q(f1, f2)(v) = int_{R^3} int_{S^2} (f1(vstar') f2(v') - f1(vstar) f2(v))
               B(|v - vstar|, cos theta) dsigma dvstar

with v' = (v+vstar)/2 + (|v-vstar|/2) sigma and vstar' its mirror.  The
grazing singularity at theta = 0 is tamed by pairing azimuth nodes phi and
phi + pi (which cancels the odd O(theta) part of the bracket exactly) and a
dyadic theta mesh from theta_min, followed by one Richardson extrapolation
in theta_min with the known cutoff-error exponent 2 - 2s.

This module is the slow trusted reference; nothing here is optimized beyond
plain vectorization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernel import KernelParams, angular_cross_section
from .quadrature import graded_edges, panel_rule, plane_frames, sphere_rule


@dataclass(frozen=True)
class CollisionPair:
    """One collision configuration with its derived post-collision data."""

    v: np.ndarray
    v_star: np.ndarray
    sigma: np.ndarray

    def __post_init__(self) -> None:
        if abs(np.linalg.norm(self.sigma) - 1.0) > 1e-12:
            raise ValueError("sigma must be a unit vector")

    @property
    def v_prime(self) -> np.ndarray:
        return post_collision(self.v, self.v_star, self.sigma)[0]

    @property
    def v_star_prime(self) -> np.ndarray:
        return post_collision(self.v, self.v_star, self.sigma)[1]

    @property
    def cos_theta(self) -> float:
        u = self.v - self.v_star
        r = np.linalg.norm(u)
        if r == 0:
            return 1.0
        return float(np.dot(u, self.sigma) / r)


def post_collision(v: np.ndarray, v_star: np.ndarray, sigma: np.ndarray
                   ) -> tuple[np.ndarray, np.ndarray]:
    """Post-collision velocities (v', vstar') for unit sigma."""
    v = np.asarray(v, dtype=float)
    v_star = np.asarray(v_star, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    norms = np.sqrt(np.sum(sigma * sigma, axis=-1))
    if np.any(np.abs(norms - 1.0) > 1e-12):
        raise ValueError("sigma must be a unit vector")
    mid = 0.5 * (v + v_star)
    half = 0.5 * np.linalg.norm(v - v_star) if v.ndim == 1 else \
        0.5 * np.sqrt(np.sum((v - v_star) ** 2, axis=-1))[..., None]
    if v.ndim == 1:
        return mid + half * sigma, mid - half * sigma
    return mid + half * sigma, mid - half * sigma


def _rho_max(f1, f2, v: np.ndarray) -> float:
    """Truncation radius for the |vstar - v| integral.

    The loss term needs vstar inside the support of f1; the gain term needs
    vstar' in supp f1 and v' in supp f2, and energy conservation then caps
    |vstar| by the root-sum-square of those two reaches.
    """
    tiny = 1e-12
    c1 = getattr(f1, "center", np.zeros(3))
    r1 = f1.support_radius(tiny)
    reach1 = float(np.linalg.norm(c1)) + r1 + float(np.linalg.norm(v))
    loss = float(np.linalg.norm(v - c1)) + r1
    if f2 is None:
        # cancellation mode: the gain factor f1(vstar') is confined in rho
        # only for theta <= pi/2; sqrt(2) covers that cone, the rest is the
        # caller's extrapolated tail
        gain = np.sqrt(2.0) * reach1
    else:
        c2 = getattr(f2, "center", np.zeros(3))
        reach2 = (float(np.linalg.norm(c2)) + f2.support_radius(tiny)
                  + float(np.linalg.norm(v)))
        gain = np.sqrt(reach1**2 + reach2**2)
    return max(loss, gain, 1.0)


def _sigma_core(f1, f2, v: np.ndarray, params: KernelParams, *,
                n_r: int, n_sphere: tuple[int, int], n_theta_panels: int,
                n_phi: int, r_max: float | None, mode: str
                ) -> tuple[float, float]:
    """Shared 5D quadrature core.

    mode "full": bracket = f1(vstar') f2(v') - f1(vstar) f2(v)  (the operator).
    mode "cancellation": bracket = f1(vstar') - f1(vstar)  (the C_S oracle).

    Returns (value_with_theta_min, first_theta_panel_contribution); the
    caller performs the Richardson correction.
    """
    v = np.asarray(v, dtype=float)
    if r_max is None:
        r_max = _rho_max(f1, f2 if mode == "full" else None, v)

    # vstar = v + rho * omega ; relative speed is rho, collision axis -omega
    omegas, w_om = sphere_rule(*n_sphere)
    r_edges = graded_edges(0.0, r_max, n_r, grade_left=True, strength=2.0)
    rho, w_rho = panel_rule(r_edges, 6)

    # dyadic theta panels from theta_min up to pi/2, graded panels to pi
    tmin = params.theta_min
    edges = [tmin]
    while edges[-1] * 2.0 < np.pi / 2:
        edges.append(edges[-1] * 2.0)
    low = np.array(edges + [np.pi / 2])
    high = graded_edges(np.pi / 2, np.pi, 10, grade_left=False,
                        grade_right=True, strength=3.0)
    t_edges = np.concatenate([low, high[1:]])
    theta, w_th = panel_rule(t_edges, 8)
    n_first = 8  # nodes in the first (innermost) dyadic panel

    phi = (np.arange(n_phi) + 0.5) * (2 * np.pi / n_phi)
    w_phi = 2 * np.pi / n_phi

    e1, e2 = plane_frames(omegas)

    # sigma depends on (omega, theta, phi); geometry on (rho, omega, ...)
    ct, st = np.cos(theta), np.sin(theta)
    # collision axis u_hat = (v - vstar)/rho = -omega
    sig = (-ct[None, :, None, None] * omegas[:, None, None, :]
           + st[None, :, None, None]
           * (np.cos(phi)[None, None, :, None] * e1[:, None, None, :]
              + np.sin(phi)[None, None, :, None] * e2[:, None, None, :]))
    # sig shape (n_om, n_th, n_phi, 3)

    ang = angular_cross_section(theta, params) * st * w_th  # theta weights
    w_geom = w_rho * rho**2 * rho**params.gamma             # rho weights

    total = 0.0
    first = 0.0
    # chunk over rho to bound memory
    chunk = max(1, int(2e6 / (omegas.shape[0] * theta.size * n_phi)))
    loss_f1 = None
    for i0 in range(0, rho.size, chunk):
        rr = rho[i0:i0 + chunk]
        mid = v[None, None, :] + 0.5 * rr[:, None, None] * omegas[None, :, :]
        half = 0.5 * rr[:, None, None, None, None]
        vp = mid[:, :, None, None, :] + half * sig[None, ...]
        vsp = mid[:, :, None, None, :] - half * sig[None, ...]
        if mode == "full":
            bracket = f1(vsp) * f2(vp)
            vstar = v[None, None, :] + rr[:, None, None] * omegas[None, :, :]
            loss = f1(vstar) * float(f2(v))
            bracket -= loss[:, :, None, None]
        else:
            bracket = f1(vsp)
            vstar = v[None, None, :] + rr[:, None, None] * omegas[None, :, :]
            bracket -= f1(vstar)[:, :, None, None]
        # sum over phi (uniform), then theta, omega, rho
        by_theta = np.einsum("rotp,r,o->t", bracket, w_geom[i0:i0 + chunk],
                             w_om) * w_phi
        total += float(np.sum(by_theta * ang))
        first += float(np.sum(by_theta[:n_first] * ang[:n_first]))
    return total, first


def eval_Q_sigma(f1, f2, v: np.ndarray, params: KernelParams,
                 tol: float = 1e-4, *, n_r: int = 20,
                 n_sphere: tuple[int, int] = (10, 12),
                 n_theta_panels: int = 0, n_phi: int = 8,
                 r_max: float | None = None,
                 return_error: bool = False):
    """Collision operator at a point by direct 5D quadrature.

    The value is Richardson-extrapolated in theta_min: the neglected cone
    below theta_min contributes ~ C theta_min^(2-2s) after azimuthal
    symmetrization, which equals the first dyadic panel's contribution
    divided by (2^(2-2s) - 1).
    """
    total, first = _sigma_core(f1, f2, v, params, n_r=n_r, n_sphere=n_sphere,
                               n_theta_panels=n_theta_panels, n_phi=n_phi,
                               r_max=r_max, mode="full")
    factor = 2.0 ** (2.0 - 2.0 * params.s) - 1.0
    correction = first / factor
    value = total + correction
    err = abs(correction)
    if return_error:
        return value, err
    return value


def collision_bracket_integral(f1, v: np.ndarray, params: KernelParams, *,
                               n_r: int = 20, n_sphere: tuple[int, int] = (10, 12),
                               n_theta_panels: int = 0, n_phi: int = 8,
                               r_max: float | None = None) -> float:
    """int int (f1(vstar') - f1(vstar)) B dsigma dvstar, the 5D oracle for
    the cancellation constant.

    The gain term concentrates near theta = pi at large |vstar - v| and
    decays only like rho^(-1-2s) there, so the vstar truncation radius is
    Richardson-extrapolated (two runs at R and 2R, known exponent 2s).
    """
    if r_max is None:
        r_max = 1.5 * _rho_max(f1, None, np.asarray(v, dtype=float))
    vals = []
    for rm, nr in ((r_max, n_r), (2.0 * r_max, n_r + n_r // 2)):
        total, first = _sigma_core(f1, None, v, params, n_r=nr,
                                   n_sphere=n_sphere,
                                   n_theta_panels=n_theta_panels, n_phi=n_phi,
                                   r_max=rm, mode="cancellation")
        factor = 2.0 ** (2.0 - 2.0 * params.s) - 1.0
        vals.append(total + first / factor)
    i1, i2 = vals
    return i2 + (i2 - i1) / (2.0 ** (2.0 * params.s) - 1.0)


def conservation_functional(f, phi, params: KernelParams, *,
                            n_v: int = 6, n_r: int = 6,
                            n_sphere: tuple[int, int] = (4, 6),
                            n_phi: int = 4, v_max: float | None = None,
                            theta_floor: float = 0.3) -> float:
    """Symmetrized weak form int phi(v) Q(f,f)(v) dv.

    Computed as (1/4) * intint_{v,vstar} int_sigma
    (f f_star' g' ... ) -- concretely the symmetrized bracket
    (f(v')f(vstar') - f(v)f(vstar)) * (phi(v) + phi(vstar) - phi(v')
    - phi(vstar')) * B / 4, whose integrand vanishes pointwise for
    collision invariants, so the result is round-off small regardless of
    quadrature resolution.  theta is kept away from the grazing cone where
    B blows up; the pointwise zero makes the cutoff harmless for
    invariants while keeping non-invariant phi values finite.
    """
    tiny = 1e-12
    if v_max is None:
        c = getattr(f, "center", np.zeros(3))
        v_max = float(np.linalg.norm(c)) + f.support_radius(tiny)

    om_v, w_v = sphere_rule(n_sphere[0], n_sphere[1])
    edges = graded_edges(0.0, v_max, n_r, grade_left=False)
    r, w_r = panel_rule(edges, 3)
    # outer v nodes (polar around origin)
    v_nodes = r[:, None, None] * om_v[None, :, :]
    v_nodes = v_nodes.reshape(-1, 3)
    w_vn = (w_r[:, None] * r[:, None] ** 2 * w_v[None, :]).ravel()

    # vstar nodes relative to each v: rho, direction, handled pairwise
    om_s, w_s = sphere_rule(n_sphere[0], n_sphere[1])
    rho, w_rho = panel_rule(graded_edges(0.0, 2 * v_max, n_r,
                                         grade_left=True), 3)

    t_edges = graded_edges(theta_floor, np.pi - 1e-9, 4, grade_left=True,
                           grade_right=True)
    theta, w_th = panel_rule(t_edges, 3)
    phi_az = (np.arange(n_phi) + 0.5) * (2 * np.pi / n_phi)
    w_phi = 2 * np.pi / n_phi
    e1, e2 = plane_frames(om_s)
    ct, st = np.cos(theta), np.sin(theta)
    sig = (-ct[None, :, None, None] * om_s[:, None, None, :]
           + st[None, :, None, None]
           * (np.cos(phi_az)[None, None, :, None] * e1[:, None, None, :]
              + np.sin(phi_az)[None, None, :, None] * e2[:, None, None, :]))
    ang = angular_cross_section(theta, params) * st * w_th

    total = 0.0
    for vi, wv in zip(v_nodes, w_vn):
        vstar = vi[None, None, :] + rho[:, None, None] * om_s[None, :, :]
        mid = vi[None, None, :] + 0.5 * rho[:, None, None] * om_s[None, :, :]
        half = 0.5 * rho[:, None, None, None, None]
        vp = mid[:, :, None, None, :] + half * sig[None, ...]
        vsp = mid[:, :, None, None, :] - half * sig[None, ...]
        gain = f(vp) * f(vsp)
        loss = (f(vstar) * float(f(vi)))[:, :, None, None]
        dphi = (float(phi(vi)) + phi(vstar)[:, :, None, None]
                - phi(vp) - phi(vsp))
        w_geom = w_rho * rho**2 * rho**params.gamma
        contrib = np.einsum("rotp,r,o,t->", (gain - loss) * dphi,
                            w_geom, w_s, ang) * w_phi
        total += wv * float(contrib) * 0.25
    return total
