import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import i0e

from boltzlab.carleman import (AnnularScheme, PlaneQuadrature, eval_K,
                               eval_Q, eval_Qns, eval_Qs, plane_integral)
from boltzlab.grid import Gaussian
from boltzlab.kernel import KernelParams, cs_closed_form, gamma_convolution
from boltzlab.sigma import eval_Q_sigma


def _plane_oracle(beta, b_par, b_perp, p):
    """Independent oracle for int_{w perp omega} e^{-beta|base+w|^2} |w|^p dw
    with base = b_par*omega + b_perp (2D polar + modified Bessel)."""
    def integrand(rho):
        # e^{-beta(rho^2+b^2)} * 2*pi*I0(2*beta*rho*b) * rho^{p+1}
        z = 2.0 * beta * rho * b_perp
        return (2 * np.pi * i0e(z)
                * np.exp(-beta * (rho**2 + b_perp**2) + z) * rho ** (p + 1))
    val, _ = quad(integrand, 0.0, 12.0, limit=200)
    return np.exp(-beta * b_par**2) * val


@pytest.mark.parametrize("gamma,s", [(-1.0, 0.5), (-0.5, 0.25)])
def test_plane_integral_gaussian_oracle(gamma, s):
    params = KernelParams(gamma=gamma, s=s)
    f = Gaussian(1.0, 0.9)
    v = np.array([0.7, -0.2, 0.3])
    omega = np.array([0.0, 0.0, 1.0])
    got = plane_integral(f, v, omega, params)
    b_par = v[2]
    b_perp = float(np.hypot(v[0], v[1]))
    want = _plane_oracle(0.9, b_par, b_perp, gamma + 2 * s + 1)
    assert got == pytest.approx(want, rel=1e-6)


def test_eval_k_scaling_and_reflection():
    params = KernelParams(gamma=-1.0, s=0.5)
    f = Gaussian(1.0, 1.0)
    v = np.array([0.3, 0.1, 0.0])
    vp = np.array([0.3, 0.1, 1.2])
    k1 = eval_K(f, v, vp, params)
    # prefactor |v-v'|^{-3-2s}; the plane integral is unchanged along the ray
    vp2 = v + 2.0 * (vp - v)
    assert eval_K(f, v, vp2, params) == pytest.approx(
        k1 * 2.0 ** (-3 - 2 * params.s), rel=1e-10)
    # reflection identity K(v, v') = K(v, 2v - v')
    assert eval_K(f, v, 2 * v - vp, params) == pytest.approx(k1, rel=1e-10)


def test_eval_k_positive_for_nonnegative_f():
    params = KernelParams(gamma=-0.5, s=0.75)
    f = Gaussian(1.0, 1.0)
    assert eval_K(f, np.zeros(3), np.array([1.0, 0.0, 0.0]), params) > 0


def test_eval_qns_closed_form():
    # Q_ns(f1, f2)(v) = C_S * f2(v) * (|.|^gamma conv f1)(v)
    params = KernelParams(gamma=-1.0, s=0.5)
    f1 = Gaussian(1.0, 1.0)
    f2 = Gaussian(0.7, 1.4)
    v = np.array([0.5, -0.3, 0.2])
    want = (cs_closed_form(params) * float(f2(v))
            * gamma_convolution(f1, v, params.gamma))
    assert eval_Qns(f1, f2, v, params) == pytest.approx(want, rel=1e-4)


def test_eval_q_splits_into_parts():
    params = KernelParams(gamma=-1.0, s=0.5)
    f1, f2 = Gaussian(1.0, 1.0), Gaussian(1.0, 1.0)
    v = np.array([0.4, 0.0, -0.6])
    qs = eval_Qs(f1, f2, v, params)
    qns = eval_Qns(f1, f2, v, params)
    assert eval_Q(f1, f2, v, params) == pytest.approx(qs + qns, rel=1e-12)


def test_eval_qs_rejects_nontrivial_btilde():
    params = KernelParams(gamma=-1.0, s=0.5, btilde=lambda c: 1.0 + 0 * c)
    with pytest.raises(NotImplementedError):
        eval_Qs(Gaussian(), Gaussian(), np.zeros(3), params)


def test_carleman_matches_sigma_single_point():
    # spot check of cross-representation agreement (full sweep is in the
    # acceptance tests)
    params = KernelParams(gamma=-1.0, s=0.5)
    f1 = Gaussian(1.0, 1.0, center=np.array([0.6, 0.0, 0.0]))
    f2 = Gaussian(0.8, 1.3, center=np.array([-0.4, 0.3, 0.0]))
    v = np.array([0.5, 0.2, -0.1])
    q_c = eval_Q(f1, f2, v, params, scheme=AnnularScheme(n_gl=7),
                 n_sphere=(16, 16), pq=PlaneQuadrature(16, 26, 7))
    q_s = eval_Q_sigma(f1, f2, v, params, n_r=24, n_sphere=(16, 18), n_phi=8)
    assert q_c == pytest.approx(q_s, rel=2e-3, abs=1e-6)
