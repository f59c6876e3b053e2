import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boltzlab.grid import Gaussian, LinearCombination, maxwellian
from boltzlab.kernel import KernelParams
from boltzlab.sigma import (CollisionPair, conservation_functional,
                            eval_Q_sigma, post_collision)

vec3 = st.tuples(st.floats(-3.0, 3.0), st.floats(-3.0, 3.0),
                 st.floats(-3.0, 3.0)).map(np.array)


@settings(max_examples=60, deadline=None)
@given(vec3, vec3, vec3)
def test_post_collision_conserves_momentum_energy(v, v_star, raw):
    # [TRIVIAL] elastic collision invariants, to near machine precision
    if np.linalg.norm(raw) < 1e-3 or np.allclose(v, v_star, atol=1e-6):
        return
    sigma = raw / np.linalg.norm(raw)
    vp, vsp = post_collision(v, v_star, sigma)
    assert np.allclose(vp + vsp, v + v_star, atol=1e-12)
    e_in = np.sum(v**2) + np.sum(v_star**2)
    e_out = np.sum(vp**2) + np.sum(vsp**2)
    assert e_out == pytest.approx(e_in, abs=1e-11 * max(1.0, e_in))


def test_collision_pair_accessors():
    pair = CollisionPair(v=np.array([1.0, 0.0, 0.0]),
                         v_star=np.array([-1.0, 0.0, 0.0]),
                         sigma=np.array([0.0, 1.0, 0.0]))
    assert -1.0 <= pair.cos_theta <= 1.0
    assert np.allclose(pair.v_prime + pair.v_star_prime,
                       pair.v + pair.v_star)


def test_equilibrium_annihilates_q():
    # Q(M, M) = 0 for a Maxwellian
    params = KernelParams(gamma=-1.0, s=0.5)
    m = maxwellian(1.0)
    for v in (np.zeros(3), np.array([0.8, -0.3, 0.5])):
        q = eval_Q_sigma(m, m, v, params, n_r=12, n_sphere=(8, 10), n_phi=6)
        assert abs(q) < 1e-6


def test_conservation_functional_invariants():
    # f must be far from any Maxwellian, otherwise Q(f, f) ~ 0 pointwise
    # and even the control moment vanishes
    params = KernelParams(gamma=-1.0, s=0.5)
    f = LinearCombination([
        (1.0, Gaussian(1.0, 1.0, center=np.array([0.7, 0.0, 0.0]))),
        (0.6, Gaussian(0.8, 1.4, center=np.array([-0.5, 0.4, 0.0]))),
    ])
    mass = conservation_functional(f, lambda v: np.ones(v.shape[:-1]), params)
    energy = conservation_functional(f, lambda v: np.sum(v * v, -1), params)
    control = conservation_functional(f, lambda v: np.sum(v * v, -1) ** 2,
                                      params)
    assert abs(control) > 1e-4  # the quadrature can see non-invariants
    assert abs(mass) <= 1e-8 * abs(control)
    assert abs(energy) <= 1e-8 * abs(control)


def test_eval_q_sigma_error_estimate():
    params = KernelParams(gamma=-1.0, s=0.5)
    f = Gaussian(1.0, 1.0)
    q, err = eval_Q_sigma(f, f, np.array([0.5, 0.0, 0.0]), params,
                          n_r=12, n_sphere=(8, 10), n_phi=6,
                          return_error=True)
    assert np.isfinite(q) and err >= 0.0
