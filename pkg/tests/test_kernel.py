import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import erf

from boltzlab.grid import Gaussian
from boltzlab.kernel import (KernelParams, compute_CS, cs_closed_form,
                             cs_formula, eval_B, eval_B_sigma,
                             gamma_convolution)


def test_kernel_params_validation():
    with pytest.raises(ValueError):
        KernelParams(gamma=-3.5, s=0.5)
    with pytest.raises(ValueError):
        KernelParams(gamma=-1.0, s=1.2)


def test_cs_closed_form_oracles():
    # [DERIVED] C_S(-1, 1/2) = pi^2 exactly; the other two frozen from the
    # gamma-function closed form, cross-checked against direct angular
    # quadrature (cs_formula) below.
    assert cs_closed_form(KernelParams(gamma=-1.0, s=0.5)) == pytest.approx(
        np.pi**2, rel=1e-12)
    assert cs_closed_form(KernelParams(gamma=-0.5, s=0.25)) == pytest.approx(
        15.056274237662743, rel=1e-12)
    assert cs_closed_form(KernelParams(gamma=-0.5, s=0.75)) == pytest.approx(
        16.75516081914556, rel=1e-12)


@pytest.mark.parametrize("gamma,s", [(-1.0, 0.5), (-0.5, 0.25),
                                     (-0.5, 0.75), (-2.0, 0.4)])
def test_cs_quadrature_matches_closed_form(gamma, s):
    p = KernelParams(gamma=gamma, s=s)
    assert cs_formula(p) == pytest.approx(cs_closed_form(p), rel=1e-6)


def test_compute_cs_validates():
    c = compute_CS(KernelParams(gamma=-1.0, s=0.5))
    assert c.value == pytest.approx(np.pi**2, rel=1e-8)
    assert c.provenance


def test_eval_b_pinned_value():
    # [DERIVED] frozen regression value at r=2, theta=pi/2, gamma=-1, s=1/2
    p = KernelParams(gamma=-1.0, s=0.5)
    assert float(eval_B(2.0, np.pi / 2, p)) == pytest.approx(
        0.12900613773279798, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 5.0), st.floats(0.05, 1.5),
       st.floats(1.1, 4.0))
def test_eval_b_homogeneity(r, theta, lam):
    # [TRIVIAL] B(lam r, theta) = lam^gamma B(r, theta)
    p = KernelParams(gamma=-1.0, s=0.5)
    lhs = float(eval_B(lam * r, theta, p))
    rhs = lam**p.gamma * float(eval_B(r, theta, p))
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_eval_b_sigma_angular_singularity():
    # non-cutoff: kernel blows up like theta^{-2-2s} as theta -> 0
    p = KernelParams(gamma=-1.0, s=0.5)
    small, smaller = 1e-2, 1e-3
    ratio = float(eval_B_sigma(1.0, smaller, p) / eval_B_sigma(1.0, small, p))
    assert ratio == pytest.approx(10.0 ** (2 + 2 * p.s), rel=0.05)


def test_gamma_convolution_coulomb_oracle():
    # [DERIVED] int exp(-|z|^2)/|v-z| dz = pi^{3/2} erf(|v|)/|v|
    f = Gaussian(1.0, 1.0)
    for r, tol in ((0.5, 1e-8), (1.5, 1e-5), (3.0, 1e-2)):
        v = np.array([r, 0.0, 0.0])
        exact = np.pi**1.5 * erf(r) / r
        assert gamma_convolution(f, v, -1.0) == pytest.approx(exact, rel=tol)
