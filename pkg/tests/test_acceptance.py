"""Acceptance gate: end-to-end criteria for the collision-operator lab.

Each test is numbered; together they cover cross-representation agreement,
equilibrium/conservation, the exact appendix identity, the kernel-bound and
proposition suites, interpolation, the contracting Picard iteration with
positivity, the fitted a priori constants, and report determinism.
"""

import numpy as np
import pytest

from boltzlab.carleman import AnnularScheme, PlaneQuadrature, eval_Q
from boltzlab.grid import (Distribution, Gaussian, LinearCombination,
                           PolyDecay, VelocityGrid, maxwellian)
from boltzlab.kernel import KernelParams
from boltzlab.lab import LabConfig, verify
from boltzlab.norms import NormSpec, x_norm
from boltzlab.sigma import conservation_functional, eval_Q_sigma
from boltzlab.solver import (GridCollisionOperator, LinearOperator,
                             RegularizationParams, estimate_operator_norm,
                             fit_contraction_constant, iterate, monitor,
                             solve_linear)

# frozen evaluator settings for cross-representation comparisons
SIGMA_KW = dict(n_r=24, n_sphere=(16, 18), n_phi=8)
CARLEMAN_KW = dict(scheme=AnnularScheme(n_gl=7), n_sphere=(16, 16),
                   pq=PlaneQuadrature(16, 26, 7))
GAMMA_S_PAIRS = [(-0.5, 0.25), (-1.0, 0.5), (-0.5, 0.75)]
SEED = 20260826

F1 = Gaussian(1.0, 1.0, center=np.array([0.6, 0.0, 0.0]))
F2 = Gaussian(0.8, 1.3, center=np.array([-0.4, 0.3, 0.0]))


# -- solver-scale fixtures (shared across criteria 7 and 8) ----------------

SOLVER_PARAMS = KernelParams(gamma=-1.0, s=0.5)
SPEC = NormSpec(k=1.0, n=2.0, m=9.0)
REG = RegularizationParams()


@pytest.fixture(scope="module")
def solver_setup():
    grid = VelocityGrid(16, 4.0)
    f_fun = LinearCombination([(1.0, maxwellian(1.0)),
                               (0.01, PolyDecay(8.0))])
    f_in = Distribution.from_function(grid, f_fun)
    collision = GridCollisionOperator(grid, SOLVER_PARAMS)
    return grid, f_in, collision


@pytest.mark.parametrize("gamma,s", GAMMA_S_PAIRS)
def test_criterion_1_cross_representation(gamma, s):
    """sigma- and Carleman-representation evaluators agree to 1e-3
    (relative to the largest |Q| in the sweep) at 20 points for each
    (gamma, s)."""
    params = KernelParams(gamma=gamma, s=s)
    rng = np.random.default_rng(SEED)
    pts = rng.normal(0.0, 1.0, (20, 3))
    q_car = np.array([eval_Q(F1, F2, v, params, **CARLEMAN_KW) for v in pts])
    q_sig = np.array([eval_Q_sigma(F1, F2, v, params, **SIGMA_KW)
                      for v in pts])
    scale = np.max(np.abs(q_car))
    assert scale > 0
    assert np.max(np.abs(q_car - q_sig)) / scale <= 1e-3


def test_criterion_2_equilibrium_and_conservation():
    """Q(M, M) vanishes to 1e-4 * ||M||_inf at 20 points, and the collision
    invariants 1, v_i, |v|^2 integrate to <= 1e-6 relative to a
    non-invariant control moment."""
    params = KernelParams(gamma=-1.0, s=0.5)
    m = maxwellian(1.0)
    sup_m = float(m(np.zeros(3)))
    rng = np.random.default_rng(SEED)
    pts = rng.normal(0.0, 1.2, (20, 3))
    worst = max(abs(eval_Q_sigma(m, m, v, params, n_r=12,
                                 n_sphere=(8, 10), n_phi=6)) for v in pts)
    assert worst <= 1e-4 * sup_m

    f = LinearCombination([(1.0, Gaussian(1.0, 1.0,
                                          center=np.array([0.7, 0.0, 0.0]))),
                           (0.6, Gaussian(0.8, 1.4,
                                          center=np.array([-0.5, 0.4, 0.0])))])
    invariants = {
        "mass": lambda v: np.ones(v.shape[:-1]),
        "vx": lambda v: v[..., 0],
        "vy": lambda v: v[..., 1],
        "vz": lambda v: v[..., 2],
        "energy": lambda v: np.sum(v * v, axis=-1),
    }
    control = conservation_functional(f, lambda v: np.sum(v * v, -1) ** 2,
                                      params)
    assert abs(control) > 1e-2
    for name, phi in invariants.items():
        val = conservation_functional(f, phi, params)
        assert abs(val) <= 1e-6 * abs(control), name


def test_criterion_3_appendix_exact_case_and_sweep():
    """Exact sphere/plane identity: LHS = 12 pi^2 and ratio = 1.6 pi within
    1%; a 200-sample random sweep keeps the ratio stable to 20% under
    quadrature refinement and rescaling."""
    rep = verify("appendix", LabConfig(fast=False, refine=True))
    assert rep.passed
    mx = rep.metrics
    assert mx["n_samples"] >= 200
    assert mx["exact_lhs"] == pytest.approx(12 * np.pi**2, rel=1e-2)
    assert mx["exact_ratio"] == pytest.approx(1.6 * np.pi, rel=1e-2)
    assert mx["refinement_drift"] < 0.2
    assert mx["scaling_drift"] < 0.2


@pytest.mark.parametrize("suite", ["kernel-annulus", "kernel-column",
                                   "kernel-cancellation",
                                   "kernel-difference"])
def test_criterion_4_kernel_bounds(suite):
    """All four kernel-bound suites: finite ratios, bounded by the ceiling,
    and <20% drift of the worst ratio under quadrature refinement."""
    rep = verify(suite, LabConfig(fast=False, refine=True))
    assert rep.passed, rep.metrics
    assert rep.metrics["all_finite"]
    assert rep.metrics["refinement_drift"] < 0.2


def test_criterion_5_interpolation():
    """Moment-interpolation and embedding ratios bounded and stable under
    grid refinement."""
    rep = verify("interpolation", LabConfig(fast=False, refine=True))
    assert rep.passed, rep.metrics
    assert rep.metrics["all_finite"]


@pytest.mark.parametrize("suite", ["prop-i", "prop-ii", "prop-iii",
                                   "prop-iv", "prop-v"])
def test_criterion_6_proposition_bounds(suite):
    """Five a priori operator estimates hold with finite, stable ratios.
    The pairing estimate with derivatives (prop-iv) is run in its
    spatially homogeneous variant."""
    rep = verify(suite, LabConfig(fast=True, refine=True))
    assert rep.passed, rep.metrics
    assert rep.metrics["all_finite"]
    if suite == "prop-iv":
        assert any("homogeneous" in n for n in rep.notes)


def test_criterion_7_picard_contraction(solver_setup):
    """Picard iteration at T = T2/2 on a perturbed Maxwellian with
    polynomial tail: fitted constant finite, contraction ratios <= 0.9,
    ratios improve when T is halved, and no slice goes negative beyond
    -1e-8 of its maximum."""
    grid, f_in, collision = solver_setup
    fitted_c = fit_contraction_constant(f_in, SOLVER_PARAMS, SPEC, REG,
                                        collision=collision)
    assert np.isfinite(fitted_c) and fitted_c > 0
    xn = x_norm(f_in, SPEC)
    t2 = min(0.5, 1.0 / (4.0 * fitted_c * (1.0 + xn) ** 2))

    _, state, _ = iterate(f_in, t2 / 2, SOLVER_PARAMS, SPEC, reg=REG,
                          fitted_C=fitted_c, collision=collision)
    assert state.T2 == pytest.approx(t2)
    assert len(state.ratios) >= 1
    assert all(r <= 0.9 for r in state.ratios), state.ratios
    assert state.positivity >= -1e-8

    _, state_half, _ = iterate(f_in, t2 / 4, SOLVER_PARAMS, SPEC, reg=REG,
                               fitted_C=fitted_c, collision=collision)
    assert (np.median(state_half.ratios) < np.median(state.ratios))
    assert state_half.positivity >= -1e-8


def test_criterion_8_apriori_monitors(solver_setup):
    """Fitted barrier and Gronwall constants are finite and change by <50%
    when dt is halved; mass drift stays within 1e-3 per unit time."""
    grid, f_in, collision = solver_setup
    op = LinearOperator(grid, SOLVER_PARAMS, REG, collision=collision)
    op.set_g(f_in)
    dt0 = 0.2 / estimate_operator_norm(op)
    consts = {}
    for label, dt in (("dt", dt0), ("dt/2", dt0 / 2)):
        traj = solve_linear(f_in, f_in, 0.25, REG, SOLVER_PARAMS, SPEC,
                            dt=dt, collision=collision)
        bar = monitor(traj, "barrier", spec=SPEC, g_traj=traj)
        en = monitor(traj, "energy", spec=SPEC, g_traj=traj)
        assert np.isfinite(bar["fitted_constant"])
        assert np.isfinite(en["fitted_constant"])
        consts[label] = (bar["fitted_constant"], en["fitted_constant"])
        hyd = monitor(traj, "hydro")
        assert hyd["mass_drift_per_unit_time"] <= 1e-3
    for c1, c2 in zip(consts["dt"], consts["dt/2"]):
        denom = max(abs(c1), abs(c2), 1e-12)
        assert abs(c2 - c1) / denom < 0.5 or max(abs(c1), abs(c2)) < 1e-9


def test_criterion_9_report_determinism(tmp_path):
    """Verification reports are bit-identical across reruns with the same
    seed (wall time lives only in a sidecar, never in the report)."""
    cfg = LabConfig(fast=True, refine=False)
    for suite in ("equilibrium", "conservation"):
        a = verify(suite, cfg).to_json()
        b = verify(suite, cfg).to_json()
        assert a == b
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        p1.write_text(a)
        p2.write_text(b)
        assert p1.read_bytes() == p2.read_bytes()
        assert "wall_time" not in a
