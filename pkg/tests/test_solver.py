import numpy as np
import pytest

from boltzlab.carleman import eval_Q
from boltzlab.grid import Distribution, Gaussian, VelocityGrid, maxwellian
from boltzlab.kernel import KernelParams
from boltzlab.norms import NormSpec
from boltzlab.solver import (GridCollisionOperator, LinearOperator,
                             RegularizationParams, estimate_operator_norm,
                             monitor, solve_linear, step)

PARAMS = KernelParams(gamma=-1.0, s=0.5)
SPEC = NormSpec(k=1.0, n=2.0, m=9.0)


@pytest.fixture(scope="module")
def grid():
    return VelocityGrid(16, 4.0)


@pytest.fixture(scope="module")
def collision(grid):
    return GridCollisionOperator(grid, PARAMS)


def test_regularization_params_validation():
    RegularizationParams(sigma=0.5, eps=0.1, delta=0.2)
    with pytest.raises(ValueError):
        RegularizationParams(sigma=1.5)
    with pytest.raises(ValueError):
        RegularizationParams(eps=-0.1)


def test_grid_operator_matches_pointwise_carleman(grid, collision):
    f1 = Gaussian(1.0, 1.0, center=np.array([0.6, 0.0, 0.0]))
    f2 = Gaussian(0.8, 1.3, center=np.array([-0.4, 0.3, 0.0]))
    collision.set_g(f1(grid.nodes()))
    q_grid = collision.apply(f2(grid.nodes()))
    scale = float(np.max(np.abs(q_grid)))
    axis = grid.axis()
    # compare at actual (cell-centered) nodes
    for idx in ((8, 8, 8), (9, 9, 7), (6, 9, 8)):
        v = np.array([axis[idx[0]], axis[idx[1]], axis[idx[2]]])
        q_ref = eval_Q(f1, f2, v, PARAMS)
        assert abs(q_grid[idx] - q_ref) <= 1e-2 * scale


def test_grid_operator_near_zero_on_maxwellian(grid, collision):
    m = maxwellian(1.0)(grid.nodes())
    collision.set_g(m)
    q = collision.apply(m)
    assert np.max(np.abs(q)) <= 5e-3 * np.max(m)


def test_grid_operator_conserves_mass(grid, collision):
    # int Q(f1, f2) dv = 0 for any pair; use f1 != f2 so Q itself is far
    # from zero and the relative check is meaningful
    f1 = Gaussian(1.0, 1.0, center=np.array([0.6, 0.0, 0.0]))(grid.nodes())
    f2 = Gaussian(0.8, 1.3)(grid.nodes())
    collision.set_g(f1)
    q = collision.apply(f2)
    assert abs(np.sum(q)) <= 1e-2 * np.sum(np.abs(q))


def test_apply_split_sums(grid, collision):
    f = Gaussian(1.0, 1.2)(grid.nodes())
    collision.set_g(f)
    qs, qns = collision.apply_split(f)
    assert np.allclose(qs + qns, collision.apply(f), atol=1e-12)


def test_linear_operator_laplacian_only(grid):
    # sigma = 0 turns off the collision term: L = -(eps+1) Lap
    reg = RegularizationParams(sigma=0.0, eps=0.0, delta=0.1)
    op = LinearOperator(grid, PARAMS, reg, collision=None)
    op.set_g(Distribution.from_function(grid, Gaussian(1.0, 1.0)))
    f = Gaussian(1.0, 1.0)(grid.nodes())
    lf = op.apply(f)
    # -Lap of a positive bump is positive at its center
    center = (grid.n // 2,) * 3
    assert lf[center] > 0
    nrm = estimate_operator_norm(op)
    assert nrm > 0 and np.isfinite(nrm)


def test_step_decays_heat_semigroup(grid):
    reg = RegularizationParams(sigma=0.0, eps=0.0, delta=0.1)
    op = LinearOperator(grid, PARAMS, reg, collision=None)
    op.set_g(Distribution.from_function(grid, Gaussian(1.0, 1.0)))
    f = Gaussian(1.0, 1.0)(grid.nodes())
    dt = 0.2 / estimate_operator_norm(op)
    f1 = step(op, f, dt)
    assert np.max(np.abs(f1)) < np.max(np.abs(f))


def test_solve_linear_records_monitors(grid, collision):
    f_in = Distribution.from_function(grid, maxwellian(1.0))
    traj = solve_linear(f_in, f_in, 0.05, RegularizationParams(), PARAMS,
                        SPEC, collision=collision, n_slices=5)
    assert len(traj.times) == len(traj.slices)
    assert traj.times[0] == 0.0 and traj.times[-1] == pytest.approx(0.05)
    hyd = monitor(traj, "hydro")
    assert hyd["mass_drift_per_unit_time"] < 1e-2
    bar = monitor(traj, "barrier", spec=SPEC, g_traj=traj)
    assert np.isfinite(bar["fitted_constant"])
    en = monitor(traj, "energy", spec=SPEC, g_traj=traj)
    assert np.isfinite(en["fitted_constant"])


def test_trajectory_save_roundtrip(tmp_path, grid, collision):
    f_in = Distribution.from_function(grid, maxwellian(1.0))
    traj = solve_linear(f_in, f_in, 0.02, RegularizationParams(), PARAMS,
                        SPEC, collision=collision, n_slices=3)
    prefix = str(tmp_path / "traj")
    traj.save(prefix)
    raw = np.fromfile(prefix + ".bin", dtype=np.float64)
    assert raw.size == len(traj.slices) * grid.n**3
    import json
    with open(prefix + ".json") as fh:
        side = json.load(fh)
    assert len(side["times"]) == len(traj.times)


def test_solve_linear_blowup_guard(grid, collision):
    f_in = Distribution.from_function(grid, maxwellian(1.0))
    traj = solve_linear(f_in, f_in, 0.05, RegularizationParams(), PARAMS,
                        SPEC, collision=collision, norm_ceiling=1e-12)
    assert traj.monitors.get("blowup") is True
