import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boltzlab.grid import (Bump, Distribution, Gaussian, LinearCombination,
                           Mollifier, PolyDecay, VelocityGrid, chi,
                           eval_analytic, maxwellian, mollify)


def test_grid_geometry():
    g = VelocityGrid(16, 4.0)
    assert g.dv == pytest.approx(0.5)
    assert g.cell_volume == pytest.approx(0.125)
    assert g.nodes().shape == (16, 16, 16, 3)
    assert g.axis()[0] == pytest.approx(-4.0 + 0.25)  # cell-centered


def test_gaussian_mass_oracle():
    # [DERIVED] int A exp(-b|v|^2) dv = A (pi/b)^{3/2}
    f = Gaussian(2.0, 1.5)
    grid = VelocityGrid(48, 6.0)
    mass = np.sum(f(grid.nodes())) * grid.cell_volume
    assert mass == pytest.approx(2.0 * (np.pi / 1.5) ** 1.5, rel=1e-6)


def test_maxwellian_moments():
    # [DERIVED] unit-density Maxwellian at temperature T: int |v|^2 f = 3T
    grid = VelocityGrid(48, 8.0)
    d = Distribution.from_function(grid, maxwellian(1.3))
    mom = d.moments()
    assert mom["mass"] == pytest.approx(1.0, rel=1e-6)
    assert mom["energy"] == pytest.approx(3.0 * 1.3, rel=1e-5)
    for ax in ("x", "y", "z"):
        assert abs(mom[f"momentum_{ax}"]) < 1e-10


def test_mollifier_unit_mass_and_plateau():
    psi = Mollifier(0.7)
    grid = VelocityGrid(64, 0.8)
    mass = np.sum(psi(grid.nodes())) * grid.cell_volume
    assert mass == pytest.approx(1.0, rel=2e-3)
    # constant (= max) on |v| <= eps/2, zero outside eps
    v_in = np.array([[0.1, 0.0, 0.0], [0.0, 0.3, 0.1]])
    vals = psi(v_in)
    assert vals[0] == pytest.approx(vals[1], rel=1e-12)
    assert psi(np.array([0.71, 0.0, 0.0])) == 0.0


def test_chi_cutoff_values():
    assert chi(np.array([0.2, 0.2, 0.2])) == pytest.approx(1.0)
    assert chi(np.array([1.5, 0.0, 0.0])) == 0.0
    mid = chi(np.array([0.75, 0.0, 0.0]))
    assert 0.0 < mid < 1.0


def test_distribution_spline_eval():
    grid = VelocityGrid(32, 5.0)
    f = Gaussian(1.0, 1.0)
    d = Distribution.from_function(grid, f)
    pts = np.array([[0.3, -0.7, 1.1], [1.234, 0.5, -2.0]])
    assert np.allclose(d(pts), f(pts), atol=5e-4)


def test_linear_combination_and_decay():
    f = LinearCombination([(2.0, Gaussian(1.0, 1.0)),
                           (-0.5, PolyDecay(6.0))])
    v = np.array([0.4, -0.2, 0.9])
    expected = 2.0 * Gaussian(1.0, 1.0)(v) - 0.5 * PolyDecay(6.0)(v)
    assert f(v) == pytest.approx(expected, rel=1e-14)
    amp, rate = f.decay()
    assert amp > 0 and rate > 0


def test_bump_support():
    b = Bump(1.2, center=np.array([2.0, 0.0, 0.0]))
    assert b(np.array([2.0, 0.0, 0.0])) > 0
    assert b(np.array([3.3, 0.0, 0.0])) == 0.0


def test_mollify_preserves_mass():
    grid = VelocityGrid(24, 5.0)
    d = Distribution.from_function(grid, Gaussian(1.0, 1.0))
    m = mollify(d, 0.5)
    assert (np.sum(m.values) * grid.cell_volume
            == pytest.approx(np.sum(d.values) * grid.cell_volume, rel=1e-8))


def test_eval_analytic_matches_nodes():
    grid = VelocityGrid(8, 3.0)
    f = Gaussian(1.0, 0.8)
    d = eval_analytic(f, grid)
    assert np.allclose(d.values, f(grid.nodes()))


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(-2.0, 2.0))
def test_mollifier_bounds_property(eps, x):
    psi = Mollifier(eps)
    val = float(psi(np.array([x, 0.0, 0.0])))
    assert 0.0 <= val <= 1.0 / eps**3 * 10.0
    if abs(x) > eps:
        assert val == 0.0
