import math

import numpy as np
import pytest

import _ksf as ksf


@pytest.fixture
def grid():
    return ksf.Grid2D(32, 32, 1.0, 1.0)


def test_lambda1_unit_square(grid):
    # smallest nonzero Neumann eigenvalue of [0,1]^2 is pi^2
    assert ksf.lambda1(grid) == pytest.approx(math.pi**2, rel=1e-3)


def test_heat_semigroup_preserves_mass(grid):
    rng = np.random.default_rng(7)
    f = rng.uniform(0.5, 1.5, size=(32, 32))
    g = ksf.heat_semigroup(grid, f, 0.3)
    assert ksf.integrate(grid, g) == pytest.approx(ksf.integrate(grid, f), rel=1e-13)


def test_constant_is_heat_fixed_point(grid):
    f = np.full((32, 32), 2.5)
    g = ksf.heat_semigroup(grid, f, 1.0)
    assert np.max(np.abs(g - 2.5)) < 1e-13


def test_run_conserves_mass(grid):
    u0 = np.full((32, 32), 1.0)
    v0 = np.zeros((32, 32))
    traj = ksf.run(grid, u0, v0, t_end=0.05)
    assert traj.status == ksf.RunStatus.Completed
    assert traj.records[-1].mass_u == pytest.approx(1.0, abs=1e-12)


def test_young_and_malpha():
    lhs, rhs = ksf.young_bound(2.0, 3.0, 0.5, 2.0)
    assert lhs <= rhs
    # c1 = c2 = 1, beta = 1/2: M0 = 2 + 2 * (1/4) * 2 = 3
    assert ksf.malpha_bound(1.0, 1.0, 0.5) == pytest.approx(3.0)


def test_convolution_closed_form():
    # alpha=beta=0, gamma=2, delta=1, t=1 integrates to e^{-1} - e^{-2}
    val = ksf.convolution_integral(0.0, 0.0, 2.0, 1.0, 1.0)
    assert val == pytest.approx(math.exp(-1) - math.exp(-2), abs=1e-10)
