import math

import numpy as np
import pytest

from kreinbem import geometry as G
from kreinbem import volume as V
from kreinbem.errors import GridTooCoarse, SupportTooWide

DISK = G.DomainSpec.disk(1.0, 8)


@pytest.fixture(scope="module")
def grid_h01():
    return G.interior_grid(DISK, h=0.01, margin=0.02)


@pytest.fixture(scope="module")
def gauss_w01():
    return V.SourceField.gaussian((0, 0), 0.1, 1.0)


def test_zero_source(grid_h01):
    f = V.SourceField.gaussian((0, 0), 0.1, 0.0)
    out = V.newton_potential(grid_h01, f, 0.0, np.array([[0.3, 0.0]]))
    assert np.all(out == 0)
    mesh = G.build_mesh(G.DomainSpec.disk(1.0, 64))
    gd, gn = V.newton_boundary_traces(grid_h01, f, 0.0, mesh)
    assert np.all(gd == 0) and np.all(gn == 0)


def test_near_delta_reproduces_kernel():
    # unit-mass bump of width 0.02: its potential beyond the bump equals the
    # free kernel by the circular mean-value property
    w = 0.02
    f = V.SourceField.gaussian((0, 0), w, 1.0 / (2 * math.pi * w**2))
    grid = G.interior_grid(DISK, h=w / 8, margin=0.02)
    targets = np.array(
        [[r * math.cos(a), r * math.sin(a)] for r in (0.3, 0.45, 0.6) for a in (0.0, 1.1, 3.7)]
    )
    vals = V.newton_potential(grid, f, 0.0, targets)
    ref = -np.log(np.hypot(*targets.T)) / (2 * math.pi)
    assert np.abs(vals - ref).max() <= 1e-2


def _fd_residual(grid, f, z, checkpoints):
    worst = 0.0
    hfd = grid.h
    for t in checkpoints:
        st5 = np.array([t, t + [hfd, 0], t - [hfd, 0], t + [0, hfd], t - [0, hfd]])
        u = V.newton_potential(grid, f, z, st5)
        lap = (u[1] + u[2] + u[3] + u[4] - 4 * u[0]) / hfd**2
        worst = max(worst, abs(-lap - z * u[0] - f(t[None, :])[0]))
    return worst


CHECKPOINTS = np.array([[0.05, 0.02], [0.13, -0.07], [-0.2, 0.11]])


def test_pde_residual(grid_h01, gauss_w01):
    resid = _fd_residual(grid_h01, gauss_w01, 2 + 1j, CHECKPOINTS)
    assert resid <= 2e-2  # relative to sup|f| = 1


def test_pde_residual_improves_under_refinement(grid_h01, gauss_w01):
    coarse = _fd_residual(grid_h01, gauss_w01, 2 + 1j, CHECKPOINTS)
    fine_grid = G.interior_grid(DISK, h=0.005, margin=0.02)
    fine = _fd_residual(fine_grid, gauss_w01, 2 + 1j, CHECKPOINTS)
    assert coarse >= 3.0 * fine


def test_boundary_traces_radial_gauss_law(grid_h01, gauss_w01):
    mesh = G.build_mesh(G.DomainSpec.disk(1.0, 256))
    gd, gn = V.newton_boundary_traces(grid_h01, gauss_w01, 0.0, mesh)
    mass = gauss_w01.total_mass
    assert np.abs(gn + mass / (2 * math.pi)).max() <= 1e-3
    assert np.abs(gd - gd.mean()).max() <= 1e-3


def test_linearity(grid_h01):
    f1 = V.SourceField.gaussian((0.1, 0), 0.1, 1.0)
    f3 = V.SourceField.gaussian((0.1, 0), 0.1, 3.0)
    t = np.array([[0.4, -0.2], [0.0, 0.3]])
    a = V.newton_potential(grid_h01, f1, 1 + 0.5j, t)
    b = V.newton_potential(grid_h01, f3, 1 + 0.5j, t)
    np.testing.assert_allclose(b, 3 * a, rtol=1e-13)


def test_conjugation_symmetry(grid_h01, gauss_w01):
    t = np.array([[0.2, 0.1], [0.35, -0.3]])
    a = V.newton_potential(grid_h01, gauss_w01, 2 + 1j, t)
    b = V.newton_potential(grid_h01, gauss_w01, 2 - 1j, t)
    np.testing.assert_array_equal(np.conj(a), b)
    mesh = G.build_mesh(G.DomainSpec.disk(1.0, 128))
    gd_a, gn_a = V.newton_boundary_traces(grid_h01, gauss_w01, 2 + 1j, mesh)
    gd_b, gn_b = V.newton_boundary_traces(grid_h01, gauss_w01, 2 - 1j, mesh)
    np.testing.assert_allclose(np.conj(gd_a), gd_b, atol=1e-15)
    np.testing.assert_allclose(np.conj(gn_a), gn_b, atol=1e-15)


def test_grid_too_coarse(gauss_w01):
    coarse = G.interior_grid(DISK, h=0.05, margin=0.05)
    with pytest.raises(GridTooCoarse):
        V.newton_potential(coarse, gauss_w01, 0.0, np.array([[0.2, 0.0]]))


def test_support_too_wide(grid_h01):
    mesh = G.build_mesh(G.DomainSpec.disk(1.0, 64))
    fat = V.SourceField.gaussian((0.8, 0), 0.05, 1.0)  # hugs the boundary
    with pytest.raises(SupportTooWide):
        V.newton_boundary_traces(grid_h01, fat, 0.0, mesh)
    outside = V.SourceField.gaussian((1.5, 0), 0.05, 1.0)
    with pytest.raises(SupportTooWide):
        outside.support_margin(DISK)


def test_support_margin_value():
    f = V.SourceField.gaussian((0.2, 0.0), 0.1, 1.0)
    margin = f.support_margin(DISK)
    assert 0 < margin < 0.8
    # at the boundary the field really is below 1e-12
    assert f(np.array([[1.0, 0.0], [0.0, 1.0]])).max() < 1e-12


def test_source_field_json_round_trip():
    f = V.SourceField.gaussian((0.2, -0.1), 0.1, 2.0)
    clone = V.SourceField.from_json(f.to_json())
    assert clone == f
    s = V.SourceField.sum_of(f, V.SourceField.gaussian((0, 0.3), 0.05, 1.0))
    clone2 = V.SourceField.from_json(s.to_json())
    assert clone2 == s
