import numpy as np
import pytest

from kreinbem import boundary_ops as B
from kreinbem import geometry as G
from kreinbem import kernels as K
from kreinbem import steklov as SK
from kreinbem.errors import ZeroData

Z = 2 + 1j


@pytest.fixture(scope="module")
def rtd_theta1(disk512):
    cpl = B.RobinCoupling.multiplication(disk512, 1.0)
    return SK.assemble_rtd(disk512, Z, cpl)


@pytest.fixture(scope="module")
def rtd_neumann(disk512):
    return SK.assemble_rtd(disk512, Z, B.RobinCoupling.zero(disk512))


def mode(mesh, m):
    return np.exp(1j * m * mesh.node_angles)


def rayleigh(mesh, mat, v):
    return B.w_inner(mesh, v, mat @ v) / B.w_inner(mesh, v, v)


def rtd_oracle(m, z, theta):
    w = K.sqrt_upper(z)
    jm, jmp = K.bessel_j(m, w), K.bessel_j_derivative(m, w)
    return jm / (w * jmp + theta * jm)


def dtr_oracle(m, z, theta):
    return -1.0 / rtd_oracle(m, z, theta)


# ---------------------------------------------------------------------------
# Map eigenvalues against the disk oracles
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("m", range(9))
def test_rtd_neumann_eigenvalues(disk512, rtd_neumann, m):
    lam = rayleigh(disk512, rtd_neumann.matrix, mode(disk512, m))
    assert abs(lam - rtd_oracle(m, Z, 0.0)) <= 1e-4


@pytest.mark.parametrize("m", range(9))
def test_rtd_robin_eigenvalues(disk512, rtd_theta1, m):
    lam = rayleigh(disk512, rtd_theta1.matrix, mode(disk512, m))
    assert abs(lam - rtd_oracle(m, Z, 1.0)) <= 1e-4


def test_rtd_low_spectral_parameter_limit(disk256):
    # zero coupling, z -> 0^-: classical Neumann-to-Dirichlet values 1/m
    m_map = SK.assemble_rtd(disk256, -1e-6, B.RobinCoupling.zero(disk256))
    for m in (1, 2, 3, 4):
        lam = rayleigh(disk256, m_map.matrix, mode(disk256, m))
        assert abs(lam - 1.0 / m) <= 1e-2


@pytest.mark.parametrize("theta", [0.0, 1.0])
def test_dtr_eigenvalues(disk512, theta):
    cpl = B.RobinCoupling.multiplication(disk512, theta)
    dtr = SK.assemble_dtr(disk512, Z, cpl)
    for m in range(9):
        lam = rayleigh(disk512, dtr.matrix, mode(disk512, m))
        ref = dtr_oracle(m, Z, theta)
        assert abs(lam - ref) <= 1e-3 * max(1.0, abs(ref))


def test_dtr_zero_data(disk256):
    cpl = B.RobinCoupling.multiplication(disk256, 1.0)
    dtr = SK.assemble_dtr(disk256, Z, cpl)
    assert np.all(dtr.apply(np.zeros(disk256.size)) == 0)


# ---------------------------------------------------------------------------
# Mutual inversion
# ---------------------------------------------------------------------------


def test_check_inverse_disk(disk512):
    cpl = B.RobinCoupling.multiplication(disk512, 1.0)
    rep = SK.check_inverse(disk512, Z, cpl, mode_cutoff=8)
    assert rep["dtr_rtd_plus_identity"] <= 1e-3
    assert rep["rtd_dtr_plus_identity"] <= 1e-3


def test_check_inverse_neumann_case(disk512):
    rep = SK.check_inverse(disk512, Z, B.RobinCoupling.zero(disk512), mode_cutoff=8)
    assert rep["dtr_rtd_plus_identity"] <= 1e-3
    assert rep["rtd_dtr_plus_identity"] <= 1e-3


def test_check_inverse_constants_only(disk256):
    cpl = B.RobinCoupling.multiplication(disk256, 1.0)
    rep = SK.check_inverse(disk256, Z, cpl, mode_cutoff=0)
    assert rep["dtr_rtd_plus_identity"] <= 1e-4
    # the scalar identity from the two oracles is exact
    assert abs(dtr_oracle(0, Z, 1.0) * rtd_oracle(0, Z, 1.0) + 1.0) <= 1e-14


def test_check_inverse_star_mesh():
    star = G.build_mesh(G.DomainSpec.star({0: 1.0, 3: 0.2}, 192))
    cpl = B.RobinCoupling.multiplication(star, 1.0)
    rep = SK.check_inverse(star, Z, cpl)
    assert rep["dtr_rtd_plus_identity"] <= 1e-3
    assert rep["rtd_dtr_plus_identity"] <= 1e-3


def test_rtd_oracle_error_halves_under_refinement():
    # the genuine convergence content behind the inversion identity: the map
    # itself approaches the continuum operator at second order
    errs = {}
    for n in (256, 512):
        mesh = G.build_mesh(G.DomainSpec.disk(1.0, n))
        cpl = B.RobinCoupling.multiplication(mesh, 1.0)
        m_map = SK.assemble_rtd(mesh, Z, cpl)
        errs[n] = max(
            abs(rayleigh(mesh, m_map.matrix, mode(mesh, m)) - rtd_oracle(m, Z, 1.0))
            for m in range(9)
        )
    assert errs[256] >= 2.0 * errs[512]


# ---------------------------------------------------------------------------
# Conjugate symmetry
# ---------------------------------------------------------------------------


def test_symmetry_real_z(disk256):
    cpl = B.RobinCoupling.multiplication(disk256, 1.0)
    assert SK.check_symmetry(disk256, -3.0, cpl) <= 1e-8


def test_symmetry_complex_z(disk256):
    cpl = B.RobinCoupling.multiplication(disk256, 1.0)
    assert SK.check_symmetry(disk256, 2 + 1j, cpl) <= 1e-3


def test_symmetry_neumann_imaginary_z(disk256):
    assert SK.check_symmetry(disk256, 1j, B.RobinCoupling.zero(disk256)) <= 1e-3


# ---------------------------------------------------------------------------
# Herglotz positivity
# ---------------------------------------------------------------------------


def test_herglotz_identity_disk():
    mesh = G.build_mesh(G.DomainSpec.disk(1.0, 128))
    grid = G.interior_grid(G.DomainSpec.disk(1.0, 8), h=0.005, margin=0.0025)
    rep = SK.check_herglotz(mesh, grid, 1j, B.RobinCoupling.zero(mesh), mode(mesh, 1))
    assert rep["lhs"] > 0
    assert rep["relative_gap"] <= 2e-2


def test_herglotz_scaling():
    mesh = G.build_mesh(G.DomainSpec.disk(1.0, 128))
    grid = G.interior_grid(G.DomainSpec.disk(1.0, 8), h=0.02, margin=0.02)
    cpl = B.RobinCoupling.zero(mesh)
    g = mode(mesh, 1)
    rep1 = SK.check_herglotz(mesh, grid, 1j, cpl, g)
    rep3 = SK.check_herglotz(mesh, grid, 1j, cpl, 3 * g)
    assert rep3["lhs"] == pytest.approx(9 * rep1["lhs"], rel=1e-10)
    assert rep3["rhs"] == pytest.approx(9 * rep1["rhs"], rel=1e-10)


def test_herglotz_positivity_eigenvalue(disk256):
    cpl = B.RobinCoupling.multiplication(disk256, 1.0)
    m_map = SK.assemble_rtd(disk256, 1 + 2j, cpl)
    min_eig = SK.imaginary_part_min_eigenvalue(m_map)
    assert min_eig >= -1e-6 * m_map.w_norm()


def test_herglotz_rejects_zero_data(disk256):
    grid = G.interior_grid(G.DomainSpec.disk(1.0, 8), h=0.05, margin=0.05)
    with pytest.raises(ZeroData):
        SK.check_herglotz(disk256, grid, 1j, B.RobinCoupling.zero(disk256), np.zeros(disk256.size))
    with pytest.raises(ValueError):
        SK.check_herglotz(disk256, grid, -1.0, B.RobinCoupling.zero(disk256), mode(disk256, 1))


# ---------------------------------------------------------------------------
# Structure
# ---------------------------------------------------------------------------


def test_singular_value_decay(rtd_theta1, disk512):
    sv = SK.singular_value_decay(rtd_theta1, disk512.size // 8)
    weighted = sv * np.arange(1, len(sv) + 1)
    assert weighted.max() <= 3.0 * weighted[:4].max()


def test_neumann_two_construction_paths(disk256):
    by_zero = SK.assemble_rtd(disk256, Z, B.RobinCoupling.zero(disk256))
    by_mult = SK.assemble_rtd(disk256, Z, B.RobinCoupling.multiplication(disk256, 0.0))
    by_symbol = SK.assemble_rtd(
        disk256, Z, B.RobinCoupling.fourier_multiplier(disk256, lambda k: 0.0, epsilon=1.0)
    )
    assert np.array_equal(by_zero.matrix, by_mult.matrix)
    assert np.abs(by_symbol.matrix - by_zero.matrix).max() <= 1e-12


def test_map_export_round_trip(disk256):
    cpl = B.RobinCoupling.multiplication(disk256, 1.0)
    m_map = SK.assemble_rtd(disk256, Z, cpl)
    op = m_map.as_operator()
    clone = B.DenseOperator.from_json(op.to_json(), disk256)
    assert np.array_equal(clone.matrix, op.matrix)
