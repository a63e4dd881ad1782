import numpy as np
import pytest

from conftest import rel_l2
from mubtomo.classical_radon import Sinogram, project_at_angle
from mubtomo.cv_wigner import (
    PositionDensityMatrix,
    density_from_wavefunction,
    first_excited_state,
    ground_state,
    kernel_overlap,
    quadrature_distribution,
    quadrature_kernel,
    quadrature_sinogram,
    reconstruct_density_continuous,
    reconstruct_wigner,
    wigner_from_density,
)
from mubtomo.errors import (
    AliasedGrid,
    DegenerateAngle,
    InsufficientAngles,
    InvariantViolation,
    NonHermitianInput,
)

X8 = np.linspace(-8.0, 8.0, 256)


@pytest.fixture(scope="module")
def rho0():
    return density_from_wavefunction(ground_state(X8), -8.0, 8.0)


@pytest.fixture(scope="module")
def rho1():
    return density_from_wavefunction(first_excited_state(X8), -8.0, 8.0)


# ------------------------------------------------------------------ wigner


def test_ground_state_wigner_analytic(rho0):
    W = wigner_from_density(rho0)
    Xg, Pg = np.meshgrid(W.x, W.p, indexing="ij")
    exact = np.exp(-(Xg**2 + Pg**2)) / np.pi
    assert np.max(np.abs(W.values - exact)) <= 1e-4
    assert abs(W.mass() - 1.0) <= 1e-4


def test_first_excited_negative_at_origin():
    x = np.linspace(-8.0, 8.0, 257)  # odd count so (0, 0) is a lattice point
    rho = density_from_wavefunction(first_excited_state(x), -8.0, 8.0)
    W = wigner_from_density(rho)
    assert abs(W.values[128, 128] - (-1.0 / np.pi)) <= 1e-3
    assert abs(W.mass() - 1.0) <= 1e-4


def test_purity_from_wigner(rho0, rho1):
    # 2 pi Integral W^2 equals Tr rho^2: 1 for pure, 1/2 for the even mix
    W0 = wigner_from_density(rho0)
    pure = 2 * np.pi * np.sum(W0.values**2) * W0.dx * W0.dp
    assert abs(pure - 1.0) <= 1e-3
    mix = PositionDensityMatrix(
        values=0.5 * rho0.values + 0.5 * rho1.values, x_min=-8.0, x_max=8.0
    )
    Wm = wigner_from_density(mix)
    mixed = 2 * np.pi * np.sum(Wm.values**2) * Wm.dx * Wm.dp
    assert abs(mixed - 0.5) <= 1e-3


def test_wigner_nyquist_gate(rho0):
    with pytest.raises(AliasedGrid):
        wigner_from_density(rho0, p_max=30.0)  # beyond pi / (2 dx) ~ 25


# ------------------------------------------------------------------ kernel


def test_kernel_modulus_is_label_independent():
    for theta in (0.3, 1.0, np.pi / 2, 2.7):
        vals = quadrature_kernel(np.array([-3.0, 0.2, 5.0]), 1.3, theta)
        want = 1.0 / np.sqrt(2 * np.pi * abs(np.sin(theta)))
        assert np.max(np.abs(np.abs(vals) - want)) <= 1e-12


def test_kernel_at_half_pi_is_plane_wave():
    xp, xv = 0.7, -1.9
    got = quadrature_kernel(xp, xv, np.pi / 2)
    assert abs(got - np.exp(1j * xp * xv) / np.sqrt(2 * np.pi)) <= 1e-12


def test_kernel_symmetric_in_arguments():
    assert abs(quadrature_kernel(0.4, -1.1, 0.9) - quadrature_kernel(-1.1, 0.4, 0.9)) == 0.0


def test_kernel_degenerate_angle():
    with pytest.raises(DegenerateAngle):
        quadrature_kernel(0.0, 0.0, 0.0)
    with pytest.raises(DegenerateAngle):
        quadrature_kernel(0.0, 0.0, np.pi)


@pytest.mark.parametrize("dtheta", [0.7, np.pi / 2])
def test_composed_overlap_modulus(dtheta):
    t1 = np.pi / 2 - dtheta / 2
    t2 = np.pi / 2 + dtheta / 2
    target = 1.0 / np.sqrt(2 * np.pi * abs(np.sin(dtheta)))
    got = abs(kernel_overlap(t1, t2, 0.35, -0.6))
    assert abs(got - target) <= 0.01 * target


def test_kernel_identity_limit_monotone():
    """Action on a smooth vector converges to that vector as theta -> 0.

    The kernel carries the constant propagator phase exp(-i(pi/4 - theta/2))
    relative to the identity; the comparison compensates for it.
    """
    L = 10.0
    xq = np.linspace(-2.0, 2.0, 41)
    f = lambda g: np.exp(-g * g) * (1 + 0.3 * g)
    errs = []
    for theta in (0.1, 0.05, 0.025):
        dg_max = np.pi * abs(np.sin(theta)) / (L + 2.0) / 3
        n = int(np.ceil(2 * L / dg_max)) | 1
        g = np.linspace(-L, L, n)
        K = quadrature_kernel(xq[:, None], g[None, :], theta)
        acted = (K @ f(g)) * (g[1] - g[0]) * np.exp(1j * (np.pi / 4 - theta / 2))
        errs.append(np.max(np.abs(acted - f(xq))))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] <= 0.02


# ------------------------------------------------------------- quadratures


def test_ground_state_quadratures_are_isotropic(rho0):
    exact = np.exp(-(X8**2)) / np.sqrt(np.pi)
    for theta in (0.0, 0.2, np.pi / 4, 1.0, np.pi / 2, 2.5):
        row = quadrature_distribution(rho0, theta)
        assert np.max(np.abs(row - exact)) <= 0.01 * exact.max()
        assert abs(np.sum(row) * rho0.dx - 1.0) <= 1e-4


def test_quadrature_matches_radon_of_wigner(rho1):
    """Two independent routes to the marginal: kernel sandwich vs line
    integral of the Wigner function."""
    W = wigner_from_density(rho1)
    for theta in (0.3, 0.7, 1.0, 2.5):
        row = quadrature_distribution(rho1, theta)
        _, radon_row = project_at_angle(W, theta, n_s=256, s_max=8.0)
        assert rel_l2(row, radon_row) <= 0.02


def test_momentum_route_agrees_with_position_route():
    """At angles where both representations satisfy the sampling rule the
    two kernel sandwiches must agree; the library picks the momentum side
    for theta = 0.7 so evaluate the position side by hand."""
    psi = (ground_state(X8) + 1j * first_excited_state(X8)) / np.sqrt(2)
    rho = density_from_wavefunction(psi, -8.0, 8.0)
    theta = 0.7
    row_lib = quadrature_distribution(rho, theta)
    K = quadrature_kernel(X8[:, None], X8[None, :], theta)
    row_manual = rho.dx**2 * np.real(np.sum(np.conj(K) * (rho.values @ K), axis=0))
    assert np.max(np.abs(row_lib - row_manual)) <= 1e-10


def test_quadrature_theta_zero_is_diagonal(rho1):
    row = quadrature_distribution(rho1, 0.0)
    assert np.max(np.abs(row - np.real(np.diag(rho1.values)))) == 0.0


def test_quadrature_rejects_out_of_range_angle(rho0):
    with pytest.raises(ValueError):
        quadrature_distribution(rho0, np.pi)
    with pytest.raises(ValueError):
        quadrature_distribution(rho0, -0.1)


def test_quadrature_aliased_grid():
    x = np.linspace(-8.0, 8.0, 32)  # dx ~ 0.52, far beyond pi |sin| / 8
    rho = density_from_wavefunction(ground_state(x), -8.0, 8.0)
    with pytest.raises(AliasedGrid):
        quadrature_distribution(rho, 0.8)


def test_quadrature_sinogram_rows(rho1):
    thetas = np.arange(12) * np.pi / 12
    sino = quadrature_sinogram(rho1, thetas)
    assert sino.n_theta == 12
    assert np.min(sino.values) >= -1e-8
    integrals = sino.values.sum(axis=1) * sino.ds
    assert np.max(np.abs(integrals - 1.0)) <= 1e-4


# ---------------------------------------------------------- reconstruction


def test_reconstruct_wigner_zero_input():
    sino = Sinogram(values=np.zeros((8, 64)),
                    thetas=np.arange(8) * np.pi / 8, s_min=-8, s_max=8)
    W = reconstruct_wigner(sino, nx=32, n_p=32)
    assert np.max(np.abs(W.values)) == 0.0


def test_reconstruct_wigner_needs_angles():
    sino = Sinogram(values=np.zeros((1, 64)), thetas=np.array([0.0]),
                    s_min=-8, s_max=8)
    with pytest.raises(InsufficientAngles):
        reconstruct_wigner(sino)


def test_reconstructed_negativity_survives(rho1):
    thetas = np.arange(90) * np.pi / 90
    quads = quadrature_sinogram(rho1, thetas)
    W = reconstruct_wigner(quads, nx=129, n_p=129,
                           x_min=-8, x_max=8, p_min=-8, p_max=8)
    assert W.values[64, 64] <= -0.25  # true value is -1/pi ~ -0.318


def test_reconstruct_density_continuous_ground_state(rho0):
    thetas = np.arange(90) * np.pi / 90
    quads = quadrature_sinogram(rho0, thetas)
    rec, raw_trace = reconstruct_density_continuous(quads)
    assert 0.97 <= raw_trace <= 1.03
    assert np.max(np.abs(rec.values - rec.values.conj().T)) <= 1e-8
    diag = np.real(np.diag(rec.values))
    exact = np.exp(-rec.x**2) / np.sqrt(np.pi)
    assert np.max(np.abs(diag - exact)) <= 0.03 * exact.max()


def test_route_equivalence_compact(rho0):
    """Direct transform vs measure-and-invert on a reduced angle budget."""
    thetas = np.arange(60) * np.pi / 60
    quads = quadrature_sinogram(rho0, thetas)
    W_direct = wigner_from_density(rho0)
    W_rec = reconstruct_wigner(quads, x_min=-8, x_max=8, p_min=-8, p_max=8)
    assert rel_l2(W_rec.values, W_direct.values) <= 0.02


# -------------------------------------------------------------- type checks


def test_position_density_validation():
    n = 64
    x = np.linspace(-6, 6, n)
    psi = ground_state(x)
    rho = np.outer(psi, psi) / (np.sum(psi**2) * (x[1] - x[0]))
    bad = rho.astype(complex).copy()
    bad[3, 5] += 0.1
    with pytest.raises(NonHermitianInput):
        PositionDensityMatrix(values=bad, x_min=-6, x_max=6)
    with pytest.raises(InvariantViolation):
        PositionDensityMatrix(values=rho * 2.0, x_min=-6, x_max=6)


def test_density_from_wavefunction_normalizes():
    x = np.linspace(-6, 6, 128)
    rho = density_from_wavefunction(3.7 * ground_state(x), -6, 6)
    trace = np.sum(np.real(np.diag(rho.values))) * rho.dx
    assert abs(trace - 1.0) <= 1e-12
