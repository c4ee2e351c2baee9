import numpy as np
import pytest

from opschur.besov import (
    BesovParams,
    DyadicPartition,
    InverseTransformCheck,
    besov_norm,
    build_partition,
    bump,
    check_corollary32,
    dyadic_blocks,
    fourier_type_constant,
    mu_analysis_grid,
    mu_estimate,
    psi_profile,
    rho,
)
from opschur.spaces import NormedSpace
from opschur.torus import TorusGrid


def test_profile_support_and_normalization():
    assert rho(np.array(0.0)) == 0.0
    assert rho(np.array(-3.0)) == 0.0
    assert rho(np.array(1.0)) == pytest.approx(np.exp(-1.0))
    # bump vanishes exactly at and outside the endpoints
    for s in (0.0, 0.5, 2.0, 2.5):
        assert bump(np.array(s)) == 0.0
    assert bump(np.array(1.0)) > 0.0
    assert psi_profile(np.array(1.0)) == 1.0
    assert psi_profile(np.array(0.5)) == 0.0
    assert psi_profile(np.array(2.0)) == 0.0


def test_profile_telescoping_sum():
    # dyadic dilates of psi sum to one at any positive radius
    rng = np.random.default_rng(7)
    s = np.concatenate([rng.uniform(0.01, 1000.0, 200), [0.5, 1.0, 2.0, 4.0, 256.0]])
    total = np.zeros_like(s)
    for k in range(-12, 14):
        total += psi_profile(s / 2.0**k)
    assert np.abs(total - 1.0).max() <= 1e-14


@pytest.mark.parametrize("points", [16, 32, 64, 128])
def test_partition_sums_to_one(points):
    part = build_partition(TorusGrid(1, points))
    total = part.phi_samples.sum(axis=0)
    assert np.abs(total - 1.0).max() <= 1e-12


def test_partition_sums_to_one_2d():
    part = build_partition(TorusGrid(2, 16))
    assert np.abs(part.phi_samples.sum(axis=0) - 1.0).max() <= 1e-12


def test_partition_supports_exact():
    grid = TorusGrid(1, 64)
    part = build_partition(grid)
    radii = grid.frequency_radii()
    for k in range(1, part.k_max):
        inside = (radii > 2.0 ** (k - 1)) & (radii < 2.0 ** (k + 1))
        assert not np.any(part.phi_samples[k][~inside] != 0.0)
    # block 0 lives at radius <= 2, top block strictly outside
    assert not np.any(part.phi_samples[0][radii > 2.0] != 0.0)
    assert not np.any(part.phi_samples[part.k_max][radii <= 2.0] != 0.0)
    assert part.phi_samples[0][0] == 1.0


def test_partition_values_at_radius_two():
    # radius 2 sits on the grid; there phi_1 = psi(1) = 1 and phi_2 = 0
    grid = TorusGrid(1, 16)
    part = build_partition(grid)
    idx = int(np.argmin(np.abs(grid.frequency_radii() - 2.0)))
    assert grid.frequency_radii()[idx] == 2.0
    assert part.phi_samples[1][idx] == 1.0
    assert part.phi_samples[2][idx] == 0.0
    assert part.phi_samples[1][idx] + part.phi_samples[2][idx] == 1.0


def test_partition_rejects_coarse_grid():
    # Nyquist below 2: long period shrinks the frequency spacing
    with pytest.raises(ValueError):
        build_partition(TorusGrid(1, 16, period=100.0))
    with pytest.raises(ValueError):
        build_partition(TorusGrid(1, 2))


def test_partition_cached():
    grid = TorusGrid(1, 32)
    assert build_partition(grid) is build_partition(TorusGrid(1, 32))


def test_blocks_sum_back_to_field():
    grid = TorusGrid(1, 32)
    rng = np.random.default_rng(3)
    f = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    blocks = dyadic_blocks(grid, f)
    assert np.abs(blocks.sum(axis=0) - f).max() <= 1e-12


def test_block_reproduction():
    # spectrum on the closed annulus [2^(k-1), 2^k] touches only blocks
    # k-1, k, k+1; the rest vanish up to fft round-trip noise
    grid = TorusGrid(1, 64)
    part = build_partition(grid)
    radii = grid.frequency_radii()
    rng = np.random.default_rng(11)
    for k in (2, 3, 4):
        band = (radii >= 2.0 ** (k - 1)) & (radii <= 2.0**k)
        spec = np.where(band, rng.standard_normal(64) + 1j * rng.standard_normal(64), 0.0)
        f = np.fft.ifft(spec)
        scale = np.abs(f).max()
        blocks = dyadic_blocks(grid, f, part)
        for j in range(part.k_max + 1):
            if abs(j - k) <= 1:
                continue
            assert np.abs(blocks[j]).max() <= 1e-13 * scale


def test_besov_params_validation():
    BesovParams(0.0, 2.0, 1.0)  # q > r allowed
    BesovParams(-1.5, np.inf, np.inf)
    with pytest.raises(ValueError):
        BesovParams(np.inf, 2.0, 2.0)
    with pytest.raises(ValueError):
        BesovParams(0.0, 0.5, 2.0)
    with pytest.raises(ValueError):
        BesovParams(0.0, 2.0, 0.0)


def test_besov_norm_zero_and_positive():
    grid = TorusGrid(1, 32)
    params = BesovParams(0.3, 2.0, 2.0)
    assert besov_norm(grid, np.zeros(32), params) == 0.0
    rng = np.random.default_rng(5)
    f = rng.standard_normal(32)
    assert besov_norm(grid, f, params) > 0.0


def test_besov_norm_homogeneous():
    grid = TorusGrid(1, 32)
    rng = np.random.default_rng(9)
    f = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    for q, r in ((1.0, 1.0), (2.0, 1.5), (3.0, np.inf), (np.inf, 2.0)):
        params = BesovParams(0.8, q, r)
        base = besov_norm(grid, f, params)
        scaled = besov_norm(grid, (2.0 - 1.0j) * f, params)
        assert scaled == pytest.approx(abs(2.0 - 1.0j) * base, rel=1e-12)


def test_besov_norm_monotone_in_r():
    # l_r norms shrink as r grows, termwise fixed
    grid = TorusGrid(1, 32)
    rng = np.random.default_rng(13)
    f = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    values = [
        besov_norm(grid, f, BesovParams(0.6, 2.0, r)) for r in (1.0, 1.5, 2.0, 4.0, np.inf)
    ]
    for a, b in zip(values, values[1:]):
        assert b <= a + 1e-12


def test_besov_norm_single_character_closed_form():
    # on-grid character: spectrum is a single spike, so each block norm is
    # phi_k(xi0) * ||char||_{L_q} and at most two blocks are active
    grid = TorusGrid(1, 64)
    part = build_partition(grid)
    x = grid.axis_points()
    for idx, s, q, r in ((5, 0.9, 2.0, 1.5), (3, -0.4, 3.0, np.inf), (12, 1.1, 1.0, 2.0)):
        xi0 = grid.axis_frequencies()[idx]
        f = np.exp(1j * xi0 * x)
        phis = part.phi_samples[:, idx]
        active = phis > 0.0
        assert 1 <= active.sum() <= 2
        char_lq = grid.period ** (1.0 / q) if np.isfinite(q) else 1.0
        terms = 2.0 ** (s * np.arange(part.k_max + 1)) * phis * char_lq
        if np.isfinite(r):
            expected = np.sum(terms[active] ** r) ** (1.0 / r)
        else:
            expected = terms.max()
        got = besov_norm(grid, f, BesovParams(s, q, r))
        assert got == pytest.approx(expected, rel=1e-10)


def test_besov_norm_constant_closed_form():
    # constants live in block 0 alone: norm = |c| * (L^n)^(1/q)
    grid = TorusGrid(1, 32)
    c = 2.25 - 1.0j
    for q in (1.0, 2.0, 3.0, np.inf):
        val = besov_norm(grid, np.full(32, c), BesovParams(1.3, q, 2.0))
        expected = abs(c) * (grid.period ** (1.0 / q) if np.isfinite(q) else 1.0)
        assert val == pytest.approx(expected, rel=1e-10)
    grid2 = TorusGrid(2, 16)
    val = besov_norm(grid2, np.full((16, 16), c), BesovParams(0.4, 2.0, 1.0))
    assert val == pytest.approx(abs(c) * grid2.period, rel=1e-10)


def test_besov_norm_vector_and_matrix_agree_with_scalar():
    grid = TorusGrid(1, 32)
    rng = np.random.default_rng(17)
    f = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    params = BesovParams(0.5, 2.0, 1.0)
    base = besov_norm(grid, f, params)
    vec = np.zeros((32, 2), dtype=complex)
    vec[:, 0] = f
    assert besov_norm(grid, vec, params, fiber=NormedSpace.euclidean(2)) == pytest.approx(
        base, rel=1e-12
    )
    mat = f.reshape(32, 1, 1)
    assert besov_norm(grid, mat, params) == pytest.approx(base, rel=1e-12)


def test_besov_norm_matrix_diagonal_oracle():
    # diagonal symbol: pointwise operator norm is the max of the entries
    grid = TorusGrid(1, 32)
    rng = np.random.default_rng(19)
    f = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    g = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    mat = np.zeros((32, 2, 2), dtype=complex)
    mat[:, 0, 0] = f
    mat[:, 1, 1] = g
    params = BesovParams(0.7, 2.0, 1.0)
    part = build_partition(grid)
    bf = dyadic_blocks(grid, f, part)
    bg = dyadic_blocks(grid, g, part)
    w = np.full(grid.size, grid.cell_volume)
    expected = 0.0
    for k in range(part.k_max + 1):
        mags = np.maximum(np.abs(bf[k]), np.abs(bg[k]))
        expected += 2.0 ** (params.s * k) * float(np.sum(w * mags**2)) ** 0.5
    got = besov_norm(grid, mat, params)
    assert got == pytest.approx(expected, rel=1e-12)


def test_besov_norm_shape_mismatch():
    grid = TorusGrid(1, 32)
    with pytest.raises(ValueError):
        besov_norm(grid, np.zeros(16), BesovParams(0.0, 2.0, 2.0))


def test_mu_estimate_identity_symbol():
    # constant symbols are dilation invariant; only block 0 contributes,
    # so the estimate is the plain L_u norm of the constant
    for n, points in ((1, 32), (1, 64), (2, 16)):
        grid = mu_analysis_grid(n, points)
        val = mu_estimate(lambda xi: 1.0 + 0.0j, 2.0, 2.0, 1.0, grid)
        assert val == pytest.approx(float(points) ** (n / 2.0), rel=1e-10)
    grid = mu_analysis_grid(1, 32)
    eye = np.eye(2, dtype=complex)
    matval = mu_estimate(lambda xi: eye, 2.0, 2.0, 1.0, grid)
    assert matval == pytest.approx(32.0**0.5, rel=1e-10)


def test_mu_estimate_monotone_under_dilation_refinement():
    # minimizing over a superset of dilations can only help
    grid = mu_analysis_grid(1, 64)

    def m(xi):
        return (1.0 + float(xi[0]) ** 2) ** -0.5

    coarse = mu_estimate(m, 2.0, 2.0, 1.0, grid, dilation_exponents=range(-2, 3))
    fine = mu_estimate(m, 2.0, 2.0, 1.0, grid, dilation_exponents=range(-4, 5))
    assert fine <= coarse + 1e-12


def test_mu_estimate_stable_under_grid_doubling():
    def m(xi):
        return (1.0 + float(xi[0]) ** 2) ** -0.5

    vals = {
        points: mu_estimate(m, 2.0, 2.0, 1.0, mu_analysis_grid(1, points))
        for points in (32, 64, 128)
    }
    assert abs(vals[64] - vals[32]) <= 0.05 * vals[32]
    assert abs(vals[128] - vals[64]) <= 0.05 * vals[64]


def test_mu_estimate_validation():
    grid = mu_analysis_grid(1, 32)
    with pytest.raises(ValueError):
        mu_estimate(lambda xi: 1.0, 2.0, 2.0, 1.0, grid, dilation_exponents=[])
    with pytest.raises(ValueError):
        # 1/q - 1/p negative
        mu_estimate(lambda xi: 1.0, 2.0, 1.0, 2.0, grid)
    with pytest.raises(ValueError):
        # gap exceeds 1/u
        mu_estimate(lambda xi: 1.0, 4.0, 2.0, 1.0, grid)


def test_fourier_type_euclidean_u2_is_one():
    for dim in (1, 2, 3):
        c = fourier_type_constant(NormedSpace.euclidean(dim), 2.0, TorusGrid(1, 32), samples=15, seed=dim)
        assert abs(c - 1.0) <= 1e-9


def test_fourier_type_u1_attains_sup_bound():
    # L_1 -> L_inf transform constant is (2 pi)^(-n/2); a point mass attains it
    for n, points in ((1, 32), (2, 16)):
        c = fourier_type_constant(NormedSpace.euclidean(1), 1.0, TorusGrid(n, points), samples=15, seed=n)
        bound = (2.0 * np.pi) ** (-n / 2.0)
        assert c <= bound + 1e-12
        assert c == pytest.approx(bound, rel=1e-9)


def test_fourier_type_other_fibers_finite():
    c = fourier_type_constant(NormedSpace.ell1(2), 2.0, TorusGrid(1, 32), samples=15, seed=2)
    assert np.isfinite(c) and c > 0.0
    with pytest.raises(ValueError):
        fourier_type_constant(NormedSpace.euclidean(1), 3.0, TorusGrid(1, 32))


def test_corollary32_hilbert_case_ratio_at_most_one():
    # u = theta = 2: Plancherel plus the triangle inequality over blocks
    rep = check_corollary32(2.0, 2.0, TorusGrid(1, 64), samples=40, seed=1)
    assert rep.s_star == 0.0
    assert rep.doubled_max_ratio <= 1.0 + 1e-12
    assert rep.stable


@pytest.mark.parametrize("u,theta", [(2.0, 2.0), (2.0, 1.0), (1.0, 1.0)])
def test_corollary32_ratios_finite_and_stable(u, theta):
    rep = check_corollary32(u, theta, TorusGrid(1, 64), samples=40, seed=4)
    assert np.isfinite(rep.max_ratio) and rep.max_ratio > 0.0
    assert rep.doubled_max_ratio >= rep.max_ratio
    assert rep.stable
    expected_s = 1.0 * ((1.0 / theta) - (0.0 if u == 1.0 else 0.5))
    assert rep.s_star == pytest.approx(expected_s)


def test_corollary32_validation():
    with pytest.raises(ValueError):
        check_corollary32(2.0, 3.0, TorusGrid(1, 64))
