import math

import numpy as np
import pytest

from opschur.spaces import NormedSpace
from opschur.torus import (
    SymbolField,
    TorusGrid,
    adjoint_kernel_samples,
    apply_multiplier,
    convolution_kernel,
    convolution_schur_constants,
    convolve,
    dft_forward,
    dft_inverse,
    frequency_lp_norm,
    grid_lp_norm,
    symbol_to_kernel,
)

TWO_PI = 2.0 * math.pi


def _random_field(grid, d=None, seed=0):
    rng = np.random.default_rng(seed)
    shape = grid.shape if d is None else grid.shape + (d,)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_grid_validation():
    with pytest.raises(ValueError, match="even"):
        TorusGrid(1, 15)
    with pytest.raises(ValueError, match="period"):
        TorusGrid(1, 16, period=0.0)
    with pytest.raises(ValueError, match="dim_n"):
        TorusGrid(0, 16)


def test_grid_geometry():
    g = TorusGrid(2, 8, period=4.0)
    assert g.shape == (8, 8) and g.size == 64
    assert g.cell_volume == pytest.approx(0.25)
    assert g.frequency_cell_volume == pytest.approx((TWO_PI / 4.0) ** 2)
    x = g.axis_points()
    assert x[0] == pytest.approx(-2.0) and x[-1] == pytest.approx(2.0 - 0.5)
    xi = g.axis_frequencies()
    # Nyquist sits on the negative half-axis
    assert xi.min() == pytest.approx(-4 * TWO_PI / 4.0)
    assert xi.max() == pytest.approx(3 * TWO_PI / 4.0)


def test_round_trip_identity():
    for grid, d in ((TorusGrid(1, 16), None), (TorusGrid(1, 32), 2), (TorusGrid(2, 8), 3)):
        f = _random_field(grid, d, seed=1)
        back = dft_inverse(grid, dft_forward(grid, f))
        np.testing.assert_allclose(back, f, atol=1e-12 * np.abs(f).max())


def test_parseval_ratio_one():
    for seed, (grid, d) in enumerate(
        ((TorusGrid(1, 64), None), (TorusGrid(2, 16), 2), (TorusGrid(1, 16, period=5.0), 1))
    ):
        f = _random_field(grid, d, seed=seed)
        num = frequency_lp_norm(grid, dft_forward(grid, f), 2.0)
        den = grid_lp_norm(grid, f, 2.0)
        assert num / den == pytest.approx(1.0, abs=1e-12)


def test_constant_concentrates_at_zero_frequency():
    grid = TorusGrid(2, 8, period=3.0)
    c = 2.5 - 1.0j
    fhat = dft_forward(grid, np.full(grid.shape, c))
    expect = c * grid.period**grid.dim_n * TWO_PI ** (-grid.dim_n / 2)
    assert fhat[0, 0] == pytest.approx(expect, abs=1e-12)
    fhat[0, 0] = 0.0
    assert np.abs(fhat).max() < 1e-12 * abs(expect)


def test_character_gives_delta_spike():
    grid = TorusGrid(1, 32)
    xi = grid.axis_frequencies()
    x = grid.axis_points()
    for m in (0, 3, 16, 31):  # includes the Nyquist line
        f = np.exp(1j * xi[m] * x)
        fhat = dft_forward(grid, f)
        expect = grid.period * TWO_PI**-0.5
        assert fhat[m] == pytest.approx(expect, abs=1e-10)
        rest = np.delete(fhat, m)
        assert np.abs(rest).max() < 1e-10 * expect


def test_field_shape_rejected():
    grid = TorusGrid(2, 8)
    with pytest.raises(ValueError, match="conform"):
        dft_forward(grid, np.zeros((8, 4)))


def _dense_convolve(grid, k, f):
    # O(N^2) double-sum definition, index map (i - j + N/2) mod N
    n = grid.points_per_axis
    flat_k = k.reshape((grid.size,) + k.shape[grid.dim_n :])
    flat_f = f.reshape((grid.size,) + f.shape[grid.dim_n :])
    multi = np.unravel_index(np.arange(grid.size), grid.shape)
    out = np.zeros_like(flat_f)
    for i in range(grid.size):
        for j in range(grid.size):
            lam = tuple((multi[a][i] - multi[a][j] + n // 2) % n for a in range(grid.dim_n))
            kij = flat_k[np.ravel_multi_index(lam, grid.shape)]
            if kij.ndim == 2:
                out[i] += kij @ flat_f[j]
            else:
                out[i] += kij * flat_f[j]
    return grid.cell_volume * out.reshape(f.shape)


def test_convolve_matches_dense_double_sum():
    grid = TorusGrid(1, 16)
    k = _random_field(grid, seed=3)
    f = _random_field(grid, seed=4)
    got = convolve(grid, k, f)
    want = _dense_convolve(grid, k, f)
    np.testing.assert_allclose(got, want, rtol=1e-10, atol=1e-12)


def test_convolve_matrix_matches_dense_double_sum():
    grid = TorusGrid(2, 8)
    rng = np.random.default_rng(9)
    k = rng.standard_normal(grid.shape + (2, 2)) + 1j * rng.standard_normal(grid.shape + (2, 2))
    f = _random_field(grid, 2, seed=10)
    got = convolve(grid, k, f)
    want = _dense_convolve(grid, k, f)
    np.testing.assert_allclose(got, want, rtol=1e-10, atol=1e-12)


def test_delta_kernel_is_identity():
    # discrete delta of mass one sits at the origin sample N/2 per axis
    grid = TorusGrid(1, 16)
    k = np.zeros(grid.shape)
    k[8] = 1.0 / grid.cell_volume
    f = _random_field(grid, seed=5)
    np.testing.assert_allclose(convolve(grid, k, f), f, rtol=1e-10, atol=1e-12)


def test_constant_matrix_times_delta_acts_pointwise():
    grid = TorusGrid(1, 16)
    rng = np.random.default_rng(6)
    A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    k = np.zeros(grid.shape + (2, 2), dtype=complex)
    k[8] = A / grid.cell_volume
    f = _random_field(grid, 2, seed=7)
    np.testing.assert_allclose(
        convolve(grid, k, f), np.einsum("ij,xj->xi", A, f), rtol=1e-10, atol=1e-12
    )


def test_convolve_commutes_with_translation():
    grid = TorusGrid(2, 8)
    k = _random_field(grid, seed=11)
    f = _random_field(grid, seed=12)
    shifted = np.roll(f, (3, 5), axis=(0, 1))
    lhs = convolve(grid, k, shifted)
    rhs = np.roll(convolve(grid, k, f), (3, 5), axis=(0, 1))
    np.testing.assert_allclose(lhs, rhs, atol=1e-12 * np.abs(rhs).max())


def test_convolve_fiber_mismatch():
    grid = TorusGrid(1, 8)
    k = np.zeros(grid.shape + (2, 3), dtype=complex)
    with pytest.raises(ValueError, match="fiber"):
        convolve(grid, k, _random_field(grid, 2, seed=1))


def test_apply_multiplier_identity():
    grid = TorusGrid(2, 8)
    eye = np.broadcast_to(np.eye(2), grid.shape + (2, 2))
    m = SymbolField(grid, NormedSpace.euclidean(2), NormedSpace.euclidean(2), eye)
    f = _random_field(grid, 2, seed=8)
    np.testing.assert_allclose(apply_multiplier(m, f), f, atol=1e-12 * np.abs(f).max())


def test_apply_multiplier_band_projection():
    # indicator of one frequency projects onto that character
    grid = TorusGrid(1, 16)
    sel = np.zeros(grid.shape)
    sel[5] = 1.0
    m = SymbolField.from_scalar_samples(grid, sel)
    f = _random_field(grid, seed=13)
    out = apply_multiplier(m, f)
    fhat = dft_forward(grid, f)
    char = np.exp(1j * grid.axis_frequencies()[5] * grid.axis_points())
    coeff = fhat[5] * grid.frequency_cell_volume * TWO_PI**-0.5
    np.testing.assert_allclose(out, coeff * char, atol=1e-12 * np.abs(f).max())


def test_multiplier_equals_convolution_by_inverse_transform():
    # scalar decay symbol on a line, and a random 2x2 symbol on a plane
    grid1 = TorusGrid(1, 32)
    m1 = SymbolField.from_scalar_samples(
        grid1, (1.0 + grid1.axis_frequencies() ** 2) ** -0.5
    )
    f1 = _random_field(grid1, seed=14)
    lhs = apply_multiplier(m1, f1)
    rhs = convolve(grid1, symbol_to_kernel(m1)[..., 0, 0], f1)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-10, atol=1e-12)

    grid2 = TorusGrid(2, 8)
    rng = np.random.default_rng(15)
    ent = rng.standard_normal(grid2.shape + (2, 2)) + 1j * rng.standard_normal(
        grid2.shape + (2, 2)
    )
    m2 = SymbolField(grid2, NormedSpace.euclidean(2), NormedSpace.euclidean(2), ent)
    f2 = _random_field(grid2, 2, seed=16)
    lhs2 = apply_multiplier(m2, f2)
    rhs2 = convolve(grid2, symbol_to_kernel(m2), f2)
    np.testing.assert_allclose(lhs2, rhs2, rtol=1e-10, atol=1e-12)


def test_adjoint_samples_reverse_and_conjugate():
    grid = TorusGrid(1, 8)
    rng = np.random.default_rng(17)
    k = rng.standard_normal(grid.shape + (2, 3)) + 1j * rng.standard_normal(
        grid.shape + (2, 3)
    )
    ka = adjoint_kernel_samples(grid, k)
    x = grid.axis_points()
    for i in range(8):
        j = int(np.argmin(np.abs((x + x[i] + grid.period / 2) % grid.period - grid.period / 2)))
        np.testing.assert_allclose(ka[i], np.conj(k[j].T), atol=1e-15)
    np.testing.assert_array_equal(adjoint_kernel_samples(grid, ka), k)


def test_schur_constants_normalized_scalar():
    grid = TorusGrid(1, 32)
    rng = np.random.default_rng(18)
    g = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    for theta in (1.0, 1.5, 2.0):
        nrm = grid_lp_norm(grid, g, theta)
        c = convolution_schur_constants(grid, g / nrm, theta)
        assert c.c1.exact and c.c2.exact
        assert c.c1.lower == pytest.approx(1.0, abs=1e-12)
        assert c.c2.lower == pytest.approx(1.0, abs=1e-12)


def test_schur_constants_zero_kernel():
    grid = TorusGrid(1, 16)
    c = convolution_schur_constants(grid, np.zeros(grid.shape), 2.0)
    assert (c.c1.lower, c.c1.upper, c.c2.lower, c.c2.upper) == (0.0, 0.0, 0.0, 0.0)


def test_schur_constants_separable_matrix_kernel():
    # k = A * bump: C1 = opnorm(A) ||bump||_theta, C2 matches via the adjoint
    grid = TorusGrid(1, 32)
    rng = np.random.default_rng(19)
    A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    bump = np.exp(-grid.axis_points() ** 2)
    samples = bump[:, None, None] * A
    X = NormedSpace.euclidean(2)
    for theta in (1.0, 1.7, 2.0):
        c = convolution_schur_constants(grid, samples, theta, source=X, target=X, seed=2)
        sigma = float(np.linalg.svd(A, compute_uv=False)[0])
        expect = sigma * grid_lp_norm(grid, bump, theta)
        assert c.c1.lower == pytest.approx(expect, rel=1e-6)
        assert c.c2.lower == pytest.approx(expect, rel=1e-6)
        assert c.c1.upper >= c.c1.lower - 1e-12


def test_convolution_kernel_matches_convolve():
    from opschur.kernels import apply_operator
    from opschur.spaces import BochnerFunction

    for grid in (TorusGrid(1, 16), TorusGrid(2, 8)):
        k = _random_field(grid, seed=20)
        f = _random_field(grid, seed=21)
        op = convolution_kernel(grid, k)
        fb = BochnerFunction(op.domain_measure, op.source, f.reshape(-1, 1))
        got = apply_operator(op, fb).values[:, 0].reshape(grid.shape)
        want = convolve(grid, k, f)
        np.testing.assert_allclose(got, want, rtol=1e-10, atol=1e-12)


def test_grid_norm_of_constant():
    grid = TorusGrid(2, 16, period=3.0)
    ones = np.ones(grid.shape)
    for p in (1.0, 2.0, 3.5):
        assert grid_lp_norm(grid, ones, p) == pytest.approx(9.0 ** (1.0 / p), rel=1e-12)
    assert grid_lp_norm(grid, ones, math.inf) == pytest.approx(1.0)
