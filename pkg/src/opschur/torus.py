"""Periodic grid model of R^n with unitary discrete Fourier transforms,
convolution operators, and Fourier multiplier application.

The spatial grid spans [-L/2, L/2)^n with N samples per axis; frequencies
are the integer multiples of 2*pi/L in FFT order with the Nyquist line on
the negative half.  The transform pair carries the continuum normalization
(2*pi)^(-n/2) * integral, discretized with cell volumes, so Parseval holds
with constant exactly one and multiplier/convolution identities match
their continuum counterparts without stray factors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .exponents import weighted_power_sum
from .kernels import OperatorKernel
from .schur import SchurConstants, schur_c1
from .spaces import DiscreteMeasureSpace, NormedSpace

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TorusGrid:
    """Discretized torus: n axes, N even points per axis, period L."""

    dim_n: int
    points_per_axis: int
    period: float = TWO_PI

    def __post_init__(self):
        if self.dim_n < 1:
            raise ValueError("dim_n must be >= 1")
        n = self.points_per_axis
        if n < 2 or n % 2 != 0:
            raise ValueError("points_per_axis must be even and >= 2")
        if not (self.period > 0.0 and math.isfinite(self.period)):
            raise ValueError("period must be positive and finite")

    @property
    def shape(self) -> tuple:
        return (self.points_per_axis,) * self.dim_n

    @property
    def size(self) -> int:
        return self.points_per_axis**self.dim_n

    @property
    def spacing(self) -> float:
        return self.period / self.points_per_axis

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim_n

    @property
    def frequency_spacing(self) -> float:
        return TWO_PI / self.period

    @property
    def frequency_cell_volume(self) -> float:
        return self.frequency_spacing**self.dim_n

    def axis_points(self) -> np.ndarray:
        n = self.points_per_axis
        return -0.5 * self.period + self.spacing * np.arange(n)

    def axis_frequencies(self) -> np.ndarray:
        n = self.points_per_axis
        return TWO_PI * np.fft.fftfreq(n, d=self.spacing / 1.0)

    def spatial_mesh(self) -> tuple:
        return tuple(np.meshgrid(*([self.axis_points()] * self.dim_n), indexing="ij"))

    def frequency_mesh(self) -> tuple:
        return tuple(
            np.meshgrid(*([self.axis_frequencies()] * self.dim_n), indexing="ij")
        )

    def frequency_radii(self) -> np.ndarray:
        mesh = self.frequency_mesh()
        return np.sqrt(sum(m * m for m in mesh))

    def measure_space(self) -> DiscreteMeasureSpace:
        """Flattened grid points carrying cell-volume weights."""
        return DiscreteMeasureSpace(
            points=tuple(range(self.size)), weights=(self.cell_volume,) * self.size
        )


def _check_field(grid: TorusGrid, values: np.ndarray) -> tuple:
    """Accept shape grid.shape (scalar field) or grid.shape + (d,)."""
    values = np.asarray(values)
    if values.shape == grid.shape:
        return values, None
    if values.ndim == grid.dim_n + 1 and values.shape[: grid.dim_n] == grid.shape:
        return values, values.shape[-1]
    raise ValueError(
        f"field shape {values.shape} does not conform to grid shape {grid.shape}"
    )


def _alternating(grid: TorusGrid) -> np.ndarray:
    """(-1)**(sum of indices): the phase shift between the grid origin at
    -L/2 and FFT's index origin, one factor per axis."""
    alt1 = (-1.0) ** np.arange(grid.points_per_axis)
    out = alt1
    for _ in range(grid.dim_n - 1):
        out = np.multiply.outer(out, alt1)
    return out


def _spatial_axes(grid: TorusGrid) -> tuple:
    return tuple(range(grid.dim_n))


def dft_forward(grid: TorusGrid, values: np.ndarray) -> np.ndarray:
    """Unitary forward transform; output indexed by FFT-ordered frequencies."""
    values, fiber = _check_field(grid, values)
    axes = _spatial_axes(grid)
    alt = _alternating(grid)
    if fiber is not None:
        alt = alt[..., None]
    scale = (TWO_PI ** (-0.5 * grid.dim_n)) * grid.cell_volume
    return scale * alt * np.fft.fftn(values, axes=axes)


def dft_inverse(grid: TorusGrid, values: np.ndarray) -> np.ndarray:
    """Unitary inverse transform; input indexed by FFT-ordered frequencies."""
    values, fiber = _check_field(grid, values)
    axes = _spatial_axes(grid)
    alt = _alternating(grid)
    if fiber is not None:
        alt = alt[..., None]
    scale = (
        (TWO_PI ** (-0.5 * grid.dim_n)) * grid.frequency_cell_volume * grid.size
    )
    return scale * np.fft.ifftn(alt * values, axes=axes)


def grid_lp_norm(
    grid: TorusGrid, values: np.ndarray, p: float, fiber: Optional[NormedSpace] = None
) -> float:
    """L_p norm over the spatial grid with cell-volume quadrature."""
    values, d = _check_field(grid, values)
    if d is None:
        mags = np.abs(values)
    else:
        mags = (NormedSpace.euclidean(d) if fiber is None else fiber).norm(values)
    return weighted_power_sum(
        mags.ravel(), np.full(mags.size, grid.cell_volume), p
    )


def frequency_lp_norm(
    grid: TorusGrid, values: np.ndarray, p: float, fiber: Optional[NormedSpace] = None
) -> float:
    """L_p norm over the frequency grid with frequency-cell quadrature."""
    values, d = _check_field(grid, values)
    if d is None:
        mags = np.abs(values)
    else:
        mags = (NormedSpace.euclidean(d) if fiber is None else fiber).norm(values)
    return weighted_power_sum(
        mags.ravel(), np.full(mags.size, grid.frequency_cell_volume), p
    )


def _check_kernel_samples(grid: TorusGrid, samples: np.ndarray) -> tuple:
    """Accept grid.shape (scalar) or grid.shape + (dY, dX) matrix samples."""
    samples = np.asarray(samples)
    if samples.shape == grid.shape:
        return samples, None, None
    if samples.ndim == grid.dim_n + 2 and samples.shape[: grid.dim_n] == grid.shape:
        return samples, samples.shape[-2], samples.shape[-1]
    raise ValueError(
        f"kernel samples shape {samples.shape} does not conform to grid {grid.shape}"
    )


def convolve(grid: TorusGrid, kernel_samples: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Periodic convolution (k * f)(x) = cellvol * sum_y k(x - y) f(y).

    Computed spectrally.  Scalar kernels pair with scalar or vector f;
    matrix kernels require f with the matching fiber dimension.
    """
    k, dy, dx = _check_kernel_samples(grid, kernel_samples)
    f, d = _check_field(grid, values)
    axes = _spatial_axes(grid)
    # x - y lands on sample index (i - j + N/2) mod N: undo the -L/2 origin
    k = np.roll(k, -(grid.points_per_axis // 2), axis=axes)
    if dy is None:
        khat = np.fft.fftn(k, axes=axes)
        fhat = np.fft.fftn(f, axes=axes)
        prod = khat[..., None] * fhat if d is not None else khat * fhat
        return grid.cell_volume * np.fft.ifftn(prod, axes=axes)
    if d != dx:
        raise ValueError(f"fiber mismatch: kernel expects {dx}, function has {d}")
    khat = np.fft.fftn(k, axes=axes)
    fhat = np.fft.fftn(f, axes=axes)
    prod = np.einsum("...ij,...j->...i", khat, fhat)
    return grid.cell_volume * np.fft.ifftn(prod, axes=axes)


@dataclass(frozen=True, eq=False)
class SymbolField:
    """A multiplier symbol sampled on the FFT-ordered frequency grid.

    entries has shape grid.shape + (dim Y, dim X); scalar symbols are the
    1x1 case.
    """

    grid: TorusGrid
    source: NormedSpace
    target: NormedSpace
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=complex)
        expected = self.grid.shape + (self.target.dim, self.source.dim)
        if arr.shape != expected:
            raise ValueError(f"symbol shape {arr.shape}, expected {expected}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("symbol must be bounded (finite entries)")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_callable(
        cls,
        grid: TorusGrid,
        source: NormedSpace,
        target: NormedSpace,
        func: Callable[[np.ndarray], np.ndarray],
    ) -> "SymbolField":
        """Sample func(xi) -> (dimY, dimX) matrix at every grid frequency."""
        mesh = grid.frequency_mesh()
        flat = np.stack([m.ravel() for m in mesh], axis=-1)
        entries = np.array([np.asarray(func(xi), dtype=complex) for xi in flat])
        entries = entries.reshape(grid.shape + (target.dim, source.dim))
        return cls(grid, source, target, entries)

    @classmethod
    def from_scalar_samples(cls, grid: TorusGrid, samples: np.ndarray) -> "SymbolField":
        one = NormedSpace.euclidean(1)
        arr = np.asarray(samples, dtype=complex)
        if arr.shape != grid.shape:
            raise ValueError(f"scalar samples shape {arr.shape}, expected {grid.shape}")
        return cls(grid, one, one, arr[..., None, None])


def apply_multiplier(m: SymbolField, values: np.ndarray) -> np.ndarray:
    """T_m f: multiply the spectrum by m pointwise, transform back.

    All normalization and origin phases cancel between the two transforms,
    so this is exactly ifftn(m . fftn(f)) on the FFT-ordered grid.
    """
    f, d = _check_field(m.grid, values)
    scalar_in = d is None
    if scalar_in:
        if m.source.dim != 1:
            raise ValueError("scalar input needs a symbol with one input column")
        f = f[..., None]
        d = 1
    if d != m.source.dim:
        raise ValueError(f"fiber mismatch: symbol expects {m.source.dim}, got {d}")
    axes = _spatial_axes(m.grid)
    fhat = np.fft.fftn(f, axes=axes)
    prod = np.einsum("...ij,...j->...i", m.entries, fhat)
    out = np.fft.ifftn(prod, axes=axes)
    return out[..., 0] if scalar_in and m.target.dim == 1 else out


def symbol_to_kernel(m: SymbolField) -> np.ndarray:
    """Spatial convolution-kernel samples k with k * f = T_m f.

    With unitary transforms the convolution theorem carries a factor
    (2*pi)^(n/2), so k is (2*pi)^(-n/2) times the inverse transform of m.
    """
    grid = m.grid
    scale = TWO_PI ** (-0.5 * grid.dim_n)
    moved = np.moveaxis(m.entries, (-2, -1), (0, 1))  # (dY, dX, *grid.shape)
    out = np.empty_like(moved)
    for i in range(m.target.dim):
        for j in range(m.source.dim):
            out[i, j] = dft_inverse(grid, moved[i, j])
    return scale * np.moveaxis(out, (0, 1), (-2, -1))


def adjoint_kernel_samples(grid: TorusGrid, samples: np.ndarray) -> np.ndarray:
    """Samples of the adjoint convolution kernel x -> k(-x)^H."""
    k, dy, dx = _check_kernel_samples(grid, samples)
    axes = _spatial_axes(grid)
    rev = np.roll(np.flip(k, axis=axes), 1, axis=axes)
    if dy is None:
        return np.conj(rev)
    return np.conj(np.swapaxes(rev, -2, -1))


def _single_column_kernel(
    grid: TorusGrid, samples: np.ndarray, source: NormedSpace, target: NormedSpace
) -> OperatorKernel:
    """View one-variable kernel samples as a kernel with a single domain
    point, so the column-search machinery computes sup_x ||k(.)x||."""
    k, dy, dx = _check_kernel_samples(grid, samples)
    if dy is None:
        k = k[..., None, None]
        dy = dx = 1
    if (dy, dx) != (target.dim, source.dim):
        raise ValueError("kernel fiber does not match the given spaces")
    entries = k.reshape(grid.size, 1, dy, dx)
    point = DiscreteMeasureSpace.counting(1)
    return OperatorKernel(point, grid.measure_space(), source, target, entries)


def convolution_schur_constants(
    grid: TorusGrid,
    samples: np.ndarray,
    theta: float,
    source: Optional[NormedSpace] = None,
    target: Optional[NormedSpace] = None,
    tau: float = 1.0,
    budget: int = 1000,
    seed=0,
) -> SchurConstants:
    """Integral constants of a convolution kernel: C1 = sup_x ||k(.)x||_theta
    over unit x, C2 the same for the adjoint samples with dual norms.

    For scalar kernels both equal ||k||_{L_theta} exactly.
    """
    k, dy, dx = _check_kernel_samples(grid, samples)
    if dy is None:
        source = target = NormedSpace.euclidean(1)
    elif source is None or target is None:
        raise ValueError("matrix kernels need explicit source/target spaces")
    c1 = schur_c1(_single_column_kernel(grid, k, source, target), theta, budget, seed)
    adj = adjoint_kernel_samples(grid, k)
    c2 = schur_c1(
        _single_column_kernel(grid, adj, target.dual(), source.dual()),
        theta,
        budget,
        seed,
    )
    return SchurConstants(theta=float(theta), tau=float(tau), c1=c1, c2=c2)


def convolution_kernel(
    grid: TorusGrid,
    samples: np.ndarray,
    source: Optional[NormedSpace] = None,
    target: Optional[NormedSpace] = None,
) -> OperatorKernel:
    """Dense two-variable kernel k(t - s) on the flattened grid, weighted by
    cell volumes, for the generic operator-norm machinery."""
    k, dy, dx = _check_kernel_samples(grid, samples)
    if dy is None:
        k = k[..., None, None]
        dy = dx = 1
        source = target = NormedSpace.euclidean(1)
    elif source is None or target is None:
        raise ValueError("matrix kernels need explicit source/target spaces")
    n = grid.points_per_axis
    multi = np.unravel_index(np.arange(grid.size), grid.shape)
    # sample index of x_t - x_s along each axis is (i_t - i_s + N/2) mod N
    axis_diffs = tuple((m[:, None] - m[None, :] + n // 2) % n for m in multi)
    entries = k[axis_diffs].reshape(grid.size, grid.size, dy, dx)
    space = grid.measure_space()
    return OperatorKernel(space, space, source, target, entries)
