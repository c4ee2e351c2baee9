"""Checkable sufficient conditions for Fourier multipliers (pointwise
derivative suprema and dyadic-annulus quadrature conditions) and
end-to-end empirical verification of the multiplier bounds, on both the
L_q -> L_p and the dyadic-block-space routes.

Symbols are callables mapping an (n,) frequency point to a scalar or a
(dimY, dimX) matrix.  Analytic derivative closures can be supplied as a
mapping from multi-indices to callables; otherwise derivatives fall back
to 4th-order centered finite differences with step equal to the grid
spacing.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .besov import (
    BesovParams,
    besov_norm,
    build_partition,
    mu_analysis_grid,
    mu_estimate,
    psi_profile,
)
from .exponents import INF, check_exponent, inv, weighted_power_sum
from .opnorm import pointwise_opnorm
from .schur import NormSearch, operator_norm_search
from .spaces import NormedSpace
from .torus import (
    SymbolField,
    TorusGrid,
    apply_multiplier,
    convolution_kernel,
    symbol_to_kernel,
)


@dataclass(frozen=True)
class MultiplierReport:
    """Outcome of a sufficient-condition check: the constant, the
    derivative order involved, and optional per-piece diagnostics."""

    condition_name: str
    constant_A: float
    derivative_order_l: int
    admissible: bool
    empirical_fm_ratio: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (self.constant_A >= 0.0 or math.isnan(self.constant_A)):
            raise ValueError("constant_A must be nonnegative")
        if self.derivative_order_l < 1:
            raise ValueError("derivative_order_l must be >= 1")
        if self.empirical_fm_ratio < 0.0:
            raise ValueError("empirical_fm_ratio must be nonnegative")


_STENCIL = ((-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0))


def _eval_derivative(func: Callable, alpha: tuple, t: np.ndarray, h: float):
    """D^alpha func at point t by composing 4th-order centered first
    differences (exact for polynomials up to degree 4 per axis)."""
    for i, a in enumerate(alpha):
        if a > 0:
            rest = alpha[:i] + (a - 1,) + alpha[i + 1 :]
            acc = None
            for off, c in _STENCIL:
                shifted = np.array(t, dtype=float)
                shifted[i] += off * h
                term = c * np.asarray(_eval_derivative(func, rest, shifted, h))
                acc = term if acc is None else acc + term
            return acc / (12.0 * h)
    return np.asarray(func(np.asarray(t, dtype=float)), dtype=complex)


def _multi_indices(n: int, max_total: int):
    for alpha in itertools.product(range(max_total + 1), repeat=n):
        if sum(alpha) <= max_total:
            yield alpha


def _derivative_samples(
    func: Callable,
    derivatives: Optional[Mapping],
    alpha: tuple,
    points: np.ndarray,
    h: float,
) -> np.ndarray:
    """(M, dY, dX) array of D^alpha values at the given (M, n) points;
    scalar symbols are promoted to 1x1 matrices."""
    if derivatives is not None and tuple(alpha) in derivatives:
        d = derivatives[tuple(alpha)]
        vals = [np.asarray(d(p), dtype=complex) for p in points]
    else:
        vals = [_eval_derivative(func, tuple(alpha), p, h) for p in points]
    out = np.stack([np.atleast_2d(v) for v in vals])
    return out


def _symbol_points(grid: TorusGrid) -> np.ndarray:
    mesh = grid.spatial_mesh()
    return np.stack([m.ravel() for m in mesh], axis=-1)


def _fiber_spaces(sample, source, target):
    sample = np.atleast_2d(np.asarray(sample))
    dy, dx = sample.shape[-2], sample.shape[-1]
    src = source if source is not None else NormedSpace.euclidean(dx)
    tgt = target if target is not None else NormedSpace.euclidean(dy)
    return src, tgt


def _check_gap(u: float, p: float, q: float) -> float:
    gap = inv(q) - inv(p)
    if gap < -1e-12 or gap > inv(u) + 1e-12:
        raise ValueError(f"need 0 <= 1/q - 1/p <= 1/u, got gap {gap}")
    return gap


def _needs_fd(derivatives, n: int, l: int) -> bool:
    have = set() if derivatives is None else {tuple(a) for a in derivatives}
    return any(
        alpha not in have for alpha in _multi_indices(n, l) if sum(alpha) > 0
    )


def mikhlin_check(
    func: Callable,
    u: float,
    p: float,
    q: float,
    grid: TorusGrid,
    derivatives: Optional[Mapping] = None,
    source: Optional[NormedSpace] = None,
    target: Optional[NormedSpace] = None,
) -> MultiplierReport:
    """Pointwise derivative condition: A = max over |alpha| <= l of the
    grid supremum of (1 + |t|)^|alpha| * opnorm(D^alpha m(t)), with
    l = ceil(n (1/u + 1/p - 1/q)) + 1.
    """
    u = check_exponent(u, "u")
    p = check_exponent(p, "p")
    q = check_exponent(q, "q")
    _check_gap(u, p, q)
    n = grid.dim_n
    value = n * (1.0 / u + inv(p) - inv(q))
    l = int(math.ceil(value - 1e-9)) + 1
    if _needs_fd(derivatives, n, l) and grid.points_per_axis <= 4 * l:
        raise ValueError(
            "insufficient grid resolution for finite differences "
            f"(need more than {4 * l} points per axis)"
        )
    points = _symbol_points(grid)
    radii = np.sqrt(np.sum(points**2, axis=-1))
    h = grid.spacing
    src = tgt = None
    best = 0.0
    per_alpha = {}
    for alpha in _multi_indices(n, l):
        vals = _derivative_samples(func, derivatives, alpha, points, h)
        if src is None:
            src, tgt = _fiber_spaces(vals[0], source, target)
        ops, _ = pointwise_opnorm(vals, src, tgt)
        term = float(np.max((1.0 + radii) ** sum(alpha) * ops))
        per_alpha[alpha] = term
        best = max(best, term)
    return MultiplierReport(
        condition_name="mikhlin",
        constant_A=best,
        derivative_order_l=l,
        admissible=bool(np.isfinite(best)),
        diagnostics={"per_alpha": per_alpha},
    )


def lemma36_check(
    func: Callable,
    u: float,
    p: float,
    q: float,
    theta: float,
    grid: TorusGrid,
    derivatives: Optional[Mapping] = None,
    source: Optional[NormedSpace] = None,
    target: Optional[NormedSpace] = None,
    k_range: Optional[Sequence[int]] = None,
) -> MultiplierReport:
    """Dyadic-annulus quadrature condition: theta-norms of D^alpha m on
    the core {|t| <= 2} and of each rescaled m_k(t) = m(2^(k-1) t) on the
    annulus {1 <= |t| <= 4}, for the minimal integer l > n (1/u + 1/p - 1/q).

    The k range is truncated to the grid's dyadic reach; per-k values are
    returned as growth diagnostics.
    """
    u = check_exponent(u, "u")
    p = check_exponent(p, "p")
    q = check_exponent(q, "q")
    theta = check_exponent(theta, "theta")
    if theta < u - 1e-12:
        raise ValueError("need theta in [u, inf]")
    _check_gap(u, p, q)
    n = grid.dim_n
    value = n * (1.0 / u + inv(p) - inv(q))
    l = int(math.floor(value + 1e-9)) + 1
    if _needs_fd(derivatives, n, l) and grid.points_per_axis <= 4 * l:
        raise ValueError(
            "insufficient grid resolution for finite differences "
            f"(need more than {4 * l} points per axis)"
        )
    points = _symbol_points(grid)
    radii = np.sqrt(np.sum(points**2, axis=-1))
    h = grid.spacing
    core = radii <= 2.0
    annulus = (radii >= 1.0) & (radii <= 4.0)
    if not np.any(annulus):
        raise ValueError("insufficient grid resolution (no points in 1 <= |t| <= 4)")
    if k_range is None:
        top = int(math.floor(math.log2(radii.max()))) - 1
        k_range = range(1, max(top, 1) + 1)
    k_range = list(k_range)

    src_tgt = [None, None]

    def piece_value(f, derivs, mask) -> float:
        w = np.full(int(mask.sum()), grid.cell_volume)
        best = 0.0
        for alpha in _multi_indices(n, l):
            vals = _derivative_samples(f, derivs, alpha, points[mask], h)
            if src_tgt[0] is None:
                src_tgt[0], src_tgt[1] = _fiber_spaces(vals[0], source, target)
            ops, _ = pointwise_opnorm(vals, src_tgt[0], src_tgt[1])
            best = max(best, weighted_power_sum(ops, w, theta))
        return best

    core_value = piece_value(func, derivatives, core)
    per_k = {}
    for k in k_range:
        scale = 2.0 ** (k - 1)

        def fk(t, _s=scale):
            return func(_s * t)

        dk = None
        if derivatives is not None:
            dk = {
                tuple(a): (lambda t, _d=d, _s=scale, _o=sum(a): _s**_o * np.asarray(_d(_s * t)))
                for a, d in derivatives.items()
            }
        per_k[k] = piece_value(fk, dk, annulus)
    best = max([core_value] + list(per_k.values()))
    return MultiplierReport(
        condition_name="lemma36",
        constant_A=best,
        derivative_order_l=l,
        admissible=bool(np.isfinite(best)),
        diagnostics={"core": core_value, "per_k": per_k, "theta": theta},
    )


def remark38c_check(
    func: Callable,
    p: float,
    q: float,
    grid: TorusGrid,
    derivative: Optional[Callable] = None,
    source: Optional[NormedSpace] = None,
    target: Optional[NormedSpace] = None,
) -> MultiplierReport:
    """Hilbert-fiber first-order condition in one variable: requires
    1/q - 1/p = 1/2 and reports A1 = sup opnorm(m) and
    A2 = sup (1 + |t|) opnorm(m'); the pointwise check with u = 2, l = 1.
    """
    p = check_exponent(p, "p")
    q = check_exponent(q, "q")
    if grid.dim_n != 1:
        raise ValueError("this condition is one-dimensional")
    if abs((inv(q) - inv(p)) - 0.5) > 1e-12:
        raise ValueError(f"need 1/q - 1/p = 1/2, got {inv(q) - inv(p)}")
    for sp in (source, target):
        if sp is not None and sp.kind != "euclidean":
            raise ValueError("euclidean (Hilbert) fibers required")
    derivatives = None if derivative is None else {(1,): derivative}
    if derivative is None and grid.points_per_axis <= 4:
        raise ValueError(
            "insufficient grid resolution for finite differences "
            "(need more than 4 points per axis)"
        )
    points = _symbol_points(grid)
    radii = np.abs(points[:, 0])
    h = grid.spacing
    vals0 = _derivative_samples(func, derivatives, (0,), points, h)
    src, tgt = _fiber_spaces(vals0[0], source, target)
    a1 = float(np.max(pointwise_opnorm(vals0, src, tgt)[0]))
    vals1 = _derivative_samples(func, derivatives, (1,), points, h)
    a2 = float(np.max((1.0 + radii) * pointwise_opnorm(vals1, src, tgt)[0]))
    admissible = bool(np.isfinite(a1) and np.isfinite(a2))
    return MultiplierReport(
        condition_name="remark38c",
        constant_A=max(a1, a2),
        derivative_order_l=1,
        admissible=admissible,
        diagnostics={"A1": a1, "A2": a2},
    )


def partition_profile(k: int, radii: np.ndarray) -> np.ndarray:
    """Continuum dyadic cutoff phi_k at the given radii: psi(2^-k |t|) for
    k >= 1, and 1 - psi(|t|/2) cut at radius 2 for k = 0."""
    radii = np.asarray(radii, dtype=float)
    if k < 0:
        raise ValueError("block index must be >= 0")
    if k == 0:
        return np.where(radii <= 2.0, 1.0 - psi_profile(radii / 2.0), 0.0)
    return psi_profile(radii / 2.0**k)


def block_symbol_callable(func: Callable, k: int) -> Callable:
    """phi_k * m as a callable symbol."""

    def blocked(t):
        r = float(np.sqrt(np.sum(np.asarray(t, dtype=float) ** 2)))
        return partition_profile(k, np.array(r)) * np.asarray(func(t), dtype=complex)

    return blocked


def _wrap_matrix_func(func: Callable, n: int):
    probe = np.asarray(func(np.zeros(n)), dtype=complex)
    if probe.ndim == 0:
        return (lambda t: np.asarray(func(t), dtype=complex).reshape(1, 1)), 1, 1
    if probe.ndim != 2:
        raise ValueError("symbol must return a scalar or a matrix")
    return (lambda t: np.asarray(func(t), dtype=complex)), probe.shape[0], probe.shape[1]


@dataclass(frozen=True, eq=False)
class FmVerification:
    """Empirical multiplier-norm check: certified lower bound on the
    operator norm against the dilation-minimized symbol functional."""

    u: float
    q: float
    p: float
    points_per_axis: int
    observed_lower: float
    mu_value: float
    ratio: float
    search: NormSearch

    def __post_init__(self):
        if self.observed_lower < 0.0 or self.ratio < 0.0:
            raise ValueError("norm bounds and ratios are nonnegative")


def verify_fm_lq_lp(
    func: Callable,
    u: float,
    q: float,
    p: float,
    grid: TorusGrid,
    source: Optional[NormedSpace] = None,
    target: Optional[NormedSpace] = None,
    restarts: int = 6,
    iterations: int = 30,
    sphere_budget: int = 300,
    seed=0,
    dilation_exponents: Optional[Sequence[int]] = None,
    analysis_grid: Optional[TorusGrid] = None,
) -> FmVerification:
    """Lower-bound the L_q -> L_p norm of the multiplier operator through
    its dense convolution kernel, and compare with the symbol functional.

    The reported ratio lower/mu is what the theory bounds by a constant
    depending only on the fibers' Fourier-type; it is recorded, not
    asserted against any specific number.
    """
    u = check_exponent(u, "u")
    q = check_exponent(q, "q")
    p = check_exponent(p, "p")
    _check_gap(u, p, q)
    mfunc, dy, dx = _wrap_matrix_func(func, grid.dim_n)
    src = source if source is not None else NormedSpace.euclidean(dx)
    tgt = target if target is not None else NormedSpace.euclidean(dy)
    field_ = SymbolField.from_callable(grid, src, tgt, mfunc)
    samples = symbol_to_kernel(field_)
    kernel = convolution_kernel(grid, samples, source=src, target=tgt)
    search = operator_norm_search(
        kernel,
        q,
        p,
        restarts=restarts,
        iterations=iterations,
        sphere_budget=sphere_budget,
        seed=seed,
    )
    if analysis_grid is None:
        analysis_grid = mu_analysis_grid(grid.dim_n, grid.points_per_axis)
    mu = mu_estimate(
        mfunc,
        u,
        p,
        q,
        analysis_grid,
        source=src,
        target=tgt,
        dilation_exponents=dilation_exponents,
    )
    if search.value == 0.0:
        ratio = 0.0
    elif mu == 0.0:
        ratio = math.inf
    else:
        ratio = search.value / mu
    return FmVerification(
        u=u,
        q=q,
        p=p,
        points_per_axis=grid.points_per_axis,
        observed_lower=search.value,
        mu_value=mu,
        ratio=ratio,
        search=search,
    )


@dataclass(frozen=True, eq=False)
class FmBesovVerification:
    """Empirical check of the block-space multiplier bound: lower bound on
    the B^s_{q,r} -> B^s_{p,r} norm against A = max_k mu(phi_k * m)."""

    u: float
    q: float
    p: float
    s: float
    r: float
    points_per_axis: int
    observed_lower: float
    bound_A: float
    ratio: float
    witness: Optional[np.ndarray]

    def __post_init__(self):
        if self.observed_lower < 0.0 or self.ratio < 0.0:
            raise ValueError("norm bounds and ratios are nonnegative")


def verify_fm_besov(
    func: Callable,
    u: float,
    q: float,
    p: float,
    s: float,
    r: float,
    grid: TorusGrid,
    source: Optional[NormedSpace] = None,
    target: Optional[NormedSpace] = None,
    samples: int = 60,
    seed=0,
    dilation_exponents: Optional[Sequence[int]] = None,
    analysis_grid: Optional[TorusGrid] = None,
) -> FmBesovVerification:
    """Lower-bound the dyadic-block-space operator norm of the multiplier
    by a ratio search over band-limited inputs, against the blockwise
    symbol constant A = max_k mu(phi_k * m).
    """
    u = check_exponent(u, "u")
    q = check_exponent(q, "q")
    p = check_exponent(p, "p")
    r = check_exponent(r, "r")
    _check_gap(u, p, q)
    mfunc, dy, dx = _wrap_matrix_func(func, grid.dim_n)
    if dy != dx or dx != 1:
        raise ValueError("block-space search currently handles scalar symbols")
    src = source if source is not None else NormedSpace.euclidean(1)
    tgt = target if target is not None else NormedSpace.euclidean(1)
    field_ = SymbolField.from_callable(grid, src, tgt, mfunc)
    partition = build_partition(grid)
    if analysis_grid is None:
        analysis_grid = mu_analysis_grid(grid.dim_n, grid.points_per_axis)
    bound = 0.0
    for k in range(partition.k_max + 1):
        bound = max(
            bound,
            mu_estimate(
                block_symbol_callable(mfunc, k),
                u,
                p,
                q,
                analysis_grid,
                dilation_exponents=dilation_exponents,
            ),
        )
    params_q = BesovParams(s, q, r)
    params_p = BesovParams(s, p, r)
    axes = tuple(range(grid.dim_n))
    fields = [
        np.fft.ifftn(partition.phi_samples[k].astype(complex), axes=axes)
        for k in range(partition.k_max + 1)
        if np.any(partition.phi_samples[k] > 0)
    ]
    for i in range(samples):
        rng = np.random.default_rng([seed, i])
        k = int(rng.integers(partition.k_max + 1))
        raw = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        spec = partition.phi_samples[k] * np.fft.fftn(raw, axes=axes)
        fields.append(np.fft.ifftn(spec, axes=axes))
    best = 0.0
    witness = None
    for f in fields:
        den = besov_norm(grid, f, params_q, partition=partition)
        if den == 0.0:
            continue
        tf = apply_multiplier(field_, f)
        num = besov_norm(grid, tf, params_p, partition=partition)
        val = num / den
        if val > best:
            best, witness = val, f
    if best == 0.0:
        ratio = 0.0
    elif bound == 0.0:
        ratio = math.inf
    else:
        ratio = best / bound
    return FmBesovVerification(
        u=u,
        q=q,
        p=p,
        s=s,
        r=r,
        points_per_axis=grid.points_per_axis,
        observed_lower=best,
        bound_A=bound,
        ratio=ratio,
        witness=witness,
    )
