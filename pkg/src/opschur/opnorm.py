"""Operator norms of matrices acting between the supported norm kinds.

Exact formulas exist when the source is ell1-like (extreme points are
scaled basis vectors), when the target is ellinf-like (row functionals),
and for euclidean -> euclidean (largest singular value).  Every other pair
gets a certified upper bound by factoring through euclidean space, plus a
searched lower estimate.
"""
from __future__ import annotations

import math

import numpy as np

from .spaces import NormedSpace, _phase


def _is_ell1_like(space: NormedSpace) -> bool:
    return space.kind == "ell1" or (space.kind == "ellp" and space.p == 1.0)


def _is_ellinf_like(space: NormedSpace) -> bool:
    return space.kind == "ellinf" or (space.kind == "ellp" and math.isinf(space.p))


def _coordinate_scales(space: NormedSpace) -> np.ndarray:
    """Norms of the basis vectors e_j (so e_j / scale_j is on the sphere)."""
    return space.norm(np.eye(space.dim))


def from_euclidean_constant(space: NormedSpace) -> float:
    """Smallest c with ||v||_space <= c ||v||_2 for all v."""
    d = space.dim
    if space.kind == "euclidean":
        return 1.0
    if space.kind == "ell1":
        return math.sqrt(d)
    if space.kind == "ellinf":
        return 1.0
    w = space.weight_array
    p = space.p
    if math.isinf(p):
        return float(w.max())
    if p == 1.0:
        return float(np.sqrt(np.sum(w * w)))
    if p == 2.0:
        return float(np.sqrt(w.max()))
    if p < 2.0:
        e = 2.0 / (2.0 - p)
        return float(np.sum(w**e) ** ((2.0 - p) / (2.0 * p)))
    return float(w.max() ** (1.0 / p))


def to_euclidean_constant(space: NormedSpace) -> float:
    """Smallest known c with ||v||_2 <= c ||v||_space for all v."""
    d = space.dim
    if space.kind == "euclidean":
        return 1.0
    if space.kind == "ell1":
        return 1.0
    if space.kind == "ellinf":
        return math.sqrt(d)
    w = space.weight_array
    p = space.p
    if math.isinf(p):
        return float(np.sqrt(np.sum(1.0 / (w * w))))
    if p <= 2.0:
        return float((w.min()) ** (-1.0 / p))
    return float(d ** (0.5 - 1.0 / p) * w.min() ** (-1.0 / p))


def _sigma_max(entries: np.ndarray) -> np.ndarray:
    """Largest singular value along the last two axes."""
    return np.linalg.svd(entries, compute_uv=False)[..., 0]


def pointwise_opnorm(entries: np.ndarray, source: NormedSpace, target: NormedSpace):
    """Operator norms of a field of matrices, shape (..., dimY, dimX).

    Returns (values, exact): exact means the values are the true norms;
    otherwise they are certified upper bounds.
    """
    entries = np.asarray(entries, dtype=complex)
    if _is_ell1_like(source):
        scales = _coordinate_scales(source)
        col_norms = target.norm(np.moveaxis(entries, -1, -2))  # (..., dimX)
        return np.max(col_norms / scales, axis=-1), True
    if _is_ellinf_like(target):
        dual_src = source.dual()
        row_norms = dual_src.norm(entries)  # (..., dimY)
        if target.kind == "ellinf":
            return np.max(row_norms, axis=-1), True
        return np.max(target.weight_array * row_norms, axis=-1), True
    if source.kind == "euclidean" and target.kind == "euclidean":
        return _sigma_max(entries), True
    c = from_euclidean_constant(target) * to_euclidean_constant(source)
    return c * _sigma_max(entries), False


def unit_sphere_sample(space: NormedSpace, count: int, rng: np.random.Generator) -> np.ndarray:
    """`count` random points on the unit sphere of `space`, shape (count, dim)."""
    raw = rng.standard_normal((count, space.dim)) + 1j * rng.standard_normal(
        (count, space.dim)
    )
    return raw / space.norm(raw)[:, None]


def matrix_opnorm_lower(
    A: np.ndarray,
    source: NormedSpace,
    target: NormedSpace,
    budget: int = 200,
    seed=0,
) -> float:
    """Searched lower estimate of ||A||, exact when a closed form exists."""
    val, exact = pointwise_opnorm(A, source, target)
    if exact:
        return float(val)
    rng = np.random.default_rng(seed)
    xs = [np.eye(source.dim, dtype=complex) / _coordinate_scales(source)[:, None]]
    xs.append(unit_sphere_sample(source, budget, rng))
    # right singular vector is the exact maximizer for the euclidean pair
    _, _, vh = np.linalg.svd(A)
    v = np.conj(vh[0])
    xs.append((v / source.norm(v))[None, :])
    cand = np.concatenate(xs, axis=0)
    vals = target.norm(cand @ np.asarray(A, dtype=complex).T)
    return float(vals.max())
