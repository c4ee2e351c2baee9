"""Finite models of Bochner spaces: weighted point sets, normed coordinate
spaces with duals, and vector-valued functions with L_p norms.

Everything is immutable after construction and pure given explicit seeds.
The duality pairing used throughout is the sesquilinear one,
<u, v> = sum_i conj(u_i) v_i, conjugate-linear in the functional slot, so
that the adjoint of a matrix is its conjugate transpose.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exponents import INF, check_exponent, conjugate, inv, weighted_power_sum


@dataclass(frozen=True)
class DiscreteMeasureSpace:
    """A finite set of labelled points with strictly positive weights."""

    points: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.points) < 1:
            raise ValueError("need at least one point")
        if len(self.points) != len(self.weights):
            raise ValueError("points and weights must have equal length")
        w = np.asarray(self.weights, dtype=float)
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("all weights must be positive and finite")
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "weights", tuple(float(x) for x in w))

    @classmethod
    def counting(cls, n: int) -> "DiscreteMeasureSpace":
        """n points 0..n-1, each of mass 1."""
        return cls(points=tuple(range(n)), weights=(1.0,) * n)

    @classmethod
    def from_weights(cls, weights: Sequence[float]) -> "DiscreteMeasureSpace":
        return cls(points=tuple(range(len(weights))), weights=tuple(weights))

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def weight_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)

    @property
    def total_mass(self) -> float:
        return float(sum(self.weights))


@dataclass(frozen=True)
class NormedSpace:
    """Complex coordinate space C^dim with a norm from a fixed family.

    Kinds: "euclidean", "ell1", "ellinf", and "ellp" (weighted, with
    exponent ``p`` and positive ``weights``).  The weighted family is
    ||v|| = (sum_i w_i |v_i|**p)**(1/p) for p < inf and max_i w_i |v_i|
    at p = inf, so p = 1 and p = inf stay genuinely weighted and the
    double dual returns the original norm.
    """

    dim: int
    kind: str
    p: Optional[float] = None
    weights: Optional[tuple] = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.kind not in ("euclidean", "ell1", "ellinf", "ellp"):
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind == "ellp":
            if self.p is None:
                raise ValueError("ellp norm needs an exponent p")
            check_exponent(self.p)
            w = np.ones(self.dim) if self.weights is None else np.asarray(self.weights, float)
            if w.shape != (self.dim,) or np.any(w <= 0.0):
                raise ValueError("ellp weights must be positive, one per coordinate")
            object.__setattr__(self, "p", float(self.p))
            object.__setattr__(self, "weights", tuple(float(x) for x in w))
        elif self.p is not None or self.weights is not None:
            raise ValueError(f"{self.kind} norm takes no p/weights")

    @classmethod
    def euclidean(cls, dim: int) -> "NormedSpace":
        return cls(dim=dim, kind="euclidean")

    @classmethod
    def ell1(cls, dim: int) -> "NormedSpace":
        return cls(dim=dim, kind="ell1")

    @classmethod
    def ellinf(cls, dim: int) -> "NormedSpace":
        return cls(dim=dim, kind="ellinf")

    @classmethod
    def ellp(cls, dim: int, p: float, weights: Optional[Sequence[float]] = None) -> "NormedSpace":
        return cls(dim=dim, kind="ellp", p=p, weights=None if weights is None else tuple(weights))

    @property
    def weight_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)

    def norm(self, v: np.ndarray) -> np.ndarray:
        """Norm along the last axis; broadcasts over leading axes."""
        v = np.asarray(v)
        a = np.abs(v)
        if self.kind == "euclidean":
            return np.sqrt(np.sum(a * a, axis=-1))
        if self.kind == "ell1":
            return np.sum(a, axis=-1)
        if self.kind == "ellinf":
            return np.max(a, axis=-1)
        w = self.weight_array
        if math.isinf(self.p):
            return np.max(w * a, axis=-1)
        return np.sum(w * a**self.p, axis=-1) ** (1.0 / self.p)

    def dual(self) -> "NormedSpace":
        """The dual space under the bilinear pairing."""
        if self.kind == "euclidean":
            return self
        if self.kind == "ell1":
            return NormedSpace.ellinf(self.dim)
        if self.kind == "ellinf":
            return NormedSpace.ell1(self.dim)
        w = self.weight_array
        if self.p == 1.0:
            return NormedSpace.ellp(self.dim, INF, 1.0 / w)
        if math.isinf(self.p):
            return NormedSpace.ellp(self.dim, 1.0, 1.0 / w)
        pc = conjugate(self.p)
        return NormedSpace.ellp(self.dim, pc, w ** (1.0 - pc))

    def norming_functional(self, v: np.ndarray) -> np.ndarray:
        """The unit dual vector u with <u, v> = ||v||.

        Non-smooth kinds break ties deterministically: zero coordinates
        map to zero (ell1-type) and the first max-attaining index wins
        (ellinf-type).  Raises on the zero vector; callers that iterate
        must supply a fallback direction.
        """
        v = np.asarray(v, dtype=complex)
        nrm = float(self.norm(v))
        if nrm == 0.0:
            raise ValueError("no norming functional selected (zero vector)")
        if self.kind == "euclidean":
            return v / nrm
        if self.kind == "ell1":
            return _phase(v)
        if self.kind == "ellinf":
            u = np.zeros_like(v)
            i = int(np.argmax(np.abs(v)))
            u[i] = _phase(v[i : i + 1])[0]
            return u
        w = self.weight_array
        if self.p == 1.0:
            return w * _phase(v)
        if math.isinf(self.p):
            u = np.zeros_like(v)
            i = int(np.argmax(w * np.abs(v)))
            u[i] = w[i] * _phase(v[i : i + 1])[0]
            return u
        a = np.abs(v)
        mag = np.zeros_like(a)
        np.power(a, self.p - 1.0, out=mag, where=a > 0)
        return w * _phase(v) * mag / nrm ** (self.p - 1.0)


def _phase(v: np.ndarray) -> np.ndarray:
    """v/|v| entrywise, with 0 -> 0."""
    v = np.asarray(v, dtype=complex)
    a = np.abs(v)
    out = np.zeros_like(v)
    np.divide(v, a, out=out, where=a > 0)
    return out


def duality_map(space: NormedSpace, v: np.ndarray) -> np.ndarray:
    """Module-level alias for :meth:`NormedSpace.norming_functional`."""
    return space.norming_functional(v)


@dataclass(frozen=True, eq=False)
class BochnerFunction:
    """A vector-valued function on a DiscreteMeasureSpace.

    values has shape (number of points, target.dim), complex.
    """

    space: DiscreteMeasureSpace
    target: NormedSpace
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.space.size, self.target.dim):
            raise ValueError(
                f"values shape {vals.shape} does not match "
                f"({self.space.size}, {self.target.dim})"
            )
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls, space: DiscreteMeasureSpace, target: NormedSpace) -> "BochnerFunction":
        return cls(space, target, np.zeros((space.size, target.dim), dtype=complex))

    def pointwise_norms(self) -> np.ndarray:
        return self.target.norm(self.values)

    def scaled(self, c: complex) -> "BochnerFunction":
        return BochnerFunction(self.space, self.target, c * self.values)

    def __add__(self, other: "BochnerFunction") -> "BochnerFunction":
        if other.space != self.space or other.target != self.target:
            raise ValueError("space/target mismatch")
        return BochnerFunction(self.space, self.target, self.values + other.values)


def lp_norm(f: BochnerFunction, p: float) -> float:
    """Bochner L_p norm: (sum_s w_s ||f(s)||**p)**(1/p), max at p = inf."""
    return weighted_power_sum(f.pointwise_norms(), f.space.weight_array, p)


def pairing(f: BochnerFunction, g: BochnerFunction) -> complex:
    """Integral pairing sum_s w_s <f(s), g(s)>, conjugate-linear in f.

    f plays the functional role: pairing(duality_map applied to g, g)
    recovers the L_p norm of g.
    """
    if g.space != f.space:
        raise ValueError("functions live on different spaces")
    return complex(
        np.sum(f.space.weight_array * np.sum(np.conj(f.values) * g.values, axis=1))
    )


def random_simple_function(
    space: DiscreteMeasureSpace,
    target: NormedSpace,
    sparsity: int,
    seed,
    unit_exponent: Optional[float] = None,
) -> BochnerFunction:
    """A random finitely-supported function: `sparsity` points carry vectors
    from the unit sphere of the target, the rest are zero.

    Deterministic for a fixed seed.  With ``unit_exponent`` set, the result
    is rescaled to unit L_q norm for q = unit_exponent.
    """
    if not (1 <= sparsity <= space.size):
        raise ValueError(f"sparsity must lie in [1, {space.size}], got {sparsity}")
    rng = np.random.default_rng(seed)
    support = rng.choice(space.size, size=sparsity, replace=False)
    vals = np.zeros((space.size, target.dim), dtype=complex)
    raw = rng.standard_normal((sparsity, target.dim)) + 1j * rng.standard_normal(
        (sparsity, target.dim)
    )
    norms = target.norm(raw)
    vals[support] = raw / norms[:, None]
    f = BochnerFunction(space, target, vals)
    if unit_exponent is not None:
        nrm = lp_norm(f, unit_exponent)
        f = f.scaled(1.0 / nrm)
    return f


def holder_pair(p: float) -> float:
    """Conjugate exponent helper re-exported for callers of `pairing`."""
    return conjugate(p)
