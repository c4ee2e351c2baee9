"""Matrix-valued kernels on pairs of discrete measure spaces.

A kernel k assigns to every point pair (t, s) a matrix mapping the source
space X into the target space Y.  The induced integral operator is

    (K f)(t) = sum_s weight_s * k(t, s) f(s),

acting between the Bochner spaces L_q(S, X) and L_p(T, Y).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .spaces import BochnerFunction, DiscreteMeasureSpace, NormedSpace


@dataclass(frozen=True, eq=False)
class OperatorKernel:
    """Discretized matrix-valued kernel with its four space attachments.

    entries has shape (|T|, |S|, dimY, dimX); entries[t, s] maps X -> Y.
    """

    domain_measure: DiscreteMeasureSpace
    codomain_measure: DiscreteMeasureSpace
    source: NormedSpace
    target: NormedSpace
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=complex)
        expected = (
            self.codomain_measure.size,
            self.domain_measure.size,
            self.target.dim,
            self.source.dim,
        )
        if arr.shape != expected:
            raise ValueError(
                f"kernel entries shape {arr.shape} does not match spaces {expected}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("kernel entries must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.entries)

    @classmethod
    def zero(cls, domain_measure, codomain_measure, source, target):
        shape = (codomain_measure.size, domain_measure.size, target.dim, source.dim)
        return cls(domain_measure, codomain_measure, source, target, np.zeros(shape))

    @classmethod
    def from_function(
        cls,
        domain_measure: DiscreteMeasureSpace,
        codomain_measure: DiscreteMeasureSpace,
        source: NormedSpace,
        target: NormedSpace,
        func: Callable,
    ) -> "OperatorKernel":
        """Tabulate func(t, s) -> matrix over all point pairs."""
        rows = []
        for t in codomain_measure.points:
            row = [np.asarray(func(t, s), dtype=complex) for s in domain_measure.points]
            rows.append(row)
        return cls(domain_measure, codomain_measure, source, target, np.array(rows))


def apply_operator(kernel: OperatorKernel, f: BochnerFunction) -> BochnerFunction:
    """Integrate the kernel against f: (Kf)(t) = sum_s w_s k(t,s) f(s)."""
    if f.space != kernel.domain_measure or f.target != kernel.source:
        raise ValueError("function does not live on the kernel's domain")
    w = kernel.domain_measure.weight_array
    out = np.einsum("tsij,s,sj->ti", kernel.entries, w, f.values)
    return BochnerFunction(kernel.codomain_measure, kernel.target, out)


def adjoint_kernel(kernel: OperatorKernel) -> OperatorKernel:
    """Kernel of the adjoint: k*(s, t) = k(t, s)^H, acting Y* -> X*.

    Under the sesquilinear pairing the identity <K*u, f> = <u, K f> holds
    exactly with the conjugate transpose, so the alternating ascent in the
    norm search is monotone.
    """
    entries = np.conj(kernel.entries.transpose(1, 0, 3, 2))
    return OperatorKernel(
        kernel.codomain_measure,
        kernel.domain_measure,
        kernel.target.dual(),
        kernel.source.dual(),
        entries,
    )


def scalar_kernel(
    domain_measure: DiscreteMeasureSpace,
    codomain_measure: DiscreteMeasureSpace,
    values: np.ndarray,
) -> OperatorKernel:
    """Scalar kernel a(t, s) acting on one-dimensional euclidean fibers."""
    values = np.asarray(values, dtype=complex)
    one = NormedSpace.euclidean(1)
    return OperatorKernel(
        domain_measure, codomain_measure, one, one, values[:, :, None, None]
    )


def circulant_kernel(symbol: np.ndarray, fiber: NormedSpace | None = None) -> OperatorKernel:
    """Convolution kernel k(t, s) = g[(t - s) mod n] on the cyclic group Z_n.

    Counting measure on both sides.  A scalar symbol g acts as g * identity
    on the fiber (default: one-dimensional euclidean).
    """
    symbol = np.asarray(symbol)
    n = symbol.shape[0]
    space = DiscreteMeasureSpace.counting(n)
    if fiber is None:
        fiber = NormedSpace.euclidean(1)
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    if symbol.ndim == 1:
        eye = np.eye(fiber.dim)
        entries = symbol[idx][:, :, None, None] * eye[None, None]
    else:
        if symbol.shape[1:] != (fiber.dim, fiber.dim):
            raise ValueError("matrix symbol must have shape (n, dim, dim)")
        entries = symbol[idx]
    return OperatorKernel(space, space, fiber, fiber, entries)


def random_kernel(
    domain_measure: DiscreteMeasureSpace,
    codomain_measure: DiscreteMeasureSpace,
    source: NormedSpace,
    target: NormedSpace,
    seed=0,
    scale: float = 1.0,
) -> OperatorKernel:
    """Kernel with independent complex gaussian entries."""
    rng = np.random.default_rng(seed)
    shape = (codomain_measure.size, domain_measure.size, target.dim, source.dim)
    entries = scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return OperatorKernel(domain_measure, codomain_measure, source, target, entries)
