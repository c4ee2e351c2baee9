"""Extended-real exponent arithmetic shared by every norm computation.

Exponents live in [1, inf]; ``math.inf`` is a first-class value.  The
conventions 1/inf = 0 and x**(1/inf) = 1 are centralized here so that no
other module hand-rolls them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INF = math.inf


def check_exponent(p: float, name: str = "p") -> float:
    """Validate p in [1, inf] and return it as a float."""
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise ValueError(f"{name} must lie in [1, inf], got {p!r}")
    return p


def inv(p: float) -> float:
    """1/p with the convention 1/inf = 0."""
    return 0.0 if math.isinf(p) else 1.0 / p


def conjugate(p: float) -> float:
    """Conjugate exponent p' with 1/p + 1/p' = 1 (1' = inf, inf' = 1)."""
    p = check_exponent(p)
    if p == 1.0:
        return INF
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def weighted_power_sum(values: np.ndarray, weights: np.ndarray, p: float) -> float:
    """(sum_i w_i * values_i**p)**(1/p), or max_i values_i for p = inf.

    `values` must be nonnegative.  This is the single place where discrete
    L_p quadrature happens; weights carry the measure (point masses or
    cell volumes).
    """
    p = check_exponent(p)
    values = np.asarray(values, dtype=float)
    if math.isinf(p):
        return float(values.max()) if values.size else 0.0
    total = float(np.sum(weights * values**p))
    return total ** (1.0 / p)


def lr_combine(values: np.ndarray, r: float) -> float:
    """Plain l_r combination of a nonnegative sequence (sup for r = inf)."""
    return weighted_power_sum(values, np.ones_like(np.asarray(values, dtype=float)), r)


@dataclass(frozen=True)
class ExponentTriple:
    """Admissible (q, p, theta) with 1/q - 1/p = 1 - 1/theta.

    theta = 1 forces p = q (any q in [1, inf]); for theta > 1 the source
    exponent must satisfy q < theta' = theta/(theta-1), giving finite p >= q.
    """

    q: float
    p: float
    theta: float

    def __post_init__(self):
        check_exponent(self.q, "q")
        check_exponent(self.p, "p")
        theta = float(self.theta)
        if math.isinf(theta) or theta < 1.0:
            raise ValueError(f"theta must lie in [1, inf), got {theta!r}")
        lhs = inv(self.q) - inv(self.p)
        rhs = 1.0 - inv(theta)
        if abs(lhs - rhs) > 1e-12:
            raise ValueError(
                f"exponent relation violated: 1/q - 1/p = {lhs}, 1 - 1/theta = {rhs}"
            )
        if self.theta > 1.0 and self.q >= conjugate(self.theta):
            raise ValueError(
                f"outside admissible region: q = {self.q} >= theta' = {conjugate(self.theta)}"
            )
        if self.q > self.p:
            raise ValueError("q <= p required")

    @property
    def theta_over_p(self) -> float:
        """Interpolation weight theta/p in (0, 1]; 0 when p = inf."""
        return self.theta * inv(self.p)


def make_exponents(q: float, theta: float) -> ExponentTriple:
    """Solve 1/q - 1/p = 1 - 1/theta for p and return the full triple.

    Raises ValueError outside the admissible region q < theta/(theta-1)
    (theta > 1); for theta = 1 any q in [1, inf] is allowed and p = q.
    """
    q = check_exponent(q, "q")
    theta = float(theta)
    if math.isinf(theta) or theta < 1.0:
        raise ValueError(f"theta must lie in [1, inf), got {theta!r}")
    if theta == 1.0:
        return ExponentTriple(q=q, p=q, theta=theta)
    if q >= conjugate(theta):
        raise ValueError(
            f"outside admissible region: q = {q} >= theta' = {conjugate(theta)}"
        )
    inv_p = inv(q) - (1.0 - 1.0 / theta)
    p = INF if inv_p <= 1e-15 else 1.0 / inv_p
    return ExponentTriple(q=q, p=p, theta=theta)
