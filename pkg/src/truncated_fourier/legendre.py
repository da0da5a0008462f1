"""Legendre polynomial primitives.

Convention throughout: unnormalized ``P_n`` with ``P_n(1) = 1``. The
orthonormal scaling ``sqrt(n + 1/2)`` only appears inside Galerkin assembly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DomainError, ParityError

Parity = Literal["even", "odd", "none"]

__all__ = [
    "LegendreSeries",
    "QuadratureRule",
    "legendre_eval",
    "legendre_at_zero",
    "legendre_deriv_at_zero",
    "gauss_legendre",
    "series_eval",
    "series_deriv_at_zero",
]

# exact integer factorials are used up to this order, log-gamma beyond
_EXACT_FACTORIAL_MAX = 20


@dataclass(frozen=True)
class LegendreSeries:
    """Finite expansion ``sum_n coeffs[n] * P_n(t)``."""

    coeffs: np.ndarray
    parity: Parity = "none"

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        if c.ndim != 1 or c.size == 0:
            raise DomainError("coefficients must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(c)):
            raise DomainError("coefficients must be finite")
        if self.parity == "even" and np.any(c[1::2] != 0.0):
            raise DomainError("even series carries odd-degree coefficients")
        if self.parity == "odd" and np.any(c[0::2] != 0.0):
            raise DomainError("odd series carries even-degree coefficients")
        if self.parity not in ("even", "odd", "none"):
            raise DomainError(f"unknown parity {self.parity!r}")

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))

    def __len__(self) -> int:
        return self.nodes.size


def _check_unit(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0):
        raise DomainError("Legendre argument must satisfy |t| <= 1")
    return t


def legendre_eval(n: int, t):
    """``P_n(t)`` by the three-term recurrence. Accepts scalar or array ``t``."""
    if n < 0:
        raise DomainError("degree must be nonnegative")
    x = _check_unit(t)
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = x.copy()
    for j in range(2, n + 1):
        p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
    return p if p.ndim else float(p)


def _log_factorial(n: int) -> float:
    return math.lgamma(n + 1)


def legendre_at_zero(k: int) -> float:
    """``P_k(0)`` for even ``k``."""
    if k < 0:
        raise DomainError("degree must be nonnegative")
    if k % 2:
        raise ParityError(f"P_{k}(0) vanishes for odd k; use legendre_deriv_at_zero")
    h = k // 2
    sign = -1.0 if h % 2 else 1.0
    if k <= _EXACT_FACTORIAL_MAX:
        return sign * math.factorial(k) / (2**k * math.factorial(h) ** 2)
    logv = _log_factorial(k) - k * math.log(2.0) - 2.0 * _log_factorial(h)
    return sign * math.exp(logv)


def legendre_deriv_at_zero(k: int) -> float:
    """``P_k'(0)`` for odd ``k``."""
    if k < 0:
        raise DomainError("degree must be nonnegative")
    if k % 2 == 0:
        raise ParityError(f"P_{k}'(0) vanishes for even k; use legendre_at_zero")
    lo, hi = (k - 1) // 2, (k + 1) // 2
    sign = -1.0 if lo % 2 else 1.0
    if k <= _EXACT_FACTORIAL_MAX:
        return sign * math.factorial(k + 1) / (2**k * math.factorial(lo) * math.factorial(hi))
    logv = (
        _log_factorial(k + 1)
        - k * math.log(2.0)
        - _log_factorial(lo)
        - _log_factorial(hi)
    )
    return sign * math.exp(logv)


def gauss_legendre(m: int) -> QuadratureRule:
    """Gauss-Legendre rule with ``m`` nodes on ``[-1, 1]``.

    Newton iteration on ``P_m`` from Chebyshev-like initial guesses; only the
    nonnegative half is iterated and the rule is mirrored, so nodes are
    exactly antisymmetric.
    """
    if m < 1:
        raise DomainError("quadrature size must be positive")
    half = (m + 1) // 2
    i = np.arange(1, half + 1, dtype=float)
    x = np.cos(np.pi * (i - 0.25) / (m + 0.5))
    for _ in range(100):
        p, dp = _legendre_and_deriv(m, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    p, dp = _legendre_and_deriv(m, x)
    x = x - p / dp
    _, dp = _legendre_and_deriv(m, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    if m % 2:
        x[-1] = 0.0
        nodes = np.concatenate([-x, x[-2::-1]])
        weights = np.concatenate([w, w[-2::-1]])
    else:
        nodes = np.concatenate([-x, x[::-1]])
        weights = np.concatenate([w, w[::-1]])
    return QuadratureRule(nodes=nodes, weights=weights)


def _legendre_and_deriv(m: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p_prev = np.ones_like(x)
    p = x.copy()
    for j in range(2, m + 1):
        p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
    dp = m * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def series_eval(s: LegendreSeries, t):
    """Clenshaw summation of ``sum c_n P_n(t)``."""
    x = _check_unit(t)
    c = s.coeffs
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for n in range(c.size - 1, 0, -1):
        # P_{n+1} = alpha_n P_n + beta_{n+1} P_{n-1}
        alpha = (2 * n + 1) / (n + 1) * x
        beta = -(n + 1) / (n + 2)
        b1, b2 = c[n] + alpha * b1 + beta * b2, b1
    out = c[0] + x * b1 - 0.5 * b2
    return out if out.ndim else float(out)


def series_deriv_at_zero(s: LegendreSeries) -> float:
    """Derivative of the series at ``t = 0`` from ``P_n'(0)`` term by term."""
    c = s.coeffs
    return float(sum(c[n] * legendre_deriv_at_zero(n) for n in range(1, c.size, 2)))
