"""Eigenvalues of the truncated Fourier operator.

The operator on ``L^2([-a, a])`` has kernel ``exp(i t xi) / sqrt(2 pi)``; its
eigenfunctions are ``e_k(t) = g_k(t / a, a)``. Writing the eigen-relation at
``t = 0`` (even ``k``) or differentiating it there (odd ``k``) leaves a
single Legendre moment:

    even:  lambda_k = 2 a c_0 / (sqrt(2 pi) g_k(0))
    odd:   lambda_k = i 2 a^3 c_1 / (3 sqrt(2 pi) g_k'(0))

``sigma_k = |lambda_k|^2`` are the eigenvalues of the sinc-kernel operator
``sin a(t - tau) / (pi (t - tau))``; :func:`nystrom_sigma` computes them
independently by dense quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, DomainError, NumericalError, PreconditionError
from .legendre import gauss_legendre, series_deriv_at_zero, series_eval
from .prolate_solver import ProlateFunction, compute_prolate, gamma_to_mu

__all__ = [
    "SpectrumEntry",
    "SpectrumTable",
    "lambda_k",
    "lambda_by_quadrature",
    "sigma_k",
    "spectrum_table",
    "nystrom_matrix",
    "nystrom_sigma",
    "default_oracle_size",
]

SQRT_2PI = math.sqrt(2.0 * math.pi)
PHASE_TOL = 1e-8
RANGE_TOL = 1e-12
ORDER_TOL = 1e-12


def _i_pow(k: int) -> complex:
    return (1, 1j, -1, -1j)[k % 4]


def lambda_by_quadrature(pf: ProlateFunction, a: float, t: float) -> complex:
    """Eigenvalue from the eigen-relation evaluated at ``t`` (a point of ``[-1, 1]``).

    Integrates ``exp(i a^2 t s) g_k(s)`` over ``[-1, 1]`` with a Gauss rule
    large enough to resolve both the series and the oscillation.
    """
    c = a * a
    rule = gauss_legendre(pf.series.degree + math.ceil(c) + 32)
    g = series_eval(pf.series, rule.nodes)
    integral = np.dot(rule.weights, np.exp(1j * c * t * rule.nodes) * g)
    return complex(a * integral / (SQRT_2PI * series_eval(pf.series, t)))


def _raw_lambda(pf: ProlateFunction, a: float) -> tuple[complex, str]:
    if not a > 0:
        raise DomainError("a must be positive")
    if not math.isclose(pf.a, a, rel_tol=0.0, abs_tol=1e-15 * max(1.0, a)):
        raise DomainError(f"prolate function was computed at a={pf.a}, not a={a}")
    coeffs = pf.series.coeffs
    big = float(np.max(np.abs(coeffs)))
    if pf.k % 2 == 0:
        g0 = series_eval(pf.series, 0.0)
        if not pf.fallback or abs(g0) >= 1e-12 * big:
            return complex(2.0 * a * coeffs[0] / (SQRT_2PI * g0)), "moment"
    else:
        d0 = series_deriv_at_zero(pf.series)
        if not pf.fallback or abs(d0) >= 1e-12 * big:
            return 1j * (2.0 * a**3 * coeffs[1] / (3.0 * SQRT_2PI * d0)), "moment"
    grid = np.linspace(-1.0, 1.0, 401)
    vals = np.abs(series_eval(pf.series, grid))
    t_star = float(grid[int(np.argmax(vals))])
    if vals.max() < 1e-12 * big:
        raise NumericalError(f"eigenfunction {pf.k} vanishes on the sampling grid")
    return lambda_by_quadrature(pf, a, t_star), "quadrature"


def lambda_k(pf: ProlateFunction, a: float, snap: bool = True) -> complex:
    """Eigenvalue ``lambda_k(a)`` of the truncated Fourier operator.

    The computed phase must agree with ``i^k`` to 1e-8; with ``snap`` the
    returned value carries exactly that phase and the computed modulus.
    """
    raw, _ = _raw_lambda(pf, a)
    if snap:
        err = phase_error(raw, pf.k)
        if err >= PHASE_TOL:
            raise NumericalError(f"phase of lambda_{pf.k} off i^k by {err:.3e} rad")
        return _i_pow(pf.k) * abs(raw)
    return raw


def phase_error(lam: complex, k: int) -> float:
    if lam == 0:
        return 0.0
    return abs(float(np.angle(lam * np.conj(_i_pow(k)))))


def _checked_sigma(value: float, k: int) -> float:
    if value < -RANGE_TOL or value > 1.0 + RANGE_TOL or not math.isfinite(value):
        raise NumericalError(f"sigma_{k} = {value!r} is outside (0, 1)")
    # binary64 cannot represent 1 - sigma below ~1e-16; keep the strict bound
    return min(max(value, 0.0), math.nextafter(1.0, 0.0))


def sigma_k(pf: ProlateFunction, a: float) -> float:
    """``sigma_k(a) = |lambda_k(a)|^2``, the eigenvalue of ``F* F``."""
    raw, _ = _raw_lambda(pf, a)
    return _checked_sigma(abs(raw) ** 2, pf.k)


@dataclass(frozen=True)
class SpectrumEntry:
    k: int
    gamma: float
    mu: float
    sigma: float
    lam: complex
    phase_error: float
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class SpectrumTable:
    a: float
    entries: tuple[SpectrumEntry, ...]
    k_max: int
    oracle_agreement: float | None = None
    sigma_oracle: np.ndarray | None = field(default=None, repr=False)

    @property
    def sigma(self) -> np.ndarray:
        return np.array([e.sigma for e in self.entries])

    @property
    def gamma(self) -> np.ndarray:
        return np.array([e.gamma for e in self.entries])

    @property
    def lam(self) -> np.ndarray:
        return np.array([e.lam for e in self.entries])


def default_oracle_size(a: float, k_max: int) -> int:
    return max(64, math.ceil(3 * a * a) + 4 * k_max, 4 * (k_max + 1))


def spectrum_table(
    a: float,
    k_max: int,
    with_oracle: bool = False,
    m: int | None = None,
    prolates: list[ProlateFunction] | None = None,
) -> SpectrumTable:
    """Galerkin-route spectrum for ``k = 0..k_max`` with optional Nystrom cross-check."""
    if not a > 0:
        raise DomainError("a must be positive")
    if k_max < 0:
        raise DomainError("k_max must be nonnegative")
    pfs = prolates if prolates is not None else compute_prolate(a, k_max)
    entries = []
    for pf in pfs[: k_max + 1]:
        raw, how = _raw_lambda(pf, a)
        err = phase_error(raw, pf.k)
        if err >= PHASE_TOL:
            raise NumericalError(f"phase of lambda_{pf.k} off i^k by {err:.3e} rad")
        flags = tuple(f for f in (how != "moment" and how, pf.fallback and "l2-normalized") if f)
        entries.append(
            SpectrumEntry(
                k=pf.k,
                gamma=pf.gamma,
                mu=gamma_to_mu(pf.gamma, a),
                sigma=_checked_sigma(abs(raw) ** 2, pf.k),
                lam=_i_pow(pf.k) * abs(raw),
                phase_error=err,
                flags=flags,
            )
        )
    sig = np.array([e.sigma for e in entries])
    bad = np.nonzero(np.diff(sig) > ORDER_TOL)[0]
    if bad.size:
        j = int(bad[0])
        raise ConsistencyError(
            f"sigma not decreasing at a={a}: sigma_{j}={sig[j]!r} < sigma_{j + 1}={sig[j + 1]!r}"
        )
    agreement = oracle = None
    if with_oracle:
        oracle = nystrom_sigma(a, k_max, m if m is not None else default_oracle_size(a, k_max))
        agreement = float(np.max(np.abs(sig - oracle)))
    return SpectrumTable(
        a=float(a),
        entries=tuple(entries),
        k_max=k_max,
        oracle_agreement=agreement,
        sigma_oracle=oracle,
    )


def nystrom_matrix(a: float, m: int, scaled: bool = False) -> np.ndarray:
    """Symmetrized Nystrom matrix of the sinc kernel.

    ``scaled=False``: kernel ``sin a^2 (t - tau) / (pi (t - tau))`` on ``[-1, 1]``.
    ``scaled=True``:  kernel ``sin a (t - tau) / (pi (t - tau))`` on ``[-a, a]``.
    """
    rule = gauss_legendre(m)
    if scaled:
        x, w, freq = a * rule.nodes, a * rule.weights, a
    else:
        x, w, freq = rule.nodes, rule.weights, a * a
    diff = x[:, None] - x[None, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        kern = np.sin(freq * diff) / (np.pi * diff)
    np.fill_diagonal(kern, freq / np.pi)
    sw = np.sqrt(w)
    return sw[:, None] * kern * sw[None, :]


def nystrom_sigma(a: float, k_max: int, m: int, scaled: bool = False) -> np.ndarray:
    """Largest ``k_max + 1`` eigenvalues of the sinc operator, decreasing."""
    if not a > 0:
        raise DomainError("a must be positive")
    if k_max < 0:
        raise DomainError("k_max must be nonnegative")
    need = max(4 * (k_max + 1), math.ceil(3 * a * a))
    if m < need:
        raise PreconditionError(f"quadrature size {m} below resolution bound {need}")
    ev = np.linalg.eigvalsh(nystrom_matrix(a, m, scaled))
    return ev[::-1][: k_max + 1].copy()
