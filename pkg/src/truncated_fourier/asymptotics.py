"""Closed-form asymptotic laws for the spectrum and comparison reports.

Formulas return leading terms only. Comparisons against computed spectra are
always ratio tests.

Two small-``a`` laws are provided. :func:`sigma_small_a` is the law
``2 pi (a^2/4)^(2k+1) / (k!)^2`` as usually quoted alongside the ordering
argument; :func:`sigma_small_a_leading` is the exact leading term of the sinc
operator's eigenvalues, ``(2/pi) (2^(2k) (k!)^3 / ((2k)! (2k+1)!))^2 c^(2k+1)``
with ``c = a^2``. They differ by a ``k``-dependent constant (``4/pi^2`` at
``k = 0``); the computed spectrum follows the second one.

Likewise :func:`slepian_delta` solves either the transition equation in the
form ``(2/pi) a^2 + (2/pi) log(2a) - arg Gamma(1/2 + i d/2) = k - 1/2``
(``form="uncoupled"``) or Slepian's form in which the logarithm is coupled
to the unknown, ``(2/pi) c + (d/pi) log(4c) - (2/pi) arg Gamma(1/2 + i d/2)
= k + 1/2`` (``form="coupled"``).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Sequence

from scipy.optimize import brentq
from scipy.special import expit

from .errors import DomainError, NoRootError, NumericalError

__all__ = [
    "AsymptoticRow",
    "AsymptoticReport",
    "TransitionPoint",
    "sigma_small_a",
    "lambda_small_a",
    "sigma_small_a_leading",
    "sigma_deficit_large_a",
    "lambda_deficit_large_a",
    "transition_index",
    "transition_sigma",
    "transition_point",
    "slepian_residual",
    "slepian_delta",
    "log_gamma_complex",
    "arg_gamma_half",
    "asymptotic_report",
]

Regime = Literal["small_a_sigma", "small_a_lambda", "large_a_deficit", "transition"]
SlepianForm = Literal["uncoupled", "coupled"]

_BERNOULLI = [
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
]
_STIRLING = [float(b / ((2 * n + 2) * (2 * n + 1))) for n, b in enumerate(_BERNOULLI)]
_SHIFT_TO = 15.0
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma_complex(z: complex) -> complex:
    """Principal ``log Gamma(z)`` for ``Re z > 0``.

    Shifts ``z`` right by the recurrence until ``Re z >= 15`` and applies the
    Stirling series through ``B_20``.
    """
    z = complex(z)
    if not z.real > 0:
        raise DomainError("log_gamma_complex requires Re z > 0")
    shift = 0j
    while z.real < _SHIFT_TO:
        shift += cmath.log(z)
        z += 1.0
    inv = 1.0 / z
    inv2 = inv * inv
    series = 0j
    power = inv
    for coef in _STIRLING:
        series += coef * power
        power *= inv2
    return (z - 0.5) * cmath.log(z) - z + _HALF_LOG_2PI + series - shift


def arg_gamma_half(delta: float) -> float:
    """Continuous ``arg Gamma(1/2 + i delta/2)`` with ``arg Gamma(1/2) = 0``."""
    return log_gamma_complex(complex(0.5, 0.5 * delta)).imag


def _i_pow(k: int) -> complex:
    return (1, 1j, -1, -1j)[k % 4]


def _positive(a: float) -> None:
    if not a > 0:
        raise DomainError("a must be positive")


def sigma_small_a(k: int, a: float) -> float:
    _positive(a)
    return 2.0 * math.pi * (a * a / 4.0) ** (2 * k + 1) / math.factorial(k) ** 2


def lambda_small_a(k: int, a: float) -> complex:
    _positive(a)
    return _i_pow(k) * math.sqrt(2.0 * math.pi) * (a / 2.0) ** (2 * k + 1) / math.factorial(k)


def sigma_small_a_leading(k: int, a: float) -> float:
    """Exact leading term of ``sigma_k`` as ``a -> 0`` (bandwidth ``c = a^2``)."""
    _positive(a)
    c = a * a
    log_ratio = (
        2 * k * math.log(2.0)
        + 3 * math.lgamma(k + 1)
        - math.lgamma(2 * k + 1)
        - math.lgamma(2 * k + 2)
    )
    return 2.0 / math.pi * math.exp(2 * log_ratio + (2 * k + 1) * math.log(c))


def sigma_deficit_large_a(k: int, a: float) -> float:
    """Leading behaviour of ``1 - sigma_k(a)`` as ``a -> infinity``."""
    _positive(a)
    log_v = (
        math.log(4.0 * math.sqrt(math.pi))
        + k * math.log(8.0)
        - math.lgamma(k + 1)
        + (2 * k + 1) * math.log(a)
        - 2.0 * a * a
    )
    return math.exp(log_v)


def lambda_deficit_large_a(k: int, a: float) -> float:
    """Leading behaviour of ``1 - |lambda_k(a)|``; half of the sigma deficit."""
    return 0.5 * sigma_deficit_large_a(k, a)


def transition_index(a: float, b: float) -> int:
    """``floor((2/pi)(a^2 + b ln 2a))``."""
    _positive(a)
    arg = a * a + b * math.log(2.0 * a)
    if arg < 0:
        raise DomainError(f"a^2 + b ln(2a) = {arg:.6g} is negative")
    return math.floor(2.0 / math.pi * arg)


def transition_sigma(b: float) -> float:
    """Limit ``(1 + e^(pi b))^-1``; saturates to 0 or 1 instead of overflowing."""
    return float(expit(-math.pi * b))


def slepian_residual(delta: float, a: float, k: int, form: SlepianForm = "uncoupled") -> float:
    if form == "uncoupled":
        lhs = 2.0 / math.pi * a * a + 2.0 / math.pi * math.log(2.0 * a) - arg_gamma_half(delta)
        return lhs - (k - 0.5)
    if form == "coupled":
        c = a * a
        lhs = (
            2.0 / math.pi * c
            + delta / math.pi * math.log(4.0 * c)
            - 2.0 / math.pi * arg_gamma_half(delta)
        )
        return lhs - (k + 0.5)
    raise DomainError(f"unknown form {form!r}")


def slepian_delta(
    a: float,
    k: int,
    form: SlepianForm = "uncoupled",
    bracket: float = 50.0,
    step: float = 0.5,
) -> float:
    """Root of smallest magnitude of the transition equation for index ``k``.

    Scans ``[-bracket, bracket]`` outward from zero in steps of ``step`` and
    refines the nearest sign change to 1e-10.
    """
    if not a > 0.5:
        raise DomainError("slepian_delta requires a > 1/2")
    f0 = slepian_residual(0.0, a, k, form)
    if f0 == 0.0:
        return 0.0
    n_steps = int(round(bracket / step))
    prev_pos = prev_neg = f0
    for j in range(1, n_steps + 1):
        x = j * step
        f_pos = slepian_residual(x, a, k, form)
        f_neg = slepian_residual(-x, a, k, form)
        hits = []
        if prev_pos * f_pos <= 0:
            hits.append((x - step, x))
        if prev_neg * f_neg <= 0:
            hits.append((-x, -x + step))
        if hits:
            roots = [brentq(slepian_residual, lo, hi, args=(a, k, form), xtol=1e-10) for lo, hi in hits]
            return min(roots, key=abs)
        prev_pos, prev_neg = f_pos, f_neg
    raise NoRootError(
        f"no sign change in [-{bracket}, {bracket}]: residual "
        f"{slepian_residual(-bracket, a, k, form):.6g} at -{bracket}, "
        f"{slepian_residual(bracket, a, k, form):.6g} at {bracket}"
    )


@dataclass(frozen=True)
class TransitionPoint:
    a: float
    b: float
    k: int
    sigma_limit: float
    delta: float | None = None
    sigma_slepian: float | None = None

    def __post_init__(self):
        if not 0.0 < self.sigma_limit < 1.0:
            raise NumericalError(f"limit {self.sigma_limit!r} saturated at b={self.b}")


def transition_point(
    a: float, b: float, solve_delta: bool = False, form: SlepianForm = "uncoupled"
) -> TransitionPoint:
    k = transition_index(a, b)
    delta = pred = None
    if solve_delta:
        delta = slepian_delta(a, k, form)
        pred = transition_sigma(delta)
    return TransitionPoint(
        a=float(a), b=float(b), k=k, sigma_limit=transition_sigma(b), delta=delta, sigma_slepian=pred
    )


@dataclass(frozen=True)
class AsymptoticRow:
    index: float
    a: float
    computed: float
    formula: float
    ratio: float


@dataclass(frozen=True)
class AsymptoticReport:
    regime: Regime
    rows: tuple[AsymptoticRow, ...]

    def __post_init__(self):
        for row in self.rows:
            if not (math.isfinite(row.ratio) and row.ratio > 0):
                raise NumericalError(
                    f"{self.regime}: ratio {row.ratio!r} at index {row.index}, a={row.a} "
                    "(computed value not resolvable in binary64)"
                )


def asymptotic_report(
    regime: Regime,
    a_values: Iterable[float],
    indices: Sequence[float],
    leading: bool = False,
) -> AsymptoticReport:
    """Computed spectrum against an asymptotic law.

    ``indices`` are eigen-indices ``k`` for the first three regimes and
    shift parameters ``b`` for ``"transition"``. ``leading`` swaps the small-a
    law for :func:`sigma_small_a_leading`.
    """
    from .fourier_spectrum import spectrum_table

    rows = []
    for a in a_values:
        if regime == "transition":
            ks = [transition_index(a, b) for b in indices]
        else:
            ks = [int(k) for k in indices]
        table = spectrum_table(a, max(ks))
        sig = table.sigma
        for idx, k in zip(indices, ks):
            if regime == "small_a_sigma":
                computed = sig[k]
                formula = sigma_small_a_leading(k, a) if leading else sigma_small_a(k, a)
            elif regime == "small_a_lambda":
                computed = math.sqrt(sig[k])
                formula = (
                    math.sqrt(sigma_small_a_leading(k, a)) if leading else abs(lambda_small_a(k, a))
                )
            elif regime == "large_a_deficit":
                computed = 1.0 - sig[k]
                formula = sigma_deficit_large_a(k, a)
            elif regime == "transition":
                computed = sig[k]
                formula = transition_sigma(idx)
            else:
                raise DomainError(f"unknown regime {regime!r}")
            rows.append(
                AsymptoticRow(
                    index=idx,
                    a=float(a),
                    computed=float(computed),
                    formula=float(formula),
                    ratio=float(computed / formula) if formula else math.inf,
                )
            )
    return AsymptoticReport(regime=regime, rows=tuple(rows))
