"""Angular prolate spheroidal functions by Legendre-Galerkin.

The interval ``[-a, a]`` problem is rescaled to ``[-1, 1]``:

    -((1 - t^2) g')' + c^2 t^2 g = gamma g,    c = a^2,

with ``gamma_k(a) = a^2 mu_k(a)``. In the orthonormal Legendre basis each
parity class gives a symmetric tridiagonal matrix. Eigenvalues come from
LAPACK; eigenvectors are rebuilt from a twisted factorization so that the
tiny leading coefficients (which carry the Fourier eigenvalue for small
``a``) keep full relative accuracy.
"""

from __future__ import annotations

import logging
import math
import os
import warnings
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ConsistencyError, ConvergenceError, DomainError
from .legendre import (
    LegendreSeries,
    legendre_at_zero,
    legendre_deriv_at_zero,
    series_deriv_at_zero,
    series_eval,
)

log = logging.getLogger(__name__)

__all__ = [
    "GalerkinMatrix",
    "ProlateFunction",
    "assemble",
    "compute_prolate",
    "prolate_eval",
    "gamma_to_mu",
    "eigenfunction_on_big_interval",
    "max_basis_size",
]

DEFAULT_MAX_N = 16384
TRAILING_TOL = 1e-14
RESIDUAL_TOL = 1e-10
# relative floor for large gamma, where 1e-10 absolute is below rounding
RESIDUAL_REL_TOL = 1e-13
TIE_TOL = 1e-12
# |g_k(0)| below this fraction of max|coeff| triggers unit-L2 normalization
FALLBACK_TOL = 1e-12


def max_basis_size() -> int:
    """Hard cap on the per-parity basis size; ``PROLATE_MAX_N`` overrides."""
    env = os.environ.get("PROLATE_MAX_N")
    if env:
        return int(env)
    return DEFAULT_MAX_N


@dataclass(frozen=True)
class GalerkinMatrix:
    """Symmetric tridiagonal matrix of the prolate operator on one parity class.

    Row ``j`` corresponds to Legendre degree ``degrees[j] = 2 j + p``.
    """

    parity: Literal["even", "odd"]
    diag: np.ndarray
    offdiag: np.ndarray
    c: float
    N: int

    @property
    def degrees(self) -> np.ndarray:
        p = 0 if self.parity == "even" else 1
        return np.arange(p, p + 2 * self.N, 2)

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out


@dataclass(frozen=True)
class ProlateFunction:
    """One eigenpair ``(gamma_k(a), g_k(., a))``.

    ``normalization`` is ``"point"`` when the function is fixed by its value
    (even ``k``) or slope (odd ``k``) at the origin to match ``P_k``, and
    ``"l2"`` when that was too ill-conditioned and unit L2 norm was used.
    """

    k: int
    a: float
    gamma: float
    series: LegendreSeries
    parity: Literal["even", "odd"]
    truncation: int
    residual: float
    normalization: Literal["point", "l2"] = "point"
    warnings: tuple[str, ...] = field(default=())

    @property
    def c(self) -> float:
        return self.a * self.a

    @property
    def fallback(self) -> bool:
        return self.normalization != "point"


def assemble(c: float, parity: str, N: int) -> GalerkinMatrix:
    """Galerkin matrix of ``-d/dt (1-t^2) d/dt + c^2 t^2`` on one parity class.

    Uses the orthonormal Legendre basis. For degree ``n`` the diagonal is
    ``n(n+1) + c^2 (2n^2+2n-1)/((2n-1)(2n+3))`` and the coupling between
    ``n`` and ``n+2`` is ``c^2 (n+1)(n+2)/((2n+3) sqrt((2n+1)(2n+5)))``.
    """
    if c < 0 or not math.isfinite(c):
        raise DomainError("bandwidth must be a finite nonnegative number")
    if parity not in ("even", "odd"):
        raise DomainError(f"parity must be 'even' or 'odd', got {parity!r}")
    if N < 2:
        raise DomainError("basis size must be at least 2")
    p = 0 if parity == "even" else 1
    n = np.arange(p, p + 2 * N, 2, dtype=float)
    c2 = c * c
    diag = n * (n + 1) + c2 * (2 * n * n + 2 * n - 1) / ((2 * n - 1) * (2 * n + 3))
    m = n[:-1]
    off = c2 * (m + 1) * (m + 2) / ((2 * m + 3) * np.sqrt((2 * m + 1) * (2 * m + 5)))
    return GalerkinMatrix(parity=parity, diag=diag, offdiag=off, c=float(c), N=N)


def _safe(x: float, scale: float) -> float:
    if x == 0.0:
        return np.finfo(float).eps * scale
    return x


def _twisted_vector(d: np.ndarray, e: np.ndarray, lam: float) -> tuple[np.ndarray, float]:
    """Eigenvector of the tridiagonal ``(d, e)`` near ``lam`` via twisted factorization.

    Returns the vector (component at the twist index equal to one) and the
    twist pivot, whose size measures how far ``lam`` is from an eigenvalue.
    """
    n = d.size
    shifted = d - lam
    scale = float(np.max(np.abs(d))) + 1.0
    dplus = np.empty(n)
    dminus = np.empty(n)
    dplus[0] = _safe(shifted[0], scale)
    for j in range(1, n):
        dplus[j] = _safe(shifted[j] - e[j - 1] ** 2 / dplus[j - 1], scale)
    dminus[-1] = _safe(shifted[-1], scale)
    for j in range(n - 2, -1, -1):
        dminus[j] = _safe(shifted[j] - e[j] ** 2 / dminus[j + 1], scale)
    twist = dplus + dminus - shifted
    r = int(np.argmin(np.abs(twist)))
    z = np.zeros(n)
    z[r] = 1.0
    for j in range(r - 1, -1, -1):
        z[j] = -(e[j] / dplus[j]) * z[j + 1]
    for j in range(r + 1, n):
        z[j] = -(e[j - 1] / dminus[j]) * z[j - 1]
    return z, float(twist[r])


def _eigenpair(mat: GalerkinMatrix, lam: float) -> tuple[float, np.ndarray]:
    """Refine an eigenvalue by Rayleigh-quotient steps on the twisted vector."""
    d, e = mat.diag, mat.offdiag
    z, piv = _twisted_vector(d, e, lam)
    for _ in range(4):
        step = piv / float(np.dot(z, z))
        if abs(step) <= 4 * np.finfo(float).eps * max(abs(lam), 1.0):
            break
        lam = lam + step
        z, piv = _twisted_vector(d, e, lam)
    return lam, z


def _residual(mat: GalerkinMatrix, lam: float, v: np.ndarray) -> float:
    return float(np.max(np.abs(mat.matvec(v) - lam * v)) / np.max(np.abs(v)))


def residual_tolerance(gamma: float) -> float:
    return max(RESIDUAL_TOL, RESIDUAL_REL_TOL * abs(gamma))


def _normalize(k: int, coeffs: np.ndarray) -> tuple[np.ndarray, str]:
    s = LegendreSeries(coeffs, "even" if k % 2 == 0 else "odd")
    big = float(np.max(np.abs(coeffs)))
    if k % 2 == 0:
        here, target = series_eval(s, 0.0), legendre_at_zero(k)
    else:
        here, target = series_deriv_at_zero(s), legendre_deriv_at_zero(k)
    if abs(here) >= FALLBACK_TOL * big:
        return coeffs * (target / here), "point"
    n = np.arange(coeffs.size)
    norm = math.sqrt(float(np.sum(coeffs**2 * 2.0 / (2 * n + 1))))
    peak = int(np.argmax(np.abs(coeffs)))
    return coeffs * (math.copysign(1.0, coeffs[peak]) / norm), "l2"


def _solve_parity(c: float, parity: str, count: int, N: int):
    mat = assemble(c, parity, N)
    lams = eigh_tridiagonal(
        mat.diag, mat.offdiag, eigvals_only=True, select="i", select_range=(0, count - 1)
    )
    out = []
    for lam in lams:
        lam, z = _eigenpair(mat, float(lam))
        out.append((lam, z, _residual(mat, lam, z)))
    return mat, out


def compute_prolate(a: float, k_max: int, max_n: int | None = None) -> list[ProlateFunction]:
    """Eigenpairs ``k = 0..k_max`` of the rescaled prolate problem at ``a``.

    The basis is doubled until every returned series has a trailing
    coefficient below ``1e-14`` of its largest one.
    """
    if a < 0 or not math.isfinite(a):
        raise DomainError("a must be a finite nonnegative number")
    if k_max < 0:
        raise DomainError("k_max must be nonnegative")
    cap = max_n if max_n is not None else max_basis_size()
    c = a * a
    N = max(2 * k_max + 30, math.ceil(1.5 * c) + 30)
    N = min(N, cap)

    pairs: list[tuple[float, str, int, np.ndarray, float]] = []
    for p, parity in enumerate(("even", "odd")):
        count = (k_max - p) // 2 + 1 if k_max >= p else 0
        if count == 0:
            continue
        n_try = N
        while True:
            mat, sols = _solve_parity(c, parity, count, n_try)
            worst_tail = 0.0
            for lam, z, res in sols:
                coeffs = z * np.sqrt(mat.degrees + 0.5)
                worst_tail = max(worst_tail, abs(coeffs[-1]) / np.max(np.abs(coeffs)))
            worst_res = max(res for _, _, res in sols)
            if worst_tail < TRAILING_TOL:
                break
            if n_try >= cap:
                raise ConvergenceError(
                    f"{parity} prolate coefficients did not decay below {TRAILING_TOL:g} "
                    f"at basis size {n_try} (tail {worst_tail:.3e}, residual {worst_res:.3e})",
                    residual=worst_res,
                )
            log.debug("%s class: tail %.2e at N=%d, doubling", parity, worst_tail, n_try)
            n_try = min(2 * n_try, cap)
        for lam, z, res in sols:
            if res > residual_tolerance(lam):
                raise ConvergenceError(
                    f"eigenpair residual {res:.3e} exceeds {residual_tolerance(lam):.1e} "
                    f"at gamma={lam:.6g}",
                    residual=res,
                )
            full = np.zeros(2 * n_try)
            full[mat.degrees] = z * np.sqrt(mat.degrees + 0.5)
            pairs.append((lam, parity, n_try, full, res))

    pairs.sort(key=lambda item: (item[0], item[1] != "even"))
    out = []
    for k, (lam, parity, n_used, full, res) in enumerate(pairs):
        if parity != ("even" if k % 2 == 0 else "odd"):
            raise ConsistencyError(f"eigenvalue {k} has {parity} parity at a={a}")
        notes: tuple[str, ...] = ()
        if k > 0 and lam - pairs[k - 1][0] < TIE_TOL:
            msg = f"gamma_{k - 1} and gamma_{k} agree within {TIE_TOL:g} at a={a}"
            warnings.warn(msg, RuntimeWarning, stacklevel=2)
            notes = (msg,)
        coeffs, how = _normalize(k, full)
        out.append(
            ProlateFunction(
                k=k,
                a=float(a),
                gamma=float(lam),
                series=LegendreSeries(coeffs, parity),
                parity=parity,
                truncation=n_used,
                residual=res,
                normalization=how,
                warnings=notes,
            )
        )
    return out


def prolate_eval(pf: ProlateFunction, t):
    """``g_k(t, a)`` on ``[-1, 1]``."""
    return series_eval(pf.series, t)


def gamma_to_mu(gamma: float, a: float) -> float:
    """Eigenvalue of the operator on ``[-a, a]`` from the rescaled one."""
    if not a > 0:
        raise DomainError("a must be positive")
    return gamma / (a * a)


def eigenfunction_on_big_interval(pf: ProlateFunction, t):
    """``e_k(t, a) = g_k(t / a, a)`` for ``|t| <= a``."""
    if not pf.a > 0:
        raise DomainError("a must be positive")
    s = np.asarray(t, dtype=float) / pf.a
    if np.any(np.abs(s) > 1.0):
        raise DomainError(f"t must lie in [-{pf.a}, {pf.a}]")
    return series_eval(pf.series, s)
