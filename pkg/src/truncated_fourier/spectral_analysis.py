"""Global distribution of the spectrum: traces, plunge counts and kappa-nets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .fourier_spectrum import SpectrumTable

__all__ = [
    "TraceReport",
    "PlungeReport",
    "NetReport",
    "log_plus",
    "plunge_constant",
    "required_trace_kmax",
    "trace_check",
    "plunge_counts",
    "transition_interval",
    "interval_net_check",
    "residue_net_check",
    "cross_net_check",
]

TRACE_RTOL = 1e-6
BOUND_SLACK = 1e-9
# tail extrapolation is not trusted when consecutive sigma shrink slower than this
TAIL_RATIO_LIMIT = 0.5

_ARMS = (1 + 0j, 1j, -1 + 0j, -1j)


def log_plus(a: float) -> float:
    return max(math.log(a), 0.0) if a > 0 else 0.0


def plunge_constant(a: float) -> float:
    """``(2/pi^2) ln+ a + 1``, the right-hand side of the ITZ inequality."""
    return 2.0 / math.pi**2 * log_plus(a) + 1.0


def required_trace_kmax(a: float) -> int:
    return math.ceil(2.0 * a * a / math.pi) + 40


@dataclass(frozen=True)
class TraceReport:
    a: float
    sum_sigma: float
    target: float
    sum_sigma_sq: float
    lower_bound: float
    itz_sum: float
    itz_bound: float
    tail_estimate: float
    tail_trusted: bool
    tolerance: float
    trace_ok: bool
    square_bound_ok: bool
    itz_ok: bool

    @property
    def trace_error(self) -> float:
        return abs(self.sum_sigma + self.tail_estimate - self.target)


def _tail(sig: np.ndarray) -> tuple[float, bool]:
    last = sig[-5:]
    if last.size < 2 or np.any(last <= 0):
        return 0.0, last.size >= 2 and float(last[-1]) == 0.0
    q = float(np.max(last[1:] / last[:-1]))
    if q >= 1.0:
        return math.inf, False
    return float(last[-1] * q / (1.0 - q)), q <= TAIL_RATIO_LIMIT


def trace_check(table: SpectrumTable, rtol: float = TRACE_RTOL) -> TraceReport:
    """Trace identity, the lower bound on the trace of the square, and ITZ."""
    a = table.a
    need = required_trace_kmax(a)
    if table.k_max < need:
        raise PreconditionError(f"trace_check at a={a} needs k_max >= {need}, got {table.k_max}")
    sig = table.sigma
    tail, trusted = _tail(sig)
    target = 2.0 * a * a / math.pi
    s1 = float(math.fsum(sig))
    s2 = float(math.fsum(sig * sig))
    itz = float(math.fsum(sig * (1.0 - sig)))
    bound = plunge_constant(a)
    lower = target - 2.0 / math.pi**2 * log_plus(a) - 1.0
    tol = rtol * target
    return TraceReport(
        a=a,
        sum_sigma=s1,
        target=target,
        sum_sigma_sq=s2,
        lower_bound=lower,
        itz_sum=itz,
        itz_bound=bound,
        tail_estimate=tail,
        tail_trusted=trusted,
        tolerance=tol,
        trace_ok=abs(s1 + tail - target) <= tol,
        square_bound_ok=s2 >= lower - BOUND_SLACK,
        itz_ok=itz <= bound + BOUND_SLACK,
    )


def transition_interval(a: float, epsilon: float) -> tuple[float, float]:
    center = 2.0 * a * a / math.pi
    half = plunge_constant(a) / epsilon
    return center - half, center + half


@dataclass(frozen=True)
class PlungeReport:
    a: float
    epsilon: float
    n_above_eps: int
    n_above_1m_eps: int
    n_middle: int
    bound_above_eps: float
    bound_above_1m_eps: float
    bound_middle: float
    half_crossing: int | None
    transition_lo: float
    transition_hi: float
    crossing_in_transition: bool
    transition_covered: bool

    @property
    def margins(self) -> dict[str, float]:
        """Signed slack of each inequality; nonnegative means it holds."""
        return {
            "above_eps": self.bound_above_eps - self.n_above_eps,
            "above_1m_eps": self.n_above_1m_eps - self.bound_above_1m_eps,
            "middle": self.bound_middle - self.n_middle,
        }

    @property
    def bounds_hold(self) -> bool:
        m = self.margins
        # the count above epsilon is a strict inequality
        return m["above_eps"] > -BOUND_SLACK and all(
            v >= -BOUND_SLACK for k, v in m.items() if k != "above_eps"
        )


def plunge_counts(table: SpectrumTable, epsilon: float) -> PlungeReport:
    """Counts of ``sigma_k`` near one, near zero and in between, against their bounds."""
    if not 0.0 < epsilon < 0.5:
        raise DomainError("epsilon must lie in (0, 1/2)")
    sig = table.sigma
    if sig[-1] > epsilon / 10.0:
        raise PreconditionError(
            f"table stops at sigma_{table.k_max}={sig[-1]:.3e}; need every sigma above "
            f"{epsilon / 10:.3g} (raise k_max)"
        )
    a = table.a
    const = plunge_constant(a)
    center = 2.0 * a * a / math.pi
    lo, hi = transition_interval(a, epsilon)
    below_half = np.nonzero(sig <= 0.5)[0]
    crossing = int(below_half[0]) if below_half.size else None
    return PlungeReport(
        a=a,
        epsilon=epsilon,
        n_above_eps=int(np.sum(sig > epsilon)),
        n_above_1m_eps=int(np.sum(sig > 1.0 - epsilon)),
        n_middle=int(np.sum((sig >= epsilon) & (sig <= 1.0 - epsilon))),
        bound_above_eps=center + const / epsilon,
        bound_above_1m_eps=center - const / epsilon,
        bound_middle=const / (epsilon * (1.0 - epsilon)),
        half_crossing=crossing,
        transition_lo=lo,
        transition_hi=hi,
        crossing_in_transition=crossing is not None and lo <= crossing <= hi,
        transition_covered=hi <= table.k_max,
    )


@dataclass(frozen=True)
class NetReport:
    kappa: float
    domain: Literal["unit_interval", "residue_classes", "cross"]
    is_net: bool
    largest_gap: float
    witness: complex | float | None
    residue_class_results: tuple[dict, ...] | None = None


def _gap(values: np.ndarray) -> tuple[float, float]:
    """Largest distance from a point of [0, 1] to the nearest value, and where."""
    v = np.sort(values)
    best, where = float(v[0]), 0.0
    if 1.0 - v[-1] > best:
        best, where = float(1.0 - v[-1]), 1.0
    if v.size > 1:
        half = np.diff(v) / 2.0
        j = int(np.argmax(half))
        if half[j] > best:
            best, where = float(half[j]), float(v[j] + half[j])
    return best, where


def interval_net_check(values: Sequence[float], kappa: float) -> NetReport:
    """Is every point of ``[0, 1]`` within ``kappa`` of some value?"""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise DomainError("net check needs at least one value")
    if not kappa > 0:
        raise DomainError("kappa must be positive")
    if np.any((v < 0.0) | (v > 1.0)):
        raise DomainError("values must lie in [0, 1]")
    gap, where = _gap(v)
    return NetReport(kappa=kappa, domain="unit_interval", is_net=gap <= kappa, largest_gap=gap, witness=where)


def _class_results(values: np.ndarray, kappa: float, to_arm: bool) -> list[dict]:
    out = []
    for r in range(4):
        cls = values[r::4]
        if cls.size == 0:
            out.append({"r": r, "count": 0, "largest_gap": math.inf, "witness": None, "is_net": False})
            continue
        gap, where = _gap(cls)
        row = {
            "r": r,
            "count": int(cls.size),
            "largest_gap": gap,
            "witness": _ARMS[r] * where if to_arm else where,
            "is_net": gap <= kappa,
            "vertex_distance": float(1.0 - cls.max()),
            "origin_distance": float(cls.min()),
        }
        out.append(row)
    return out


def _combine(kappa: float, domain: str, rows: list[dict]) -> NetReport:
    worst = max(rows, key=lambda row: row["largest_gap"])
    return NetReport(
        kappa=kappa,
        domain=domain,
        is_net=all(row["is_net"] for row in rows),
        largest_gap=worst["largest_gap"],
        witness=worst["witness"],
        residue_class_results=tuple(rows),
    )


def residue_net_check(table: SpectrumTable, kappa: float) -> NetReport:
    """Net check of ``{sigma_(4l+r)}`` on ``[0, 1]`` for each residue ``r``."""
    if not table.entries:
        raise DomainError("empty spectrum table")
    if not kappa > 0:
        raise DomainError("kappa must be positive")
    return _combine(kappa, "residue_classes", _class_results(table.sigma, kappa, False))


def cross_net_check(table: SpectrumTable, kappa: float) -> NetReport:
    """Net check of ``{lambda_k}`` on the cross joining 0 to 1, i, -1, -i.

    Arm ``r`` carries ``|lambda_(4l+r)| = sqrt(sigma_(4l+r))``; the witness is
    the worst-covered point of the cross as a complex number.
    """
    if not table.entries:
        raise DomainError("empty spectrum table")
    if not kappa > 0:
        raise DomainError("kappa must be positive")
    mod = np.sqrt(table.sigma)
    return _combine(kappa, "cross", _class_results(mod, kappa, True))
