import math

import numpy as np
import pytest

from truncated_fourier.errors import DomainError, PreconditionError
from truncated_fourier.fourier_spectrum import (
    lambda_by_quadrature,
    lambda_k,
    nystrom_matrix,
    nystrom_sigma,
    phase_error,
    sigma_k,
    spectrum_table,
)
from truncated_fourier.legendre import gauss_legendre
from truncated_fourier.prolate_solver import compute_prolate, prolate_eval


def test_lambda_small_a_magnitude():
    pf = compute_prolate(0.1, 0)[0]
    lam = lambda_k(pf, 0.1)
    assert lam.imag == 0.0 and lam.real > 0
    # |lambda_0|^2 ~ 2 a^2 / pi, i.e. 4/pi^2 times the square of sqrt(2 pi) a / 2 = 0.1253
    assert abs(lam) == pytest.approx(math.sqrt(2 / math.pi) * 0.1, rel=1e-3)
    assert abs(lam) ** 2 / (math.sqrt(2 * math.pi) * 0.05) ** 2 == pytest.approx(4 / math.pi**2, rel=1e-3)


def test_odd_lambda_phase_is_exactly_i():
    pf = compute_prolate(0.3, 1)[1]
    lam = lambda_k(pf, 0.3)
    assert lam.real == 0.0 and lam.imag > 0


def test_lambda0_at_a2_matches_nystrom():
    pf = compute_prolate(2.0, 0)[0]
    oracle = nystrom_sigma(2.0, 0, 200)[0]
    assert abs(abs(lambda_k(pf, 2.0)) ** 2 - oracle) <= 1e-8


@pytest.mark.parametrize("a", [0.7, 1.5, 3.0])
def test_moment_formula_matches_quadrature(a):
    for pf in compute_prolate(a, 9):
        lam = lambda_k(pf, a, snap=False)
        for t in (0.13, 0.5, 0.91):
            if abs(prolate_eval(pf, t)) < 1e-3:
                continue
            assert abs(lambda_by_quadrature(pf, a, t) - lam) <= 1e-9 * max(1.0, abs(lam)) + 1e-13


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 4.0])
def test_phases_and_sigma_identity(a):
    for pf in compute_prolate(a, 20):
        raw = lambda_k(pf, a, snap=False)
        assert phase_error(raw, pf.k) < 1e-8
        lam = lambda_k(pf, a)
        assert lam == pytest.approx((1j) ** pf.k * abs(raw), abs=1e-300)
        assert sigma_k(pf, a) == pytest.approx(abs(lam) ** 2, rel=1e-15)


def test_small_a_sigma0():
    pf = compute_prolate(0.1, 0)[0]
    s = sigma_k(pf, 0.1)
    assert 0 < s < 1
    assert s == pytest.approx(2 / math.pi * 0.01, rel=1e-3)


def test_large_a_deficit_resolvable():
    table = spectrum_table(2.5, 0)
    deficit = 1 - table.sigma[0]
    assert deficit > 1e-7
    assert 0.8 <= deficit / (4 * math.sqrt(math.pi) * 2.5 * math.exp(-12.5)) <= 1.25


def test_spectrum_table_ordering_a1():
    sig = spectrum_table(1.0, 5).sigma
    assert np.all(np.diff(sig) < 0)


def test_spectrum_table_trace_a4():
    sig = spectrum_table(4.0, 60).sigma
    assert sig.sum() == pytest.approx(32 / math.pi, rel=1e-6)


def test_spectrum_table_oracle_a2():
    table = spectrum_table(2.0, 10, with_oracle=True)
    assert table.oracle_agreement <= 1e-8


@pytest.mark.parametrize("a", [0.5, 1.0, 3.0, 6.0])
def test_sigma_range_and_monotone_in_k(a):
    sig = spectrum_table(a, 30).sigma
    assert np.all(sig >= 0) and np.all(sig < 1)
    assert np.all(np.diff(sig) <= 1e-12)


def test_sigma_increasing_in_a():
    grid = [0.5, 1.0, 1.5, 2.0, 3.0, 4.0]
    sig = np.array([spectrum_table(a, 8).sigma for a in grid])
    for k in range(9):
        col = sig[:, k]
        assert np.all(np.diff(col) >= -1e-15)


def test_spectrum_table_domain_errors():
    with pytest.raises(DomainError):
        spectrum_table(0.0, 3)
    with pytest.raises(DomainError):
        spectrum_table(1.0, -1)


def test_lambda_rejects_mismatched_a():
    pf = compute_prolate(1.0, 0)[0]
    with pytest.raises(DomainError):
        lambda_k(pf, 2.0)


def test_nystrom_small_a_sigma0():
    # sinc-kernel operator of bandwidth c = a^2 on [-1, 1]: sigma_0 -> 2c/pi
    s0 = nystrom_sigma(1e-3, 0, 64)[0]
    assert s0 == pytest.approx(2 * 1e-6 / math.pi, rel=1e-6)


@pytest.mark.parametrize("a", [0.5, 2.0, 5.0])
@pytest.mark.parametrize("scaled", [False, True])
def test_nystrom_trace(a, scaled):
    mat = nystrom_matrix(a, 80, scaled=scaled)
    assert np.trace(mat) == pytest.approx(2 * a * a / math.pi, abs=1e-12 * max(1, a * a))


def test_nystrom_agrees_with_galerkin_a2():
    galerkin = spectrum_table(2.0, 10).sigma
    nys = nystrom_sigma(2.0, 10, 200)
    assert np.max(np.abs(galerkin - nys)) <= 1e-8


@pytest.mark.parametrize("a", [1.0, 2.0])
def test_nystrom_unit_and_scaled_agree(a):
    u = nystrom_sigma(a, 10, 120)
    s = nystrom_sigma(a, 10, 120, scaled=True)
    assert np.max(np.abs(u - s)) <= 1e-9


def test_nystrom_precondition():
    with pytest.raises(PreconditionError):
        nystrom_sigma(2.0, 10, 20)
    with pytest.raises(DomainError):
        nystrom_sigma(0.0, 1, 100)


@pytest.mark.parametrize("a", [1.0, 2.5])
def test_eigenfunctions_solve_sinc_equation(a):
    """g_k is an eigenfunction of the sinc kernel of bandwidth a^2 with eigenvalue sigma_k."""
    c = a * a
    pfs = compute_prolate(a, 6)
    sig = spectrum_table(a, 6, prolates=pfs).sigma
    rule = gauss_legendre(120)
    x, w = rule.nodes, rule.weights
    t = np.array([-0.77, -0.2, 0.31, 0.64])
    diff = t[:, None] - x[None, :]
    kern = np.sin(c * diff) / (np.pi * diff)
    for pf, s in zip(pfs, sig):
        g = prolate_eval(pf, x)
        lhs = kern @ (w * g)
        rhs = s * prolate_eval(pf, t)
        assert np.max(np.abs(lhs - rhs)) <= 1e-7 * np.max(np.abs(g))
