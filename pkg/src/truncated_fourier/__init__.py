"""Spectrum of the Fourier operator truncated to a symmetric interval.

The eigenfunctions are angular prolate spheroidal functions, computed here by
a Legendre-Galerkin solve of the commuting differential operator.
"""

__version__ = "0.1.0"

from .asymptotics import (
    lambda_small_a,
    log_gamma_complex,
    sigma_deficit_large_a,
    sigma_small_a,
    sigma_small_a_leading,
    slepian_delta,
    transition_index,
    transition_sigma,
)
from .errors import (
    ConsistencyError,
    ConvergenceError,
    DomainError,
    NoRootError,
    NumericalError,
    ParityError,
    PreconditionError,
    ProlateError,
)
from .fourier_spectrum import SpectrumTable, lambda_k, nystrom_sigma, sigma_k, spectrum_table
from .legendre import LegendreSeries, gauss_legendre, legendre_eval, series_eval
from .prolate_solver import ProlateFunction, compute_prolate, prolate_eval
from .spectral_analysis import (
    cross_net_check,
    interval_net_check,
    plunge_counts,
    residue_net_check,
    trace_check,
)
