"""Exact matrix-product observables of an anisotropic spin-2 chain.

The ground-state family has bond dimension 3 and two coupling slices of
interest; every thermodynamic-limit quantity is obtained from the 9x9
transfer matrix and cross-validated against brute-force finite rings.
"""

__version__ = "0.1.0"

from .backend import active_backend, available_backends, set_backend, use_backend
from .errors import (ChainTooLong, CorrelatorVanishes, DegenerateDominant,
                     InvalidInput, InvariantViolation, NoPlateau,
                     NonPositiveDominant, NotHermitian, NotNegativeX, NotPSD,
                     NotUnimodal, NumericalError, SiteOutOfRange,
                     Spin2MPError, StencilFailure)
from .numerics import EigenPair, dominant_eigenpair, eig_hermitian, sqrt_psd
from .mpstate import (L_MAX, GTensor, ModelParams, StateVector,
                      build_finite_state, build_g, one_site_rdm_finite,
                      realify_gauge)
from .transfer import (IDENTITY5, SM, SP, SX, SY, SZ, build_mixed_transfer,
                       build_operator_transfer, build_transfer, clear_caches,
                       closed_form_rdm_acritical, closed_form_rdm_critical,
                       correlation_length_fit, correlation_length_sector,
                       correlation_length_spectral, correlation_lengths,
                       dominant_data, phase_op, string_order,
                       tdl_one_site_rdm, tm_finite_correlator,
                       transfer_spectrum, two_point)
from .measures import (DerivativeEstimate, MeasurePoint, RfsEstimate,
                       correlation_length_crossing, entropy_at,
                       fidelity_per_site, locate_extremum,
                       magnetization_and_fluctuation, numerical_derivative,
                       reduced_fidelity, rfs, uhlmann_fidelity, vn_entropy)
from .oracle import (ConvergenceReport, GaugeCheck, brute_correlator,
                     finite_global_fidelity, finite_global_fidelity_tm,
                     finite_vs_tdl_rdm, gauge_equivalence_check,
                     standard_checks)

__all__ = [name for name in dir() if not name.startswith("_")]
