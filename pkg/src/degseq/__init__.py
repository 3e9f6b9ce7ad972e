"""Asymptotic and exact counting of graphs with a given degree sequence."""

from .core import (
    SIMPLE, DegreeSequence, Multigraph, Pairing, SignatureMatrix, is_simple, read_sequence_file,
    signature_of, to_multigraph, validate_sequence, write_sequence_file,
)
from .errbounds import xi_bounds_suite, xi_general, xi_theorem1, xi_theorem3, xi_theorem4
from .errors import (
    DegseqError, EmptySequence, HypothesisViolation, InvalidFamilyParams, InvalidSignature,
    NonPositiveDegree, OddTotalDegree, OracleTooLarge, SwitchMismatch,
)
from .estimator import A_ij, B_i, F_of_M, LogEstimate, log_g, log_phi, log_S_closed, log_S_direct, sum_log1p_lambda
from .moments import lambda_ij, moments, split, tau, u_functionals
from .oracle import count_simple_graphs, enumerate_pairings, exact_expectation
from .pairing_model import (
    estimate_p_simple, eta_kappa_xi, sample_pairing, sample_signature_omega_star, signature_stats,
)
from .seqgen import FamilySpec, generate, validate_family

__version__ = "0.1.0"
