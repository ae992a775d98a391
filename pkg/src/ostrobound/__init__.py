"""Ostrowski-type inequalities for functions whose derivative is s-logarithmically convex."""

from .errors import (
    DomainError, EmptyLattice, InvalidTau, NearSingular, NegativeKernel, NonPositiveValue,
    OracleFailure, OstrowskiError, ToleranceNotReached, UnsupportedBranch, ZeroDenominator,
    ZeroEndpointDensity, ZeroEndpointDerivative, ZeroNumerator,
)
from .funcspace import (
    ClassTag, ConvexityOrder, FunctionSpec, Interval, MembershipReport, catalog,
    check_hypothesis_H, check_slog_first, check_slog_second, get_function, make_equality_family,
)
from .integrate import QuadResult, adaptive_integrate, integrate
from .ostrowski import VerificationRecord, lhs_deviation, montgomery_rhs, verify_inequality
from .pdfapp import DistributionSpec, get_distribution, pdf_bound_thm3, pdf_bound_thm4
from .psibounds import (
    Branch, HolderPair, Method, PsiEvaluation, Tau, bound_corollary_M, bound_midpoint,
    bound_theorem1, bound_theorem2, psi1, psi1_closed, psi1_integral, psi2, psi2_closed,
    psi2_integral,
)
from .quadrature import (
    CompositeCertificate, Partition, classical_error_bound, em_bound_prop1, em_bound_prop2,
    midpoint_sum, uniform_partition,
)

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "ClassTag",
    "CompositeCertificate",
    "ConvexityOrder",
    "DistributionSpec",
    "DomainError",
    "EmptyLattice",
    "FunctionSpec",
    "HolderPair",
    "Interval",
    "InvalidTau",
    "MembershipReport",
    "Method",
    "NearSingular",
    "NegativeKernel",
    "NonPositiveValue",
    "OracleFailure",
    "OstrowskiError",
    "Partition",
    "PsiEvaluation",
    "QuadResult",
    "Tau",
    "ToleranceNotReached",
    "UnsupportedBranch",
    "VerificationRecord",
    "ZeroDenominator",
    "ZeroEndpointDensity",
    "ZeroEndpointDerivative",
    "ZeroNumerator",
    "adaptive_integrate",
    "bound_corollary_M",
    "bound_midpoint",
    "bound_theorem1",
    "bound_theorem2",
    "catalog",
    "check_hypothesis_H",
    "check_slog_first",
    "check_slog_second",
    "classical_error_bound",
    "em_bound_prop1",
    "em_bound_prop2",
    "get_distribution",
    "get_function",
    "integrate",
    "lhs_deviation",
    "make_equality_family",
    "midpoint_sum",
    "montgomery_rhs",
    "pdf_bound_thm3",
    "pdf_bound_thm4",
    "psi1",
    "psi1_closed",
    "psi1_integral",
    "psi2",
    "psi2_closed",
    "psi2_integral",
    "uniform_partition",
    "verify_inequality",
]
