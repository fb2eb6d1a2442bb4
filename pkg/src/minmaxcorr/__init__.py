"""Maximal correlation of overlapping minima of independent random variables.

Closed forms for continuous, Bernoulli, geometric, binomial and Poisson
marginals, exact joint-table construction, spectral and ACE oracles,
Monte Carlo estimation, and a CLI.
"""

from .closed_forms import (
    TwoByTwoJoint,
    binomial_hazard,
    f_helper,
    r_bernoulli,
    r_binomial,
    r_continuous,
    r_geometric,
    r_marshall_olkin,
    r_ml,
    r_poisson,
    r_two_by_two,
    upper_bound,
)
from .core import (
    Bernoulli,
    Binomial,
    DegenerateMargin,
    FiniteDiscrete,
    Geometric,
    MarginalSpec,
    MaxCorrResult,
    MinMaxCorrError,
    NoConvergence,
    OverlapScheme,
    ParamOutOfRange,
    Poisson,
    SchemeInvalid,
    SchemeMismatch,
    SizeCap,
    TruncationFailure,
    survival,
    validate_scheme,
)
from .joint_builder import JointPMF, coarsen, min_joint, product_joint
from .montecarlo import MCConfig, mc_maxcorr, mc_replicates, sample_minima
from .oracle import (
    SpectralReport,
    ace_maxcorr,
    csaki_fischer_check,
    data_processing_check,
    svd_maxcorr,
)

__version__ = "0.1.0"

__all__ = [
    "Bernoulli", "Binomial", "DegenerateMargin", "FiniteDiscrete",
    "Geometric", "JointPMF", "MCConfig", "MarginalSpec", "MaxCorrResult",
    "MinMaxCorrError", "NoConvergence", "OverlapScheme", "ParamOutOfRange",
    "Poisson", "SchemeInvalid", "SchemeMismatch", "SizeCap",
    "SpectralReport", "TruncationFailure", "TwoByTwoJoint", "ace_maxcorr",
    "binomial_hazard", "coarsen", "csaki_fischer_check",
    "data_processing_check", "f_helper", "mc_maxcorr", "mc_replicates",
    "min_joint", "product_joint", "r_bernoulli", "r_binomial",
    "r_continuous", "r_geometric", "r_marshall_olkin", "r_ml", "r_poisson",
    "r_two_by_two", "sample_minima", "survival", "svd_maxcorr",
    "upper_bound", "validate_scheme",
]
