"""Compactness diagnostics for linear combinations of composition operators
on the Bloch space and on H^infinity."""

from .combination import CombinationSpec
from .disk import DiskPoint, hyperbolic_derivative, rho, sigma
from .errors import (
    ConfigError,
    DegenerateSymbol,
    HypothesisViolated,
    InvalidSelfMap,
    KTooLarge,
    ParseError,
    PreconditionViolated,
    TruncationWarning,
)
from .norms import (
    DEFAULT_GRID,
    Grid,
    NormEstimate,
    bloch_norm,
    bloch_seminorm,
    combination_norm,
    monomial_bloch_norm_exact,
    sup_norm,
)
from .series import PowerSeries, cauchy_product, l1_norm, sigma_series, taylor_of_symbol
from .symbols import Symbol, compile_symbol, format_symbol, parse_symbol, pointwise_power, symbol, validate_self_map

__version__ = "0.1.0"
