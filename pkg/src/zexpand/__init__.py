"""High-precision analysis toolkit for the 1/Z expansion of two-electron ions.

Evaluates weighted partial sums of the scaled-energy series against
reference ground-state energies, reproduces coefficient padding/rounding
experiments on printed decimal digits, computes critical-charge and
threshold quantities, estimates the radius of convergence from coefficient
ratios, and fits/evaluates constrained Puiseux expansions near the critical
coupling.
"""

from .analysis import (
    AgreementRow,
    RadiusEstimate,
    ReferenceEnergy,
    bundled_references,
    consistency_report,
    digit_agreement,
    estimate_radius,
    load_references,
    parse_references,
    ratio_sequence,
)
from .coeffs import (
    CoefficientEntry,
    CoefficientTable,
    analytic_head,
    load_table,
    pad_decimals,
    parse_table,
    round_decimals,
    serialize_table,
    truncate_order,
)
from .critical import (
    CriticalConstants,
    EnergyNode,
    FitResult,
    PuiseuxModel,
    bundled_constants,
    eval_energy,
    eval_scaled,
    fit_puiseux,
    ionization_energy,
    load_constants,
    load_model,
    load_nodes,
    preset_model,
    save_model,
    threshold_energy,
    tilde_lambda,
)
from .errors import (
    ArityError,
    DomainError,
    NoFiniteRadiusError,
    ParseError,
    RangeError,
    SingularSystemError,
    StructureError,
    ZexpandError,
)
from .numerics import (
    DEFAULT_CONTEXT,
    HALF_AWAY_FROM_ZERO,
    ROUNDED,
    TRUNCATE,
    TRUNCATED,
    PrecisionContext,
    decimal_places,
    format_fixed,
    format_half_exponent,
    parse_decimal,
    parse_half_exponent,
    pow_half_integer,
)
from .series import (
    ASCENDING,
    DESCENDING,
    SeriesEvaluation,
    lambda_of,
    partial_sum_trace,
    remainder_term,
    scaled_partial_sum,
    weighted_sum,
)

__version__ = "0.1.0"
