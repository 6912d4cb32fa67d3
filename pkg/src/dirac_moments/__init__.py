"""High-precision radial moments of hydrogenlike ions.

Relativistic (Dirac-Coulomb) integrals A_p, B_p, C_p and nonrelativistic
<r^k> computed along several independent routes (closed forms in Hahn
polynomials, vector recurrences in p, two-term maps, quadrature), with a
harness that checks the identities connecting them.
"""

from .closed_form import MomentTriple, Route, indint1_residual, triple_chebyshev, triple_hahn
from .core import ALPHA_FSC, DiracState, NonrelState, PrecisionCtx, derive_parameters, validate_power_range
from .errors import (
    DegenerateCombination,
    DegenerateDenominator,
    DivergentIntegral,
    IdentityViolation,
    InvalidState,
    MomentsError,
    OutOfRange,
    QuadratureNonConvergence,
    SingularMatrix,
)
from .hahn import HahnSpec, chebyshev_t, coeffs, hahn_recurrence, hahn_series
from .recurrences import generate_table, initial_vectors

__all__ = [
    "ALPHA_FSC",
    "DegenerateCombination",
    "DegenerateDenominator",
    "DiracState",
    "DivergentIntegral",
    "HahnSpec",
    "IdentityViolation",
    "InvalidState",
    "MomentTriple",
    "MomentsError",
    "NonrelState",
    "OutOfRange",
    "PrecisionCtx",
    "QuadratureNonConvergence",
    "Route",
    "SingularMatrix",
    "chebyshev_t",
    "coeffs",
    "derive_parameters",
    "generate_table",
    "hahn_recurrence",
    "hahn_series",
    "indint1_residual",
    "initial_vectors",
    "triple_chebyshev",
    "triple_hahn",
    "validate_power_range",
]
