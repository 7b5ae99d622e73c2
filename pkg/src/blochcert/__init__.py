"""Irreducibility certificates for Bloch varieties of periodic
finite-range lattice operators, with exact symbolic construction of the
Floquet characteristic polynomial and numerical cross-validation."""

from .certify import (
    Certificate,
    VERDICT_A1_FAILS,
    VERDICT_A2_FAILS,
    VERDICT_BOTH_FAIL,
    VERDICT_CERTIFIED,
    certify,
    check_a1,
    check_a2,
    twisted_factor_family,
)
from .cyclotomic import CycloNumber, MixedOrderError, root_of_unity
from .eig import EigenConvergenceError, eigenvalues
from .floquet import (
    BudgetExceededError,
    FloquetSystem,
    build_system,
    char_poly,
    coupling_matrix,
    fundamental_cell,
    lift_char,
)
from .laurent import (
    LatticeSupportError,
    LaurentPoly,
    compose_powers,
    lift,
    lowest_component,
    pole_orders,
    supported_on_lattice,
    to_text,
    twist,
)
from .model import (
    GaussianRational,
    ModelFormatError,
    OperatorModel,
    load_model,
    preset_hoppings,
    preset_model,
    symbol,
)
from .oracle import (
    MonodromyReport,
    band_path,
    fermi_slice,
    floquet_matrix_at,
    monodromy_run,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "CycloNumber",
    "EigenConvergenceError",
    "FloquetSystem",
    "GaussianRational",
    "LatticeSupportError",
    "LaurentPoly",
    "MixedOrderError",
    "ModelFormatError",
    "MonodromyReport",
    "OperatorModel",
    "BudgetExceededError",
    "VERDICT_A1_FAILS",
    "VERDICT_A2_FAILS",
    "VERDICT_BOTH_FAIL",
    "VERDICT_CERTIFIED",
    "band_path",
    "build_system",
    "certify",
    "char_poly",
    "check_a1",
    "check_a2",
    "compose_powers",
    "coupling_matrix",
    "eigenvalues",
    "fermi_slice",
    "floquet_matrix_at",
    "fundamental_cell",
    "lift",
    "lift_char",
    "load_model",
    "lowest_component",
    "monodromy_run",
    "pole_orders",
    "preset_hoppings",
    "preset_model",
    "root_of_unity",
    "supported_on_lattice",
    "symbol",
    "to_text",
    "twist",
    "twisted_factor_family",
]
