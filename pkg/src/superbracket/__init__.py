"""Exact supercommutative polynomial algebra with Poisson, Dirac and
star-product superbrackets."""

__version__ = "0.1.0"

from .algebra import (
    Monomial,
    Parity,
    SuperPolynomial,
    VariableTable,
    add,
    homogeneous_components,
    left_derivative,
    mul,
    normalize_product,
    parity_of,
    right_derivative,
    variables,
)
from .brackets import (
    BracketStructure,
    check_leibniz,
    check_super_jacobi,
    check_super_jacobi_general,
    check_super_skew,
    poisson_superbracket,
)
from .deformation import (
    FormalSeries,
    StarProduct,
    check_hochschild,
    check_star_associativity,
    check_theorem3,
    d1_superbracket,
    extract_D1,
    star_multiply,
    star_multiply_series,
    star_supercommutator,
)
from .dirac import (
    ConstraintSet,
    DiracContext,
    EvenMatrix,
    check_constraint_casimir,
    check_theorem2,
    constraint_matrix,
    dirac_superbracket,
    invert_even_matrix,
    reduce_mod_constraints,
    xi_indicator,
)
from .exprio import format_canonical, parse_expression, to_machine_encoding, tokenize

__all__ = [
    "__version__",
    "Monomial",
    "Parity",
    "SuperPolynomial",
    "VariableTable",
    "add",
    "homogeneous_components",
    "left_derivative",
    "mul",
    "normalize_product",
    "parity_of",
    "right_derivative",
    "variables",
    "BracketStructure",
    "check_leibniz",
    "check_super_jacobi",
    "check_super_jacobi_general",
    "check_super_skew",
    "poisson_superbracket",
    "FormalSeries",
    "StarProduct",
    "check_hochschild",
    "check_star_associativity",
    "check_theorem3",
    "d1_superbracket",
    "extract_D1",
    "star_multiply",
    "star_multiply_series",
    "star_supercommutator",
    "ConstraintSet",
    "DiracContext",
    "EvenMatrix",
    "check_constraint_casimir",
    "check_theorem2",
    "constraint_matrix",
    "dirac_superbracket",
    "invert_even_matrix",
    "reduce_mod_constraints",
    "xi_indicator",
    "format_canonical",
    "parse_expression",
    "to_machine_encoding",
    "tokenize",
]
