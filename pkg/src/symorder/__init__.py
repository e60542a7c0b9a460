"""Exact symbolic kernel for Weyl-algebra ordering identities.

The package verifies, with exact rational arithmetic throughout, that
generators of the form x_i plus antisymmetric higher-derivative corrections
satisfy the symmetrized ordering identity on the vacuum, that the
Bernoulli-weighted embedding of a Lie bracket table sends brackets to
commutators, and that symmetrization gives a linear section of the vacuum
projection.  See the module docstrings for the individual layers:

  weyl        the normal-ordered Weyl algebra kernel and the Fock action
  lie         structure constants, Bernoulli numbers, the embedding
  generators  coefficient families and the perturbed generators
  ordering    symmetrized products, the identity checker, section/projection
  linalg      exact rank of rational matrices
  rng         the seeded portable random stream behind every trial
  cli         the verification command line
"""

from .generators import (
    CoefficientFamily,
    GeneratorSet,
    build_generators,
    monomials_of_degree,
    random_family,
    symmetric_control_family,
)
from .lie import (
    InvalidStructureConstantsError,
    StructureConstants,
    Violation,
    abelian_table,
    bernoulli,
    cmatrix,
    cmatrix_power,
    derived_family,
    direct_sum,
    heisenberg_table,
    homomorphism_defect,
    identity_cmatrix,
    iota,
    random_almost_abelian_table,
    random_two_step_table,
    sl2_table,
    validate,
)
from .linalg import exact_rank
from .ordering import (
    CheckResult,
    TruncationWarning,
    cancellation_check,
    cancellation_terms,
    e_map,
    e_tilde,
    pi_project,
    span_dimension,
    symmetrized_product,
    symmetrized_vacuum_action,
    theorem_check,
    word_monomial,
)
from .rng import SplitMix64
from .weyl import (
    DimensionMismatchError,
    Polynomial,
    Rational,
    WeylElement,
    add,
    d_degree,
    fock_apply,
    mul,
    poly_monomial,
    poly_one,
    scale,
    truncate,
    weyl_d,
    weyl_scalar,
    weyl_term,
    weyl_x,
    x_degree,
)

__all__ = [
    "CheckResult",
    "CoefficientFamily",
    "DimensionMismatchError",
    "GeneratorSet",
    "InvalidStructureConstantsError",
    "Polynomial",
    "Rational",
    "SplitMix64",
    "StructureConstants",
    "TruncationWarning",
    "Violation",
    "WeylElement",
    "abelian_table",
    "add",
    "bernoulli",
    "build_generators",
    "cancellation_check",
    "cancellation_terms",
    "cmatrix",
    "cmatrix_power",
    "d_degree",
    "derived_family",
    "direct_sum",
    "e_map",
    "e_tilde",
    "exact_rank",
    "fock_apply",
    "heisenberg_table",
    "homomorphism_defect",
    "identity_cmatrix",
    "iota",
    "monomials_of_degree",
    "mul",
    "pi_project",
    "poly_monomial",
    "poly_one",
    "random_almost_abelian_table",
    "random_family",
    "random_two_step_table",
    "scale",
    "sl2_table",
    "span_dimension",
    "symmetric_control_family",
    "symmetrized_product",
    "symmetrized_vacuum_action",
    "theorem_check",
    "truncate",
    "validate",
    "weyl_d",
    "weyl_scalar",
    "weyl_term",
    "weyl_x",
    "word_monomial",
    "x_degree",
]

__version__ = "0.1.0"
