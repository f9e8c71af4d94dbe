"""Classification of invariant and partially invariant solutions.

Exact-arithmetic calculus for point-symmetry subalgebras of PDE systems:
rank characteristics, solution types (rank, defect), two-step reduction
criteria, decomposition witnesses and reduction hierarchies, degree-bounded
invariant bases, builtin shallow-water and magnetohydrodynamics fixtures,
and a floating-point verifier for the reduced shallow-water submodel.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .classify import (
    Characteristics,
    ClassificationReport,
    ClassifyError,
    DecompositionWitness,
    Hierarchy,
    PisType,
    RepresentationSkeleton,
    admits_invariant_solution,
    build_hierarchy,
    build_representation,
    characteristics,
    classify_subalgebra,
    decomposition_witness,
    pis_types,
    regular_type,
    two_step_condition,
)
from .exactlinalg import DEFAULT_SEED, ExprMatrix, generic_rank
from .expr import (
    DenominatorVanishesError,
    Expression,
    ExpressionError,
    ParseError,
    UndeclaredVariableError,
    ZeroDenominatorError,
    differentiate,
    evaluate_at,
    parse_expr,
)
from .invariants import (
    Invariant,
    InvariantBasis,
    find_polynomial_invariants,
    find_rational_invariants,
    functional_rank,
    invariant_basis,
    verify_invariant,
)
from .liealg import (
    LieAlgebraError,
    Subalgebra,
    enumerate_candidate_ideals,
    ideal_closure,
    is_ideal,
    is_subalgebra,
    normalizer,
    parse_span,
    subalgebra_closure,
)
from .models import (
    MODEL_NAMES,
    CatalogEntry,
    builtin_model,
    catalog,
    catalog_keys,
    default_params,
)
from .swsubmodel import (
    DEFAULT_TOLERANCES,
    BranchCollisionError,
    FieldSampler,
    GridRangeError,
    NoRealRootError,
    ResidualReport,
    SubmodelError,
    SubmodelParams,
    Trajectory,
    VerificationReport,
    integrate_submodel,
    pde_residual,
    preset,
    preset_names,
    reconstruct_fields,
    solve_lambda_prime,
    verify,
)
from .vfield import (
    ModelError,
    SymmetryModel,
    VarSpace,
    VectorField,
    apply_field,
    coefficient_matrices,
    commutator,
)

__all__ = [
    "__version__",
    # expressions
    "Expression",
    "ExpressionError",
    "ParseError",
    "UndeclaredVariableError",
    "ZeroDenominatorError",
    "DenominatorVanishesError",
    "parse_expr",
    "differentiate",
    "evaluate_at",
    # vector fields and models
    "ModelError",
    "VarSpace",
    "VectorField",
    "SymmetryModel",
    "apply_field",
    "commutator",
    "coefficient_matrices",
    # exact linear algebra
    "DEFAULT_SEED",
    "ExprMatrix",
    "generic_rank",
    # Lie algebra structure
    "LieAlgebraError",
    "Subalgebra",
    "is_subalgebra",
    "subalgebra_closure",
    "ideal_closure",
    "is_ideal",
    "normalizer",
    "enumerate_candidate_ideals",
    "parse_span",
    # classification
    "ClassifyError",
    "Characteristics",
    "PisType",
    "ClassificationReport",
    "DecompositionWitness",
    "Hierarchy",
    "RepresentationSkeleton",
    "characteristics",
    "admits_invariant_solution",
    "pis_types",
    "regular_type",
    "classify_subalgebra",
    "two_step_condition",
    "decomposition_witness",
    "build_hierarchy",
    "build_representation",
    # invariants
    "Invariant",
    "InvariantBasis",
    "functional_rank",
    "invariant_basis",
    "find_polynomial_invariants",
    "find_rational_invariants",
    "verify_invariant",
    # builtin fixtures
    "MODEL_NAMES",
    "CatalogEntry",
    "builtin_model",
    "catalog",
    "catalog_keys",
    "default_params",
    # numeric submodel
    "SubmodelError",
    "NoRealRootError",
    "BranchCollisionError",
    "GridRangeError",
    "ResidualReport",
    "DEFAULT_TOLERANCES",
    "SubmodelParams",
    "Trajectory",
    "FieldSampler",
    "VerificationReport",
    "preset",
    "preset_names",
    "solve_lambda_prime",
    "integrate_submodel",
    "reconstruct_fields",
    "pde_residual",
    "verify",
]
