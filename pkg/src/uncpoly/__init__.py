"""Homogeneous polynomials on finite sections of sequence spaces.

Covers polarization and generalized Rademacher functions, certified checks
of the unconditional-norm inequality for finite families of vectors, and
finite-prefix diagnostics for series under polynomial maps.
"""
from .certify import Lemma1Certificate, SuiteSummary, Verdict, c_constant, check_lemma1, random_certification_suite
from .core import (
    DEFAULT_BUDGET,
    TOL_NUM,
    TOL_OPT,
    TOL_STRUCT,
    CoeffBox,
    Exactness,
    Field,
    NormTag,
    SearchBudget,
    Space,
    SupResult,
    Vec,
    basis_vector,
    make_rng,
    norm,
    unconditional_sup,
    unit_basis,
)
from .errors import BoundaryError, BudgetExceeded, DomainError, StructuralError, UncpolyError, UnsupportedError
from .kernels import available_backends, backend_name, use_backend
from .optimize import cube_sup, poly_norm, restrict_to_tail, restricted_tail_norm
from .polys import (
    HomPoly,
    ScalarFunctional,
    SymTensor,
    binomial_expand,
    complexify,
    compose_linear,
    conjugate_apply,
    eval_multilinear,
    eval_poly,
    polarize,
    tensor_from_blackbox,
)
from .rademacher import StepFunction, eval_step, product_integral, rademacher
from .series import (
    SeriesPrefix,
    check_theorem2_tail,
    image_series,
    lemma_polv_bound,
    lift_blocks,
    uc_tail_profile,
    vstar_pairing,
    wuc_constant,
)

__version__ = "0.1.0"
