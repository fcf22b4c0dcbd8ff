"""Exact symplectic-group toolkit: Sp(2g, Z) and its finite quotients mod 2 and 4,
the projective representation sigma on C^(2^g), and the surface-bundle
signature mod 8."""
from __future__ import annotations

__version__ = "0.1.0"

from .dyadic import DyadicGaussianScalar, ProjectiveUnitaryMatrix, UnitaryMatrix
from .gf2 import (
    BitMatrixF2,
    DimensionError,
    ModuleSpec,
    NotSymplecticError,
    OrthVector,
    SpLieElementF2,
    adjoint_action,
    b_form,
    b_Z,
    coinvariants_dimension,
    in_Y,
    is_symplectic_f2,
    lambda2_composite_value,
    module_spec,
    project_to_Z,
    q_form,
    q_Z,
    sp_to_orth,
)
from .groups import (
    ClosureOverflow,
    CosetElement,
    FiniteGroupTable,
    abelianization,
    closure,
    enumerate_H,
    exceptional_isomorphism_check,
    nonsplit_involution_check,
    unitary_closure_E,
    unitary_closure_Htilde,
)
from .symplectic import (
    DA,
    UB,
    DomainError,
    GeneratorWord,
    JGen,
    ModularSymplecticMatrix,
    SymplecticIntegerMatrix,
    TokenError,
    decompose,
    evaluate_word,
    gamma_member,
    igusa_member,
    k_member,
    make_DA,
    make_J,
    make_LB,
    make_UB,
    q_frak,
    reduce_mod,
    remark3_member,
    theta_member,
)
from .theta import (
    InvariantViolation,
    SurfaceRelationError,
    commutator_product,
    kernel_check,
    sigma,
    sigma_DA,
    sigma_J,
    sigma_UB,
    signature_mod8,
)
