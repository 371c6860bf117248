"""Numerical toolkit for pairs of projections on a finite-dimensional
complex Hilbert space.

Given two orthogonal projections the package computes the canonical
block decomposition of the pair, constructs and completely parametrizes
the unitaries that swap the two projections, decides when such a unitary
exists inside the algebra generated by the pair, and cross-checks every
construction against brute-force linear-algebra oracles.  A companion
module treats pairs of plain (non-hermitian) idempotents, where the swap
is only possible by similarity.
"""

from .algebras import (
    UnimodularParams,
    WstarForm,
    assemble_wstar,
    default_unimodular_params,
    exists_unitary_in_cstar,
    exists_unitary_in_wstar,
    membership_in_wstar,
    random_unimodular_params,
    simple_spectrum_all_in,
    wstar_unitary,
)
from .errors import (
    BadRankError,
    DimensionError,
    DimMismatchError,
    DomainError,
    InconsistentDimsError,
    InternalError,
    InvalidMatrixError,
    NormTooLargeError,
    NotApplicableError,
    NotCommutingError,
    NotDiagonalizableError,
    NotGenericError,
    NotHermitianError,
    NotInjectiveError,
    NotProjectionError,
    NotSquareError,
    NotUnimodularError,
    NotUnitaryError,
    ParseError,
    RankMismatchError,
    SingularError,
    SpectrumOnCutError,
    TwoProjError,
)
from .halmos import (
    HalmosDecomposition,
    SubspaceDims,
    assemble_generic_block,
    commutant_dim,
    exists_symmetric_unitary,
    halmos_decompose,
    reconstruct,
)
from .intertwine import (
    IntertwinerParams,
    SusyCanonicalForm,
    factor_through,
    general_unitary_halmos,
    general_unitary_susy,
    identity_params,
    oracle_commutant_space,
    oracle_intertwiner_space,
    random_commuting_unitary,
    random_params,
    random_susy_params,
    restrict_to_generic,
    rotation_block,
    sgn_b,
    susy_canonical,
    verify_symmetric_intertwiner,
    wdd_unitary,
)
from .matcore import (
    EigenSystem,
    Tolerance,
    cluster_indices,
    fix_column_phases,
    function_from_cluster_values,
    herm_eig,
    hermitize,
    matfun_hermitian,
    polar_unitary,
    random_generic_orth_pair,
    random_idempotent_pair,
    random_instance,
    random_orth_pair,
    random_orth_projection,
    random_pair_with_dims,
    random_unitary,
    spectral_norm,
)
from .projpair import (
    OrthProjPair,
    VerificationReport,
    kato_pair_vw,
    kato_unitary,
    make_orth_pair,
    verify_supersymmetry,
)
from .skew import (
    SKEW_RANK_ONE_P,
    SKEW_RANK_ONE_Q,
    IdempotentPair,
    Prop2Report,
    conjugate_by_b,
    make_idempotent_pair,
    prop2_conditions,
    rank_matching_similarity,
    sqrt_similarity,
    two_by_two_family,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Tolerance",
    "EigenSystem",
    "OrthProjPair",
    "VerificationReport",
    "HalmosDecomposition",
    "SubspaceDims",
    "IntertwinerParams",
    "SusyCanonicalForm",
    "WstarForm",
    "UnimodularParams",
    "IdempotentPair",
    "Prop2Report",
    "TwoProjError",
    "InvalidMatrixError",
    "NotSquareError",
    "NotHermitianError",
    "NotProjectionError",
    "DimMismatchError",
    "DomainError",
    "SingularError",
    "BadRankError",
    "NormTooLargeError",
    "InconsistentDimsError",
    "NotInjectiveError",
    "NotGenericError",
    "NotCommutingError",
    "NotUnitaryError",
    "RankMismatchError",
    "SpectrumOnCutError",
    "NotDiagonalizableError",
    "NotApplicableError",
    "NotUnimodularError",
    "ParseError",
    "DimensionError",
    "InternalError",
    "spectral_norm",
    "hermitize",
    "herm_eig",
    "matfun_hermitian",
    "polar_unitary",
    "cluster_indices",
    "function_from_cluster_values",
    "fix_column_phases",
    "random_unitary",
    "random_orth_projection",
    "random_orth_pair",
    "random_pair_with_dims",
    "random_generic_orth_pair",
    "random_idempotent_pair",
    "random_instance",
    "make_orth_pair",
    "verify_supersymmetry",
    "kato_pair_vw",
    "halmos_decompose",
    "reconstruct",
    "assemble_generic_block",
    "exists_symmetric_unitary",
    "commutant_dim",
    "rotation_block",
    "wdd_unitary",
    "sgn_b",
    "kato_unitary",
    "susy_canonical",
    "restrict_to_generic",
    "general_unitary_halmos",
    "general_unitary_susy",
    "verify_symmetric_intertwiner",
    "factor_through",
    "oracle_intertwiner_space",
    "oracle_commutant_space",
    "identity_params",
    "random_commuting_unitary",
    "random_params",
    "random_susy_params",
    "membership_in_wstar",
    "assemble_wstar",
    "exists_unitary_in_wstar",
    "wstar_unitary",
    "exists_unitary_in_cstar",
    "simple_spectrum_all_in",
    "default_unimodular_params",
    "random_unimodular_params",
    "make_idempotent_pair",
    "prop2_conditions",
    "conjugate_by_b",
    "sqrt_similarity",
    "rank_matching_similarity",
    "two_by_two_family",
    "SKEW_RANK_ONE_P",
    "SKEW_RANK_ONE_Q",
]
