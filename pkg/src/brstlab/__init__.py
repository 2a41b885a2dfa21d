"""Exact low-rank Lie theory for BRST reduction characters of affine Kac-Moody modules."""

from .errors import BrstlabError, ConfigurationError, ConstructionError, DomainError, UsageError
from .rootdata import RootDatum, build_root_datum, SUPPORTED_TYPES
from .weyl import (
    AffineWeylElement,
    WeylElement,
    WeylGroup,
    dot_affine,
    dot_finite,
    enumerate_W,
    enumerate_Waff_window,
    level_predicates,
    weyl_group,
)
from .characters import (
    Cutoffs,
    GradedCharacter,
    fock_character,
    jacobi_triple_check,
    weight_multiplicity,
    weyl_character,
)
from .nilcoh import (
    cohomology_trivial,
    cohomology_with_coefficients,
    cup_product,
    homology_with_coefficients,
)
from .semidet import conjugated_subspace, relative_det_dim, verify_det_lemma
from .hwa import TwistedAlgebra, check_invariants, cohomology_hwa, lattice_hwa, twisted_tensor
from .verify import VerificationReport, reduction_character

__version__ = "0.1.0"
