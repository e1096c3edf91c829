"""Exact lattice computations for mapping classes of rational surfaces M_N = CP^2 # N(-CP^2).

Submodules: lattice_core, isometries, stabilizers, orbit_reduce,
fibration_model, cli.
"""
from .errors import LatticeError
from .fibration_model import (
    DiffeoWord,
    Letter,
    homology_action,
    m_lambda,
    proj_eq,
    realize,
    realize_general,
    verify_boundary_identity,
    verify_commutation_cases,
)
from .isometries import (
    Isometry,
    IsometryClass,
    classify,
    eichler,
    finite_order,
    reflection,
    verify_isometry,
)
from .laurent import LaurentMat2, LaurentScalar
from .lattice_core import (
    BasisTag,
    Lattice,
    LatticeVector,
    Sublattice,
    change_basis,
    find_dual_partner,
    form_eval,
    integer_kernel,
    is_primitive,
    make_lattice,
    orthogonal_complement,
)
from .orbit_reduce import (
    diagonalize_definite,
    enumerate_primitive_isotropic,
    find_norm_minus_one,
    reduce_isotropic,
)
from .stabilizers import (
    LambdaCoordinate,
    SignedPermutation,
    StabDecomposition,
    in_lambda,
    in_stab,
    lambda_coordinate,
    lambda_generators,
    section_lift,
    signed_perm_decompose,
    stab_decompose,
)

__version__ = "0.1.0"
