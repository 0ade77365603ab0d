"""Tangent spaces and sampling of the groups ``{G : G* J G = J}``.

The main entry points are :func:`sol_basis` / :func:`cosol_basis` (bases of
``X* J + J X = 0`` and ``X* J - J X = 0``), :func:`kronecker_structure`,
:func:`dimension_report` and :func:`sample_group`.
"""
__version__ = "0.1.0"

from ._config import DEFAULT_RTOL, default_tol
from .core_linalg import Involution, realify, unrealify
from .eigenstructure import (
    JordanSpec,
    centralizer_basis,
    centralizer_dimension,
    cosquare,
    jordan_chains,
    jordan_structure,
)
from .errors import AutGrpError, DomainError, InputError, SingularInput, StructureError
from .group_sampler import (
    Classification2x2,
    SampleConfig,
    classify_2x2,
    exp_map,
    membership_residual,
    profile_4x4,
    project_cloud,
    sample_group,
)
from .pencil_kronecker import (
    KroneckerSpec,
    ef_block_basis,
    ef_interaction_basis,
    kronecker_structure,
    reducing_chains,
)
from .solution_basis import (
    DimReport,
    SolutionBasis,
    build_pair_matrix,
    cosol_basis,
    dim_from_structure,
    dimension_report,
    oracle_basis,
    project_centralizer,
    sol_basis,
    span_equal,
)
from .estimators import GroupSampler, SolutionSpace

__all__ = [
    "__version__",
    "DEFAULT_RTOL",
    "default_tol",
    "Involution",
    "realify",
    "unrealify",
    "JordanSpec",
    "centralizer_basis",
    "centralizer_dimension",
    "cosquare",
    "jordan_chains",
    "jordan_structure",
    "AutGrpError",
    "DomainError",
    "InputError",
    "SingularInput",
    "StructureError",
    "Classification2x2",
    "SampleConfig",
    "classify_2x2",
    "exp_map",
    "membership_residual",
    "profile_4x4",
    "project_cloud",
    "sample_group",
    "KroneckerSpec",
    "ef_block_basis",
    "ef_interaction_basis",
    "kronecker_structure",
    "reducing_chains",
    "DimReport",
    "SolutionBasis",
    "build_pair_matrix",
    "cosol_basis",
    "dim_from_structure",
    "dimension_report",
    "oracle_basis",
    "project_centralizer",
    "sol_basis",
    "span_equal",
    "GroupSampler",
    "SolutionSpace",
]
