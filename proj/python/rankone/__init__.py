"""Rank-one perturbation analysis of dense symmetric operators.

Krein-formula resolvent corrections, eigenvalue-multiplicity case analysis,
secular-equation root finding and the inverse Dirichlet Laplacian worked
example, all backed by the C++ core.
"""

from ._rankone import (
    InputError,
    NumericalError,
    SecularFunction,
    build_secular,
    classify_case,
    cluster_spectrum,
    dirichlet,
    eigenvector_at_root,
    find_new_eigenvalues,
    krein_resolvent_correction,
    laurent_at,
    projection_limit,
    resolvent_apply,
    symmetric_eig,
    verify_against_oracle,
    __version__,
)

__all__ = [
    "InputError",
    "NumericalError",
    "SecularFunction",
    "build_secular",
    "classify_case",
    "cluster_spectrum",
    "dirichlet",
    "eigenvector_at_root",
    "find_new_eigenvalues",
    "krein_resolvent_correction",
    "laurent_at",
    "projection_limit",
    "resolvent_apply",
    "symmetric_eig",
    "verify_against_oracle",
    "__version__",
]
