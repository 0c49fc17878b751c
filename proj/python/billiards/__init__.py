"""Wave billiards: BEM eigenmodes, dielectric resonances and mode entropy."""

from ._core import (
    BoundaryShape,
    ContractError,
    DomainError,
    Error,
    GeometryError,
    InvalidParameter,
    NotFoundError,
    NotSingularError,
    bessel_j,
    bessel_y,
    chi_from_eccentricity,
    circle_dirichlet_oracle,
    eccentricity,
    eigenvalues,
    hankel1,
    interior_points,
    max_entropy,
    resolved_config,
    resonances,
    run,
    shannon_entropy,
    twolevel_eigenvalues,
)

__all__ = [name for name in dir() if not name.startswith("_")]
