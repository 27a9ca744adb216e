"""Harmonic analysis on H-type groups: spherical transforms of biradial
functions and the Poisson kernel of the associated Siegel domain."""

__version__ = "0.1.0"

from .biradial import BiradialProfile, Decay, bump, gaussian, l1_norm, tabulated  # noqa: F401
from .gelfand import SpectrumPoint, gelfand_transform, parse_grid  # noqa: F401
from .group import (  # noqa: F401
    DomainPoint,
    GroupElement,
    HTypeGroup,
    group_from_descriptor,
    make_heisenberg,
    make_quaternionic,
    validate_htype,
)
from .harmonic import BoundaryDatum, ExtensionField, extend, lb_residual, tangential_demo  # noqa: F401
from .poisson import PoissonKernel, poisson_hat, poisson_hat_oracle  # noqa: F401
