"""Complex Weyl calculus on Fock space for generalized diamond groups.

Submodules:

- :mod:`fockweyl.algebra`: sparse polynomials and holomorphic differential operators
- :mod:`fockweyl.group`: the group ``R^m x| H_n``, its Lie algebra, exp, Ad and Ad*
- :mod:`fockweyl.gaussian`: closed-form Gaussian integrals and Gaussian kernel operators
- :mod:`fockweyl.fock_numeric`: quadrature and truncated Fock-basis matrices
- :mod:`fockweyl.representation`: Fock and Schrodinger models of the generic representations
- :mod:`fockweyl.correspondences`: Berezin and complex Weyl symbol maps
- :mod:`fockweyl.orbit`: the coadjoint orbit parametrization ``psi``
- :mod:`fockweyl.star`: Moyal, ``*_1`` and ``*_0`` products and star exponentials
- :mod:`fockweyl.verify`: randomized verification suites behind ``fockweyl verify``
"""

from .algebra import DiffOp, PolyXY, PolyZ, parse_poly
from .errors import (
    DegenerateB,
    DomainError,
    FockWeylError,
    NotIntegrable,
    NotTraceClass,
    OffOrbit,
    OrderTooLarge,
    SingularM,
    SingularProduct,
)
from .gaussian import GaussianIntegralSpec, GaussianKernelOp, gaussian_integral
from .group import Covector, GroupElement, LieElement, WeightSystem, group_exp

__version__ = "0.1.0"

__all__ = [
    "Covector",
    "DegenerateB",
    "DiffOp",
    "DomainError",
    "FockWeylError",
    "GaussianIntegralSpec",
    "GaussianKernelOp",
    "GroupElement",
    "LieElement",
    "NotIntegrable",
    "NotTraceClass",
    "OffOrbit",
    "OrderTooLarge",
    "PolyXY",
    "PolyZ",
    "SingularM",
    "SingularProduct",
    "WeightSystem",
    "gaussian_integral",
    "group_exp",
    "parse_poly",
    "__version__",
]
