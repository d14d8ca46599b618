"""Exception hierarchy shared by all modules."""


class FockWeylError(ValueError):
    """Base class for domain errors raised by this package."""


class NotIntegrable(FockWeylError):
    """The real part of the Gaussian quadratic form is not positive definite."""


class SingularM(FockWeylError):
    """The block matrix of a Gaussian integral is singular or ill-conditioned."""


class NotTraceClass(FockWeylError):
    """The diagonal integral defining a trace does not converge."""


class DomainError(FockWeylError):
    """An argument lies in (or too close to) an excluded set."""


class OffOrbit(FockWeylError):
    """A covector does not lie on the coadjoint orbit chart."""


class OrderTooLarge(FockWeylError):
    """Requested formal-series order exceeds the growth guard."""


class DegenerateB(FockWeylError):
    """Some quadratic coefficient vanishes; the closed form does not apply."""


class SingularProduct(FockWeylError):
    """A Gaussian star product hits the pole 1 + uv = 0."""
