"""Exception hierarchy shared by all modules."""


class AutoformaError(Exception):
    pass


class NotEquivariant(AutoformaError):
    """No rotation character makes tau(g.z) = rho(g).tau(z) hold."""


class IntegralityViolated(AutoformaError):
    """The phase cocycle is not pi-integral on the lattice."""


class NumericallyVanishing(AutoformaError):
    pass


class QuadratureUnconverged(AutoformaError):
    pass


class SeriesTruncationError(AutoformaError):
    """No truncation radius below the cap meets the requested tail bound."""


class NonPositiveWeight(AutoformaError, ValueError):
    pass
