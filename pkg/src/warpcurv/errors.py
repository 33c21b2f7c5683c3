"""Exception hierarchy shared by all warpcurv modules."""


class WarpcurvError(ValueError):
    """Base class for every error raised by the package."""


class OutOfDomain(WarpcurvError):
    pass


class InvalidEpsilon(WarpcurvError):
    pass


class InvalidParams(WarpcurvError):
    pass


class ConstructionFailed(WarpcurvError):
    pass


class NotDiagonalizable(WarpcurvError):
    pass


class DomainMargin(WarpcurvError):
    pass


class FrameNotOrthonormal(WarpcurvError):
    pass


class CertificationFailed(WarpcurvError):
    pass


class UnboundedInput(WarpcurvError):
    pass


class NonpositiveRadius(WarpcurvError):
    pass


class TorsionOrderMismatch(WarpcurvError):
    pass


class BadCodim(WarpcurvError):
    pass


class NotAspherical(WarpcurvError):
    pass


class DegenerateTripod(WarpcurvError):
    pass
