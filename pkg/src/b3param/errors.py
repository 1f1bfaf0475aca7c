"""Exception hierarchy shared by all modules."""


class B3Error(Exception):
    """Base class for every error raised by this package."""


class FieldError(B3Error):
    pass


class NotPrime(FieldError):
    pass


class BadResidue(FieldError):
    """The modulus cannot host a primitive cube root of unity distinct from -1."""


class Singular(B3Error):
    """A matrix that had to be inverted is singular at this point."""


class ShapeMismatch(B3Error):
    def __init__(self, message, coords=None):
        super().__init__(message)
        self.coords = coords


class ConstraintViolation(B3Error):
    pass


class UnsupportedComponent(B3Error):
    def __init__(self, message, reason=None):
        super().__init__(message)
        self.reason = reason or message


class NotCyclic(B3Error):
    pass


class BadQ(B3Error):
    pass


class ZeroMu(B3Error):
    pass


class PersistentlySingular(B3Error):
    pass


class RankUnstable(B3Error):
    def __init__(self, message, history=()):
        super().__init__(message)
        self.history = list(history)


class MeatAxeInconclusive(B3Error):
    pass
